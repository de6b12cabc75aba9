#pragma once

// Generators and brute-force oracles shared by the unit and acceptance tests.
// Nothing here calls into the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <tuple>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "topicalign/types.hpp"

namespace testing {

inline topicalign::VectorXd random_distribution(int n, std::mt19937_64& rng, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  topicalign::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = u(rng) < zero_prob ? 0.0 : -std::log(1.0 - u(rng));
  if (p.sum() == 0.0) p(0) = 1.0;
  return p / p.sum();
}

inline topicalign::RowMatrixXd random_theta(int docs, int topics, std::mt19937_64& rng, double zero_prob = 0.0) {
  topicalign::RowMatrixXd theta(docs, topics);
  for (int d = 0; d < docs; ++d) theta.row(d) = random_distribution(topics, rng, zero_prob).transpose();
  return theta;
}

/// JSD straight from the definition with natural logs converted to base 2.
inline double jsd_definition(const std::vector<double>& p, const std::vector<double>& q) {
  double kl_pm = 0.0, kl_qm = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) kl_pm += p[i] * std::log(p[i] / m);
    if (q[i] > 0) kl_qm += q[i] * std::log(q[i] / m);
  }
  return (0.5 * kl_pm + 0.5 * kl_qm) / std::log(2.0);
}

inline std::vector<double> to_std(const Eigen::Ref<const topicalign::VectorXd>& v) {
  return {v.data(), v.data() + v.size()};
}

/// Mean total-variation distance between rows after greedily pairing each
/// true row with its closest unused estimated row (smallest TV first).
inline double matched_mean_tv(const topicalign::RowMatrixXd& truth, const topicalign::RowMatrixXd& estimate) {
  const auto K = truth.rows();
  std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> cand;
  for (Eigen::Index i = 0; i < K; ++i)
    for (Eigen::Index j = 0; j < estimate.rows(); ++j)
      cand.emplace_back(0.5 * (truth.row(i) - estimate.row(j)).cwiseAbs().sum(), i, j);
  std::sort(cand.begin(), cand.end());
  std::vector<bool> used_i(static_cast<std::size_t>(K)), used_j(static_cast<std::size_t>(estimate.rows()));
  double total = 0.0;
  Eigen::Index matched = 0;
  for (const auto& [tv, i, j] : cand) {
    if (used_i[static_cast<std::size_t>(i)] || used_j[static_cast<std::size_t>(j)]) continue;
    used_i[static_cast<std::size_t>(i)] = used_j[static_cast<std::size_t>(j)] = true;
    total += tv;
    ++matched;
  }
  return total / static_cast<double>(matched);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("topicalign_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Ranking of indices by descending key, ties by index.
inline std::vector<std::size_t> rank_desc(const std::vector<double>& key) {
  std::vector<std::size_t> idx(key.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return idx;
}

/// True when `order` sorts `key` descending, treating keys within a relative
/// 1e-12 of each other as tied (values equal in exact arithmetic can differ
/// in the last bits after rounding).
inline bool ranks_by(const std::vector<std::size_t>& order, const std::vector<double>& key) {
  if (order.size() != key.size()) return false;
  std::vector<bool> seen(key.size(), false);
  const auto expected = rank_desc(key);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= key.size() || seen[order[i]]) return false;
    seen[order[i]] = true;
    const double a = key[order[i]], b = key[expected[i]];
    if (std::abs(a - b) > 1e-12 * std::max(std::abs(a), std::abs(b))) return false;
  }
  return true;
}

}  // namespace testing
