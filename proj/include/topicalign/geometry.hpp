#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topicalign/error.hpp"
#include "topicalign/topicmodel.hpp"
#include "topicalign/types.hpp"

namespace topicalign {

/// Tolerance on |sum - 1| accepted for probability vectors.
inline constexpr double kNormTolerance = 1e-9;

namespace detail {

template <typename Derived>
void check_distribution(const Eigen::MatrixBase<Derived>& p, const char* name) {
  using Scalar = typename Derived::Scalar;
  if ((p.array() < Scalar(0)).any() || !p.allFinite())
    throw DataError(std::string("js_divergence: ") + name + " has negative or non-finite entries");
  if (std::abs(static_cast<double>(p.sum()) - 1.0) > kNormTolerance)
    throw DataError(std::string("js_divergence: ") + name + " is not normalized");
}

}  // namespace detail

/// Jensen-Shannon divergence with base-2 logarithms, in [0, 1]. Entries with
/// zero mass contribute nothing.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar js_divergence(const Eigen::MatrixBase<DerivedP>& p,
                                        const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) throw DataError("js_divergence: length mismatch");
  detail::check_distribution(p, "p");
  detail::check_distribution(q, "q");

  Scalar sum(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar pi = p(i), qi = q(i);
    const Scalar mi = (pi + qi) / Scalar(2);
    const Scalar tp = pi > Scalar(0) ? pi * std::log2(pi / mi) : Scalar(0);
    const Scalar tq = qi > Scalar(0) ? qi * std::log2(qi / mi) : Scalar(0);
    sum += tp + tq;
  }
  return std::clamp(sum / Scalar(2), Scalar(0), Scalar(1));
}

/// Eigenpairs of a symmetric matrix, eigenvalues in descending order and
/// eigenvectors in the matching columns.
template <typename Scalar>
struct SymmetricEigen {
  Vector<Scalar> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// tol * max(1, ||A||_F). Throws NumericError when max_sweeps is exhausted.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      double tol = 1e-12, int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw DataError("jacobi_eigen: matrix is not square");

  Mat a = input;
  Mat v = Mat::Identity(n, n);
  const Scalar threshold = Scalar(tol) * std::max(Scalar(1), a.norm());

  auto off_norm = [&] {
    Scalar s(0);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(Scalar(2) * s);
  };

  SymmetricEigen<Scalar> out;
  while (off_norm() > threshold) {
    if (out.sweeps++ >= max_sweeps) throw NumericError("jacobi_eigen: no convergence");
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Rotation angle zeroing a(p, q); t is the smaller root of t^2 + 2 theta t - 1.
        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (theta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

enum class DistanceKind { square_intra, rect_cross };

struct DistanceMatrix {
  RowMatrixXd values;
  DistanceKind kind = DistanceKind::square_intra;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Topic labels prefix1, prefix2, ... (1-based, as shown in reports).
std::vector<std::string> topic_labels(const std::string& prefix, Eigen::Index count);

/// Pairwise JSD between phi rows. Requires K >= 2.
DistanceMatrix topic_distance_matrix(const TopicModel& model, const std::string& label_prefix = "T");

struct Layout {
  RowMatrix<double> coords;  // K x 2
  VectorXd sizes;
  VectorXd eigenvalues;      // all eigenvalues of the centered matrix, descending
  double stress = 0.0;

  Eigen::Index points() const { return coords.rows(); }
};

/// Classical principal-coordinates analysis to two dimensions. Axes with a
/// non-positive eigenvalue collapse to zero; each axis is flipped so that its
/// largest-magnitude coordinate is positive. Stress is the Frobenius norm of
/// input distances minus layout distances.
Layout pcoa_layout(const DistanceMatrix& dist, const VectorXd& sizes);

struct RelevanceConfig {
  double lambda = 0.6;
  int top_n = 20;

  void validate() const;
};

struct RankedTerm {
  std::size_t term_index = 0;
  std::string term;
  double score = 0.0;
};

/// Terms of topic k ranked by lambda*log(phi_kw) + (1-lambda)*log(phi_kw/p_w),
/// where p_w is the corpus token share. Ties go to the lower term index.
/// Terms with no corpus tokens are skipped unless lambda == 1.
std::vector<RankedTerm> relevant_terms(const TopicModel& model, const DocTermMatrix& matrix,
                                       const Vocabulary& vocab, int k, const RelevanceConfig& config);

/// TSV with a header row and a leading label column.
void write_distance_matrix(const DistanceMatrix& dist, const std::filesystem::path& path);
DistanceMatrix read_distance_matrix(const std::filesystem::path& path, DistanceKind kind);
/// TSV `topic<TAB>x<TAB>y<TAB>size`.
void write_layout(const Layout& layout, const std::vector<std::string>& labels,
                  const std::filesystem::path& path);
Layout read_layout(const std::filesystem::path& path);

}  // namespace topicalign
