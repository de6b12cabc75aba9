#pragma once

// Random delineation instances and a direct set-construction oracle.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "topicalign/delineation.hpp"

namespace testing {

using topicalign::ClusterAssignment;
using topicalign::Corpus;
using topicalign::Document;

struct Instance {
  Corpus corpus;
  std::set<std::string> seeds;
  ClusterAssignment assignment;
};

inline Instance random_instance(std::mt19937_64& rng, int docs, int clusters) {
  Instance in;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> cl(0, clusters - 1);
  // Per-cluster seed propensity gives a spread of fractions.
  std::vector<double> propensity(static_cast<std::size_t>(clusters));
  for (auto& p : propensity) p = u(rng) * u(rng);
  for (int i = 0; i < docs; ++i) {
    Document d;
    d.id = "w" + std::to_string(i);
    d.title = "t";
    d.abstract_or_body = u(rng) < 0.1 ? "" : "text";
    const bool assigned = u(rng) < 0.9;
    const int c = cl(rng);
    if (assigned) in.assignment.assign(d.id, "c" + std::to_string(c));
    if (u(rng) < (assigned ? propensity[static_cast<std::size_t>(c)] : 0.2)) in.seeds.insert(d.id);
    in.corpus.documents.push_back(d);
  }
  return in;
}

inline std::vector<std::string> delineation_oracle(const Instance& in, double alpha, bool keep_seeds) {
  std::map<std::string, int> size, seeded;
  for (const auto& [doc, c] : in.assignment.membership()) {
    ++size[c];
    if (in.seeds.count(doc)) ++seeded[c];
  }
  std::vector<std::string> out;
  for (const auto& d : in.corpus.documents) {
    if (d.abstract_or_body.empty()) continue;
    bool take = keep_seeds && in.seeds.count(d.id);
    const auto it = in.assignment.membership().find(d.id);
    if (it != in.assignment.membership().end()) {
      const auto& c = it->second;
      if (static_cast<double>(seeded[c]) / size[c] >= alpha) take = true;
    }
    if (take) out.push_back(d.id);
  }
  return out;
}

inline std::vector<std::string> ids(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& d : c.documents) out.push_back(d.id);
  return out;
}

inline bool subset(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string> sb(b.begin(), b.end());
  for (const auto& x : a)
    if (!sb.count(x)) return false;
  return true;
}

}  // namespace testing
