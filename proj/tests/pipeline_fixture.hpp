#pragma once

// A small synthetic dataset that runs the whole pipeline in a few seconds.

#include <filesystem>
#include <string>

#include "test_support.hpp"
#include "topicalign/synthetic.hpp"

namespace testing {

inline std::filesystem::path small_dataset(const std::string& name, int iterations = 60) {
  topicalign::synthetic::DatasetOptions o;
  o.supply_documents = 250;
  o.supply_vocab = 300;
  o.supply_topics = 6;
  o.demand_documents = 60;
  o.demand_vocab = 150;
  o.demand_topics = 5;
  o.tokens_per_doc = 40;
  o.clusters = 24;
  o.iterations = iterations;
  o.min_df = 2;
  const auto dir = temp_dir(name);
  topicalign::synthetic::write_dataset(o, dir);
  return dir;
}

}  // namespace testing
