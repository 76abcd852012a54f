#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ds::forest {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::array<double, 2> dist = {0.0, 0.0};  // leaf {P(-1), P(+1)}, sums to 1
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct RandomForestModel {
  std::vector<Tree> trees;
  size_t dim = 0;
  int max_depth = 8;
  int min_leaf = 2;
  int feature_subsample = 0;
  bool bootstrap = true;
  uint64_t seed = 0;
};

struct ForestTrainOptions {
  int num_trees = 100;
  int max_depth = 8;
  int min_leaf = 2;
  int feature_subsample = 0;  // 0 resolves to ceil(sqrt(d))
  bool bootstrap = true;      // seeded bagging; off trains every tree on all rows
  uint64_t seed = 42;
};

// CART with Gini impurity; per-split random feature subset (iterated in
// ascending index order), midpoint thresholds over distinct sorted values,
// strict-improvement first-wins tie handling, and min_leaf on both
// children. Tree k uses seed + k, so serial and any parallel schedule
// produce identical forests. Labels are +1/-1, both classes required.
RandomForestModel train_random_forest(const std::vector<std::vector<double>>& x,
                                      const std::vector<int>& y,
                                      const ForestTrainOptions& opts);

// Leaf argmax; an exactly tied leaf votes -1.
int tree_vote(const Tree& tree, const std::vector<double>& x);

struct ForestPrediction {
  int label = -1;     // majority of tree votes; tie -> -1
  double score = 0.0;  // fraction of trees voting +1
};

ForestPrediction classify(const RandomForestModel& model,
                          const std::vector<double>& x);

nlohmann::json forest_to_json(const RandomForestModel& model);
RandomForestModel forest_from_json(const nlohmann::json& j,
                                   const std::string& context);
void save_forest(const RandomForestModel& model, const std::string& path);
RandomForestModel load_forest(const std::string& path);

}  // namespace ds::forest
