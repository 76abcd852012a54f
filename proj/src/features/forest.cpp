#include "features/forest.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/rng.hpp"

namespace ds::forest {
namespace {

constexpr double kTieEps = 1e-12;

struct Builder {
  const std::vector<std::vector<double>>& x;
  const std::vector<int>& y;
  size_t dim;
  int max_depth;
  int min_leaf;
  int subsample;
  Rng& rng;
  Tree& tree;

  int build(std::vector<size_t>& idx, int depth) {
    size_t n = idx.size();
    size_t pos = 0;
    for (size_t i : idx)
      if (y[i] == 1) ++pos;
    size_t neg = n - pos;

    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    auto make_leaf = [&] {
      TreeNode& leaf = tree.nodes[static_cast<size_t>(node_id)];
      leaf.feature = -1;
      leaf.dist = {static_cast<double>(neg) / static_cast<double>(n),
                   static_cast<double>(pos) / static_cast<double>(n)};
      return node_id;
    };

    if (depth >= max_depth || pos == 0 || neg == 0 ||
        n < 2 * static_cast<size_t>(min_leaf))
      return make_leaf();

    double p_pos = static_cast<double>(pos) / static_cast<double>(n);
    double parent_gini = 2.0 * p_pos * (1.0 - p_pos);

    // Distinct features, without replacement, scanned in ascending order.
    std::vector<size_t> features(dim);
    for (size_t f = 0; f < dim; ++f) features[f] = f;
    for (int k = 0; k < subsample && static_cast<size_t>(k) < dim; ++k) {
      size_t j = static_cast<size_t>(k) +
                 rng.index(dim - static_cast<size_t>(k));
      std::swap(features[static_cast<size_t>(k)], features[j]);
    }
    features.resize(std::min(static_cast<size_t>(subsample), dim));
    std::sort(features.begin(), features.end());

    double best_impurity = parent_gini - kTieEps;
    int best_feature = -1;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> vals;
    vals.reserve(n);
    for (size_t f : features) {
      vals.clear();
      for (size_t i : idx) vals.emplace_back(x[i][f], y[i]);
      std::sort(vals.begin(), vals.end());
      if (vals.front().first == vals.back().first) continue;

      size_t left_n = 0, left_pos = 0;
      for (size_t i = 0; i + 1 < n; ++i) {
        ++left_n;
        if (vals[i].second == 1) ++left_pos;
        if (vals[i].first == vals[i + 1].first) continue;  // not a boundary
        size_t right_n = n - left_n;
        if (left_n < static_cast<size_t>(min_leaf) ||
            right_n < static_cast<size_t>(min_leaf))
          continue;
        size_t right_pos = pos - left_pos;
        double pl = static_cast<double>(left_pos) / static_cast<double>(left_n);
        double pr =
            static_cast<double>(right_pos) / static_cast<double>(right_n);
        double impurity =
            (static_cast<double>(left_n) * 2.0 * pl * (1.0 - pl) +
             static_cast<double>(right_n) * 2.0 * pr * (1.0 - pr)) /
            static_cast<double>(n);
        if (impurity < best_impurity) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        }
      }
    }

    if (best_feature < 0) return make_leaf();

    std::vector<size_t> left_idx, right_idx;
    for (size_t i : idx) {
      if (x[i][static_cast<size_t>(best_feature)] <= best_threshold)
        left_idx.push_back(i);
      else
        right_idx.push_back(i);
    }
    int left = build(left_idx, depth + 1);
    int right = build(right_idx, depth + 1);
    TreeNode& node = tree.nodes[static_cast<size_t>(node_id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return node_id;
  }
};

}  // namespace

RandomForestModel train_random_forest(const std::vector<std::vector<double>>& x,
                                      const std::vector<int>& y,
                                      const ForestTrainOptions& opts) {
  if (x.empty() || x.size() != y.size())
    throw TrainingError("dataset empty or labels do not match samples");
  size_t d = x[0].size();
  if (d == 0) throw TrainingError("zero-dimensional features");
  bool has_pos = false, has_neg = false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d)
      throw TrainingError("inconsistent feature dimensions in dataset");
    if (y[i] == 1)
      has_pos = true;
    else if (y[i] == -1)
      has_neg = true;
    else
      throw TrainingError("labels must be +1 or -1");
    for (double v : x[i])
      if (!std::isfinite(v)) throw TrainingError("non-finite feature value");
  }
  if (!has_pos || !has_neg)
    throw TrainingError("training requires both classes present");
  if (opts.num_trees < 1 || opts.max_depth < 1 || opts.min_leaf < 1)
    throw TrainingError("num_trees, max_depth, min_leaf must be >= 1");
  if (opts.feature_subsample < 0 ||
      static_cast<size_t>(opts.feature_subsample) > d)
    throw TrainingError("feature_subsample must be in [0, dim]");

  int subsample = opts.feature_subsample != 0
                      ? opts.feature_subsample
                      : static_cast<int>(
                            std::ceil(std::sqrt(static_cast<double>(d))));

  RandomForestModel model;
  model.dim = d;
  model.max_depth = opts.max_depth;
  model.min_leaf = opts.min_leaf;
  model.feature_subsample = subsample;
  model.bootstrap = opts.bootstrap;
  model.seed = opts.seed;
  model.trees.resize(static_cast<size_t>(opts.num_trees));

  size_t n = x.size();
  for (int k = 0; k < opts.num_trees; ++k) {
    Rng rng(opts.seed + static_cast<uint64_t>(k));
    std::vector<size_t> idx(n);
    if (opts.bootstrap) {
      for (size_t i = 0; i < n; ++i) idx[i] = rng.index(n);
    } else {
      for (size_t i = 0; i < n; ++i) idx[i] = i;
    }
    Tree& tree = model.trees[static_cast<size_t>(k)];
    Builder builder{x, y, d, opts.max_depth, opts.min_leaf, subsample, rng,
                    tree};
    builder.build(idx, 0);
  }
  return model;
}

int tree_vote(const Tree& tree, const std::vector<double>& x) {
  if (tree.nodes.empty()) throw ModelError("empty decision tree");
  size_t node = 0;
  while (true) {
    const TreeNode& cur = tree.nodes[node];
    if (cur.feature < 0) return cur.dist[1] > cur.dist[0] ? 1 : -1;
    if (static_cast<size_t>(cur.feature) >= x.size())
      throw ModelError("tree references feature beyond input dimension");
    node = static_cast<size_t>(x[static_cast<size_t>(cur.feature)] <=
                                       cur.threshold
                                   ? cur.left
                                   : cur.right);
  }
}

ForestPrediction classify(const RandomForestModel& model,
                          const std::vector<double>& x) {
  if (model.trees.empty()) throw ModelError("forest has no trees");
  if (x.size() != model.dim)
    throw ModelError("feature dimension " + std::to_string(x.size()) +
                     " does not match forest dimension " +
                     std::to_string(model.dim));
  size_t pos = 0;
  for (const auto& tree : model.trees)
    if (tree_vote(tree, x) == 1) ++pos;
  ForestPrediction out;
  out.score = static_cast<double>(pos) / static_cast<double>(model.trees.size());
  out.label = 2 * pos > model.trees.size() ? 1 : -1;
  return out;
}

nlohmann::json forest_to_json(const RandomForestModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : tree.nodes)
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.dist[0],
                       n.dist[1]});
    trees.push_back({{"nodes", nodes}});
  }
  return {{"version", 1},
          {"dim", model.dim},
          {"max_depth", model.max_depth},
          {"min_leaf", model.min_leaf},
          {"feature_subsample", model.feature_subsample},
          {"bootstrap", model.bootstrap},
          {"seed", model.seed},
          {"trees", trees}};
}

RandomForestModel forest_from_json(const nlohmann::json& j,
                                   const std::string& context) {
  auto need = [&](const char* name) -> const nlohmann::json& {
    auto it = j.find(name);
    if (it == j.end())
      throw ParseError(context + ": missing field \"" + name + "\"");
    return *it;
  };
  if (!j.is_object()) throw ParseError(context + ": not a JSON object");
  if (!need("version").is_number_integer() || need("version").get<int>() != 1)
    throw ParseError(context + ": unsupported forest version");

  RandomForestModel model;
  model.dim = need("dim").get<size_t>();
  model.max_depth = need("max_depth").get<int>();
  model.min_leaf = need("min_leaf").get<int>();
  model.feature_subsample = need("feature_subsample").get<int>();
  model.bootstrap = need("bootstrap").get<bool>();
  model.seed = need("seed").get<uint64_t>();
  const auto& trees = need("trees");
  if (!trees.is_array() || trees.empty())
    throw ParseError(context + ": \"trees\" must be a non-empty array");
  for (const auto& tj : trees) {
    if (!tj.is_object() || !tj.contains("nodes") || !tj["nodes"].is_array() ||
        tj["nodes"].empty())
      throw ParseError(context + ": each tree needs a non-empty \"nodes\"");
    Tree tree;
    for (const auto& nj : tj["nodes"]) {
      if (!nj.is_array() || nj.size() != 6)
        throw ParseError(context + ": node must be [feature, threshold, "
                                   "left, right, dist0, dist1]");
      TreeNode n;
      n.feature = nj[0].get<int>();
      n.threshold = nj[1].get<double>();
      n.left = nj[2].get<int>();
      n.right = nj[3].get<int>();
      n.dist = {nj[4].get<double>(), nj[5].get<double>()};
      if (n.feature >= 0) {
        if (n.left < 0 || n.right < 0)
          throw ParseError(context + ": split node needs children");
      } else if (std::abs(n.dist[0] + n.dist[1] - 1.0) > 1e-9) {
        throw ParseError(context + ": leaf distribution must sum to 1");
      }
      tree.nodes.push_back(n);
    }
    for (const auto& n : tree.nodes)
      if (n.feature >= 0 &&
          (static_cast<size_t>(n.left) >= tree.nodes.size() ||
           static_cast<size_t>(n.right) >= tree.nodes.size()))
        throw ParseError(context + ": node child index out of range");
    model.trees.push_back(std::move(tree));
  }
  return model;
}

void save_forest(const RandomForestModel& model, const std::string& path) {
  io::write_file(path, forest_to_json(model).dump(2) + "\n");
}

RandomForestModel load_forest(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + std::string(e.what()));
  }
  return forest_from_json(j, path);
}

}  // namespace ds::forest
