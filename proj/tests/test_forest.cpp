#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "core/errors.hpp"
#include "core/metrics.hpp"
#include "core/rng.hpp"
#include "features/forest.hpp"
#include "vad/svm.hpp"

using namespace ds;
using namespace ds::forest;

namespace {

// Gini impurity of a split, computed from first principles: weighted sum of
// 1 - sum p^2 over both children.
double split_gini(const std::vector<std::vector<double>>& x,
                  const std::vector<int>& y, int feature, double threshold) {
  int ln = 0, lp = 0, rn = 0, rp = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    bool left = x[i][feature] <= threshold;
    if (left)
      (y[i] == 1 ? lp : ln)++;
    else
      (y[i] == 1 ? rp : rn)++;
  }
  auto gini = [](int a, int b) {
    double n = a + b;
    if (n == 0) return 0.0;
    double pa = a / n, pb = b / n;
    return 1.0 - pa * pa - pb * pb;
  };
  double n = static_cast<double>(x.size());
  return (ln + lp) / n * gini(ln, lp) + (rn + rp) / n * gini(rn, rp);
}

// XOR corners with Gaussian jitter, the classic linearly inseparable set.
void make_xor(Rng& rng, int n, std::vector<std::vector<double>>& x,
              std::vector<int>& y) {
  x.clear();
  y.clear();
  for (int i = 0; i < n; ++i) {
    int q = i % 4;  // balanced corners keep a linear cut near chance
    double cx = (q & 1) ? 1.0 : -1.0;
    double cy = (q & 2) ? 1.0 : -1.0;
    x.push_back({cx + rng.gaussian(0, 0.15), cy + rng.gaussian(0, 0.15)});
    y.push_back(cx * cy > 0 ? -1 : 1);
  }
}

}  // namespace

TEST_CASE("single stump finds the best gini split") {
  // Depth-1 tree on 1D data where the optimal cut is enumerable.
  std::vector<std::vector<double>> x = {{0.1}, {0.3}, {0.45}, {0.6},
                                        {0.8}, {0.9}, {0.2},  {0.7}};
  std::vector<int> y = {-1, -1, -1, 1, 1, 1, -1, 1};
  ForestTrainOptions opts;
  opts.num_trees = 1;
  opts.max_depth = 1;
  opts.min_leaf = 1;
  opts.bootstrap = false;
  opts.feature_subsample = 1;
  auto model = train_random_forest(x, y, opts);
  REQUIRE(model.trees.size() == 1);
  const auto& root = model.trees[0].nodes[0];
  REQUIRE(root.feature == 0);

  // Exhaustive scan over all midpoints of adjacent sorted distinct values.
  std::vector<double> vals;
  for (const auto& r : x) vals.push_back(r[0]);
  std::sort(vals.begin(), vals.end());
  double best_thr = 0.0, best_g = 1e9;
  for (size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] == vals[i - 1]) continue;
    double thr = 0.5 * (vals[i] + vals[i - 1]);
    double g = split_gini(x, y, 0, thr);
    if (g < best_g - 1e-15) {
      best_g = g;
      best_thr = thr;
    }
  }
  CHECK(root.threshold == doctest::Approx(best_thr).epsilon(1e-12));
  CHECK(split_gini(x, y, 0, root.threshold) ==
        doctest::Approx(best_g).epsilon(1e-12));

  // The stump classifies the planted split perfectly.
  for (size_t i = 0; i < x.size(); ++i)
    CHECK(tree_vote(model.trees[0], x[i]) == y[i]);
}

TEST_CASE("chosen splits are never worse than any exhaustive alternative") {
  Rng rng(90);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      x.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      y.push_back(rng.uniform() < 0.5 ? 1 : -1);
    }
    y[0] = 1;
    y[1] = -1;

    ForestTrainOptions opts;
    opts.num_trees = 1;
    opts.max_depth = 1;
    opts.min_leaf = 1;
    opts.bootstrap = false;
    opts.feature_subsample = 2;  // both features in play
    auto model = train_random_forest(x, y, opts);
    const auto& root = model.trees[0].nodes[0];
    if (root.feature == -1) continue;  // no improving split existed

    double got = split_gini(x, y, root.feature, root.threshold);
    for (int f = 0; f < 2; ++f) {
      std::vector<double> vals;
      for (const auto& r : x) vals.push_back(r[f]);
      std::sort(vals.begin(), vals.end());
      for (size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] == vals[i - 1]) continue;
        double thr = 0.5 * (vals[i] + vals[i - 1]);
        CHECK(got <= split_gini(x, y, f, thr) + 1e-12);
      }
    }
  }
}

TEST_CASE("min leaf is honored by every node") {
  Rng rng(91);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (int i = 0; i < 60; ++i) {
    x.push_back({rng.uniform(-1, 1)});
    y.push_back(rng.uniform() < 0.5 ? 1 : -1);
  }
  y[0] = 1;
  y[1] = -1;
  ForestTrainOptions opts;
  opts.num_trees = 5;
  opts.min_leaf = 7;
  opts.bootstrap = false;
  auto model = train_random_forest(x, y, opts);

  // Count rows reaching each leaf; every leaf must hold >= min_leaf rows.
  for (const auto& tree : model.trees) {
    std::vector<int> counts(tree.nodes.size(), 0);
    for (const auto& row : x) {
      int node = 0;
      while (tree.nodes[node].feature != -1) {
        const auto& nd = tree.nodes[node];
        node = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
      }
      counts[node]++;
    }
    for (size_t n = 0; n < tree.nodes.size(); ++n)
      if (tree.nodes[n].feature == -1) CHECK(counts[n] >= 7);
  }
}

TEST_CASE("forest of identical trees equals one tree") {
  Rng rng(92);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  make_xor(rng, 120, x, y);

  // bootstrap off and full feature set make every tree deterministic and
  // identical regardless of its per-tree seed.
  ForestTrainOptions one;
  one.num_trees = 1;
  one.bootstrap = false;
  one.feature_subsample = 2;
  ForestTrainOptions three = one;
  three.num_trees = 3;

  auto m1 = train_random_forest(x, y, one);
  auto m3 = train_random_forest(x, y, three);
  for (const auto& row : x) {
    auto p1 = classify(m1, row);
    auto p3 = classify(m3, row);
    CHECK(p1.label == p3.label);
    CHECK(p1.score == doctest::Approx(p3.score));
  }
}

TEST_CASE("vote fraction equals a hand count of tree votes") {
  Rng rng(93);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  make_xor(rng, 80, x, y);
  ForestTrainOptions opts;
  opts.num_trees = 15;
  auto model = train_random_forest(x, y, opts);

  for (int probe = 0; probe < 20; ++probe) {
    std::vector<double> p = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    int plus = 0;
    for (const auto& tree : model.trees)
      if (tree_vote(tree, p) == 1) ++plus;
    auto pred = classify(model, p);
    CHECK(pred.score == doctest::Approx(plus / 15.0).epsilon(1e-12));
    int want = plus * 2 > 15 ? 1 : -1;  // strict majority, tie -> -1
    CHECK(pred.label == want);
  }
}

TEST_CASE("exact tie votes negative at both levels") {
  // A leaf with dist {0.5, 0.5} and a forest with equal votes both say -1.
  Tree t;
  TreeNode leaf;
  leaf.feature = -1;
  leaf.dist = {0.5, 0.5};
  t.nodes.push_back(leaf);
  CHECK(tree_vote(t, {0.0}) == -1);

  RandomForestModel m;
  m.dim = 1;
  Tree plus;
  TreeNode leaf_plus;
  leaf_plus.feature = -1;
  leaf_plus.dist = {0.0, 1.0};
  plus.nodes.push_back(leaf_plus);
  m.trees = {t, plus};  // one -1 vote, one +1 vote
  auto pred = classify(m, {0.0});
  CHECK(pred.label == -1);
  CHECK(pred.score == doctest::Approx(0.5));
}

TEST_CASE("forest solves xor where the linear model cannot") {
  Rng rng(94);
  std::vector<std::vector<double>> xtr, xte;
  std::vector<int> ytr, yte;
  make_xor(rng, 300, xtr, ytr);
  make_xor(rng, 300, xte, yte);

  auto forest = train_random_forest(xtr, ytr, {});
  auto svm = vad::train_linear_svm(xtr, ytr, {});
  auto eval = [&](const std::vector<std::vector<double>>& xs,
                  const std::vector<int>& ys, bool use_forest) {
    std::vector<int> pred;
    for (const auto& row : xs)
      pred.push_back(use_forest
                         ? classify(forest, row).label
                         : vad::classify(vad::decision_score(svm, row)));
    return balanced_accuracy(pred, ys);
  };

  // On the training set the forest memorizes the corners while the best a
  // linear cut can do on balanced xor is chance.
  CHECK(eval(xtr, ytr, true) >= 0.95);
  CHECK(eval(xtr, ytr, false) <= 0.60);

  double forest_ba = eval(xte, yte, true);
  double svm_ba = eval(xte, yte, false);
  CHECK(forest_ba >= 0.95);
  CHECK(forest_ba - svm_ba >= 0.25);
}

TEST_CASE("training is deterministic and seed sensitive") {
  Rng rng(95);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  make_xor(rng, 100, x, y);
  ForestTrainOptions opts;
  opts.num_trees = 9;

  auto a = train_random_forest(x, y, opts);
  auto b = train_random_forest(x, y, opts);
  CHECK(forest_to_json(a) == forest_to_json(b));

  opts.seed = 43;
  auto c = train_random_forest(x, y, opts);
  CHECK(forest_to_json(a) != forest_to_json(c));
}

TEST_CASE("degenerate training inputs raise") {
  std::vector<std::vector<double>> x = {{1.0}, {2.0}};
  CHECK_THROWS_AS(train_random_forest(x, {1, 1}, {}), TrainingError);
  CHECK_THROWS_AS(train_random_forest(x, {1}, {}), TrainingError);
  CHECK_THROWS_AS(train_random_forest({}, {}, {}), TrainingError);
  ForestTrainOptions bad;
  bad.num_trees = 0;
  CHECK_THROWS_AS(train_random_forest(x, {1, -1}, bad), TrainingError);
}

TEST_CASE("classify checks dimension") {
  Rng rng(96);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  make_xor(rng, 50, x, y);
  auto model = train_random_forest(x, y, {});
  CHECK_THROWS_AS(classify(model, {1.0}), ModelError);
  CHECK_THROWS_AS(classify(model, {1.0, 2.0, 3.0}), ModelError);
}

TEST_CASE("json and file round trip preserve structure exactly") {
  Rng rng(97);
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  make_xor(rng, 60, x, y);
  ForestTrainOptions opts;
  opts.num_trees = 4;
  opts.max_depth = 5;
  opts.min_leaf = 3;
  opts.seed = 1234;
  auto model = train_random_forest(x, y, opts);

  auto loaded = forest_from_json(forest_to_json(model), "test");
  CHECK(loaded.dim == model.dim);
  CHECK(loaded.max_depth == model.max_depth);
  CHECK(loaded.min_leaf == model.min_leaf);
  CHECK(loaded.feature_subsample == model.feature_subsample);
  CHECK(loaded.bootstrap == model.bootstrap);
  CHECK(loaded.seed == model.seed);
  REQUIRE(loaded.trees.size() == model.trees.size());
  for (size_t t = 0; t < model.trees.size(); ++t) {
    REQUIRE(loaded.trees[t].nodes.size() == model.trees[t].nodes.size());
    for (size_t n = 0; n < model.trees[t].nodes.size(); ++n) {
      const auto& a = model.trees[t].nodes[n];
      const auto& b = loaded.trees[t].nodes[n];
      CHECK(a.feature == b.feature);
      CHECK(a.threshold == b.threshold);  // bit exact via json doubles
      CHECK(a.left == b.left);
      CHECK(a.right == b.right);
      CHECK(a.dist == b.dist);
    }
  }

  // Behavioral equality on probes.
  for (int probe = 0; probe < 50; ++probe) {
    std::vector<double> p = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    CHECK(classify(model, p).score == classify(loaded, p).score);
  }

  std::string path = "forest_roundtrip_test.json";
  save_forest(model, path);
  auto from_file = load_forest(path);
  std::remove(path.c_str());
  CHECK(forest_to_json(from_file) == forest_to_json(model));

  // Corrupt structure is rejected.
  auto j = forest_to_json(model);
  j.erase("trees");
  CHECK_THROWS_AS(forest_from_json(j, "test"), ParseError);
}
