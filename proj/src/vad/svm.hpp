#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace ds::vad {

// Linear SVM with per-feature z-normalization baked into the model so
// inference needs no side files. Immutable after construction.
struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> mean;
  std::vector<double> std_dev;  // all entries > 0
  nlohmann::json metadata = nlohmann::json::object();

  size_t dim() const { return weights.size(); }
};

// score = weights . ((x - mean) / std) + bias. Throws ModelError on
// dimension mismatch.
double decision_score(const LinearSvmModel& model,
                      const std::vector<double>& x);

// +1 speech iff score > 0; exact 0 is non-speech. NaN -> ModelError.
int classify(double score);

struct SvmTrainOptions {
  double lambda = 1e-4;
  int epochs = 20;
  uint64_t seed = 42;
};

// Pegasos-style hinge-loss SGD with seeded per-epoch shuffle, unregularized
// bias, and 1/sqrt(lambda) norm projection. Deterministic given seed.
// Labels must be +1/-1 with both classes present (else TrainingError).
// metadata records the options and the per-epoch primal objective.
LinearSvmModel train_linear_svm(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y,
                                const SvmTrainOptions& opts);

// Primal objective lambda/2 ||w||^2 + mean hinge loss, on normalized data.
double svm_objective(const LinearSvmModel& model,
                     const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, double lambda);

// JSON object {version, dim, weights[], bias, mean[], std[], metadata{}}
// with doubles printed to 17 significant digits (bit-exact round-trip).
std::string model_to_json(const LinearSvmModel& model);

// Missing required field -> ParseError naming the field; unknown fields are
// ignored with a warning; invariant violations (dim mismatch, std <= 0,
// non-finite values) -> ParseError.
LinearSvmModel model_from_json(const std::string& text,
                               const std::string& context = "model");

void save_model(const LinearSvmModel& model, const std::string& path);
LinearSvmModel load_model(const std::string& path);

}  // namespace ds::vad
