#include "vad/svm.hpp"

#include <cmath>
#include <cstdio>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/log.hpp"
#include "core/rng.hpp"

namespace ds::vad {
namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_array(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt17(v[i]);
  }
  out += ']';
}

std::vector<double> normalize(const LinearSvmModel& m,
                              const std::vector<double>& x) {
  std::vector<double> z(x.size());
  for (size_t i = 0; i < x.size(); ++i)
    z[i] = (x[i] - m.mean[i]) / m.std_dev[i];
  return z;
}

}  // namespace

double decision_score(const LinearSvmModel& model,
                      const std::vector<double>& x) {
  if (x.size() != model.weights.size())
    throw ModelError("feature dimension " + std::to_string(x.size()) +
                     " does not match model dimension " +
                     std::to_string(model.weights.size()));
  double acc = model.bias;
  for (size_t i = 0; i < x.size(); ++i)
    acc += model.weights[i] * (x[i] - model.mean[i]) / model.std_dev[i];
  return acc;
}

int classify(double score) {
  if (std::isnan(score)) throw ModelError("NaN decision score");
  return score > 0.0 ? 1 : -1;
}

double svm_objective(const LinearSvmModel& model,
                     const std::vector<std::vector<double>>& x,
                     const std::vector<int>& y, double lambda) {
  double norm2 = 0.0;
  for (double w : model.weights) norm2 += w * w;
  double hinge = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double margin = y[i] * decision_score(model, x[i]);
    hinge += std::max(0.0, 1.0 - margin);
  }
  return 0.5 * lambda * norm2 + hinge / static_cast<double>(x.size());
}

LinearSvmModel train_linear_svm(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y,
                                const SvmTrainOptions& opts) {
  if (x.empty() || x.size() != y.size())
    throw TrainingError("dataset empty or labels do not match samples");
  if (opts.lambda <= 0) throw TrainingError("lambda must be positive");
  if (opts.epochs <= 0) throw TrainingError("epochs must be positive");
  size_t d = x[0].size();
  if (d == 0) throw TrainingError("zero-dimensional features");
  bool has_pos = false, has_neg = false;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 1)
      has_pos = true;
    else if (y[i] == -1)
      has_neg = true;
    else
      throw TrainingError("labels must be +1 or -1");
    if (x[i].size() != d)
      throw TrainingError("inconsistent feature dimensions in dataset");
    for (double v : x[i])
      if (!std::isfinite(v)) throw TrainingError("non-finite feature value");
  }
  if (!has_pos || !has_neg)
    throw TrainingError("training requires both classes present");

  size_t n = x.size();
  LinearSvmModel model;
  model.mean.assign(d, 0.0);
  model.std_dev.assign(d, 0.0);
  for (const auto& row : x)
    for (size_t j = 0; j < d; ++j) model.mean[j] += row[j];
  for (size_t j = 0; j < d; ++j) model.mean[j] /= static_cast<double>(n);
  for (const auto& row : x)
    for (size_t j = 0; j < d; ++j) {
      double diff = row[j] - model.mean[j];
      model.std_dev[j] += diff * diff;
    }
  for (size_t j = 0; j < d; ++j) {
    model.std_dev[j] = std::sqrt(model.std_dev[j] / static_cast<double>(n));
    if (model.std_dev[j] < 1e-12) model.std_dev[j] = 1.0;
  }

  std::vector<std::vector<double>> z(n);
  for (size_t i = 0; i < n; ++i) z[i] = normalize(model, x[i]);

  model.weights.assign(d, 0.0);
  model.bias = 0.0;
  double radius = 1.0 / std::sqrt(opts.lambda);

  Rng rng(opts.seed);
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;

  std::vector<double> objective;
  objective.reserve(static_cast<size_t>(opts.epochs));
  uint64_t t = 0;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t idx : order) {
      ++t;
      double eta = 1.0 / (opts.lambda * static_cast<double>(t));
      const auto& xi = z[idx];
      double margin = model.bias;
      for (size_t j = 0; j < d; ++j) margin += model.weights[j] * xi[j];
      margin *= y[idx];

      double decay = 1.0 - eta * opts.lambda;
      for (size_t j = 0; j < d; ++j) model.weights[j] *= decay;
      if (margin < 1.0) {
        double step = eta * y[idx];
        for (size_t j = 0; j < d; ++j) model.weights[j] += step * xi[j];
        model.bias += step;
      }
      double norm2 = 0.0;
      for (double w : model.weights) norm2 += w * w;
      if (norm2 > radius * radius) {
        double scale = radius / std::sqrt(norm2);
        for (double& w : model.weights) w *= scale;
      }
    }
    // Objective on the fixed dataset order; recorded for monitoring.
    double norm2 = 0.0;
    for (double w : model.weights) norm2 += w * w;
    double hinge = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double margin = model.bias;
      for (size_t j = 0; j < d; ++j) margin += model.weights[j] * z[i][j];
      hinge += std::max(0.0, 1.0 - y[i] * margin);
    }
    objective.push_back(0.5 * opts.lambda * norm2 +
                        hinge / static_cast<double>(n));
  }

  model.metadata = {{"algorithm", "pegasos-sgd"},
                    {"lambda", opts.lambda},
                    {"epochs", opts.epochs},
                    {"seed", opts.seed},
                    {"num_samples", n},
                    {"objective", objective}};
  return model;
}

std::string model_to_json(const LinearSvmModel& model) {
  std::string out = "{\n";
  out += "  \"version\": 1,\n";
  out += "  \"dim\": " + std::to_string(model.weights.size()) + ",\n";
  out += "  \"weights\": ";
  append_array(out, model.weights);
  out += ",\n  \"bias\": " + fmt17(model.bias);
  out += ",\n  \"mean\": ";
  append_array(out, model.mean);
  out += ",\n  \"std\": ";
  append_array(out, model.std_dev);
  out += ",\n  \"metadata\": " + model.metadata.dump();
  out += "\n}\n";
  return out;
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j,
                                    const char* name,
                                    const std::string& context) {
  auto it = j.find(name);
  if (it == j.end())
    throw ParseError(context + ": missing field \"" + name + "\"");
  return *it;
}

std::vector<double> as_double_vector(const nlohmann::json& j,
                                     const char* name,
                                     const std::string& context) {
  if (!j.is_array())
    throw ParseError(context + ": field \"" + name + "\" must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number())
      throw ParseError(context + ": field \"" + name +
                       "\" must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

LinearSvmModel model_from_json(const std::string& text,
                               const std::string& context) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(context + ": " + e.what());
  }
  if (!j.is_object()) throw ParseError(context + ": not a JSON object");

  static const char* known[] = {"version", "dim",  "weights", "bias",
                                "std",     "mean", "metadata"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool found = false;
    for (const char* k : known)
      if (it.key() == k) {
        found = true;
        break;
      }
    if (!found)
      log::warn(context + ": ignoring unknown model field \"" + it.key() +
                "\"");
  }

  const auto& version = require_field(j, "version", context);
  if (!version.is_number_integer() || version.get<int>() != 1)
    throw ParseError(context + ": unsupported model version");
  const auto& dim_field = require_field(j, "dim", context);
  if (!dim_field.is_number_integer() || dim_field.get<int64_t>() < 1)
    throw ParseError(context + ": field \"dim\" must be a positive integer");
  auto dim = dim_field.get<size_t>();

  LinearSvmModel model;
  model.weights = as_double_vector(require_field(j, "weights", context),
                                   "weights", context);
  const auto& bias = require_field(j, "bias", context);
  if (!bias.is_number())
    throw ParseError(context + ": field \"bias\" must be a number");
  model.bias = bias.get<double>();
  model.mean = as_double_vector(require_field(j, "mean", context), "mean",
                                context);
  model.std_dev =
      as_double_vector(require_field(j, "std", context), "std", context);
  const auto& metadata = require_field(j, "metadata", context);
  if (!metadata.is_object())
    throw ParseError(context + ": field \"metadata\" must be an object");
  model.metadata = metadata;

  if (model.weights.size() != dim || model.mean.size() != dim ||
      model.std_dev.size() != dim)
    throw ParseError(context +
                     ": weights/mean/std lengths must all equal \"dim\"");
  for (double v : model.weights)
    if (!std::isfinite(v))
      throw ParseError(context + ": non-finite value in \"weights\"");
  if (!std::isfinite(model.bias))
    throw ParseError(context + ": non-finite \"bias\"");
  for (double v : model.mean)
    if (!std::isfinite(v))
      throw ParseError(context + ": non-finite value in \"mean\"");
  for (double v : model.std_dev)
    if (!std::isfinite(v) || v <= 0.0)
      throw ParseError(context + ": \"std\" entries must be finite and > 0");
  return model;
}

void save_model(const LinearSvmModel& model, const std::string& path) {
  io::write_file(path, model_to_json(model));
}

LinearSvmModel load_model(const std::string& path) {
  return model_from_json(io::read_file(path), path);
}

}  // namespace ds::vad
