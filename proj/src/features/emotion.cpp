#include "features/emotion.hpp"

#include <sstream>

#include "core/errors.hpp"
#include "core/io.hpp"
#include "json.hpp"

namespace ds::feat {

const char* axis_name(Axis a) {
  return a == Axis::valence ? "valence" : "arousal";
}

Axis parse_axis(const std::string& s) {
  if (s == "valence") return Axis::valence;
  if (s == "arousal") return Axis::arousal;
  throw ConfigError("unknown axis \"" + s + "\" (want valence or arousal)");
}

int axis_label_value(Axis axis, const std::string& label) {
  if (axis == Axis::valence) {
    if (label == "positive") return 1;
    if (label == "negative") return -1;
    throw ParseError("valence label must be positive or negative, got \"" +
                     label + "\"");
  }
  if (label == "high") return 1;
  if (label == "low") return -1;
  throw ParseError("arousal label must be high or low, got \"" + label +
                   "\"");
}

std::string axis_label_name(Axis axis, int value) {
  if (axis == Axis::valence) return value == 1 ? "positive" : "negative";
  return value == 1 ? "high" : "low";
}

namespace {

// Dense matrix of the model's features in schema order; any absent value or
// missing name is an error (training data must be complete).
std::vector<std::vector<double>> complete_rows(
    const std::vector<FeatureSet>& sets,
    const std::vector<std::string>& names) {
  std::vector<std::vector<double>> rows;
  rows.reserve(sets.size());
  for (const auto& set : sets) {
    std::vector<double> row;
    row.reserve(names.size());
    for (const auto& name : names) {
      bool found = false;
      for (size_t i = 0; i < set.names.size(); ++i) {
        if (set.names[i] == name) {
          if (!set.present[i])
            throw SchemaError("session " + set.session_id + ": feature \"" +
                              name + "\" is absent");
          row.push_back(set.values[i]);
          found = true;
          break;
        }
      }
      if (!found)
        throw SchemaError("session " + set.session_id +
                          ": feature \"" + name + "\" not in schema");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

EmotionModel train_emotion_model(const std::vector<FeatureSet>& sets,
                                 const std::vector<int>& labels, Axis axis,
                                 const EmotionTrainOptions& opts) {
  if (sets.empty() || sets.size() != labels.size())
    throw TrainingError("feature sets and labels must be non-empty and equal "
                        "length");
  EmotionModel model;
  model.axis = axis;
  model.type = opts.type;
  model.feature_names = sets[0].names;

  auto rows = complete_rows(sets, model.feature_names);
  model.feature_means.assign(model.feature_names.size(), 0.0);
  for (const auto& row : rows)
    for (size_t j = 0; j < row.size(); ++j) model.feature_means[j] += row[j];
  for (double& m : model.feature_means)
    m /= static_cast<double>(rows.size());

  if (opts.type == EmotionModelType::svm)
    model.svm = vad::train_linear_svm(rows, labels, opts.svm);
  else
    model.forest = forest::train_random_forest(rows, labels, opts.forest);
  return model;
}

EmotionPrediction classify_emotion(const EmotionModel& model,
                                   const FeatureSet& features,
                                   bool allow_imputation) {
  std::vector<double> row;
  row.reserve(model.feature_names.size());
  bool imputed = false;
  for (size_t j = 0; j < model.feature_names.size(); ++j) {
    const auto& name = model.feature_names[j];
    bool found = false;
    for (size_t i = 0; i < features.names.size(); ++i) {
      if (features.names[i] == name) {
        found = true;
        if (features.present[i]) {
          row.push_back(features.values[i]);
        } else if (allow_imputation) {
          row.push_back(model.feature_means[j]);
          imputed = true;
        } else {
          throw SchemaError("session " + features.session_id +
                            ": feature \"" + name +
                            "\" is absent and imputation is disabled");
        }
        break;
      }
    }
    if (!found)
      throw SchemaError("session " + features.session_id + ": feature \"" +
                        name + "\" not in input schema");
  }

  EmotionPrediction out;
  out.imputed = imputed;
  if (model.type == EmotionModelType::svm) {
    out.score = vad::decision_score(model.svm, row);
    out.label = vad::classify(out.score);
  } else {
    auto pred = forest::classify(model.forest, row);
    out.score = pred.score;
    out.label = pred.label;
  }
  return out;
}

std::string emotion_model_to_json(const EmotionModel& model) {
  nlohmann::json j;
  j["version"] = 1;
  j["kind"] = "emotion";
  j["axis"] = axis_name(model.axis);
  j["feature_names"] = model.feature_names;
  j["feature_means"] = model.feature_means;
  if (model.type == EmotionModelType::svm) {
    j["model_type"] = "svm";
    j["svm"] = nlohmann::json::parse(vad::model_to_json(model.svm));
  } else {
    j["model_type"] = "forest";
    j["forest"] = forest::forest_to_json(model.forest);
  }
  return j.dump(2) + "\n";
}

EmotionModel emotion_model_from_json(const std::string& text,
                                     const std::string& context) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(context + ": " + std::string(e.what()));
  }
  auto need = [&](const char* name) -> const nlohmann::json& {
    auto it = j.find(name);
    if (it == j.end())
      throw ParseError(context + ": missing field \"" + name + "\"");
    return *it;
  };
  if (!j.is_object()) throw ParseError(context + ": not a JSON object");
  if (need("version").get<int>() != 1)
    throw ParseError(context + ": unsupported emotion model version");

  EmotionModel model;
  model.axis = parse_axis(need("axis").get<std::string>());
  model.feature_names = need("feature_names").get<std::vector<std::string>>();
  model.feature_means = need("feature_means").get<std::vector<double>>();
  if (model.feature_means.size() != model.feature_names.size())
    throw ParseError(context + ": feature_means/feature_names length mismatch");

  std::string type = need("model_type").get<std::string>();
  if (type == "svm") {
    model.type = EmotionModelType::svm;
    model.svm = vad::model_from_json(need("svm").dump(), context + ": svm");
    if (model.svm.dim() != model.feature_names.size())
      throw ParseError(context + ": svm dimension does not match schema");
  } else if (type == "forest") {
    model.type = EmotionModelType::forest;
    model.forest = forest::forest_from_json(need("forest"), context + ": forest");
    if (model.forest.dim != model.feature_names.size())
      throw ParseError(context + ": forest dimension does not match schema");
  } else {
    throw ParseError(context + ": unknown model_type \"" + type + "\"");
  }
  return model;
}

void save_emotion_model(const EmotionModel& model, const std::string& path) {
  io::write_file(path, emotion_model_to_json(model));
}

EmotionModel load_emotion_model(const std::string& path) {
  return emotion_model_from_json(io::read_file(path), path);
}

std::vector<SessionLabels> labels_from_csv(const std::string& text,
                                           const std::string& context) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(context + ": empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = io::split_csv_line(line);
  if (header != std::vector<std::string>{"session_id", "valence", "arousal"})
    throw ParseError(context +
                     ": header must be session_id,valence,arousal");
  std::vector<SessionLabels> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = io::split_csv_line(line);
    if (fields.size() != 3)
      throw ParseError(context + ":" + std::to_string(lineno) +
                       ": expected 3 fields");
    SessionLabels rec;
    rec.session_id = fields[0];
    rec.valence = axis_label_value(Axis::valence, fields[1]);
    rec.arousal = axis_label_value(Axis::arousal, fields[2]);
    out.push_back(std::move(rec));
  }
  return out;
}

std::string labels_to_csv(const std::vector<SessionLabels>& labels) {
  std::string out = "session_id,valence,arousal\n";
  for (const auto& rec : labels) {
    out += rec.session_id;
    out += ',';
    out += axis_label_name(Axis::valence, rec.valence);
    out += ',';
    out += axis_label_name(Axis::arousal, rec.arousal);
    out += '\n';
  }
  return out;
}

}  // namespace ds::feat
