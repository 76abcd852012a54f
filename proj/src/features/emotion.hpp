#pragma once

#include <string>
#include <vector>

#include "features/features.hpp"
#include "features/forest.hpp"
#include "vad/svm.hpp"

namespace ds::feat {

enum class Axis { valence, arousal };
const char* axis_name(Axis a);
Axis parse_axis(const std::string& s);

// +1 = positive valence / high arousal, -1 = negative / low.
int axis_label_value(Axis axis, const std::string& label);
std::string axis_label_name(Axis axis, int value);

enum class EmotionModelType { svm, forest };

// A binary classifier for one emotion axis plus the feature schema it was
// trained on and per-feature training means for optional imputation.
struct EmotionModel {
  Axis axis = Axis::valence;
  EmotionModelType type = EmotionModelType::svm;
  std::vector<std::string> feature_names;
  std::vector<double> feature_means;
  vad::LinearSvmModel svm;
  forest::RandomForestModel forest;
};

struct EmotionTrainOptions {
  EmotionModelType type = EmotionModelType::svm;
  vad::SvmTrainOptions svm;
  forest::ForestTrainOptions forest;
};

// Rows with any absent model feature are rejected (training never imputes).
EmotionModel train_emotion_model(const std::vector<FeatureSet>& sets,
                                 const std::vector<int>& labels, Axis axis,
                                 const EmotionTrainOptions& opts);

struct EmotionPrediction {
  int label = -1;
  double score = 0.0;
  bool imputed = false;  // audit flag: some feature was mean-imputed
};

// Features are matched to the model schema by name. A missing name is a
// SchemaError; an absent (NA) value is a SchemaError unless allow_imputation,
// in which case the training mean is substituted and the result is flagged.
EmotionPrediction classify_emotion(const EmotionModel& model,
                                   const FeatureSet& features,
                                   bool allow_imputation = false);

std::string emotion_model_to_json(const EmotionModel& model);
EmotionModel emotion_model_from_json(const std::string& text,
                                     const std::string& context);
void save_emotion_model(const EmotionModel& model, const std::string& path);
EmotionModel load_emotion_model(const std::string& path);

// Label file: CSV session_id,valence,arousal with values
// positive|negative and high|low.
struct SessionLabels {
  std::string session_id;
  int valence = -1;
  int arousal = -1;
};

std::vector<SessionLabels> labels_from_csv(const std::string& text,
                                           const std::string& context);
std::string labels_to_csv(const std::vector<SessionLabels>& labels);

}  // namespace ds::feat
