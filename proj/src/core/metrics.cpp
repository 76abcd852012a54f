#include "core/metrics.hpp"

#include <map>

#include "core/errors.hpp"

namespace ds {

double balanced_accuracy(const std::vector<int>& predictions,
                         const std::vector<int>& labels) {
  if (labels.empty() || predictions.size() != labels.size())
    throw ConfigError("predictions and labels must be non-empty and equal length");
  std::map<int, std::pair<size_t, size_t>> per_class;  // label -> {hits, total}
  for (size_t i = 0; i < labels.size(); ++i) {
    auto& [hits, total] = per_class[labels[i]];
    ++total;
    if (predictions[i] == labels[i]) ++hits;
  }
  double sum = 0.0;
  for (const auto& [label, counts] : per_class)
    sum += static_cast<double>(counts.first) /
           static_cast<double>(counts.second);
  return sum / static_cast<double>(per_class.size());
}

}  // namespace ds
