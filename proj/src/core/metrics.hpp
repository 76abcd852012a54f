#pragma once

#include <vector>

namespace ds {

// Mean of per-class recalls over the classes present in labels.
// Exactly 0.5 for a constant predictor on any two-class dataset.
double balanced_accuracy(const std::vector<int>& predictions,
                         const std::vector<int>& labels);

}  // namespace ds
