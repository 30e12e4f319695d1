#pragma once

#include <array>
#include <span>
#include <vector>

#include "painscale/types.hpp"

namespace painscale::models {

/// Per-class counts in canonical order.
std::array<std::size_t, kNumPainClasses> class_counts(std::span<const PainClass> y);

/// Majority class; ties resolve to the canonically smaller class.
PainClass majority_class(std::span<const PainClass> y);

/// Zero Rate Baseline: always predicts the training majority class.
struct ZrbModel {
  PainClass majority_class = PainClass::Mild;

  bool operator==(const ZrbModel&) const = default;
};

ZrbModel zrb_fit(std::span<const PainClass> y);
std::vector<PainClass> zrb_predict(const ZrbModel& model, std::size_t n);

}  // namespace painscale::models
