#include "painscale/models.hpp"

#include "painscale/error.hpp"

namespace painscale::models {

std::array<std::size_t, kNumPainClasses> class_counts(std::span<const PainClass> y) {
  std::array<std::size_t, kNumPainClasses> counts{};
  for (PainClass c : y) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

PainClass majority_class(std::span<const PainClass> y) {
  if (y.empty()) throw Error("majority_class: empty label set");
  const auto counts = class_counts(y);
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumPainClasses; ++c)
    if (counts[c] > counts[best]) best = c;  // strict: ties keep canonical order
  return static_cast<PainClass>(best);
}

ZrbModel zrb_fit(std::span<const PainClass> y) {
  if (y.empty()) throw Error("zrb_fit: empty training set");
  return ZrbModel{majority_class(y)};
}

std::vector<PainClass> zrb_predict(const ZrbModel& model, std::size_t n) {
  return std::vector<PainClass>(n, model.majority_class);
}

}  // namespace painscale::models
