#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "painscale/types.hpp"

namespace painscale::synth {

/// Optional confound plant: a demographic level that tracks the pain class
/// (with the given agreement probability) and a lexicon whose usage tracks
/// the level. Features built from that lexicon predict the class only
/// through the confound, which is exactly what screening must catch.
struct ConfoundPlant {
  std::string confound = "gender";  // currently: "gender"
  double level_class_agreement = 0.9;
  int lexicon_size = 8;      // per level
  double strength = 0.5;     // probability a token comes from the level lexicon
};

struct SynthConfig {
  int n_participants = 65;
  std::array<double, 3> class_priors{38.0 / 65.0, 12.0 / 65.0, 15.0 / 65.0};
  int shared_vocab_size = 200;
  int class_lexicon_size = 8;  // per class
  /// Probability a token is drawn from the participant's class lexicon.
  double signal_strength = 0.5;
  /// Per-class POS mixtures; defaults over-weight verbs for mild, adverbs
  /// for moderate and nouns for severe speakers.
  std::array<std::array<double, kNumPosTags>, 3> class_pos_mixture = default_pos_mixtures();
  int min_tokens_per_segment = 25;
  int max_tokens_per_segment = 55;
  double words_per_minute_mean = 130.0;
  double words_per_minute_sd = 25.0;
  double zipf_exponent = 1.1;
  double extra_segment_prob = 0.15;  // chance a question gets a second segment
  std::optional<ConfoundPlant> confound;
  std::uint64_t seed = 0;

  static std::array<std::array<double, kNumPosTags>, 3> default_pos_mixtures();
};

struct GroundTruth {
  std::array<std::vector<std::string>, 3> class_lexicons;   // by PainClass
  std::array<std::vector<std::string>, 2> confound_lexicons;  // by level (when planted)
  std::vector<PainClass> classes;              // per participant
  std::vector<std::string> confound_levels;    // per participant (empty when not planted)
};

struct SynthResult {
  Corpus corpus;
  GroundTruth ground_truth;
};

/// Deterministic generator: identical (config, seed) gives identical
/// output. Every emitted record passes parse/complete-case checks and its
/// VAS value discretizes back to the assigned class.
SynthResult generate(const SynthConfig& config);

std::string ground_truth_to_json(const GroundTruth& truth);

}  // namespace painscale::synth
