#include "painscale/synth.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "painscale/error.hpp"
#include "painscale/rng.hpp"

namespace painscale::synth {

namespace {

std::string padded(const char* prefix, int i) {
  std::string out = prefix;
  if (i < 10) out += '0';
  out += std::to_string(i);
  return out;
}

// VAS intervals that discretize (round half-up) back to each class.
double sample_vas_for(PainClass c, Rng& rng) {
  switch (c) {
    case PainClass::Mild: return rng.uniform(0.0, 4.49);
    case PainClass::Moderate: return rng.uniform(4.5, 6.49);
    case PainClass::Severe: return rng.uniform(6.5, 10.0);
  }
  return 0.0;
}

double clipped_normal(Rng& rng, double mean, double sd, double lo, double hi) {
  return std::clamp(rng.normal(mean, sd), lo, hi);
}

}  // namespace

std::array<std::array<double, kNumPosTags>, 3> SynthConfig::default_pos_mixtures() {
  // base mixture roughly shaped like conversational speech
  std::array<double, kNumPosTags> base{};
  base[static_cast<std::size_t>(PosTag::Noun)] = 0.22;
  base[static_cast<std::size_t>(PosTag::Verb)] = 0.22;
  base[static_cast<std::size_t>(PosTag::Adjective)] = 0.10;
  base[static_cast<std::size_t>(PosTag::Adverb)] = 0.12;
  base[static_cast<std::size_t>(PosTag::Pronoun)] = 0.08;
  base[static_cast<std::size_t>(PosTag::Determinant)] = 0.05;
  base[static_cast<std::size_t>(PosTag::Article)] = 0.05;
  base[static_cast<std::size_t>(PosTag::Preposition)] = 0.06;
  base[static_cast<std::size_t>(PosTag::Conjunction)] = 0.04;
  base[static_cast<std::size_t>(PosTag::Numeral)] = 0.02;
  base[static_cast<std::size_t>(PosTag::Interjection)] = 0.01;
  base[static_cast<std::size_t>(PosTag::PastParticiple)] = 0.02;
  base[static_cast<std::size_t>(PosTag::Relation)] = 0.01;

  std::array<std::array<double, kNumPosTags>, 3> mix{base, base, base};
  // mild speakers lean on verbs, moderate on adverbs, severe on nouns
  mix[0][static_cast<std::size_t>(PosTag::Verb)] += 0.12;
  mix[0][static_cast<std::size_t>(PosTag::Noun)] -= 0.06;
  mix[1][static_cast<std::size_t>(PosTag::Adverb)] += 0.12;
  mix[1][static_cast<std::size_t>(PosTag::Verb)] -= 0.06;
  mix[2][static_cast<std::size_t>(PosTag::Noun)] += 0.12;
  mix[2][static_cast<std::size_t>(PosTag::Adverb)] -= 0.06;
  return mix;
}

SynthResult generate(const SynthConfig& config) {
  if (config.n_participants < 1) throw Error("synth: need at least 1 participant");
  if (config.signal_strength < 0.0 || config.signal_strength > 1.0)
    throw Error("synth: signal_strength must be in [0,1]");
  double prior_sum = 0.0;
  for (double p : config.class_priors) prior_sum += p;
  if (std::fabs(prior_sum - 1.0) > 1e-9) throw Error("synth: class priors must sum to 1");
  if (config.shared_vocab_size < 1) throw Error("synth: empty shared vocabulary");
  const int lexicon_budget =
      3 * config.class_lexicon_size +
      (config.confound ? 2 * config.confound->lexicon_size : 0);
  if (lexicon_budget > 4 * config.shared_vocab_size)
    throw Error("synth: lexicon sizes exceed vocabulary budget");
  if (config.min_tokens_per_segment < 1 ||
      config.max_tokens_per_segment < config.min_tokens_per_segment)
    throw Error("synth: bad tokens-per-segment range");
  if (config.confound && config.confound->confound != "gender")
    throw Error("synth: unsupported confound plant '" + config.confound->confound + "'");

  Rng rng(mix_seed(config.seed, 0x5E17));

  SynthResult result;
  auto& truth = result.ground_truth;
  for (int c = 0; c < 3; ++c)
    for (int w = 0; w < config.class_lexicon_size; ++w) {
      const char* prefix = c == 0 ? "sigmild" : c == 1 ? "sigmod" : "sigsev";
      truth.class_lexicons[static_cast<std::size_t>(c)].push_back(padded(prefix, w));
    }
  if (config.confound)
    for (int level = 0; level < 2; ++level)
      for (int w = 0; w < config.confound->lexicon_size; ++w)
        truth.confound_lexicons[static_cast<std::size_t>(level)].push_back(
            padded(level == 0 ? "confa" : "confb", w));

  std::vector<std::string> shared_vocab;
  shared_vocab.reserve(static_cast<std::size_t>(config.shared_vocab_size));
  for (int w = 0; w < config.shared_vocab_size; ++w) {
    std::string word = "w";
    if (w < 100) word += '0';
    if (w < 10) word += '0';
    word += std::to_string(w);
    shared_vocab.push_back(std::move(word));
  }

  // Zipf cumulative weights over shared ranks.
  std::vector<double> zipf(shared_vocab.size());
  for (std::size_t r = 0; r < zipf.size(); ++r)
    zipf[r] = 1.0 / std::pow(static_cast<double>(r + 1), config.zipf_exponent);

  const auto draw_shared = [&]() -> const std::string& {
    return shared_vocab[rng.categorical(zipf)];
  };

  for (int i = 0; i < config.n_participants; ++i) {
    const auto cls = static_cast<PainClass>(rng.categorical(config.class_priors));
    truth.classes.push_back(cls);

    ParticipantRecord rec;
    {
      std::string id = "synth-";
      if (i < 100) id += '0';
      if (i < 10) id += '0';
      id += std::to_string(i);
      rec.id = id;
    }

    // confound level: tracks the class with the configured agreement
    std::string level;
    if (config.confound) {
      const bool class_side = cls == PainClass::Mild;  // mild vs the rest
      const bool agree = rng.bernoulli(config.confound->level_class_agreement);
      const bool side_a = agree ? class_side : !class_side;
      level = side_a ? "a" : "b";
      rec.demographics.gender = side_a ? Gender::F : Gender::M;
    } else {
      rec.demographics.gender = rng.bernoulli(40.0 / 65.0) ? Gender::F : Gender::M;
    }
    truth.confound_levels.push_back(level);

    rec.demographics.age = clipped_normal(rng, 56.4, 12.7, 20.0, 90.0);
    rec.demographics.education = rng.bernoulli(49.0 / 65.0) ? Education::Basic : Education::HighSchool;
    rec.demographics.professionally_active =
        rng.bernoulli(34.0 / 65.0) ? Activity::Active : Activity::NotActive;
    {
      const std::array<double, 3> interviewer_w{50.0, 9.0, 6.0};
      rec.interviewer = static_cast<Interviewer>(rng.categorical(interviewer_w));
    }
    {
      const std::array<double, 4> pathology_w{29.0, 32.0, 5.0, 2.0};
      const auto first = static_cast<Pathology>(rng.categorical(pathology_w));
      rec.clinical.pathologies.insert(first);
      if (rng.bernoulli(3.0 / 65.0)) {
        const auto second = static_cast<Pathology>(rng.categorical(pathology_w));
        rec.clinical.pathologies.insert(second);
      }
    }
    rec.clinical.years_since_diagnosis = clipped_normal(rng, 12.4, 9.5, 0.3, 45.0);
    rec.clinical.years_since_pain =
        rec.clinical.years_since_diagnosis + std::fabs(rng.normal(3.0, 2.5));
    rec.clinical.esr = std::fabs(rng.normal(19.4, 16.5));
    rec.clinical.crp = std::fabs(rng.normal(6.5, 9.0));
    rec.vas_pain = sample_vas_for(cls, rng);
    rec.vas_disease = rng.uniform(0.0, 10.0);
    rec.pain_class = discretize_vas(rec.vas_pain);

    const auto& pos_mix = config.class_pos_mixture[static_cast<std::size_t>(cls)];
    const auto& class_lexicon = truth.class_lexicons[static_cast<std::size_t>(cls)];

    for (int q = 1; q <= kNumInterviewQuestions; ++q) {
      const int n_segments = rng.bernoulli(config.extra_segment_prob) ? 2 : 1;
      for (int s = 0; s < n_segments; ++s) {
        Segment seg;
        seg.question_id = q;
        const auto n_tokens = static_cast<int>(
            rng.uniform_int(config.min_tokens_per_segment, config.max_tokens_per_segment));
        seg.tokens.reserve(static_cast<std::size_t>(n_tokens));
        for (int t = 0; t < n_tokens; ++t) {
          Token tok;
          const double u = rng.uniform();
          if (u < config.signal_strength && !class_lexicon.empty()) {
            tok.lemma = class_lexicon[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(class_lexicon.size()) - 1))];
          } else if (config.confound &&
                     u < config.signal_strength + config.confound->strength) {
            const auto& lex = truth.confound_lexicons[level == "a" ? 0 : 1];
            tok.lemma = lex[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(lex.size()) - 1))];
          } else {
            tok.lemma = draw_shared();
          }
          tok.surface = tok.lemma;  // pass-through annotation
          tok.pos = static_cast<PosTag>(rng.categorical(pos_mix));
          seg.tokens.push_back(std::move(tok));
        }
        const double wpm =
            clipped_normal(rng, config.words_per_minute_mean, config.words_per_minute_sd, 60.0, 240.0);
        seg.duration_s = static_cast<double>(n_tokens) / wpm * 60.0;
        rec.segments.push_back(std::move(seg));
      }
    }
    result.corpus.participants.push_back(std::move(rec));
  }
  return result;
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  nlohmann::json j;
  j["class_lexicons"] = {{"mild", truth.class_lexicons[0]},
                         {"moderate", truth.class_lexicons[1]},
                         {"severe", truth.class_lexicons[2]}};
  j["confound_lexicons"] = {{"a", truth.confound_lexicons[0]}, {"b", truth.confound_lexicons[1]}};
  std::vector<std::string> classes;
  classes.reserve(truth.classes.size());
  for (const PainClass c : truth.classes) classes.emplace_back(to_string(c));
  j["classes"] = classes;
  j["confound_levels"] = truth.confound_levels;
  return j.dump(2);
}

}  // namespace painscale::synth
