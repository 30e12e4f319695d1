#pragma once

#include <string>
#include <vector>

#include "painscale/rng.hpp"
#include "painscale/types.hpp"

namespace testutil {

using namespace painscale;

/// A minimal complete record: one segment per question, tokens given as
/// (lemma, pos) pairs replicated across questions.
inline ParticipantRecord make_record(std::string id, double vas_pain,
                                     const std::vector<std::pair<std::string, PosTag>>& tokens,
                                     double seconds_per_segment = 10.0) {
  ParticipantRecord rec;
  rec.id = std::move(id);
  rec.demographics = {55.0, Gender::F, Education::Basic, Activity::Active};
  rec.clinical = {{Pathology::RheumatoidArthritis}, 10.0, 12.0, 18.0, 6.0};
  rec.interviewer = Interviewer::I1;
  rec.vas_pain = vas_pain;
  rec.vas_disease = 5.0;
  for (int q = 1; q <= kNumInterviewQuestions; ++q) {
    Segment seg;
    seg.question_id = q;
    seg.duration_s = seconds_per_segment;
    for (const auto& [lemma, pos] : tokens) seg.tokens.push_back({lemma, lemma, pos});
    rec.segments.push_back(std::move(seg));
  }
  rec.pain_class = discretize_vas(vas_pain);
  return rec;
}

/// Random small corpus with per-class lexical signal, handy for pipeline
/// tests that do not need the full synth module.
inline Corpus tiny_signal_corpus(std::size_t n, std::uint64_t seed, double signal = 0.8) {
  Rng rng(seed);
  Corpus corpus;
  const std::array<double, 3> priors{0.5, 0.25, 0.25};
  const std::array<const char*, 3> signal_words{"alpha", "beta", "gamma"};
  for (std::size_t i = 0; i < n; ++i) {
    const auto cls = static_cast<std::size_t>(rng.categorical(priors));
    const double vas = cls == 0 ? 2.0 : cls == 1 ? 5.5 : 8.0;
    std::vector<std::pair<std::string, PosTag>> tokens;
    for (int t = 0; t < 12; ++t) {
      if (rng.uniform() < signal) {
        tokens.push_back({signal_words[cls], PosTag::Noun});
      } else {
        tokens.push_back({"filler" + std::to_string(rng.uniform_int(0, 9)), PosTag::Verb});
      }
    }
    corpus.participants.push_back(
        make_record("p" + std::to_string(i), vas, tokens, 8.0 + static_cast<double>(i % 5)));
  }
  return corpus;
}

}  // namespace testutil
