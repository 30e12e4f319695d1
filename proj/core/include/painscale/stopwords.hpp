#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace painscale::features {

/// Lemma stop-list. Matching is by lemma and ASCII-case-insensitive
/// (annotated lemmas are lowercase already; accented characters pass
/// through unchanged).
class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::set<std::string> lemmas) : lemmas_(std::move(lemmas)) {}

  /// Loads a UTF-8 file, one lemma per line, '#' starts a comment.
  static StopwordSet load(const std::filesystem::path& path);

  /// The Portuguese default list that also ships as data/stopwords_pt.txt.
  static const StopwordSet& default_portuguese();

  bool contains(std::string_view lemma) const;
  std::size_t size() const { return lemmas_.size(); }

 private:
  std::set<std::string> lemmas_;
};

}  // namespace painscale::features
