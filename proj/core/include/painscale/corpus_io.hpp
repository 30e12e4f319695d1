#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "painscale/types.hpp"

namespace painscale::io {

/// Parses a line-delimited JSON corpus file. Every input line is accounted
/// for: syntactically valid records land in `participants`, everything else
/// lands in `ingest_rejects` with a reason. Throws Error when the file is
/// unreadable or contains zero valid records.
Corpus parse_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::istream& in);

/// Keeps only complete records (all metadata fields are guaranteed by the
/// parser; completeness here means every interview question 1..7 has at
/// least one segment). Dropped records are appended to ingest_rejects with
/// reason "incomplete".
Corpus complete_case_filter(const Corpus& corpus);

std::string serialize_record(const ParticipantRecord& record);
void serialize_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace painscale::io
