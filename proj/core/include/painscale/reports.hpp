#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "painscale/confound.hpp"
#include "painscale/eval.hpp"
#include "painscale/features.hpp"
#include "painscale/interpret.hpp"

namespace painscale::reports {

/// JSON form of an evaluation report (config fingerprint, per-fold records,
/// score, confusion, selected-feature tally).
std::string eval_report_to_json(const eval::EvalReport& report);

/// Weighted-F1 grid CSV: one row per feature set, columns zrb/dt/svm.
/// Missing combinations are left empty.
std::string table3_csv(
    const std::map<std::pair<eval::FeatureSetId, eval::ModelKind>, double>& scores);

/// Confusion matrices of the headline model with the ZRB rows alongside.
std::string table4_json(const eval::EvalReport& model_report, const eval::EvalReport& zrb_report);

/// Per-confound comparison: rows zrb / all_features / select_features /
/// aggregate, one column per confound level.
std::string table5_csv(const std::vector<confound::ScreenedComparison>& comparisons);

std::string screen_report_json(const std::vector<confound::ScreenedComparison>& comparisons);

std::string intensity_report_json(const confound::IntensityReport& report);
std::string intensity_report_csv(const confound::IntensityReport& report);

std::string fig1_csv(const interpret::InterpretReport& report);
std::string fig2_csv(const interpret::InterpretReport& report);
std::string table7_csv(const interpret::InterpretReport& report);
std::string fig3_csv(const interpret::InterpretReport& report);

/// Feature matrix CSV (first column participant_id) plus the JSON sidecar
/// mapping feature name to its family tag.
std::string feature_matrix_csv(const features::FeatureMatrix& m);
std::string feature_sets_sidecar_json(const features::FeatureMatrix& m);

std::string ingest_report_json(const Corpus& corpus);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace painscale::reports
