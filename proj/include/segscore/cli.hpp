#pragma once

#include "segscore/report.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace segscore::cli {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitFlagged = 2;
inline constexpr int kExitLintErrors = 3;

struct RunConfig {
    std::string gt_dir;
    std::string pred_dir;
    std::string manifest;      // CSV gt_path,pred_path,sample_id; overrides directory pairing
    std::string classes_file;  // JSON class catalog
    std::string images_dir;    // optional grayscale base images, paired by stem
    std::string output_dir = "segscore-out";
    double alpha = 0.5;
    EvaluationOptions options;
};

/// Emit flags accepted by --emit.
const std::vector<std::string>& known_emit_flags();

/// Applies a JSON config document onto `config`. Unknown keys are rejected.
void apply_config_json(const Json& doc, RunConfig& config);

/// Reads a class catalog:
///   [{"id": 0, "name": "background", "background": true}, {"id": 1, "name": "tumor"}]
/// or the same list under a top-level "classes" key. If no entry is marked
/// background, class 0 (when listed) is.
ClassCatalog load_catalog(const std::filesystem::path& path);

/// Pairs files with the same stem across the two directories (sorted by
/// stem). Predictions without a ground truth become pairs with an empty gt
/// path. Throws Error on unreadable directories or ambiguous stems.
std::vector<SamplePair> pair_by_filename(const std::filesystem::path& gt_dir, const std::filesystem::path& pred_dir);

/// Reads a manifest CSV with rows gt_path,pred_path,sample_id (header
/// optional). Relative paths resolve against the manifest's directory.
std::vector<SamplePair> read_manifest(const std::filesystem::path& manifest);

struct Streams {
    std::ostream& out;
    std::ostream& err;
    bool color = false;
};

int cmd_evaluate(const RunConfig& config, const Streams& io);

struct ScenarioConfig {
    std::string gt_path;
    std::string output_dir = "segscore-out";
    std::uint64_t seed = 0;
    double probability = 0.5;
    ClassId foreground = 1;
    bool surface_only = false;
    EmptyPolicy empty_policy = EmptyPolicy::ScoreOne;
};

int cmd_scenarios(const ScenarioConfig& config, const Streams& io);

int cmd_lint(const std::string& report_path, const Streams& io);

struct VisualizeConfig {
    std::string gt_path;
    std::string pred_path;
    std::string output_dir = "segscore-out";
    std::string image_path;
    std::string classes_file;
    double alpha = 0.5;
    std::size_t slice = 0;
};

int cmd_visualize(const VisualizeConfig& config, const Streams& io);

/// Parses the command line and dispatches to a command.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color = false);

}  // namespace segscore::cli
