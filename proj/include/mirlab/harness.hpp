#pragma once

// Experiment pipeline behind the command-line tool. Every command reads and
// writes files inside one output directory:
//
//   generate  manifest.json, traces.csv, dataset.csv, dataset_discarded.csv
//   train     model.json, eval.csv
//   compare   compare.csv
//   report    report.csv

#include "mirlab/cutting_loop.hpp"
#include "mirlab/gbt.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mirlab {

inline constexpr const char* kTraceSchema = "mirlab.traces.v1";
inline constexpr const char* kEvalSchema = "mirlab.eval.v1";
inline constexpr const char* kCompareSchema = "mirlab.compare.v1";
inline constexpr const char* kReportSchema = "mirlab.report.v1";

struct ExperimentConfig {
    std::string base_path;
    std::string out_dir = "out";
    Index family_size = 20;
    std::uint64_t seed = 0;
    double sep_time_limit = 600.0;
    double loop_time_limit = 3.0 * 3600.0;
    Index max_rounds = 1000;
    double min_gap = 5.0;
    double split = 0.8;            // fraction of variations used for training
    double threshold = 0.5;        // classifier decision threshold
    int workers = 1;
    GbtParams gbt;
    SeparationConfig separation;

    /// Throws ConfigError.
    void validate() const;
    LoopConfig loop_config() const;
    std::string path(const std::string& file) const;
};

struct GenerateSummary {
    std::vector<Index> kept;
    std::vector<Index> discarded;
    std::vector<Index> failed;
    Index dataset_rows = 0;
};

struct TrainSummary {
    EvalReport train;
    EvalReport test;
    bool single_class = false;
    std::vector<Index> train_variations;
    std::vector<Index> test_variations;
};

struct SideSummary {
    std::string side;
    Index variations = 0;
    double full_mean_gap = 0.0;      // mean final gap, degenerate runs excluded
    double reduced_mean_gap = 0.0;
};

struct CompareSummary {
    std::vector<SideSummary> sides;
    Index failed = 0;

    const SideSummary* find(const std::string& side) const;
};

GenerateSummary cmd_generate(const ExperimentConfig& config);
TrainSummary cmd_train(const ExperimentConfig& config);
CompareSummary cmd_compare(const ExperimentConfig& config);
void cmd_report(const ExperimentConfig& config);

/// Samples of dataset.csv grouped by variation, in file order.
std::vector<std::pair<Index, std::vector<LabeledSample>>> read_dataset(const std::string& path);

/// Seeded per-variation split: (train, test), both sorted. Throws ConfigError
/// with fewer than two variations.
std::pair<std::vector<Index>, std::vector<Index>> split_variations(std::vector<Index> ids, double fraction,
                                                                   std::uint64_t seed);

} // namespace mirlab
