#include "mirlab/harness.hpp"

#include "mirlab/csv.hpp"
#include "mirlab/errors.hpp"
#include "mirlab/instance_gen.hpp"
#include "mirlab/mps.hpp"
#include "mirlab/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string_view>

namespace mirlab {

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path + "'");
}

json parse_json(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw SchemaMismatch("'" + path + "' is not valid JSON: " + e.what());
    }
}

std::string join(const Vector& values) {
    std::string out;
    for (Index j = 0; j < values.size(); ++j) out += (j ? " " : "") + format_double(values(j));
    return out;
}

std::map<std::string, std::string> meta(const std::string& schema, std::uint64_t seed) {
    return {{"schema", schema}, {"seed", std::to_string(seed)}};
}

std::vector<std::string> dataset_header() {
    std::vector<std::string> header{"instance_id", "variation", "round", "row"};
    for (const auto& name : feature_names()) header.push_back(name);
    header.push_back("label");
    return header;
}

struct DatasetRow {
    FeatureVector features;
    int label = 0;
};

struct VariationRun {
    std::optional<LoopResult> result;
    std::string error;
    std::vector<DatasetRow> rows;
};

void append_trace_rows(CsvTable& table, Index variation, const std::string& status, const LoopResult& run) {
    for (const auto& t : run.rounds)
        table.rows.push_back({std::to_string(variation), status, std::to_string(t.round), std::to_string(t.cuts_added),
                              format_double(t.lp_objective), format_optional(t.gap_closed),
                              std::to_string(t.allowed_rows.size()), format_double(t.sep_seconds),
                              t.sep_status ? to_string(*t.sep_status) : "-", to_string(t.termination), join(t.point.stacked())});
}

CsvTable dataset_table(std::uint64_t seed) {
    CsvTable table;
    table.meta = meta(std::string(kFeatureSchema), seed);
    table.header = dataset_header();
    return table;
}

void append_dataset_rows(CsvTable& table, Index variation, const std::vector<DatasetRow>& rows) {
    for (const auto& r : rows) {
        std::vector<std::string> fields{r.features.instance_id, std::to_string(variation),
                                        std::to_string(r.features.round), std::to_string(r.features.row)};
        for (Index k = 0; k < kFeatureCount; ++k) fields.push_back(format_double(r.features.values(k)));
        fields.push_back(std::to_string(r.label));
        table.rows.push_back(std::move(fields));
    }
}

std::vector<Index> index_list(const json& value) { return value.get<std::vector<Index>>(); }

const char* side_of(Index k, const std::set<Index>& train, const std::set<Index>& test) {
    if (train.count(k)) return "train";
    if (test.count(k)) return "test";
    return "discarded";
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

} // namespace

void ExperimentConfig::validate() const {
    if (out_dir.empty()) throw ConfigError("output directory is required");
    if (family_size < 0) throw ConfigError("family size must be nonnegative");
    if (!(split > 0.0 && split < 1.0)) throw ConfigError("split fraction must lie in (0, 1)");
    if (!(threshold >= 0.0)) throw ConfigError("threshold must be nonnegative");
    if (!(min_gap >= 0.0)) throw ConfigError("minimum gap must be nonnegative");
    if (workers < 1) throw ConfigError("worker count must be at least 1");
    loop_config().validate();
}

LoopConfig ExperimentConfig::loop_config() const {
    LoopConfig loop;
    loop.max_time = loop_time_limit;
    loop.sep_time_limit = sep_time_limit;
    loop.max_rounds = max_rounds;
    loop.separation = separation;
    return loop;
}

std::string ExperimentConfig::path(const std::string& file) const {
    return (std::filesystem::path(out_dir) / file).string();
}

const SideSummary* CompareSummary::find(const std::string& side) const {
    for (const auto& s : sides)
        if (s.side == side) return &s;
    return nullptr;
}

GenerateSummary cmd_generate(const ExperimentConfig& config) {
    config.validate();
    if (config.base_path.empty()) throw ConfigError("--base is required");
    const MipInstance base = to_standard_form(read_mps(config.base_path));
    std::filesystem::create_directories(config.out_dir);

    PerturbationConfig perturbation;
    perturbation.seed = config.seed;
    perturbation.count = std::max<Index>(1, config.family_size);
    InstanceFamily family;
    family.base = base;
    family.config = perturbation;
    if (config.family_size > 0) family = generate_family(base, perturbation, true, config.workers);

    const auto count = static_cast<Index>(family.variations.size());
    std::vector<VariationRun> runs(static_cast<std::size_t>(count));
    parallel_for(count, config.workers, [&](Index k) {
        auto& run = runs[static_cast<std::size_t>(k)];
        try {
            const MipInstance instance = family.instance(k);
            LoopConfig loop = config.loop_config();
            loop.observer = [&](const RoundContext& ctx) {
                const auto features = compute_all_features(ctx.instance, ctx.point, ctx.lp);
                const auto labels = label_round(std::span<const SeparationSolution>(ctx.outcome.pool),
                                                ctx.instance.num_rows());
                for (std::size_t r = 0; r < features.size(); ++r) {
                    DatasetRow row{features[r], labels[r]};
                    row.features.round = ctx.round;
                    row.features.instance_id = instance.name;
                    run.rows.push_back(std::move(row));
                }
            };
            run.result = run_cutting_loop(instance, loop);
        } catch (const Error& e) {
            run.result.reset();
            run.rows.clear();
            run.error = e.what();
        }
    });

    GenerateSummary summary;
    CsvTable traces;
    traces.meta = meta(kTraceSchema, config.seed);
    traces.header = {"variation", "status",      "round",       "cuts_added",  "lp_objective", "gap_closed",
                     "lambda_size", "sep_seconds", "sep_status", "termination", "point"};
    CsvTable kept_rows = dataset_table(config.seed);
    CsvTable discarded_rows = dataset_table(config.seed);
    json failed = json::array();
    for (Index k = 0; k < count; ++k) {
        const auto& run = runs[static_cast<std::size_t>(k)];
        if (!run.result) {
            summary.failed.push_back(k);
            failed.push_back({{"variation", k}, {"error", run.error}});
            continue;
        }
        const bool keep = passes_gap_filter(*run.result, config.min_gap);
        (keep ? summary.kept : summary.discarded).push_back(k);
        append_trace_rows(traces, k, keep ? "kept" : "discarded", *run.result);
        append_dataset_rows(keep ? kept_rows : discarded_rows, k, run.rows);
    }
    summary.dataset_rows = static_cast<Index>(kept_rows.rows.size());

    json manifest = config.family_size > 0 ? json::parse(family_manifest(family, config.base_path))
                                           : json{{"format", "mirlab.family.v1"},
                                                  {"base", config.base_path},
                                                  {"seed", config.seed},
                                                  {"count", 0},
                                                  {"draws", 0},
                                                  {"positive", {{"mean", 0.0}, {"std", 0.0}}},
                                                  {"negative", {{"mean", 0.0}, {"std", 0.0}}},
                                                  {"variations", json::array()}};
    manifest["kept"] = summary.kept;
    manifest["discarded"] = summary.discarded;
    manifest["failed"] = failed;
    manifest["min_gap"] = config.min_gap;
    manifest["loop"] = {{"sep_time_limit", config.sep_time_limit},
                        {"loop_time_limit", config.loop_time_limit},
                        {"max_rounds", config.max_rounds},
                        {"bits", config.separation.bits}};
    write_text(config.path("manifest.json"), manifest.dump(1) + "\n");
    write_csv_file(config.path("traces.csv"), traces);
    write_csv_file(config.path("dataset.csv"), kept_rows);
    write_csv_file(config.path("dataset_discarded.csv"), discarded_rows);
    return summary;
}

std::vector<std::pair<Index, std::vector<LabeledSample>>> read_dataset(const std::string& path) {
    const CsvTable table = read_csv_file(path);
    expect_schema(table, std::string(kFeatureSchema));
    if (table.header != dataset_header()) throw SchemaMismatch("dataset columns do not match the feature schema");
    std::vector<std::pair<Index, std::vector<LabeledSample>>> groups;
    std::map<Index, std::size_t> where;
    for (const auto& fields : table.rows) {
        LabeledSample sample;
        sample.features.instance_id = fields[0];
        const auto variation = static_cast<Index>(parse_double(fields[1]));
        sample.features.round = static_cast<Index>(parse_double(fields[2]));
        sample.features.row = static_cast<Index>(parse_double(fields[3]));
        for (Index k = 0; k < kFeatureCount; ++k) sample.features.values(k) = parse_double(fields[static_cast<std::size_t>(4 + k)]);
        const std::string& label = fields.back();
        if (label != "0" && label != "1") throw SchemaMismatch("label must be 0 or 1, found '" + label + "'");
        sample.label = label == "1" ? 1 : 0;
        auto it = where.find(variation);
        if (it == where.end()) {
            it = where.emplace(variation, groups.size()).first;
            groups.emplace_back(variation, std::vector<LabeledSample>{});
        }
        groups[it->second].second.push_back(std::move(sample));
    }
    return groups;
}

std::pair<std::vector<Index>, std::vector<Index>> split_variations(std::vector<Index> ids, double fraction,
                                                                   std::uint64_t seed) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() < 2) throw ConfigError("need at least two variations to split into train and test");
    const auto n = static_cast<Index>(ids.size());
    const Index n_train = std::clamp<Index>(std::llround(fraction * static_cast<double>(n)), 1, n - 1);
    std::mt19937_64 rng(seed);
    // Fisher-Yates with an explicit draw so the order does not depend on the library's shuffle
    for (Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    std::vector<Index> train(ids.begin(), ids.begin() + n_train);
    std::vector<Index> test(ids.begin() + n_train, ids.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {train, test};
}

TrainSummary cmd_train(const ExperimentConfig& config) {
    config.validate();
    const auto groups = read_dataset(config.path("dataset.csv"));
    std::vector<Index> ids;
    for (const auto& g : groups) ids.push_back(g.first);
    auto [train_ids, test_ids] = split_variations(ids, config.split, config.seed);

    TrainSummary summary;
    summary.train_variations = train_ids;
    summary.test_variations = test_ids;
    const std::set<Index> train_set(train_ids.begin(), train_ids.end());
    std::vector<LabeledSample> train, test;
    for (const auto& [id, samples] : groups)
        (train_set.count(id) ? train : test).insert((train_set.count(id) ? train : test).end(), samples.begin(),
                                                     samples.end());
    const TrainResult fit = train_gbt(std::span<const LabeledSample>(train), config.gbt);
    summary.single_class = fit.single_class;
    summary.train = evaluate(fit.model, train, config.threshold);
    summary.test = evaluate(fit.model, test, config.threshold);

    json model = json::parse(fit.model.to_json());
    model["train_variations"] = train_ids;
    model["test_variations"] = test_ids;
    model["single_class"] = fit.single_class;
    model["seed"] = config.seed;
    model["threshold"] = config.threshold;
    write_text(config.path("model.json"), model.dump(1) + "\n");

    CsvTable eval;
    eval.meta = meta(kEvalSchema, config.seed);
    eval.header = {"side", "samples", "accuracy", "precision", "recall", "tp", "fp", "fn", "tn", "single_class"};
    for (const auto& [side, report] : {std::pair{"train", summary.train}, std::pair{"test", summary.test}})
        eval.rows.push_back({side, std::to_string(report.total()), format_double(report.accuracy),
                             format_optional(report.precision, "Undefined"), format_optional(report.recall, "Undefined"),
                             std::to_string(report.tp), std::to_string(report.fp), std::to_string(report.fn),
                             std::to_string(report.tn), fit.single_class ? "1" : "0"});
    write_csv_file(config.path("eval.csv"), eval);
    return summary;
}

CompareSummary cmd_compare(const ExperimentConfig& config) {
    config.validate();
    const json manifest = parse_json(config.path("manifest.json"));
    const FamilyManifest family_file = read_family_manifest(manifest.dump());
    const json model_doc = parse_json(config.path("model.json"));
    const GbtModel model = GbtModel::from_json(model_doc.dump());
    std::set<Index> train, test, failed;
    try {
        for (Index k : index_list(model_doc.at("train_variations"))) train.insert(k);
        for (Index k : index_list(model_doc.at("test_variations"))) test.insert(k);
        for (const auto& f : manifest.at("failed")) failed.insert(f.at("variation").get<Index>());
    } catch (const json::exception& e) {
        throw SchemaMismatch(std::string("manifest or model file is missing split data: ") + e.what());
    }

    const std::string base_path = config.base_path.empty() ? family_file.base_path : config.base_path;
    InstanceFamily family;
    family.base = to_standard_form(read_mps(base_path));
    family.config = family_file.config;
    family.variations = family_file.variations;
    for (const auto& v : family.variations)
        if (v.cost.size() != family.base.num_cols()) throw SchemaMismatch("variation objective does not fit the base");

    const auto count = static_cast<Index>(family.variations.size());
    struct Pair {
        std::optional<LoopResult> full, reduced;
        // round-1 support of the optimal full incumbent is inside the reduced row set
        std::optional<bool> support_covered;
        std::string error;
    };
    std::vector<Pair> pairs(static_cast<std::size_t>(count));
    parallel_for(count, config.workers, [&](Index k) {
        if (failed.count(k)) return;
        auto& pair = pairs[static_cast<std::size_t>(k)];
        try {
            const MipInstance instance = family.instance(k);
            LoopConfig loop = config.loop_config();
            std::optional<std::vector<Index>> support;
            loop.observer = [&](const RoundContext& ctx) {
                if (ctx.round != 1 || ctx.outcome.status != MipStatus::Optimal || ctx.outcome.pool.empty()) return;
                const Vector& lambda = ctx.outcome.pool.back().lambda;
                support.emplace();
                for (Index j = 0; j < lambda.size(); ++j)
                    if (std::abs(lambda(j)) > 1e-6) support->push_back(j);
            };
            pair.full = run_cutting_loop(instance, loop);
            loop.z_integer = pair.full->z_integer;
            loop.selector = [&](std::span<const FeatureVector> features) {
                return predict_useful(model, features, config.threshold);
            };
            loop.observer = [&](const RoundContext& ctx) {
                if (ctx.round != 1 || !support) return;
                pair.support_covered = std::includes(ctx.allowed_rows.begin(), ctx.allowed_rows.end(),
                                                     support->begin(), support->end());
            };
            pair.reduced = run_cutting_loop(instance, loop);
        } catch (const Error& e) {
            pair.full.reset();
            pair.reduced.reset();
            pair.error = e.what();
        }
    });

    CsvTable table;
    table.meta = meta(kCompareSchema, config.seed);
    table.header = {"variation",  "side",        "kind",        "round",       "gap_closed",
                    "cuts_added", "lambda_size", "sep_seconds", "termination", "lp_objective",
                    "support_covered"};
    CompareSummary summary;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> finals;
    for (Index k = 0; k < count; ++k) {
        const auto& pair = pairs[static_cast<std::size_t>(k)];
        if (!pair.full) {
            ++summary.failed;
            continue;
        }
        const std::string side = side_of(k, train, test);
        for (const auto& [kind, run] : {std::pair{"full", &*pair.full}, std::pair{"reduced", &*pair.reduced}})
            for (const auto& t : run->rounds) {
                std::string covered = "-";
                if (std::string_view(kind) == "reduced" && t.round == 1 && pair.support_covered)
                    covered = *pair.support_covered ? "1" : "0";
                table.rows.push_back({std::to_string(k), side, kind, std::to_string(t.round),
                                      format_optional(t.gap_closed), std::to_string(t.cuts_added),
                                      std::to_string(t.allowed_rows.size()), format_double(t.sep_seconds),
                                      to_string(t.termination), format_double(t.lp_objective), covered});
            }
        if (pair.full->final_gap() && pair.reduced->final_gap()) {
            finals[side].first.push_back(*pair.full->final_gap());
            finals[side].second.push_back(*pair.reduced->final_gap());
        }
    }
    write_csv_file(config.path("compare.csv"), table);
    for (const char* side : {"train", "test", "discarded"}) {
        const auto it = finals.find(side);
        if (it == finals.end()) continue;
        summary.sides.push_back(SideSummary{side, static_cast<Index>(it->second.first.size()),
                                            mean_of(it->second.first), mean_of(it->second.second)});
    }
    return summary;
}

void cmd_report(const ExperimentConfig& config) {
    config.validate();
    const CsvTable compare = read_csv_file(config.path("compare.csv"));
    expect_schema(compare, kCompareSchema);
    struct Cell {
        Index survivors = 0;
        std::vector<double> gaps;
    };
    // (kind, side, round) with round 0 standing for the final round of each run
    std::map<std::tuple<std::string, std::string, Index>, Cell> cells;
    std::map<std::tuple<std::string, std::string, std::string>, std::pair<Index, std::optional<double>>> last;
    const auto c_var = compare.column("variation");
    const auto c_side = compare.column("side");
    const auto c_kind = compare.column("kind");
    const auto c_round = compare.column("round");
    const auto c_gap = compare.column("gap_closed");
    for (const auto& row : compare.rows) {
        const auto round = static_cast<Index>(parse_double(row[c_round]));
        const auto gap = parse_optional(row[c_gap]);
        auto& cell = cells[{row[c_kind], row[c_side], round}];
        ++cell.survivors;
        if (gap) cell.gaps.push_back(*gap);
        auto& end = last[{row[c_kind], row[c_side], row[c_var]}];
        if (round >= end.first) end = {round, gap};
    }
    for (const auto& [key, end] : last) {
        auto& cell = cells[{std::get<0>(key), std::get<1>(key), 0}];
        ++cell.survivors;
        if (end.second) cell.gaps.push_back(*end.second);
    }

    CsvTable report;
    report.meta = meta(kReportSchema, config.seed);
    report.header = {"kind", "side", "round", "survivors", "measured", "mean_gap", "std_gap"};
    for (const auto& [key, cell] : cells) {
        const double mean = mean_of(cell.gaps);
        double var = 0.0;
        for (double g : cell.gaps) var += (g - mean) * (g - mean);
        const double sd = cell.gaps.empty() ? 0.0 : std::sqrt(var / static_cast<double>(cell.gaps.size()));
        const Index round = std::get<2>(key);
        report.rows.push_back({std::get<0>(key), std::get<1>(key), round == 0 ? "final" : std::to_string(round),
                               std::to_string(cell.survivors), std::to_string(cell.gaps.size()),
                               cell.gaps.empty() ? "Undefined" : format_double(mean),
                               cell.gaps.empty() ? "Undefined" : format_double(sd)});
    }
    write_csv_file(config.path("report.csv"), report);
}

} // namespace mirlab
