// mirlab: generate instance families, train the row classifier, and compare
// full against reduced separation.

#include "mirlab/errors.hpp"
#include "mirlab/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

enum ExitCode { kOk = 0, kParseFailure = 2, kConfigFailure = 3, kRuntimeFailure = 4 };

void add_common(CLI::App* cmd, mirlab::ExperimentConfig& config) {
    cmd->add_option("--out", config.out_dir, "Output directory")->envname("MIRLAB_OUT");
    cmd->add_option("--seed", config.seed, "Root seed")->envname("MIRLAB_SEED");
    cmd->add_option("--workers", config.workers, "Worker threads")->envname("MIRLAB_WORKERS");
}

void add_loop(CLI::App* cmd, mirlab::ExperimentConfig& config) {
    cmd->add_option("--sep-time-limit", config.sep_time_limit, "Seconds per separation solve")
        ->envname("MIRLAB_SEP_TIME_LIMIT");
    cmd->add_option("--loop-time-limit", config.loop_time_limit, "Seconds per cutting loop")
        ->envname("MIRLAB_LOOP_TIME_LIMIT");
    cmd->add_option("--max-rounds", config.max_rounds, "Rounds per cutting loop")->envname("MIRLAB_MAX_ROUNDS");
    cmd->add_option("--bits", config.separation.bits, "Expansion bits of the violation term")
        ->envname("MIRLAB_BITS");
}

void print_report(const char* side, const mirlab::EvalReport& r) {
    auto show = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("Undefined"); };
    std::cout << side << ": samples=" << r.total() << " accuracy=" << r.accuracy << " precision=" << show(r.precision)
              << " recall=" << show(r.recall) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MIR cut separation laboratory"};
    app.require_subcommand(1);
    mirlab::ExperimentConfig config;

    auto* generate = app.add_subcommand("generate", "Build a family, run the full separator, write datasets");
    generate->add_option("--base", config.base_path, "Base instance (MPS)")->required()->envname("MIRLAB_BASE");
    generate->add_option("--family-size", config.family_size, "Number of variations")->envname("MIRLAB_FAMILY_SIZE");
    generate->add_option("--min-gap", config.min_gap, "Keep variations closing at least this percentage")
        ->envname("MIRLAB_MIN_GAP");
    add_common(generate, config);
    add_loop(generate, config);

    auto* train = app.add_subcommand("train", "Train the row classifier on dataset.csv");
    train->add_option("--split", config.split, "Fraction of variations used for training")->envname("MIRLAB_SPLIT");
    train->add_option("--threshold", config.threshold, "Decision threshold")->envname("MIRLAB_THRESHOLD");
    add_common(train, config);

    auto* compare = app.add_subcommand("compare", "Run full and reduced separators on every variation");
    compare->add_option("--base", config.base_path, "Override the base instance path")->envname("MIRLAB_BASE");
    compare->add_option("--threshold", config.threshold, "Decision threshold")->envname("MIRLAB_THRESHOLD");
    add_common(compare, config);
    add_loop(compare, config);

    auto* report = app.add_subcommand("report", "Aggregate compare.csv into per-round statistics");
    add_common(report, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigFailure;
    }

    try {
        if (*generate) {
            const auto s = mirlab::cmd_generate(config);
            std::cout << "kept=" << s.kept.size() << " discarded=" << s.discarded.size()
                      << " failed=" << s.failed.size() << " dataset_rows=" << s.dataset_rows << "\n";
            for (auto k : s.failed) std::cerr << "variation " << k << " failed (see manifest.json)\n";
        } else if (*train) {
            const auto s = mirlab::cmd_train(config);
            if (s.single_class) std::cerr << "warning: training labels are constant; the model is constant\n";
            print_report("train", s.train);
            print_report("test", s.test);
        } else if (*compare) {
            const auto s = mirlab::cmd_compare(config);
            for (const auto& side : s.sides)
                std::cout << side.side << ": variations=" << side.variations << " full_mean_gap=" << side.full_mean_gap
                          << " reduced_mean_gap=" << side.reduced_mean_gap << "\n";
            if (s.failed) std::cerr << s.failed << " variations failed\n";
        } else if (*report) {
            mirlab::cmd_report(config);
            std::cout << "wrote " << config.path("report.csv") << "\n";
        }
    } catch (const mirlab::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseFailure;
    } catch (const mirlab::UnsupportedFeature& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseFailure;
    } catch (const mirlab::SchemaMismatch& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseFailure;
    } catch (const mirlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
    return kOk;
}
