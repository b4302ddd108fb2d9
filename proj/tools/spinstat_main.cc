// spinstat: compare preparation-aware, density-operator and Monte Carlo
// predictions for spin-1/2 ensembles.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "spinstat/harness.h"

namespace {

enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kConfigError = 2,
    kIoError = 3,
};

nlohmann::json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw spinstat::IoError("cannot open config '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw spinstat::ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << contents)) {
        throw spinstat::IoError("cannot write '" + path + "'");
    }
}

void print_report(const spinstat::ComparisonReport &report) {
    std::cout << spinstat::render_report(report, spinstat::HbarScale(report.config.hbar)).text;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"spin-1/2 ensemble statistics"};
    app.require_subcommand(1);

    unsigned threads = 0;

    auto *run = app.add_subcommand("run", "run an experiment described by a JSON config");
    std::string config_path;
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--threads", threads, "worker threads (0 = all cores); does not change results");

    auto *demo = app.add_subcommand("demo", "run a preset experiment");
    std::string preset = "B";
    std::uint64_t n = 1000;
    std::uint64_t trials = 10000;
    std::string axis = "x";
    std::uint64_t seed = 0;
    double hbar = 1.0;
    std::string out_path;
    std::string totals_path;
    demo->add_option("--ensemble", preset, "preset ensemble")->check(CLI::IsMember({"A", "B"}));
    demo->add_option("--n", n, "particles per ensemble (even)");
    demo->add_option("--trials", trials, "repeated ensemble measurements");
    demo->add_option("--axis", axis, "measurement axis")->check(CLI::IsMember({"x", "y", "z"}));
    demo->add_option("--seed", seed, "random seed");
    demo->add_option("--hbar", hbar, "value of hbar for the text report");
    demo->add_option("--out", out_path, "JSON report path");
    demo->add_option("--totals", totals_path, "per-trial totals CSV path");
    demo->add_option("--threads", threads, "worker threads (0 = all cores); does not change results");

    auto *paradox = app.add_subcommand("paradox", "variance pseudo-operator contradiction and fit residuals");
    std::uint64_t samples = 100000;
    std::uint64_t paradox_seed = 0;
    std::string paradox_out;
    paradox->add_option("--samples", samples, "Bloch-sphere samples for the fixed-operator fit");
    paradox->add_option("--seed", paradox_seed, "random seed");
    paradox->add_option("--out", paradox_out, "JSON output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = spinstat::config_from_json(read_json_file(config_path));
            print_report(spinstat::run_experiment(cfg, threads));
        } else if (*demo) {
            spinstat::ExperimentConfig cfg;
            cfg.ensemble = spinstat::PresetEnsemble{preset[0], n};
            cfg.axis = spinstat::axis_from_name(axis);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.hbar = hbar;
            cfg.outputs = {out_path, totals_path};
            spinstat::validate(cfg);
            print_report(spinstat::run_experiment(cfg, threads));
        } else if (*paradox) {
            if (samples < 100) {
                throw spinstat::ConfigError("--samples must be at least 100");
            }
            auto rendered = spinstat::render_paradox(spinstat::demo_paradox(samples, paradox_seed));
            std::cout << rendered.text;
            if (!paradox_out.empty()) {
                write_text(paradox_out, rendered.json.dump(2) + "\n");
            }
        }
    } catch (const spinstat::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const spinstat::IoError &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kOk;
}
