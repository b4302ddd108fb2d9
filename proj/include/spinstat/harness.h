#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spinstat/density.h"
#include "spinstat/ensemble.h"
#include "spinstat/montecarlo.h"
#include "spinstat/paradox.h"
#include "spinstat/spin.h"

namespace spinstat {

/// Invalid experiment configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An output file could not be written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OutputPaths {
    std::string report;  // empty: not written
    std::string totals;  // empty: not written
    bool operator==(const OutputPaths &) const = default;
};

struct ExperimentConfig {
    EnsembleDescriptor ensemble;
    Axis axis = Axis::X();
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    double hbar = 1.0;
    OutputPaths outputs;
    bool operator==(const ExperimentConfig &) const = default;
};

/// Throws ConfigError.
void validate(const ExperimentConfig &cfg);
ExperimentConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

/// Relative standard errors allowed between predicted and sampled variance.
inline constexpr double kVerdictRse = 5.0;

struct Verdict {
    bool matches;
    /// The prediction was exactly zero and was held to exact equality.
    bool exact;
    /// (s^2 - V) / (V * rse); absent for exact comparisons.
    std::optional<double> z_score;
    bool operator==(const Verdict &) const = default;
};

/// Exact-zero predictions match only an exactly-zero sample variance; otherwise
/// the sample variance must lie within kVerdictRse relative standard errors,
/// rse = sqrt(2 / (trials - 1)).
Verdict judge(const PredictionReport &prediction, const TrialStatistics &empirical);

struct ComparisonReport {
    ExperimentConfig config;
    std::uint64_t particles;
    PredictionReport preparation_aware;
    PredictionReport density_normalized;
    PredictionReport density_unnormalized;
    TrialStatistics empirical;
    Verdict preparation_aware_verdict;
    Verdict density_normalized_verdict;
    Verdict density_unnormalized_verdict;
    /// Normalized density matrix of the ensemble in the z basis.
    DensityMatrix density;
    /// rho == I/2 within 1e-12.
    bool maximally_mixed;
    /// density_equal(rho_A(N), rho_B(N), 1e-12); absent for odd N.
    std::optional<bool> density_a_equals_b;
    bool operator==(const ComparisonReport &) const = default;
};

/// Computes the three predictions, samples the ensemble, and writes the JSON
/// report and totals CSV to the configured paths. `threads` does not affect
/// the result.
ComparisonReport run_experiment(const ExperimentConfig &cfg, unsigned threads = 0);

struct RenderedReport {
    std::string text;
    nlohmann::json json;
};

/// Text is in units of hbar ("mean ± sigma"); JSON keeps half-quantum values
/// and records the scale.
RenderedReport render_report(const ComparisonReport &report, const HbarScale &scale);
ComparisonReport report_from_json(const nlohmann::json &j);

struct ParadoxDemo {
    std::uint64_t seed;
    NullOperatorContradiction contradiction;
    /// Fits at 100, 1000, ... samples up to the requested count.
    std::vector<FixedOperatorFit> residual_table;
};

ParadoxDemo demo_paradox(std::uint64_t samples, std::uint64_t seed);
RenderedReport render_paradox(const ParadoxDemo &demo);

/// Formats with at most two decimals and no trailing zeros ("15.81", "0.5", "0").
std::string format_short(double v);

}  // namespace spinstat
