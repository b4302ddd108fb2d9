#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spinstat/ensemble.h"
#include "spinstat/spin.h"

namespace spinstat {

/// Counter-based uniform draws. The value for (seed, trial, particle) depends
/// only on those three integers, never on the order in which draws are made.
///
/// Each trial owns a SplitMix64 stream keyed by (seed, trial); the particle
/// index selects the position in that stream.
class SeededSampler {
public:
    explicit SeededSampler(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t stream_key(std::uint64_t trial) const;
    std::uint64_t bits(std::uint64_t trial, std::uint64_t particle) const;
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform(std::uint64_t trial, std::uint64_t particle) const;

    static std::uint64_t bits_at(std::uint64_t key, std::uint64_t particle);
    static double to_unit(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

private:
    std::uint64_t seed_;
};

struct TrialRecord {
    std::uint64_t trial_index;
    std::int64_t total_half_quanta;
    std::uint64_t n_plus;
    std::uint64_t n_minus;
    bool operator==(const TrialRecord &) const = default;
};

struct TrialStatistics {
    std::uint64_t trials;
    double sample_mean;
    /// Unbiased (divides by trials - 1).
    double sample_variance;
    std::int64_t min;
    std::int64_t max;
    bool operator==(const TrialStatistics &) const = default;
};

struct TrialRun {
    TrialStatistics stats;
    /// Filled in trial order when RunOptions::keep_records is set.
    std::vector<TrialRecord> records;
};

struct RunOptions {
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    bool keep_records = false;
};

/// Exact law of the ensemble total, in half-quantum units.
struct TotalSpinDistribution {
    std::uint64_t particles;
    /// Totals with non-zero probability, ascending; all share the parity of N.
    std::vector<std::int64_t> support;
    std::vector<double> probabilities;

    double mean() const;
    double variance() const;
    /// Variance of n_plus, which is variance() / 4 since total = 2 n_plus - N.
    double count_variance() const;
};

/// mean/variance of the ensemble total in half-quantum units.
struct PredictionReport {
    std::string method;
    double mean;
    double variance;
    double sigma() const;
    bool operator==(const PredictionReport &) const = default;
};

/// Largest N accepted by exact_total_distribution.
inline constexpr std::uint64_t kMaxExactParticles = 1'000'000;

/// +1 if draw < P(+1), else -1.
SpinOutcome measure_particle(const Spinor &state, const Axis &axis, double draw);

/// Measures each of the N particles once. Particles are numbered in component
/// order, and particle k of trial t uses sampler.uniform(t, k).
TrialRecord measure_ensemble_total(const EnsembleSpec &e, const Axis &axis, const SeededSampler &sampler,
                                   std::uint64_t trial_index);

/// Repeats measure_ensemble_total for trials 0..trials-1. Throws
/// std::invalid_argument if trials < 2. Output is identical for any thread count.
TrialRun run_trials(const EnsembleSpec &e, const Axis &axis, std::uint64_t trials, std::uint64_t seed,
                    RunOptions options = {});

/// Convolution of the per-particle two-point laws. Throws std::length_error
/// when N exceeds kMaxExactParticles.
TotalSpinDistribution exact_total_distribution(const EnsembleSpec &e, const Axis &axis);

/// Independent-particle prediction from the preparation record:
/// mean = sum count_i mean_i, variance = sum count_i var_i.
PredictionReport preparation_aware_prediction(const EnsembleSpec &e, const Axis &axis);

/// CSV with header trial,total_half_quanta,n_plus,n_minus.
void write_totals_csv(std::ostream &out, std::span<const TrialRecord> records);

}  // namespace spinstat
