#include "spinstat/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/binomial.hpp>

namespace spinstat {

namespace {

__extension__ using int128 = __int128;
__extension__ using uint128 = unsigned __int128;

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Integer accumulator; merging is associative, so the result does not depend
/// on how trials are partitioned across threads.
struct Accumulator {
    std::uint64_t trials = 0;
    int128 sum = 0;
    uint128 sum_sq = 0;
    std::int64_t min = std::numeric_limits<std::int64_t>::max();
    std::int64_t max = std::numeric_limits<std::int64_t>::min();

    void add(std::int64_t total) {
        ++trials;
        sum += total;
        sum_sq += static_cast<uint128>(static_cast<int128>(total) * total);
        min = std::min(min, total);
        max = std::max(max, total);
    }

    void merge(const Accumulator &o) {
        trials += o.trials;
        sum += o.sum;
        sum_sq += o.sum_sq;
        min = std::min(min, o.min);
        max = std::max(max, o.max);
    }

    TrialStatistics finish() const {
        auto t = static_cast<int128>(trials);
        int128 numer = t * static_cast<int128>(sum_sq) - sum * sum;
        long double var = static_cast<long double>(numer) / static_cast<long double>(t * (t - 1));
        long double mean = static_cast<long double>(sum) / static_cast<long double>(t);
        return {trials, static_cast<double>(mean), static_cast<double>(var), min, max};
    }
};

std::vector<double> plus_probabilities(const EnsembleSpec &e, const Axis &axis) {
    std::vector<double> p;
    p.reserve(e.components().size());
    for (const auto &c : e.components()) {
        p.push_back(born_probability(c.state, axis, SpinOutcome::Plus));
    }
    return p;
}

TrialRecord measure_trial(const EnsembleSpec &e, const std::vector<double> &p_plus, const SeededSampler &sampler,
                          std::uint64_t trial) {
    std::uint64_t key = sampler.stream_key(trial);
    std::uint64_t particle = 0;
    std::uint64_t n_plus = 0;
    for (std::size_t i = 0; i < e.components().size(); ++i) {
        double p = p_plus[i];
        std::uint64_t end = particle + e.components()[i].count;
        for (; particle < end; ++particle) {
            if (SeededSampler::to_unit(SeededSampler::bits_at(key, particle)) < p) {
                ++n_plus;
            }
        }
    }
    std::uint64_t n_minus = e.total() - n_plus;
    return {trial, static_cast<std::int64_t>(n_plus) - static_cast<std::int64_t>(n_minus), n_plus, n_minus};
}

std::vector<double> binomial_pmf(std::uint64_t count, double p) {
    std::vector<double> pmf(count + 1, 0.0);
    if (p <= 0.0) {
        pmf.front() = 1.0;
    } else if (p >= 1.0) {
        pmf.back() = 1.0;
    } else {
        boost::math::binomial_distribution<double> dist(static_cast<double>(count), p);
        for (std::uint64_t k = 0; k <= count; ++k) {
            pmf[k] = boost::math::pdf(dist, static_cast<double>(k));
        }
    }
    return pmf;
}

std::vector<double> convolve(const std::vector<double> &a, const std::vector<double> &b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

}  // namespace

std::uint64_t SeededSampler::stream_key(std::uint64_t trial) const {
    return mix64(mix64(seed_ + kGolden) + (trial + 1) * kGolden);
}

std::uint64_t SeededSampler::bits_at(std::uint64_t key, std::uint64_t particle) {
    return mix64(key + (particle + 1) * kGolden);
}

std::uint64_t SeededSampler::bits(std::uint64_t trial, std::uint64_t particle) const {
    return bits_at(stream_key(trial), particle);
}

double SeededSampler::uniform(std::uint64_t trial, std::uint64_t particle) const {
    return to_unit(bits(trial, particle));
}

double TotalSpinDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        m += probabilities[i] * static_cast<double>(support[i]);
    }
    return m;
}

double TotalSpinDistribution::variance() const {
    double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        double d = static_cast<double>(support[i]) - m;
        v += probabilities[i] * d * d;
    }
    return v;
}

double TotalSpinDistribution::count_variance() const { return variance() / 4.0; }

double PredictionReport::sigma() const { return std::sqrt(std::max(0.0, variance)); }

SpinOutcome measure_particle(const Spinor &state, const Axis &axis, double draw) {
    return draw < born_probability(state, axis, SpinOutcome::Plus) ? SpinOutcome::Plus : SpinOutcome::Minus;
}

TrialRecord measure_ensemble_total(const EnsembleSpec &e, const Axis &axis, const SeededSampler &sampler,
                                   std::uint64_t trial_index) {
    return measure_trial(e, plus_probabilities(e, axis), sampler, trial_index);
}

TrialRun run_trials(const EnsembleSpec &e, const Axis &axis, std::uint64_t trials, std::uint64_t seed,
                    RunOptions options) {
    if (trials < 2) {
        throw std::invalid_argument("run_trials: need at least 2 trials for an unbiased variance");
    }
    const auto p_plus = plus_probabilities(e, axis);
    const SeededSampler sampler(seed);

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

    TrialRun run{};
    if (options.keep_records) {
        run.records.resize(trials);
    }
    std::vector<Accumulator> partial(threads);

    auto work = [&](unsigned w) {
        std::uint64_t begin = trials * w / threads;
        std::uint64_t end = trials * (w + 1) / threads;
        for (std::uint64_t t = begin; t < end; ++t) {
            TrialRecord r = measure_trial(e, p_plus, sampler, t);
            partial[w].add(r.total_half_quanta);
            if (options.keep_records) {
                run.records[t] = r;
            }
        }
    };

    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
    }

    Accumulator total;
    for (const auto &a : partial) {
        total.merge(a);
    }
    run.stats = total.finish();
    return run;
}

TotalSpinDistribution exact_total_distribution(const EnsembleSpec &e, const Axis &axis) {
    if (e.total() > kMaxExactParticles) {
        throw std::length_error("exact_total_distribution: N = " + std::to_string(e.total()) +
                                " exceeds the dense convolution limit");
    }
    // Identical particles within a component convolve to a binomial law, so
    // the component-level convolution equals the particle-level one.
    std::vector<double> pmf{1.0};
    for (const auto &c : e.components()) {
        if (c.count == 0) continue;
        pmf = convolve(pmf, binomial_pmf(c.count, born_probability(c.state, axis, SpinOutcome::Plus)));
    }

    TotalSpinDistribution d{e.total(), {}, {}};
    const auto n = static_cast<std::int64_t>(e.total());
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        if (pmf[k] > 0.0) {
            d.support.push_back(2 * static_cast<std::int64_t>(k) - n);
            d.probabilities.push_back(pmf[k]);
        }
    }
    return d;
}

PredictionReport preparation_aware_prediction(const EnsembleSpec &e, const Axis &axis) {
    double mean = 0.0;
    double var = 0.0;
    for (const auto &c : e.components()) {
        auto m = state_mean_and_variance(c.state, axis);
        mean += static_cast<double>(c.count) * m.mean;
        var += static_cast<double>(c.count) * m.variance;
    }
    return {"preparation_aware", mean, var};
}

void write_totals_csv(std::ostream &out, std::span<const TrialRecord> records) {
    out << "trial,total_half_quanta,n_plus,n_minus\n";
    for (const auto &r : records) {
        out << r.trial_index << ',' << r.total_half_quanta << ',' << r.n_plus << ',' << r.n_minus << '\n';
    }
}

}  // namespace spinstat
