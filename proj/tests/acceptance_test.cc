// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "spinstat/harness.h"
#include "test_util.h"

using namespace spinstat;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kN = 1000;
constexpr std::uint64_t kTrials = 10000;
constexpr double kRuntimeLimitSeconds = 5.0;
constexpr double kDensityTol = 1e-12;
constexpr double kAgreementTol = 1e-10;
constexpr double kEnumerationTol = 1e-12;
constexpr double kMomentTol = 1e-9;
constexpr double kWitnessTol = 1e-12;
constexpr double kRmsTarget = 0.2981;
constexpr double kRmsRelTol = 0.02;
constexpr double kVarianceRelTol = 0.05;
constexpr double kMeanBound = 1.6;
constexpr double kMaxRse = 5.0;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string &what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string &what) {
        if (ok) {
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string &args) {
    std::string cmd = std::string("\"") + SPINSTAT_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Check ensemble_a_determinism() {
    Check c;
    auto a = make_ensemble_A(kN);
    double worst = 0.0;
    for (std::uint64_t seed : {0ull, 1ull, 42ull, 123456789ull, 0xffffffffffffffffull}) {
        auto t0 = std::chrono::steady_clock::now();
        auto run = run_trials(a, Axis::X(), kTrials, seed, {.threads = 0, .keep_records = true});
        worst = std::max(worst, seconds_since(t0));
        bool all_zero = true;
        for (const auto &r : run.records) all_zero = all_zero && r.total_half_quanta == 0;
        c.require(all_zero, "seed " + std::to_string(seed) + ": non-zero trial total");
        c.require(run.stats.sample_variance == 0.0, "seed " + std::to_string(seed) + ": variance " +
                                                        fmt("%.17g", run.stats.sample_variance));
    }
    c.require(worst < kRuntimeLimitSeconds, "runtime " + fmt("%.3f", worst) + " s");
    c.note("5 seeds, all totals 0, variance 0, slowest run " + fmt("%.3f", worst) + " s");
    return c;
}

Check ensemble_b_variance() {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    auto run = run_trials(make_ensemble_B(kN), Axis::X(), kTrials, 20240601);
    double elapsed = seconds_since(t0);
    double rel = std::abs(run.stats.sample_variance - 1000.0) / 1000.0;
    c.require(rel <= kVarianceRelTol, "variance " + fmt("%.4f", run.stats.sample_variance));
    c.require(std::abs(run.stats.sample_mean) <= kMeanBound, "mean " + fmt("%.4f", run.stats.sample_mean));
    c.require(elapsed < kRuntimeLimitSeconds, "runtime " + fmt("%.3f", elapsed) + " s");
    c.note("variance " + fmt("%.2f", run.stats.sample_variance) + ", mean " + fmt("%.3f", run.stats.sample_mean) +
           ", " + fmt("%.3f", elapsed) + " s");
    return c;
}

Check density_equality() {
    Check c;
    const HermitianOp half = HermitianOp::identity() * 0.5;
    for (std::uint64_t n : {2u, 10u, 1000u}) {
        auto ra = density_operator(make_ensemble_A(n), true);
        auto rb = density_operator(make_ensemble_B(n), true);
        c.require(density_equal(ra, rb, kDensityTol), "rho_A != rho_B at n=" + std::to_string(n));
        c.require(ra.op().max_abs_diff(half) <= kDensityTol, "rho_A != I/2 at n=" + std::to_string(n));
        c.require(rb.op().max_abs_diff(half) <= kDensityTol, "rho_B != I/2 at n=" + std::to_string(n));
    }
    c.note("n in {2, 10, 1000}");
    return c;
}

Check trace_formalism() {
    Check c;
    const HermitianOp sx = spin_operator(Axis::X());
    for (char preset : {'A', 'B'}) {
        auto e = build_ensemble(PresetEnsemble{preset, kN});
        double vn = variance_tr(density_operator(e, true), sx);
        double vu = variance_tr(density_operator(e, false), sx);
        c.require(vn == 1.0, std::string(1, preset) + " normalized " + fmt("%.17g", vn));
        c.require(vu == static_cast<double>(kN), std::string(1, preset) + " unnormalized " + fmt("%.17g", vu));
    }

    ExperimentConfig cfg;
    cfg.trials = kTrials;
    cfg.seed = 11;
    cfg.ensemble = PresetEnsemble{'A', kN};
    auto a = run_experiment(cfg);
    cfg.ensemble = PresetEnsemble{'B', kN};
    auto b = run_experiment(cfg);
    c.require(!a.density_normalized_verdict.matches, "normalized predictor accepted for A");
    c.require(!b.density_normalized_verdict.matches, "normalized predictor accepted for B");
    c.require(!a.density_unnormalized_verdict.matches, "unnormalized predictor accepted for A");
    c.require(b.density_unnormalized_verdict.matches, "unnormalized predictor rejected for B");
    c.note("Var_tr = 1 and N for A and B; verdicts normalized wrong/wrong, unnormalized wrong(A)/right(B)");
    return c;
}

Check agreement_theorem() {
    Check c;
    std::mt19937_64 rng(5);
    int agree = 0;
    const int cases = 1000;
    double worst = 0.0;
    for (int i = 0; i < cases; ++i) {
        int k = std::uniform_int_distribution<int>(1, 4)(rng);
        std::uint64_t budget = std::uniform_int_distribution<std::uint64_t>(1, 100)(rng);
        std::vector<Component> comps;
        std::uint64_t used = 0;
        for (int j = 0; j < k; ++j) {
            std::uint64_t cnt = j + 1 == k ? budget - used
                                           : std::uniform_int_distribution<std::uint64_t>(0, budget - used)(rng);
            used += cnt;
            comps.push_back({spinstat::testing::random_spinor(rng), cnt});
        }
        EnsembleSpec e("random", comps);
        HermitianOp obs = spin_operator(spinstat::testing::random_axis(rng));
        double diff = std::abs(statistical_average_expectation(e, obs, false) -
                               expectation_tr(density_operator(e, true), obs));
        worst = std::max(worst, diff);
        if (diff <= kAgreementTol) ++agree;
    }
    c.require(agree == cases, std::to_string(cases - agree) + " of 1000 disagree");
    c.note("1000/1000 agree, worst " + fmt("%.2e", worst));
    return c;
}

Check oracle_equivalence() {
    Check c;
    std::mt19937_64 rng(6);
    double worst_p = 0.0, worst_m = 0.0;
    for (int i = 0; i < 50; ++i) {
        Axis prep = spinstat::testing::random_axis(rng);
        Axis meas = spinstat::testing::random_axis(rng);
        for (std::uint64_t n = 2; n <= 16; n += 2) {
            auto e = make_pair_ensemble(prep, n);
            auto exact = exact_total_distribution(e, meas);
            auto brute = spinstat::testing::enumerate_totals(e, meas);
            std::map<std::int64_t, double> got;
            for (std::size_t j = 0; j < exact.support.size(); ++j) got[exact.support[j]] = exact.probabilities[j];
            for (const auto &[total, p] : brute) {
                double q = got.count(total) ? got[total] : 0.0;
                worst_p = std::max(worst_p, std::abs(p - q));
                got.erase(total);
            }
            for (const auto &[total, q] : got) worst_p = std::max(worst_p, q);

            double mean = 0.0, second = 0.0;
            for (const auto &[total, p] : brute) {
                mean += p * static_cast<double>(total);
                second += p * static_cast<double>(total) * static_cast<double>(total);
            }
            auto pred = preparation_aware_prediction(e, meas);
            worst_m = std::max({worst_m, std::abs(pred.mean - mean), std::abs(pred.variance - (second - mean * mean))});
        }
    }
    c.require(worst_p <= kEnumerationTol, "probability mismatch " + fmt("%.3e", worst_p));
    c.require(worst_m <= kMomentTol, "moment mismatch " + fmt("%.3e", worst_m));
    for (std::uint64_t n = 2; n <= 16; n += 2) {
        double cv = exact_total_distribution(make_ensemble_B(n), Axis::X()).count_variance();
        c.require(cv == static_cast<double>(n) / 4.0, "B count variance " + fmt("%.17g", cv) + " at n=" + std::to_string(n));
    }
    c.note("50 axes x N in 2..16, worst prob " + fmt("%.1e", worst_p) + ", worst moment " + fmt("%.1e", worst_m) +
           ", B count variance = N/4");
    return c;
}

Check paradox_witnesses() {
    Check c;
    auto plus = pseudo_operator_report(eigenstate(Axis::X(), SpinOutcome::Plus));
    auto minus = pseudo_operator_report(eigenstate(Axis::X(), SpinOutcome::Minus));
    auto z = pseudo_operator_report(eigenstate(Axis::Z(), SpinOutcome::Plus));
    double r_plus = vec_norm(apply(plus.op, eigenstate(Axis::X(), SpinOutcome::Plus)));
    double r_minus = vec_norm(apply(minus.op, eigenstate(Axis::X(), SpinOutcome::Minus)));
    c.require(r_plus < kWitnessTol, "O_{x+}|x+> residual " + fmt("%.3e", r_plus));
    c.require(r_minus < kWitnessTol, "O_{x-}|x-> residual " + fmt("%.3e", r_minus));
    c.require(std::abs(z.expectation_on_source - 1.0) <= kWitnessTol,
              "<z+|O_{z+}|z+> = " + fmt("%.17g", z.expectation_on_source));
    auto fit = fixed_operator_infeasibility(100000, 0);
    c.require(std::abs(fit.rms_residual - kRmsTarget) <= kRmsRelTol * kRmsTarget,
              "rms residual " + fmt("%.6f", fit.rms_residual));
    c.note("residuals " + fmt("%.1e", r_plus) + "/" + fmt("%.1e", r_minus) + ", <O> = " +
           fmt("%.15g", z.expectation_on_source) + ", rms " + fmt("%.6f", fit.rms_residual) + " at 1e5");
    return c;
}

Check generalized_axis_law() {
    Check c;
    const double pi = std::numbers::pi;
    const double rse = std::sqrt(2.0 / static_cast<double>(kTrials - 1));
    std::string summary;
    for (double theta : {0.0, pi / 6, pi / 4, pi / 2}) {
        Axis prep(theta, 0.0);
        double nx = prep.bloch()[0];
        double v = static_cast<double>(kN) * (1.0 - nx * nx);
        auto run = run_trials(make_pair_ensemble(prep, kN), Axis::X(), kTrials, 77);
        double s2 = run.stats.sample_variance;
        std::string tag = "theta=" + fmt("%.4f", theta);
        if (v == 0.0) {
            c.require(s2 == 0.0, tag + ": predicted 0, sampled " + fmt("%.6g", s2));
            summary += tag + " s2=0 ";
        } else {
            double z = (s2 - v) / (v * rse);
            c.require(std::abs(z) <= kMaxRse, tag + ": z " + fmt("%.3f", z));
            summary += tag + " z=" + fmt("%.2f", z) + " ";
        }
    }
    summary.pop_back();
    c.note(summary);
    return c;
}

Check cli_determinism() {
    Check c;
    fs::path dir = fs::temp_directory_path() / "spinstat_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run_pair = [&](const std::string &label, const std::function<std::string(const fs::path &)> &args) {
        std::string out[2];
        std::string csv[2];
        unsigned threads[2] = {1, 8};
        for (int i = 0; i < 2; ++i) {
            fs::path sub = dir / (label + "_t" + std::to_string(threads[i]));
            fs::create_directories(sub);
            int code = run_cli(args(sub) + " --threads " + std::to_string(threads[i]));
            c.require(code == 0, label + ": exit code " + std::to_string(code));
            out[i] = slurp(sub / "report.json");
            csv[i] = slurp(sub / "totals.csv");
        }
        c.require(!out[0].empty() && out[0] == out[1], label + ": report.json differs");
        c.require(!csv[0].empty() && csv[0] == csv[1], label + ": totals.csv differs");
    };

    run_pair("demo", [](const fs::path &sub) {
        return "demo --ensemble B --n 1000 --trials 10000 --seed 31 --out " + (sub / "report.json").string() +
               " --totals " + (sub / "totals.csv").string();
    });
    run_pair("run", [](const fs::path &sub) {
        fs::path cfg = sub / "config.json";
        std::ofstream(cfg) << "{\"ensemble\": {\"components\": ["
                              "{\"axis\": {\"theta\": 0.7, \"phi\": 0.2}, \"sign\": 1, \"count\": 400},"
                              "{\"axis\": \"y\", \"sign\": -1, \"count\": 601}]},"
                              " \"axis\": \"x\", \"trials\": 5000, \"seed\": 9,"
                              " \"outputs\": {\"report\": \"" + (sub / "report.json").string() +
                                  "\", \"totals\": \"" + (sub / "totals.csv").string() + "\"}}";
        return "run --config " + cfg.string();
    });
    fs::remove_all(dir);
    c.note("demo and run subcommands, 1 vs 8 threads, report.json and totals.csv byte-identical");
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        Check (*fn)();
    };
    const Criterion criteria[] = {
        {1, "ensemble A totals are exactly zero", ensemble_a_determinism},
        {2, "ensemble B variance near N", ensemble_b_variance},
        {3, "rho_A == rho_B == I/2", density_equality},
        {4, "trace-formalism values and verdicts", trace_formalism},
        {5, "statistical average equals trace formula", agreement_theorem},
        {6, "exact law matches enumeration", oracle_equivalence},
        {7, "pseudo-operator witnesses and fit residual", paradox_witnesses},
        {8, "pair ensemble variance follows 1 - n_x^2", generalized_axis_law},
        {9, "CLI output independent of thread count", cli_determinism},
    };
    int failed = 0;
    for (const auto &cr : criteria) {
        Check c;
        try {
            c = cr.fn();
        } catch (const std::exception &e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %d: %s - %s (%s)\n", cr.id, c.ok ? "PASS" : "FAIL", cr.name, c.detail.c_str());
        if (!c.ok) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed;
}
