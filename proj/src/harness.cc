#include "spinstat/harness.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace spinstat {

namespace {

using nlohmann::json;

constexpr double kDensityEqualTol = 1e-12;

std::uint64_t get_uint(const json &j, const char *field) {
    const auto &v = j.at(field);
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
        return v.get<std::uint64_t>();
    }
    throw ConfigError(std::string("field '") + field + "' must be a non-negative integer");
}

json prediction_to_json(const PredictionReport &p) {
    return {{"method", p.method}, {"mean", p.mean}, {"variance", p.variance}, {"sigma", p.sigma()}};
}

PredictionReport prediction_from_json(const json &j) {
    return {j.at("method").get<std::string>(), j.at("mean").get<double>(), j.at("variance").get<double>()};
}

json stats_to_json(const TrialStatistics &s) {
    return {{"trials", s.trials},
            {"sample_mean", s.sample_mean},
            {"sample_variance", s.sample_variance},
            {"min", s.min},
            {"max", s.max}};
}

TrialStatistics stats_from_json(const json &j) {
    return {j.at("trials").get<std::uint64_t>(), j.at("sample_mean").get<double>(),
            j.at("sample_variance").get<double>(), j.at("min").get<std::int64_t>(),
            j.at("max").get<std::int64_t>()};
}

json verdict_to_json(const Verdict &v) {
    json z = v.z_score ? json(*v.z_score) : json(nullptr);
    return {{"matches_empirical", v.matches}, {"exact", v.exact}, {"z_score", z}};
}

Verdict verdict_from_json(const json &j) {
    Verdict v{j.at("matches_empirical").get<bool>(), j.at("exact").get<bool>(), std::nullopt};
    if (!j.at("z_score").is_null()) {
        v.z_score = j.at("z_score").get<double>();
    }
    return v;
}

json fit_to_json(const FixedOperatorFit &f) {
    return {{"samples", f.samples},
            {"rms_residual", f.rms_residual},
            {"max_residual", f.max_residual},
            {"operator", {{"m00", f.op.m00()}, {"m11", f.op.m11()}, {"m01", {f.op.m01().real(), f.op.m01().imag()}}}}};
}

json pseudo_report_to_json(const PseudoOperatorReport &r) {
    const auto &s = r.source_state;
    return {{"source_state", {{s.a0().real(), s.a0().imag()}, {s.a1().real(), s.a1().imag()}}},
            {"operator", {{"m00", r.op.m00()}, {"m11", r.op.m11()}, {"m01", {r.op.m01().real(), r.op.m01().imag()}}}},
            {"annihilates_sx_eigenstates", r.annihilates_sx_eigenstates},
            {"annihilation_residual", r.annihilation_residual},
            {"expectation_on_source", r.expectation_on_source}};
}

std::string ensemble_label(const EnsembleDescriptor &d) {
    if (const auto *p = std::get_if<PresetEnsemble>(&d)) {
        return std::string("preset ") + p->preset;
    }
    return "'" + std::get<ExplicitEnsemble>(d).name + "'";
}

std::string axis_label(const Axis &a) {
    if (auto n = a.name()) {
        return std::string(1, *n);
    }
    return "(theta=" + format_short(a.theta()) + ", phi=" + format_short(a.phi()) + ")";
}

std::string verdict_label(const Verdict &v) {
    std::string s = v.matches ? "matches empirical" : "DIFFERS from empirical";
    if (v.exact) {
        s += " (exact)";
    } else if (v.z_score) {
        s += " (z = " + format_short(*v.z_score) + ")";
    }
    return s;
}

void write_file(const std::string &path, const std::string &contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

void check_writable(const std::string &path) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw IoError("output path '" + path + "' is not writable");
    }
}

}  // namespace

std::string format_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

void validate(const ExperimentConfig &cfg) {
    if (cfg.trials < 2) {
        throw ConfigError("field 'trials' must be at least 2, got " + std::to_string(cfg.trials));
    }
    if (!(cfg.hbar > 0.0) || !std::isfinite(cfg.hbar)) {
        throw ConfigError("field 'hbar' must be a positive number");
    }
    try {
        build_ensemble(cfg.ensemble);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(std::string("field 'ensemble': ") + e.what());
    }
}

ExperimentConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> known{"ensemble", "axis", "trials", "seed", "hbar", "outputs"};
    for (const auto &[key, _] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown field '" + key + "'");
        }
    }
    ExperimentConfig cfg;
    if (!j.contains("ensemble")) {
        throw ConfigError("missing field 'ensemble'");
    }
    try {
        cfg.ensemble = ensemble_from_json(j["ensemble"]);
    } catch (const std::exception &e) {
        throw ConfigError(std::string("field 'ensemble': ") + e.what());
    }
    if (j.contains("axis")) {
        try {
            cfg.axis = axis_from_json(j["axis"]);
        } catch (const std::exception &e) {
            throw ConfigError(std::string("field 'axis': ") + e.what());
        }
    }
    if (j.contains("trials")) cfg.trials = get_uint(j, "trials");
    if (j.contains("seed")) cfg.seed = get_uint(j, "seed");
    if (j.contains("hbar")) {
        if (!j["hbar"].is_number()) {
            throw ConfigError("field 'hbar' must be a positive number");
        }
        cfg.hbar = j["hbar"].get<double>();
    }
    if (j.contains("outputs")) {
        const auto &o = j["outputs"];
        if (!o.is_object()) {
            throw ConfigError("field 'outputs' must be an object with 'report' and/or 'totals'");
        }
        for (const auto &[key, val] : o.items()) {
            if ((key != "report" && key != "totals") || !val.is_string()) {
                throw ConfigError("field 'outputs." + key + "' is not a recognised output path");
            }
        }
        cfg.outputs.report = o.value("report", std::string());
        cfg.outputs.totals = o.value("totals", std::string());
    }
    validate(cfg);
    return cfg;
}

json config_to_json(const ExperimentConfig &cfg) {
    json j = {{"ensemble", ensemble_to_json(cfg.ensemble)},
              {"axis", axis_to_json(cfg.axis)},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"hbar", cfg.hbar}};
    if (!cfg.outputs.report.empty() || !cfg.outputs.totals.empty()) {
        json o = json::object();
        if (!cfg.outputs.report.empty()) o["report"] = cfg.outputs.report;
        if (!cfg.outputs.totals.empty()) o["totals"] = cfg.outputs.totals;
        j["outputs"] = o;
    }
    return j;
}

Verdict judge(const PredictionReport &prediction, const TrialStatistics &empirical) {
    if (prediction.variance == 0.0) {
        return {empirical.sample_variance == 0.0, true, std::nullopt};
    }
    double rse = std::sqrt(2.0 / static_cast<double>(empirical.trials - 1));
    double z = (empirical.sample_variance - prediction.variance) / (prediction.variance * rse);
    return {std::abs(z) <= kVerdictRse, false, z};
}

ComparisonReport run_experiment(const ExperimentConfig &cfg, unsigned threads) {
    validate(cfg);
    check_writable(cfg.outputs.report);
    check_writable(cfg.outputs.totals);

    const EnsembleSpec ens = build_ensemble(cfg.ensemble);
    const HermitianOp obs = spin_operator(cfg.axis);
    const DensityOp rho = density_operator(ens, true);
    const DensityOp rho_n = density_operator(ens, false);

    ComparisonReport r{};
    r.config = cfg;
    r.config.outputs = {};
    r.particles = ens.total();
    r.preparation_aware = preparation_aware_prediction(ens, cfg.axis);
    r.density_normalized = {"density_normalized", expectation_tr(rho, obs), variance_tr(rho, obs)};
    r.density_unnormalized = {"density_unnormalized", expectation_tr(rho_n, obs), variance_tr(rho_n, obs)};

    RunOptions opts;
    opts.threads = threads;
    opts.keep_records = !cfg.outputs.totals.empty();
    TrialRun run = run_trials(ens, cfg.axis, cfg.trials, cfg.seed, opts);
    r.empirical = run.stats;

    r.preparation_aware_verdict = judge(r.preparation_aware, r.empirical);
    r.density_normalized_verdict = judge(r.density_normalized, r.empirical);
    r.density_unnormalized_verdict = judge(r.density_unnormalized, r.empirical);

    r.density = density_matrix(rho, {Spinor::up(), Spinor::down()});
    r.maximally_mixed = rho.op().max_abs_diff(HermitianOp::identity() * 0.5) <= kDensityEqualTol;
    if (ens.total() % 2 == 0) {
        r.density_a_equals_b = density_equal(density_operator(make_ensemble_A(ens.total()), true),
                                             density_operator(make_ensemble_B(ens.total()), true), kDensityEqualTol);
    }

    if (!cfg.outputs.totals.empty()) {
        std::ostringstream csv;
        write_totals_csv(csv, run.records);
        write_file(cfg.outputs.totals, csv.str());
    }
    if (!cfg.outputs.report.empty()) {
        write_file(cfg.outputs.report, render_report(r, HbarScale(cfg.hbar)).json.dump(2) + "\n");
    }
    return r;
}

RenderedReport render_report(const ComparisonReport &report, const HbarScale &scale) {
    json density = {{"matrix", density_matrix_to_json(report.density)},
                    {"maximally_mixed", report.maximally_mixed},
                    {"a_equals_b", report.density_a_equals_b ? json(*report.density_a_equals_b) : json(nullptr)}};
    json j = {{"config", config_to_json(report.config)},
              {"particles", report.particles},
              {"predictions",
               {{"preparation_aware", prediction_to_json(report.preparation_aware)},
                {"density_normalized", prediction_to_json(report.density_normalized)},
                {"density_unnormalized", prediction_to_json(report.density_unnormalized)}}},
              {"empirical", stats_to_json(report.empirical)},
              {"verdicts",
               {{"preparation_aware", verdict_to_json(report.preparation_aware_verdict)},
                {"density_normalized", verdict_to_json(report.density_normalized_verdict)},
                {"density_unnormalized", verdict_to_json(report.density_unnormalized_verdict)}}},
              {"density", density},
              {"units", {{"hbar", scale.hbar()}, {"values", "half_quanta"}}}};

    auto line = [&](double mean, double var) {
        return "S = " + format_short(scale.mean(mean)) + " ± " + format_short(std::sqrt(scale.variance(std::max(0.0, var))));
    };

    std::ostringstream t;
    t << "ensemble " << ensemble_label(report.config.ensemble) << ", N = " << report.particles << ", axis "
      << axis_label(report.config.axis) << ", " << report.empirical.trials << " trials, seed " << report.config.seed
      << "\n";
    if (report.density_a_equals_b.value_or(false)) {
        t << "density matrices equal: rho_A == rho_B == I/2 (N = " << report.particles << ")\n";
    }
    if (report.maximally_mixed) {
        t << "this ensemble's density matrix is I/2 (maximally mixed)\n";
    }
    t << "units: hbar = " << scale.hbar() << "\n\n";

    auto row = [&](const char *name, const PredictionReport &p, const Verdict &v) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "  %-22s %-26s %s\n", name, line(p.mean, p.variance).c_str(),
                      verdict_label(v).c_str());
        t << buf;
    };
    row("preparation_aware", report.preparation_aware, report.preparation_aware_verdict);
    row("density_normalized", report.density_normalized, report.density_normalized_verdict);
    row("density_unnormalized", report.density_unnormalized, report.density_unnormalized_verdict);
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-22s %-26s min %lld, max %lld\n", "empirical",
                  line(report.empirical.sample_mean, report.empirical.sample_variance).c_str(),
                  static_cast<long long>(report.empirical.min), static_cast<long long>(report.empirical.max));
    t << buf;

    return {t.str(), j};
}

ComparisonReport report_from_json(const json &j) {
    ComparisonReport r{};
    r.config = config_from_json(j.at("config"));
    r.particles = j.at("particles").get<std::uint64_t>();
    const auto &p = j.at("predictions");
    r.preparation_aware = prediction_from_json(p.at("preparation_aware"));
    r.density_normalized = prediction_from_json(p.at("density_normalized"));
    r.density_unnormalized = prediction_from_json(p.at("density_unnormalized"));
    r.empirical = stats_from_json(j.at("empirical"));
    const auto &v = j.at("verdicts");
    r.preparation_aware_verdict = verdict_from_json(v.at("preparation_aware"));
    r.density_normalized_verdict = verdict_from_json(v.at("density_normalized"));
    r.density_unnormalized_verdict = verdict_from_json(v.at("density_unnormalized"));
    const auto &d = j.at("density");
    r.density = density_matrix_from_json(d.at("matrix"));
    r.maximally_mixed = d.at("maximally_mixed").get<bool>();
    if (!d.at("a_equals_b").is_null()) {
        r.density_a_equals_b = d.at("a_equals_b").get<bool>();
    }
    return r;
}

ParadoxDemo demo_paradox(std::uint64_t samples, std::uint64_t seed) {
    ParadoxDemo demo{seed, null_operator_contradiction(), {}};
    for (std::uint64_t n = 100; n < samples; n *= 10) {
        demo.residual_table.push_back(fixed_operator_infeasibility(n, seed));
    }
    demo.residual_table.push_back(fixed_operator_infeasibility(samples, seed));
    return demo;
}

RenderedReport render_paradox(const ParadoxDemo &demo) {
    const auto &c = demo.contradiction;
    json table = json::array();
    for (const auto &f : demo.residual_table) {
        table.push_back(fit_to_json(f));
    }
    json j = {{"seed", demo.seed},
              {"contradiction",
               {{"sx_plus", pseudo_report_to_json(c.sx_plus)},
                {"sx_minus", pseudo_report_to_json(c.sx_minus)},
                {"sz_plus", pseudo_report_to_json(c.sz_plus)},
                {"operator_difference", c.operator_difference},
                {"holds", c.holds}}},
              {"residual_table", table},
              {"analytic", {{"rms_residual", kAnalyticRmsResidual}, {"max_residual", kAnalyticMaxResidual}}},
              {"units", {{"values", "half_quanta"}}}};

    std::ostringstream t;
    char buf[256];
    t << "variance pseudo-operator O_beta = (sigma_x - <sigma_x>_beta)^2\n";
    std::snprintf(buf, sizeof buf, "  O_{S_x,+1} |S_x,+1>   residual %.3g\n", c.sx_plus.annihilation_residual);
    t << buf;
    std::snprintf(buf, sizeof buf, "  O_{S_x,-1} |S_x,-1>   residual %.3g\n", c.sx_minus.annihilation_residual);
    t << buf;
    std::snprintf(buf, sizeof buf, "  <S_z,+1|O_{S_z,+1}|S_z,+1> = %.17g (hbar^2/4 units)\n",
                  c.sz_plus.expectation_on_source);
    t << buf;
    std::snprintf(buf, sizeof buf, "  max |O_{S_x,+1} - O_{S_z,+1}| = %.17g\n", c.operator_difference);
    t << buf;
    t << "  contradiction " << (c.holds ? "holds" : "NOT reproduced") << "\n\n";
    t << "best single operator fit to 1 - <sigma_x>^2 over the Bloch sphere\n";
    std::snprintf(buf, sizeof buf, "  %10s  %12s  %12s\n", "samples", "rms", "max");
    t << buf;
    for (const auto &f : demo.residual_table) {
        std::snprintf(buf, sizeof buf, "  %10llu  %12.6f  %12.6f\n", static_cast<unsigned long long>(f.samples),
                      f.rms_residual, f.max_residual);
        t << buf;
    }
    std::snprintf(buf, sizeof buf, "  %10s  %12.6f  %12.6f\n", "analytic", kAnalyticRmsResidual, kAnalyticMaxResidual);
    t << buf;
    return {t.str(), j};
}

}  // namespace spinstat
