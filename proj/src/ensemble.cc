#include "spinstat/ensemble.h"

#include <stdexcept>

namespace spinstat {

namespace {

void require_even(std::uint64_t n, const char *what) {
    if (n == 0) {
        throw std::invalid_argument(std::string(what) + ": ensemble must contain at least one particle");
    }
    if (n % 2 != 0) {
        throw std::invalid_argument(std::string(what) + ": n must be even to split into N/2 + N/2, got " +
                                    std::to_string(n));
    }
}

std::uint64_t json_count(const nlohmann::json &j, const char *field) {
    if (!j.contains(field)) {
        throw std::invalid_argument(std::string("ensemble: missing field '") + field + "'");
    }
    const auto &v = j.at(field);
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
        return v.get<std::uint64_t>();
    }
    throw std::invalid_argument(std::string("ensemble: field '") + field +
                                "' must be a non-negative integer");
}

}  // namespace

EnsembleSpec::EnsembleSpec(std::string name, std::vector<Component> components)
    : name_(std::move(name)), components_(std::move(components)) {
    for (const auto &c : components_) {
        total_ += c.count;
    }
    if (total_ == 0) {
        throw std::invalid_argument("EnsembleSpec: total particle count must be at least 1");
    }
}

double EnsembleSpec::weight(std::size_t i) const {
    return static_cast<double>(components_.at(i).count) / static_cast<double>(total_);
}

EnsembleSpec make_pair_ensemble(const Axis &axis, std::uint64_t n) {
    require_even(n, "make_pair_ensemble");
    return EnsembleSpec("pair", {{eigenstate(axis, SpinOutcome::Plus), n / 2},
                                 {eigenstate(axis, SpinOutcome::Minus), n / 2}});
}

EnsembleSpec make_ensemble_A(std::uint64_t n) {
    require_even(n, "make_ensemble_A");
    auto e = make_pair_ensemble(Axis::X(), n);
    return EnsembleSpec("A", e.components());
}

EnsembleSpec make_ensemble_B(std::uint64_t n) {
    require_even(n, "make_ensemble_B");
    auto e = make_pair_ensemble(Axis::Z(), n);
    return EnsembleSpec("B", e.components());
}

bool same_preparation(const EnsembleSpec &a, const EnsembleSpec &b, double tol) {
    if (a.components().size() != b.components().size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.components().size(); ++i) {
        const auto &ca = a.components()[i];
        const auto &cb = b.components()[i];
        if (ca.count != cb.count) return false;
        if (std::abs(ca.state.a0() - cb.state.a0()) > tol) return false;
        if (std::abs(ca.state.a1() - cb.state.a1()) > tol) return false;
    }
    return true;
}

EnsembleSpec build_ensemble(const EnsembleDescriptor &desc) {
    if (const auto *p = std::get_if<PresetEnsemble>(&desc)) {
        if (p->preset == 'A') return make_ensemble_A(p->n);
        if (p->preset == 'B') return make_ensemble_B(p->n);
        throw std::invalid_argument(std::string("unknown preset '") + p->preset + "'");
    }
    const auto &ex = std::get<ExplicitEnsemble>(desc);
    std::vector<Component> comps;
    comps.reserve(ex.components.size());
    for (const auto &c : ex.components) {
        comps.push_back({eigenstate(c.axis, c.sign), c.count});
    }
    return EnsembleSpec(ex.name, std::move(comps));
}

nlohmann::json ensemble_to_json(const EnsembleDescriptor &desc) {
    if (const auto *p = std::get_if<PresetEnsemble>(&desc)) {
        return {{"preset", std::string(1, p->preset)}, {"n", p->n}};
    }
    const auto &ex = std::get<ExplicitEnsemble>(desc);
    nlohmann::json comps = nlohmann::json::array();
    for (const auto &c : ex.components) {
        comps.push_back({{"axis", axis_to_json(c.axis)}, {"sign", half_quanta(c.sign)}, {"count", c.count}});
    }
    return {{"name", ex.name}, {"components", comps}};
}

EnsembleDescriptor ensemble_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw std::invalid_argument("ensemble: expected a JSON object");
    }
    if (j.contains("preset")) {
        if (!j["preset"].is_string()) {
            throw std::invalid_argument("ensemble: field 'preset' must be \"A\" or \"B\"");
        }
        auto preset = j["preset"].get<std::string>();
        if (preset != "A" && preset != "B") {
            throw std::invalid_argument("ensemble: field 'preset' must be \"A\" or \"B\", got \"" + preset + "\"");
        }
        PresetEnsemble p{preset[0], json_count(j, "n")};
        build_ensemble(p);  // validates parity
        return p;
    }
    if (!j.contains("components") || !j["components"].is_array()) {
        throw std::invalid_argument("ensemble: field 'components' must be an array");
    }
    ExplicitEnsemble ex;
    ex.name = j.value("name", std::string("custom"));
    for (const auto &c : j["components"]) {
        if (!c.contains("axis")) {
            throw std::invalid_argument("ensemble: component missing field 'axis'");
        }
        if (!c.contains("sign") || !c["sign"].is_number_integer()) {
            throw std::invalid_argument("ensemble: component field 'sign' must be +1 or -1");
        }
        ex.components.push_back(
            {axis_from_json(c["axis"]), outcome_from_int(c["sign"].get<long long>()), json_count(c, "count")});
    }
    build_ensemble(ex);  // validates N >= 1
    return ex;
}

}  // namespace spinstat
