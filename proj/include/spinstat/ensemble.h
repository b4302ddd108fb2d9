#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "spinstat/qcore.h"
#include "spinstat/spin.h"

namespace spinstat {

/// A sub-ensemble of particles that all share one pure state.
struct Component {
    Spinor state;
    std::uint64_t count;
};

/// Preparation record of an ensemble: which pure states, and how many
/// particles in each. Counts are exact; weights are derived on demand.
class EnsembleSpec {
public:
    /// Throws std::invalid_argument if the total particle count is zero.
    EnsembleSpec(std::string name, std::vector<Component> components);

    const std::string &name() const { return name_; }
    const std::vector<Component> &components() const { return components_; }
    std::uint64_t total() const { return total_; }
    /// count_i / N
    double weight(std::size_t i) const;

private:
    std::string name_;
    std::vector<Component> components_;
    std::uint64_t total_ = 0;
};

/// N/2 particles in |S_x,+1> and N/2 in |S_x,-1>. Throws on odd or zero n.
EnsembleSpec make_ensemble_A(std::uint64_t n);
/// N/2 particles in |S_z,+1> and N/2 in |S_z,-1>. Throws on odd or zero n.
EnsembleSpec make_ensemble_B(std::uint64_t n);
/// Equal split between the two eigenstates of spin_operator(axis).
EnsembleSpec make_pair_ensemble(const Axis &axis, std::uint64_t n);

/// Componentwise comparison of preparation records (states within tol, counts exact).
bool same_preparation(const EnsembleSpec &a, const EnsembleSpec &b, double tol = kExactTol);

/// The on-disk description of an ensemble. Either a preset or an explicit
/// list of eigenstate preparations.
struct PresetEnsemble {
    char preset;  // 'A' or 'B'
    std::uint64_t n;
    bool operator==(const PresetEnsemble &) const = default;
};

struct PreparedComponent {
    Axis axis;
    SpinOutcome sign;
    std::uint64_t count;
    bool operator==(const PreparedComponent &) const = default;
};

struct ExplicitEnsemble {
    std::string name;
    std::vector<PreparedComponent> components;
    bool operator==(const ExplicitEnsemble &) const = default;
};

using EnsembleDescriptor = std::variant<PresetEnsemble, ExplicitEnsemble>;

EnsembleSpec build_ensemble(const EnsembleDescriptor &desc);

/// {"preset": "A"|"B", "n": int} or
/// {"name": str, "components": [{"axis": ..., "sign": +1|-1, "count": int}]}
nlohmann::json ensemble_to_json(const EnsembleDescriptor &desc);
EnsembleDescriptor ensemble_from_json(const nlohmann::json &j);

}  // namespace spinstat
