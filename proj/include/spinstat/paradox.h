#pragma once

#include <cmath>
#include <cstdint>
#include <span>

#include "spinstat/qcore.h"

namespace spinstat {

// The "variance operator" (S_x - <S_x>_beta)^2 depends on the state it acts
// on, so it is modelled as the state-indexed family beta -> O_beta rather than
// as one linear operator. Everything here is in half-quantum units.

inline const double kAnalyticRmsResidual = std::sqrt(4.0 / 45.0);
inline constexpr double kAnalyticMaxResidual = 2.0 / 3.0;

struct PseudoOperatorReport {
    Spinor source_state;
    HermitianOp op;
    /// O_beta maps |S_x,+1> or |S_x,-1> to zero within kExactTol.
    bool annihilates_sx_eigenstates;
    /// min over |S_x,+-1> of || O_beta |v> ||
    double annihilation_residual;
    /// <beta|O_beta|beta>, equal to the single-particle variance of sigma_x.
    double expectation_on_source;
};

struct NullOperatorContradiction {
    PseudoOperatorReport sx_plus;
    PseudoOperatorReport sx_minus;
    PseudoOperatorReport sz_plus;
    /// max |O_{S_x,+1} - O_{S_z,+1}| entrywise
    double operator_difference;
    /// All three witnesses hold simultaneously.
    bool holds;
};

struct FixedOperatorFit {
    std::uint64_t samples;
    /// Best single Hermitian O in the least-squares sense.
    HermitianOp op;
    double rms_residual;
    double max_residual;
};

/// (sigma_x - E)^2 with E = <beta|sigma_x|beta>, i.e. (1 + E^2) I - 2 E sigma_x.
HermitianOp variance_pseudo_operator(const Spinor &beta);

PseudoOperatorReport pseudo_operator_report(const Spinor &beta);

/// O_{S_x,+-1} annihilates its own source while <S_z,+1|O_{S_z,+1}|S_z,+1> = 1,
/// so no fixed operator can play the role of every member of the family.
NullOperatorContradiction null_operator_contradiction();

/// Least-squares fit of one Hermitian O to <beta|O|beta> ~ 1 - <beta|sigma_x|beta>^2
/// over the given states. Rank-deficient fits use the minimum-norm solution.
FixedOperatorFit fit_fixed_operator(std::span<const Spinor> states);

/// fit_fixed_operator over `samples` states drawn uniformly (by area) on the
/// Bloch sphere. Throws std::invalid_argument if samples < 100.
FixedOperatorFit fixed_operator_infeasibility(std::uint64_t samples, std::uint64_t seed);

}  // namespace spinstat
