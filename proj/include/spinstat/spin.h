#pragma once

#include <array>
#include <optional>
#include <string>

#include "json.hpp"
#include "spinstat/qcore.h"

namespace spinstat {

/// Measurement direction on the Bloch sphere, given by polar angle theta
/// (from z) and azimuth phi (from x), both in radians.
///
/// Bloch components within 1e-15 of zero are flushed to exactly zero, so that
/// e.g. theta = pi/2, phi = 0 yields the same operator and eigenstates as X.
class Axis {
public:
    Axis(double theta, double phi);

    static Axis X();
    static Axis Y();
    static Axis Z();

    double theta() const { return theta_; }
    double phi() const { return phi_; }
    /// 'x', 'y' or 'z' for the named constants.
    std::optional<char> name() const { return name_; }
    const std::array<double, 3> &bloch() const { return bloch_; }

    bool operator==(const Axis &) const = default;

private:
    Axis(double theta, double phi, char name);

    double theta_;
    double phi_;
    std::optional<char> name_;
    std::array<double, 3> bloch_;
};

/// Single-particle outcome in half-quantum units (hbar/2).
enum class SpinOutcome : int { Minus = -1, Plus = 1 };

inline int half_quanta(SpinOutcome s) { return static_cast<int>(s); }
/// Throws std::invalid_argument unless v is +1 or -1.
SpinOutcome outcome_from_int(long long v);

/// Conversion from half-quantum units to units of hbar. Reporting only.
class HbarScale {
public:
    explicit HbarScale(double hbar = 1.0);
    double hbar() const { return hbar_; }
    double mean(double half_quanta) const { return half_quanta * hbar_ / 2.0; }
    double variance(double half_quanta_sq) const { return half_quanta_sq * hbar_ * hbar_ / 4.0; }

private:
    double hbar_;
};

struct Moments {
    double mean;
    double variance;
};

/// n . sigma; eigenvalues are exactly +1 and -1.
HermitianOp spin_operator(const Axis &axis);

/// Eigenvector of spin_operator(axis). The +1 state is
/// (cos theta/2, e^{i phi} sin theta/2) and the -1 state is
/// (sin theta/2, -e^{i phi} cos theta/2); the first component is real and
/// non-negative in both.
Spinor eigenstate(const Axis &axis, SpinOutcome sign);

/// |<eigenstate(axis, sign)|state>|^2, clamped to [0, 1]. The two signs sum to one.
double born_probability(const Spinor &state, const Axis &axis, SpinOutcome sign);

/// Mean and variance of the single-particle outcome (+1 / -1).
Moments state_mean_and_variance(const Spinor &state, const Axis &axis);

/// "x" | "y" | "z" | {"theta": t, "phi": p}
nlohmann::json axis_to_json(const Axis &axis);
Axis axis_from_json(const nlohmann::json &j);
/// Parses "x", "y" or "z" (case-insensitive).
Axis axis_from_name(const std::string &name);

}  // namespace spinstat
