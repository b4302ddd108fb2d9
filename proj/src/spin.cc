#include "spinstat/spin.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinstat {

namespace {

constexpr double kFlush = 1e-15;

double flush(double v) { return std::abs(v) < kFlush ? 0.0 : v; }

std::array<double, 3> bloch_from_angles(double theta, double phi) {
    double st = std::sin(theta);
    return {flush(st * std::cos(phi)), flush(st * std::sin(phi)), flush(std::cos(theta))};
}

}  // namespace

Axis::Axis(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi)) {
        throw std::invalid_argument("Axis: theta and phi must be finite");
    }
    bloch_ = bloch_from_angles(theta, phi);
}

Axis::Axis(double theta, double phi, char name) : theta_(theta), phi_(phi), name_(name) {
    bloch_ = {name == 'x' ? 1.0 : 0.0, name == 'y' ? 1.0 : 0.0, name == 'z' ? 1.0 : 0.0};
}

Axis Axis::X() { return {std::numbers::pi / 2, 0.0, 'x'}; }
Axis Axis::Y() { return {std::numbers::pi / 2, std::numbers::pi / 2, 'y'}; }
Axis Axis::Z() { return {0.0, 0.0, 'z'}; }

SpinOutcome outcome_from_int(long long v) {
    if (v == 1) return SpinOutcome::Plus;
    if (v == -1) return SpinOutcome::Minus;
    throw std::invalid_argument("spin outcome must be +1 or -1, got " + std::to_string(v));
}

HbarScale::HbarScale(double hbar) : hbar_(hbar) {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) {
        throw std::invalid_argument("hbar must be a positive finite number");
    }
}

HermitianOp spin_operator(const Axis &axis) {
    const auto &n = axis.bloch();
    return {n[2], -n[2], Complex(n[0], -n[1])};
}

Spinor eigenstate(const Axis &axis, SpinOutcome sign) {
    const auto &n = axis.bloch();
    double c = std::sqrt(0.5 * (1.0 + n[2]));
    double s = std::sqrt(0.5 * (1.0 - n[2]));
    double rho = std::hypot(n[0], n[1]);
    // At the poles the azimuth is carried by phi itself.
    Complex phase = rho > 0.0 ? Complex(n[0] / rho, n[1] / rho) : std::polar(1.0, axis.phi());
    if (sign == SpinOutcome::Plus) {
        return {c, phase * s};
    }
    return {s, -phase * c};
}

double born_probability(const Spinor &state, const Axis &axis, SpinOutcome sign) {
    Spinor up = eigenstate(axis, SpinOutcome::Plus);
    double p_plus = std::norm(inner_product(up, state)) / (up.norm_squared() * state.norm_squared());
    p_plus = std::clamp(p_plus, 0.0, 1.0);
    return sign == SpinOutcome::Plus ? p_plus : 1.0 - p_plus;
}

Moments state_mean_and_variance(const Spinor &state, const Axis &axis) {
    double p_plus = born_probability(state, axis, SpinOutcome::Plus);
    double p_minus = born_probability(state, axis, SpinOutcome::Minus);
    double mean = p_plus - p_minus;
    // Outcomes are +-1, so E(y^2) = 1.
    return {mean, 1.0 - mean * mean};
}

nlohmann::json axis_to_json(const Axis &axis) {
    if (auto name = axis.name()) {
        return std::string(1, *name);
    }
    return {{"theta", axis.theta()}, {"phi", axis.phi()}};
}

Axis axis_from_name(const std::string &name) {
    std::string lower = name;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "x") return Axis::X();
    if (lower == "y") return Axis::Y();
    if (lower == "z") return Axis::Z();
    throw std::invalid_argument("unknown axis name '" + name + "' (expected x, y or z)");
}

Axis axis_from_json(const nlohmann::json &j) {
    if (j.is_string()) {
        return axis_from_name(j.get<std::string>());
    }
    if (j.is_object() && j.contains("theta") && j.contains("phi") && j["theta"].is_number() &&
        j["phi"].is_number()) {
        return {j["theta"].get<double>(), j["phi"].get<double>()};
    }
    throw std::invalid_argument("axis must be \"x\", \"y\", \"z\" or {\"theta\": r, \"phi\": r}");
}

}  // namespace spinstat
