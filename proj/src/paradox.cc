#include "spinstat/paradox.h"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spinstat/montecarlo.h"
#include "spinstat/spin.h"

namespace spinstat {

HermitianOp variance_pseudo_operator(const Spinor &beta) {
    double e = expectation(HermitianOp::pauli_x(), beta);
    return HermitianOp::identity() * (1.0 + e * e) - HermitianOp::pauli_x() * (2.0 * e);
}

PseudoOperatorReport pseudo_operator_report(const Spinor &beta) {
    HermitianOp op = variance_pseudo_operator(beta);
    double residual = std::min(vec_norm(apply(op, eigenstate(Axis::X(), SpinOutcome::Plus))),
                               vec_norm(apply(op, eigenstate(Axis::X(), SpinOutcome::Minus))));
    return {beta, op, residual < kExactTol, residual, expectation(op, beta)};
}

NullOperatorContradiction null_operator_contradiction() {
    auto plus = pseudo_operator_report(eigenstate(Axis::X(), SpinOutcome::Plus));
    auto minus = pseudo_operator_report(eigenstate(Axis::X(), SpinOutcome::Minus));
    auto z = pseudo_operator_report(eigenstate(Axis::Z(), SpinOutcome::Plus));
    double diff = plus.op.max_abs_diff(z.op);
    bool holds = plus.annihilates_sx_eigenstates && minus.annihilates_sx_eigenstates &&
                 std::abs(z.expectation_on_source - 1.0) < kExactTol && diff > kExactTol;
    return {plus, minus, z, diff, holds};
}

FixedOperatorFit fit_fixed_operator(std::span<const Spinor> states) {
    const auto rows = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd design(rows, 4);
    Eigen::VectorXd target(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Spinor &s = states[static_cast<std::size_t>(i)];
        double sx = expectation(HermitianOp::pauli_x(), s);
        design(i, 0) = 1.0;
        design(i, 1) = sx;
        design(i, 2) = expectation(HermitianOp::pauli_y(), s);
        design(i, 3) = expectation(HermitianOp::pauli_z(), s);
        target(i) = 1.0 - sx * sx;
    }
    Eigen::Vector4d c = design.completeOrthogonalDecomposition().solve(target);
    Eigen::VectorXd resid = design * c - target;

    HermitianOp op(c(0) + c(3), c(0) - c(3), Complex(c(1), -c(2)));
    double rms = rows > 0 ? std::sqrt(resid.squaredNorm() / static_cast<double>(rows)) : 0.0;
    double worst = rows > 0 ? resid.cwiseAbs().maxCoeff() : 0.0;
    return {states.size(), op, rms, worst};
}

FixedOperatorFit fixed_operator_infeasibility(std::uint64_t samples, std::uint64_t seed) {
    if (samples < 100) {
        throw std::invalid_argument("fixed_operator_infeasibility: need at least 100 samples");
    }
    SeededSampler sampler(seed);
    std::vector<Spinor> states;
    states.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
        // Archimedes: z uniform in [-1, 1] gives uniform area on the sphere.
        double z = 2.0 * sampler.uniform(i, 0) - 1.0;
        double phi = 2.0 * std::numbers::pi * sampler.uniform(i, 1);
        states.emplace_back(std::sqrt(0.5 * (1.0 + z)), std::polar(std::sqrt(0.5 * (1.0 - z)), phi));
    }
    return fit_fixed_operator(states);
}

}  // namespace spinstat
