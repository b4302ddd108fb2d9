#pragma once

#include <array>
#include <cstdint>
#include <variant>

#include "json.hpp"
#include "spinstat/ensemble.h"
#include "spinstat/qcore.h"

namespace spinstat {

/// Weights are population fractions; trace 1.
struct Normalized {
    bool operator==(const Normalized &) const = default;
};
/// Weights are particle counts; trace N.
struct Unnormalized {
    std::uint64_t n;
    bool operator==(const Unnormalized &) const = default;
};
using Normalization = std::variant<Normalized, Unnormalized>;

/// A density operator together with an explicit normalization tag. The tag is
/// never inferred from the trace.
class DensityOp {
public:
    /// Checks positive semidefiniteness and that the trace matches the tag.
    DensityOp(HermitianOp op, Normalization normalization);

    const HermitianOp &op() const { return op_; }
    const Normalization &normalization() const { return normalization_; }
    bool normalized() const { return std::holds_alternative<Normalized>(normalization_); }

    /// Tr[rho^2] / Tr[rho]^2: 1 for a pure ensemble, 1/2 when maximally mixed.
    double purity() const;

private:
    HermitianOp op_;
    Normalization normalization_;
};

/// rho_ij = <b_i|P|b_j> in an orthonormal basis {b_0, b_1}.
struct DensityMatrix {
    std::array<Spinor, 2> basis;
    std::array<std::array<Complex, 2>, 2> entries;
    Normalization normalization;

    Complex trace() const { return entries[0][0] + entries[1][1]; }
    /// Eigenvalues (largest first) of the Hermitian part of the entries.
    std::array<double, 2> eigenvalues() const;

    bool operator==(const DensityMatrix &) const = default;
};

/// Sum_i W_i |beta_i><beta_i| with W_i = count_i/N (normalized) or count_i.
DensityOp density_operator(const EnsembleSpec &e, bool normalized);

/// Throws std::invalid_argument if the basis is not orthonormal within 1e-12.
DensityMatrix density_matrix(const DensityOp &p, const std::array<Spinor, 2> &basis);

/// Tr[P O]
double expectation_tr(const DensityOp &p, const HermitianOp &obs);

/// Tr[P O^2] - (Tr[P O])^2. With an unnormalized P this is the count-weighted
/// trace formula, not a variance of the normalized state.
double variance_tr(const DensityOp &p, const HermitianOp &obs);

/// Sum_i W_i <beta_i|O|beta_i>, W_i = fraction (intensive) or count (extensive).
double statistical_average_expectation(const EnsembleSpec &e, const HermitianOp &obs, bool extensive);

/// Entrywise max difference <= tol. Throws if the normalization kinds differ.
bool density_equal(const DensityOp &p, const DensityOp &q, double tol);

/// {"basis": [[[re,im],[re,im]], ...], "entries": [[[re,im],[re,im]], ...],
///  "normalization": "normalized" | {"unnormalized": N}}
nlohmann::json density_matrix_to_json(const DensityMatrix &m);
DensityMatrix density_matrix_from_json(const nlohmann::json &j);

}  // namespace spinstat
