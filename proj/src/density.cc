#include "spinstat/density.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spinstat {

namespace {

double expected_trace(const Normalization &n) {
    if (const auto *u = std::get_if<Unnormalized>(&n)) {
        return static_cast<double>(u->n);
    }
    return 1.0;
}

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("complex entry must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

DensityOp::DensityOp(HermitianOp op, Normalization normalization)
    : op_(op), normalization_(normalization) {
    double want = expected_trace(normalization_);
    double tol = normalized() ? kExactTol : kComposedTol * std::max(1.0, want);
    if (std::abs(op_.trace() - want) > tol) {
        throw std::invalid_argument("DensityOp: trace " + std::to_string(op_.trace()) +
                                    " does not match normalization (" + std::to_string(want) + ")");
    }
    auto eig = eigensystem(op_);
    if (eig.eigenvalue_minus < -kExactTol * std::max(1.0, want)) {
        throw std::invalid_argument("DensityOp: operator is not positive semidefinite");
    }
}

double DensityOp::purity() const {
    double t = op_.trace();
    return trace_product(op_, op_) / (t * t);
}

std::array<double, 2> DensityMatrix::eigenvalues() const {
    Complex off = 0.5 * (entries[0][1] + std::conj(entries[1][0]));
    auto eig = eigensystem(HermitianOp(entries[0][0].real(), entries[1][1].real(), off));
    return {eig.eigenvalue_plus, eig.eigenvalue_minus};
}

DensityOp density_operator(const EnsembleSpec &e, bool normalized) {
    HermitianOp sum = HermitianOp::zero();
    for (std::size_t i = 0; i < e.components().size(); ++i) {
        const auto &c = e.components()[i];
        double w = normalized ? e.weight(i) : static_cast<double>(c.count);
        sum = sum + outer_product(c.state) * w;
    }
    if (normalized) {
        return {sum, Normalized{}};
    }
    return {sum, Unnormalized{e.total()}};
}

DensityMatrix density_matrix(const DensityOp &p, const std::array<Spinor, 2> &basis) {
    if (std::abs(inner_product(basis[0], basis[1])) > kExactTol ||
        std::abs(basis[0].norm_squared() - 1.0) > kExactTol ||
        std::abs(basis[1].norm_squared() - 1.0) > kExactTol) {
        throw std::invalid_argument("density_matrix: basis is not orthonormal");
    }
    DensityMatrix m{basis, {}, p.normalization()};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Vec2 pb = apply(p.op(), basis[j]);
            m.entries[i][j] = std::conj(basis[i].a0()) * pb[0] + std::conj(basis[i].a1()) * pb[1];
        }
    }
    return m;
}

double expectation_tr(const DensityOp &p, const HermitianOp &obs) { return trace_product(p.op(), obs); }

double variance_tr(const DensityOp &p, const HermitianOp &obs) {
    double mean = expectation_tr(p, obs);
    return trace_product(p.op(), obs.squared()) - mean * mean;
}

double statistical_average_expectation(const EnsembleSpec &e, const HermitianOp &obs, bool extensive) {
    double sum = 0.0;
    for (std::size_t i = 0; i < e.components().size(); ++i) {
        const auto &c = e.components()[i];
        double w = extensive ? static_cast<double>(c.count) : e.weight(i);
        Vec2 ob = apply(obs, c.state);
        double bracket = (std::conj(c.state.a0()) * ob[0] + std::conj(c.state.a1()) * ob[1]).real();
        sum += w * bracket;
    }
    return sum;
}

bool density_equal(const DensityOp &p, const DensityOp &q, double tol) {
    if (p.normalized() != q.normalized()) {
        throw std::invalid_argument("density_equal: cannot compare normalized with unnormalized operators");
    }
    return p.op().max_abs_diff(q.op()) <= tol;
}

nlohmann::json density_matrix_to_json(const DensityMatrix &m) {
    nlohmann::json basis = nlohmann::json::array();
    for (const auto &b : m.basis) {
        basis.push_back({complex_to_json(b.a0()), complex_to_json(b.a1())});
    }
    nlohmann::json entries = nlohmann::json::array();
    for (const auto &row : m.entries) {
        entries.push_back({complex_to_json(row[0]), complex_to_json(row[1])});
    }
    nlohmann::json norm = "normalized";
    if (const auto *u = std::get_if<Unnormalized>(&m.normalization)) {
        norm = {{"unnormalized", u->n}};
    }
    return {{"basis", basis}, {"entries", entries}, {"normalization", norm}};
}

DensityMatrix density_matrix_from_json(const nlohmann::json &j) {
    const auto &b = j.at("basis");
    const auto &e = j.at("entries");
    if (!b.is_array() || b.size() != 2 || !e.is_array() || e.size() != 2) {
        throw std::invalid_argument("density matrix JSON: expected 2 basis vectors and 2 rows");
    }
    auto spinor = [](const nlohmann::json &v) {
        if (!v.is_array() || v.size() != 2) {
            throw std::invalid_argument("density matrix JSON: basis vector must have two components");
        }
        return Spinor(complex_from_json(v[0]), complex_from_json(v[1]));
    };
    DensityMatrix m{{spinor(b[0]), spinor(b[1])}, {}, Normalized{}};
    for (int i = 0; i < 2; ++i) {
        if (!e[i].is_array() || e[i].size() != 2) {
            throw std::invalid_argument("density matrix JSON: each row must have two entries");
        }
        for (int k = 0; k < 2; ++k) {
            m.entries[i][k] = complex_from_json(e[i][k]);
        }
    }
    const auto &n = j.at("normalization");
    if (n.is_object()) {
        m.normalization = Unnormalized{n.at("unnormalized").get<std::uint64_t>()};
    } else if (n != "normalized") {
        throw std::invalid_argument("density matrix JSON: unknown normalization tag");
    }
    return m;
}

}  // namespace spinstat
