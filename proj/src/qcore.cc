#include "spinstat/qcore.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinstat {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Spinor::Spinor(Complex a0, Complex a1) {
    if (!finite(a0) || !finite(a1)) {
        throw std::invalid_argument("Spinor: non-finite amplitude");
    }
    double n2 = std::norm(a0) + std::norm(a1);
    if (n2 == 0.0) {
        throw std::invalid_argument("Spinor: zero vector cannot be normalized");
    }
    double n = std::sqrt(n2);
    a0_ = a0 / n;
    a1_ = a1 / n;
}

std::array<double, 3> Spinor::bloch() const {
    Complex c = std::conj(a0_) * a1_;
    double n2 = norm_squared();
    return {2.0 * c.real() / n2, 2.0 * c.imag() / n2, (std::norm(a0_) - std::norm(a1_)) / n2};
}

HermitianOp::HermitianOp(double m00, double m11, Complex m01) : m00_(m00), m11_(m11), m01_(m01) {
    if (!std::isfinite(m00) || !std::isfinite(m11) || !finite(m01)) {
        throw std::invalid_argument("HermitianOp: non-finite entry");
    }
}

Complex HermitianOp::operator()(int row, int col) const {
    if (row == 0) {
        return col == 0 ? Complex(m00_) : m01_;
    }
    return col == 0 ? m10() : Complex(m11_);
}

HermitianOp HermitianOp::squared() const {
    double off = std::norm(m01_);
    return {m00_ * m00_ + off, m11_ * m11_ + off, m01_ * (m00_ + m11_)};
}

double HermitianOp::max_abs_diff(const HermitianOp &other) const {
    return std::max({std::abs(m00_ - other.m00_), std::abs(m11_ - other.m11_),
                     std::abs(m01_ - other.m01_)});
}

HermitianOp HermitianOp::operator+(const HermitianOp &o) const {
    return {m00_ + o.m00_, m11_ + o.m11_, m01_ + o.m01_};
}

HermitianOp HermitianOp::operator-(const HermitianOp &o) const {
    return {m00_ - o.m00_, m11_ - o.m11_, m01_ - o.m01_};
}

HermitianOp HermitianOp::operator*(double s) const { return {m00_ * s, m11_ * s, m01_ * s}; }

Complex inner_product(const Spinor &x, const Spinor &y) {
    return std::conj(x.a0()) * y.a0() + std::conj(x.a1()) * y.a1();
}

HermitianOp outer_product(const Spinor &x) {
    // Dividing by the stored norm keeps the trace at one even when the
    // amplitudes themselves carry rounding (e.g. 1/sqrt(2) squared).
    double n2 = x.norm_squared();
    return {std::norm(x.a0()) / n2, std::norm(x.a1()) / n2, x.a0() * std::conj(x.a1()) / n2};
}

Vec2 apply(const HermitianOp &op, const Vec2 &x) {
    return {op.m00() * x[0] + op.m01() * x[1], op.m10() * x[0] + op.m11() * x[1]};
}

Vec2 apply(const HermitianOp &op, const Spinor &x) { return apply(op, x.vec()); }

double expectation(const HermitianOp &op, const Spinor &x) {
    return trace_product(outer_product(x), op);
}

double trace_product(const HermitianOp &a, const HermitianOp &b) {
    // sum_ij a_ij b_ji; the off-diagonal pair is a_01 conj(b_01) + c.c.
    return a.m00() * b.m00() + a.m11() * b.m11() + 2.0 * (a.m01() * std::conj(b.m01())).real();
}

EigenSystem eigensystem(const HermitianOp &op) {
    double mean = 0.5 * (op.m00() + op.m11());
    double bz = 0.5 * (op.m00() - op.m11());
    double bx = op.m01().real();
    double by = -op.m01().imag();
    double r = std::sqrt(bx * bx + by * by + bz * bz);

    if (r <= kExactTol) {
        return {mean + r, mean - r, Spinor::up(), Spinor::down(), true};
    }
    if (op.m01() == Complex(0.0)) {
        if (op.m00() >= op.m11()) {
            return {op.m00(), op.m11(), Spinor::up(), Spinor::down(), false};
        }
        return {op.m11(), op.m00(), Spinor::down(), Spinor::up(), false};
    }

    double nz = bz / r;
    double rho = std::hypot(bx, by);
    Complex phase(bx / rho, by / rho);
    double c = std::sqrt(std::max(0.0, 0.5 * (1.0 + nz)));
    double s = std::sqrt(std::max(0.0, 0.5 * (1.0 - nz)));
    return {mean + r, mean - r, Spinor(c, phase * s), Spinor(s, -phase * c), false};
}

double vec_norm(const Vec2 &v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

}  // namespace spinstat
