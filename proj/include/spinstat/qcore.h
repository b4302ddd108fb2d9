#pragma once

#include <array>
#include <complex>

namespace spinstat {

/// Amplitude of a two-level state in the reference basis.
using Complex = std::complex<double>;

/// Unnormalized two-component vector, the result of applying an operator.
struct Vec2 {
    Complex c0;
    Complex c1;
    Complex operator[](int i) const { return i == 0 ? c0 : c1; }
};

/// Tolerance for quantities that are exact up to one rounding step.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for results of composed floating-point operations.
inline constexpr double kComposedTol = 1e-10;

/// A pure spin-1/2 state. Always normalized; the zero vector is rejected.
class Spinor {
public:
    /// |up>, i.e. (1, 0).
    Spinor() = default;
    /// Normalizes (a0, a1). Throws std::invalid_argument on zero or non-finite input.
    Spinor(Complex a0, Complex a1);

    static Spinor up() { return {1.0, 0.0}; }
    static Spinor down() { return {0.0, 1.0}; }

    Complex a0() const { return a0_; }
    Complex a1() const { return a1_; }
    Complex operator[](int i) const { return i == 0 ? a0_ : a1_; }

    double norm_squared() const { return std::norm(a0_) + std::norm(a1_); }

    /// Bloch vector (<sigma_x>, <sigma_y>, <sigma_z>).
    std::array<double, 3> bloch() const;

    Vec2 vec() const { return {a0_, a1_}; }

    bool operator==(const Spinor &) const = default;

private:
    Complex a0_ = 1.0;
    Complex a1_ = 0.0;
};

/// 2x2 Hermitian matrix; the lower off-diagonal entry is implied by conjugation.
class HermitianOp {
public:
    HermitianOp() = default;
    /// Throws std::invalid_argument if any entry is non-finite.
    HermitianOp(double m00, double m11, Complex m01);

    static HermitianOp identity() { return {1.0, 1.0, 0.0}; }
    static HermitianOp zero() { return {0.0, 0.0, 0.0}; }
    static HermitianOp pauli_x() { return {0.0, 0.0, 1.0}; }
    static HermitianOp pauli_y() { return {0.0, 0.0, Complex(0.0, -1.0)}; }
    static HermitianOp pauli_z() { return {1.0, -1.0, 0.0}; }

    double m00() const { return m00_; }
    double m11() const { return m11_; }
    Complex m01() const { return m01_; }
    Complex m10() const { return std::conj(m01_); }
    Complex operator()(int row, int col) const;

    double trace() const { return m00_ + m11_; }

    /// The square of a Hermitian matrix, which is again Hermitian.
    HermitianOp squared() const;

    /// Largest absolute entrywise difference.
    double max_abs_diff(const HermitianOp &other) const;

    HermitianOp operator+(const HermitianOp &o) const;
    HermitianOp operator-(const HermitianOp &o) const;
    HermitianOp operator*(double s) const;
    friend HermitianOp operator*(double s, const HermitianOp &op) { return op * s; }

    bool operator==(const HermitianOp &) const = default;

private:
    double m00_ = 0.0;
    double m11_ = 0.0;
    Complex m01_ = 0.0;
};

struct EigenSystem {
    double eigenvalue_plus;
    double eigenvalue_minus;
    Spinor eigvec_plus;
    Spinor eigvec_minus;
    /// Set when the two eigenvalues coincide within kExactTol; the eigenvectors
    /// are then the reference basis.
    bool degenerate;
};

/// <x|y>, conjugate-linear in x.
Complex inner_product(const Spinor &x, const Spinor &y);

/// Rank-one projector |x><x| with trace exactly one up to rounding.
HermitianOp outer_product(const Spinor &x);

Vec2 apply(const HermitianOp &op, const Vec2 &x);
Vec2 apply(const HermitianOp &op, const Spinor &x);

/// <x|op|x> for a normalized x; real because op is Hermitian.
double expectation(const HermitianOp &op, const Spinor &x);

/// Tr[a b]. Real for Hermitian a and b.
double trace_product(const HermitianOp &a, const HermitianOp &b);

/// Closed-form eigendecomposition. Matrices that are already diagonal return
/// the reference basis as eigenvectors.
EigenSystem eigensystem(const HermitianOp &op);

double vec_norm(const Vec2 &v);

}  // namespace spinstat
