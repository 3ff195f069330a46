#pragma once

// Sinc-type kernels at real and complex arguments.
//
//   sinc1(t) = sin(pi t) / (pi t),  sinc1(0) = 1
//   sincn(z) = prod_j sinc1(z_j)
//   sicn(z)  = prod_j sin(z_j / 2)
//
// All routines are pure and reentrant.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

#include "bsamp/errors.hpp"

namespace bsamp {

using cplx = std::complex<double>;

/// A point of C^n (n >= 1). A point with zero imaginary parts behaves as the
/// corresponding real point everywhere.
class ComplexPoint {
public:
    ComplexPoint(std::initializer_list<cplx> coords) : coords_(coords) { check(); }

    explicit ComplexPoint(std::vector<cplx> coords) : coords_(std::move(coords)) { check(); }

    explicit ComplexPoint(std::span<const double> re) : coords_(re.begin(), re.end()) { check(); }

    explicit ComplexPoint(const std::vector<double>& re)
        : ComplexPoint(std::span<const double>(re)) {}

    ComplexPoint(std::span<const double> re, std::span<const double> im) {
        if (re.size() != im.size()) {
            throw DimensionError("ComplexPoint: re and im lengths differ");
        }
        coords_.reserve(re.size());
        for (std::size_t j = 0; j < re.size(); ++j) coords_.emplace_back(re[j], im[j]);
        check();
    }

    std::size_t dim() const noexcept { return coords_.size(); }
    const cplx& operator[](std::size_t j) const { return coords_[j]; }
    cplx& operator[](std::size_t j) { return coords_[j]; }
    auto begin() const noexcept { return coords_.begin(); }
    auto end() const noexcept { return coords_.end(); }
    std::span<const cplx> coords() const noexcept { return coords_; }

    std::vector<double> re() const {
        std::vector<double> out;
        for (const auto& c : coords_) out.push_back(c.real());
        return out;
    }

    std::vector<double> im() const {
        std::vector<double> out;
        for (const auto& c : coords_) out.push_back(c.imag());
        return out;
    }

    bool is_real() const noexcept {
        for (const auto& c : coords_) {
            if (c.imag() != 0.0) return false;
        }
        return true;
    }

    friend bool operator==(const ComplexPoint&, const ComplexPoint&) = default;

private:
    void check() const {
        if (coords_.empty()) throw DimensionError("ComplexPoint: dimension must be >= 1");
    }

    std::vector<cplx> coords_;
};

namespace detail {

inline constexpr double pi = std::numbers::pi;
// |pi t| below this switches sinc1 to its Taylor polynomial.
inline constexpr double sinc_taylor_cutoff = 0x1p-13;

// sin(pi r) for r in [0, 1/2], exact zero at r = 0.
inline double sinpi_reduced(double r) {
    if (r == 0.0) return 0.0;
    if (r <= 0.25) return std::sin(pi * r);
    return std::cos(pi * (0.5 - r));
}

// degree-10 Taylor polynomial of sin(x)/x in x2 = x^2
template <class T>
T sinc_taylor(T x2) {
    return 1.0 + x2 * (-1.0 / 6.0 + x2 * (1.0 / 120.0 + x2 * (-1.0 / 5040.0 + x2 * (1.0 / 362880.0 + x2 * (-1.0 / 39916800.0)))));
}

} // namespace detail

/// sin(pi x) with exact argument reduction: exact zeros at the integers and
/// odd symmetry in floating point.
inline double sinpi(double x) {
    if (!std::isfinite(x)) return std::nan("");
    double sign = std::signbit(x) ? -1.0 : 1.0;
    double r = std::fmod(std::fabs(x), 2.0);
    if (r >= 1.0) {
        r -= 1.0;
        sign = -sign;
    }
    if (r > 0.5) r = 1.0 - r;
    return sign * detail::sinpi_reduced(r);
}

/// cos(pi x), exact zeros at the half-integers.
inline double cospi(double x) {
    if (!std::isfinite(x)) return std::nan("");
    double r = std::fmod(std::fabs(x), 2.0);
    if (r > 1.0) r = 2.0 - r;
    double sign = 1.0;
    if (r > 0.5) {
        r = 1.0 - r;
        sign = -1.0;
    }
    // cos(pi r) = sin(pi (1/2 - r)), r in [0, 1/2]
    if (r <= 0.25) return sign * std::cos(detail::pi * r);
    return sign * detail::sinpi_reduced(0.5 - r);
}

inline cplx sinpi(cplx t) {
    const double b = detail::pi * t.imag();
    if (b == 0.0) return {sinpi(t.real()), 0.0};
    return {sinpi(t.real()) * std::cosh(b), cospi(t.real()) * std::sinh(b)};
}

inline cplx cospi(cplx t) {
    const double b = detail::pi * t.imag();
    if (b == 0.0) return {cospi(t.real()), 0.0};
    return {cospi(t.real()) * std::cosh(b), -sinpi(t.real()) * std::sinh(b)};
}

/// Normalized sinc, sin(pi t)/(pi t), with sinc1(0) = 1.
inline double sinc1(double t) {
    const double x = detail::pi * t;
    if (std::fabs(x) < detail::sinc_taylor_cutoff) return detail::sinc_taylor(x * x);
    return sinpi(t) / x;
}

inline cplx sinc1(cplx t) {
    if (t.imag() == 0.0) return {sinc1(t.real()), 0.0};
    const cplx x = detail::pi * t;
    if (std::abs(x) < detail::sinc_taylor_cutoff) return detail::sinc_taylor(x * x);
    // N conj(D) / |D|^2 keeps sinc1(conj t) == conj(sinc1(t)) bit-for-bit
    const cplx num = sinpi(t);
    return num * std::conj(x) / std::norm(x);
}

inline cplx sincn(const ComplexPoint& z) {
    cplx out = 1.0;
    for (const auto& c : z) out *= sinc1(c);
    return out;
}

/// prod_j sin(z_j / 2); exact zeros where a coordinate is (the double nearest) 2 pi m.
inline cplx sicn(const ComplexPoint& z) {
    cplx out = 1.0;
    for (const auto& c : z) out *= sinpi(c / (2.0 * detail::pi));
    return out;
}

/// prod_j sinc1(sigma_j (z_j - u_j) / (2 pi))^2, the Hermite node kernel of the
/// lattice u + (2 pi / sigma) Z^n.
inline cplx sinc_sq_node_kernel(const ComplexPoint& z, std::span<const double> sigma,
                                std::span<const double> u) {
    if (sigma.size() != z.dim() || u.size() != z.dim()) {
        throw DimensionError("sinc_sq_node_kernel: length mismatch");
    }
    cplx out = 1.0;
    for (std::size_t j = 0; j < z.dim(); ++j) {
        const cplx s = sinc1(sigma[j] * (z[j] - u[j]) / (2.0 * detail::pi));
        out *= s * s;
    }
    return out;
}

} // namespace bsamp
