#pragma once

// Composite Gauss-Legendre quadrature with panel doubling.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "bsamp/errors.hpp"

namespace bsamp::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1]: Newton iteration on P_n seeded
/// with the Chebyshev-like guess cos(pi (i + 3/4) / (n + 1/2)).
inline Rule gauss_legendre(std::size_t n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            // p0 = P_n(z), p1 = P_{n-1}(z)
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

inline const Rule& gl16() {
    static const Rule rule = gauss_legendre(16);
    return rule;
}

struct Estimate {
    std::complex<double> value;
    double mass = 0.0; // integral of |f|, same rule
};

/// `panels` equal panels of the 16-point rule over [a, b].
template <class F>
Estimate composite(F&& f, double a, double b, std::size_t panels) {
    const auto& rule = gl16();
    const double h = (b - a) / static_cast<double>(panels);
    Estimate e{};
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        std::complex<double> s = 0.0;
        double m = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const std::complex<double> v = f(mid + 0.5 * h * rule.nodes[i]);
            s += rule.weights[i] * v;
            m += rule.weights[i] * std::abs(v);
        }
        e.value += 0.5 * h * s;
        e.mass += 0.5 * h * m;
    }
    return e;
}

/// Doubles the panel count until two successive estimates agree to `rtol`
/// relative to max(|I|, integral of |f|). Throws QuadratureError when the point
/// budget is exhausted first.
template <class F>
std::complex<double> integrate(F&& f, double a, double b, double rtol = 1e-10, std::size_t max_points = 1u << 14) {
    std::size_t panels = 4;
    Estimate prev = composite(f, a, b, panels);
    while ((panels * 2) * gl16().nodes.size() <= max_points) {
        panels *= 2;
        const Estimate cur = composite(f, a, b, panels);
        const double scale = std::max(std::abs(cur.value), cur.mass);
        if (std::abs(cur.value - prev.value) <= rtol * scale) return cur.value;
        prev = cur;
    }
    throw QuadratureError("quadrature did not converge to " + std::to_string(rtol) + " within " +
                          std::to_string(max_points) + " points");
}

} // namespace bsamp::quad
