#pragma once

// Truncation-error certificates for the derivative series and audits of the
// auxiliary inequalities behind them.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bsamp/corpus.hpp"
#include "bsamp/errors.hpp"
#include "bsamp/kernels.hpp"
#include "bsamp/lattice.hpp"
#include "bsamp/reconstruct.hpp"
#include "bsamp/sample_set.hpp"

namespace bsamp {

/// (1 + 1/(r-1))^n, a uniform bound on sum_{m in Z^n} |sinc_n(a x - m)|^r.
inline double kernel_sum_bound(double r, std::size_t n) {
    if (!(r > 1.0) || !std::isfinite(r)) throw DomainError("kernel_sum_bound: r must be > 1");
    if (n < 1) throw DimensionError("kernel_sum_bound: n must be >= 1");
    return std::pow(1.0 + 1.0 / (r - 1.0), static_cast<double>(n));
}

/// sum_{|m| <= window} |sinc1(a x - m)|^r, one variable.
inline double kernel_power_sum(double a, double x, double r, int window) {
    detail::CompensatedSum acc;
    const double ax = a * x;
    for (int m = -window; m <= window; ++m) acc.add(std::pow(std::fabs(sinc1(ax - m)), r));
    return acc.value();
}

/// Hölder split of the tail S_{k,tau_inner}(x) of one channel of the
/// derivative series: |S| <= sample_tail_norm * kernel_factor. kernel_factor
/// is a sup over the probe grid only, not over all of R^n.
struct TailBoundReport {
    MultiIndex k;
    TruncationWindow tau_inner;
    double p1 = 2.0;
    double q1 = 2.0;
    double sample_tail_norm = 0.0;
    double kernel_factor = 0.0;
    double bound = 0.0;
    std::size_t probe_points = 0;
};

namespace detail {

inline void check_tail_inputs(const SampleSet& s, const MultiIndex& k, const TruncationWindow& inner) {
    require_hermite_lattice(s, "tail_bound");
    if (k.dim() != s.dim() || inner.dim() != s.dim()) throw DimensionError("tail_bound: dimension mismatch");
    if (!inner.within(s.tau())) throw WindowError("tail_bound: tau_inner exceeds the sample window");
    if (!s.has_channel(k)) throw MissingChannelError("tail_bound: missing channel k = " + k.str());
}

} // namespace detail

/// Default Hölder exponent: max(p, 2).
inline double default_p1(const SampleSet& s) { return std::max(s.p(), 2.0); }

inline TailBoundReport tail_bound(const SampleSet& s, const MultiIndex& k, const TruncationWindow& tau_inner,
                                  std::optional<double> p1_opt, const Grid& probe_grid) {
    detail::check_tail_inputs(s, k, tau_inner);
    const double p1 = p1_opt.value_or(default_p1(s));
    if (!(p1 > 1.0) || !std::isfinite(p1) || p1 < s.p()) {
        throw DomainError("tail_bound: p1 must satisfy p1 >= p, 1 < p1 < inf");
    }
    if (probe_grid.size() != s.dim()) throw DimensionError("tail_bound: probe grid axes do not match");
    if (grid_size(probe_grid) == 0) throw ShapeError("tail_bound: empty probe grid");

    TailBoundReport rep{k, tau_inner, p1, p1 / (p1 - 1.0), 0.0, 0.0, 0.0, grid_size(probe_grid)};
    const auto& tau = s.tau();
    const std::size_t n = s.dim();

    // stored samples outside the kept box
    const auto vals = s.channel_values(k);
    const auto present = s.channel_presence(k);
    detail::CompensatedSum norm_acc;
    {
        auto m = first_node(tau);
        std::size_t idx = 0;
        do {
            if (present[idx] && !tau_inner.contains(m)) norm_acc.add(std::pow(std::abs(vals[idx]), p1));
            ++idx;
        } while (next_node(m, tau));
    }
    rep.sample_tail_norm = std::pow(norm_acc.value(), 1.0 / p1);

    // |lambda_j| sinc1(t)^2 <= (2 / sigma_j) |sinc1(t)| on each differentiated axis
    double prefactor = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (k[j]) prefactor *= 2.0 / s.sigma()[j];
    }

    double sup = 0.0;
    std::vector<std::vector<double>> table(n);
    for (std::size_t i = 0; i < rep.probe_points; ++i) {
        const auto w = lattice_units(ComplexPoint(grid_point(probe_grid, i)), s.sigma(), s.theta());
        for (std::size_t j = 0; j < n; ++j) {
            table[j].resize(2 * tau[j] + 1);
            for (int m = -tau[j]; m <= tau[j]; ++m) {
                table[j][m + tau[j]] = std::pow(std::fabs(sinc1(w[j].real() - m)), rep.q1);
            }
        }
        detail::CompensatedSum acc;
        auto m = first_node(tau);
        do {
            if (tau_inner.contains(m)) continue;
            double prod = 1.0;
            for (std::size_t j = 0; j < n; ++j) prod *= table[j][m[j] + tau[j]];
            acc.add(prod);
        } while (next_node(m, tau));
        sup = std::max(sup, acc.value());
    }
    rep.kernel_factor = prefactor * std::pow(sup, 1.0 / rep.q1);
    rep.bound = rep.sample_tail_norm * rep.kernel_factor;
    return rep;
}

/// The discarded part of one channel's series at x:
/// sum over stored nodes outside tau_inner of d^k f(u) prod (x_j - u_j)^k_j sinc_n^2(...).
inline cplx tail_partial_sum(const SampleSet& s, const MultiIndex& k, const TruncationWindow& tau_inner,
                             const ComplexPoint& x) {
    detail::check_tail_inputs(s, k, tau_inner);
    detail::require_channel(s, k);
    return detail::run_series(s, x, {2, {k.mask()}, tau_inner}).value;
}

struct GrowthCheck {
    double ratio = 0.0; // |f(z)| / (sup |f| e^{pi sum |Im z_j|})
    double bound = 0.0;
    bool pass = false;
};

/// Checks |f(z)| <= sup|f| exp(pi sum_j |Im z_j|) for f bandlimited to the box pi.
inline GrowthCheck growth_check(const CorpusFunction& f, const ComplexPoint& z) {
    if (!f.sup_norm()) throw DomainError("growth_check: function has no known sup norm");
    for (double s : f.sigma().values()) {
        if (std::fabs(s - detail::pi) > 1e-12 * detail::pi) {
            throw DomainError("growth_check: normalize the function to sigma = pi first");
        }
    }
    double y = 0.0;
    for (const auto& c : z) y += std::fabs(c.imag());
    GrowthCheck g;
    g.bound = *f.sup_norm() * std::exp(detail::pi * y);
    g.ratio = std::abs(f(z)) / g.bound;
    g.pass = g.ratio <= 1.0;
    return g;
}

/// (sum over stored nodes |d^k f(u)|^p)^(1/p).
inline double lp_sample_norm(const SampleSet& s, const MultiIndex& k, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_sample_norm: p must be finite and >= 1");
    if (k.dim() != s.dim()) throw DimensionError("lp_sample_norm: dimension mismatch");
    if (!s.has_channel(k)) throw MissingChannelError("lp_sample_norm: missing channel k = " + k.str());
    const auto vals = s.channel_values(k);
    const auto present = s.channel_presence(k);
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (present[i]) acc.add(std::pow(std::abs(vals[i]), p));
    }
    return std::pow(acc.value(), 1.0 / p);
}

} // namespace bsamp
