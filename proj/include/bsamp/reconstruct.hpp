#pragma once

// Sampling-series engines:
//   wks         f(z) = sum_u f(u) sinc_n(sigma (z - u) / pi),                 u in (pi / sigma) Z^n
//   hermite1    f(z) = sum_u (f(u) + f'(u)(z - u)) sinc1^2(sigma (z - u) / 2pi), u in (2 pi / sigma) Z
//   hermite-nd  f(z) = sum_u (sum_k d^k f(u) prod_j (z_j - u_j)^k_j) sinc_n^2(sigma (z - u) / 2pi)
//   legacy2d    hermite-nd at n = 2 without the mixed (1,1) channel
//
// Every engine sums exactly the window stored in the SampleSet, in lexicographic
// node order, with compensated accumulation.

#include <algorithm>
#include <bit>
#include <exception>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <vector>

#include "bsamp/errors.hpp"
#include "bsamp/kernels.hpp"
#include "bsamp/lattice.hpp"
#include "bsamp/sample_set.hpp"

namespace bsamp {

/// P(lambda) = value * prod_j lambda_j^{k_j}.
inline cplx poly_term(cplx deriv_value, const MultiIndex& k, const ComplexPoint& lambda) {
    if (k.dim() != lambda.dim()) throw DimensionError("poly_term: length mismatch");
    cplx out = deriv_value;
    for (std::size_t j = 0; j < k.dim(); ++j) {
        if (k[j]) out *= lambda[j];
    }
    return out;
}

enum class Method { wks, hermite1, hermite_nd, legacy2d };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::wks: return "wks";
        case Method::hermite1: return "hermite1";
        case Method::hermite_nd: return "hermite-nd";
        case Method::legacy2d: return "legacy2d";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    if (s == "wks") return Method::wks;
    if (s == "hermite1") return Method::hermite1;
    if (s == "hermite-nd") return Method::hermite_nd;
    if (s == "legacy2d") return Method::legacy2d;
    throw DomainError("unknown method '" + std::string(s) + "'");
}

namespace detail {

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

template <class T>
struct Accumulator;

template <>
struct Accumulator<double> {
    CompensatedSum s;
    void add(double x) { s.add(x); }
    double value() const { return s.value(); }
};

template <>
struct Accumulator<cplx> {
    CompensatedSum re, im;
    void add(cplx x) {
        re.add(x.real());
        im.add(x.imag());
    }
    cplx value() const { return {re.value(), im.value()}; }
};

template <class T>
T narrow(cplx v) {
    if constexpr (std::is_same_v<T, double>) {
        return v.real();
    } else {
        return v;
    }
}

struct SeriesSpec {
    int kernel_power = 2;              // 1: sinc (Nyquist lattice), 2: sinc^2
    std::vector<std::uint32_t> masks;  // channels entering the polynomial
    std::optional<TruncationWindow> skip_inside; // sum only nodes outside this window
};

struct SeriesResult {
    cplx value;
    double abs_mass = 0.0;
};

// Core summation. w is the query in lattice units.
template <class T>
SeriesResult sum_series(const SampleSet& s, std::span<const cplx> w, const SeriesSpec& spec) {
    const std::size_t n = s.dim();
    const auto& tau = s.tau();
    const double scale = to_int(s.theta()) * pi;

    // per-axis tables over m_j = -tau_j .. tau_j
    std::vector<std::vector<T>> kern(n), lam(n);
    for (std::size_t j = 0; j < n; ++j) {
        const int t = tau[j];
        kern[j].resize(2 * t + 1);
        lam[j].resize(2 * t + 1);
        for (int m = -t; m <= t; ++m) {
            const cplx d = w[j] - static_cast<double>(m);
            cplx k = sinc1(d);
            if (spec.kernel_power == 2) k *= k;
            kern[j][m + t] = narrow<T>(k);
            lam[j][m + t] = narrow<T>(d * (scale / s.sigma()[j]));
        }
    }

    std::vector<std::span<const cplx>> values;
    for (auto mask : spec.masks) values.push_back(s.channel_values(MultiIndex::from_mask(mask, n)));

    const std::size_t full = std::size_t{1} << n;
    std::vector<T> lamprod(full);
    Accumulator<T> acc;
    double mass = 0.0;

    auto m = first_node(tau);
    std::size_t idx = 0;
    do {
        const bool skip = spec.skip_inside && spec.skip_inside->contains(m);
        if (!skip) {
            T kernel = 1.0;
            for (std::size_t j = 0; j < n; ++j) kernel *= kern[j][m[j] + tau[j]];
            lamprod[0] = 1.0;
            for (std::size_t mask = 1; mask < full; ++mask) {
                const int low = std::countr_zero(static_cast<unsigned>(mask));
                lamprod[mask] = lamprod[mask & (mask - 1)] * lam[low][m[low] + tau[low]];
            }
            T poly = 0.0;
            for (std::size_t c = 0; c < spec.masks.size(); ++c) {
                poly += narrow<T>(values[c][idx]) * lamprod[spec.masks[c]];
            }
            const T term = poly * kernel;
            acc.add(term);
            mass += std::abs(term);
        }
        ++idx;
    } while (next_node(m, tau));
    return {cplx(acc.value()), mass};
}

inline SeriesResult run_series(const SampleSet& s, const ComplexPoint& z, const SeriesSpec& spec) {
    if (z.dim() != s.dim()) throw DimensionError("query point dimension does not match the sample set");
    const auto w = lattice_units(z, s.sigma(), s.theta());
    const bool real = s.kind() == ValueKind::real &&
                      std::all_of(w.begin(), w.end(), [](const cplx& c) { return c.imag() == 0.0; });
    return real ? sum_series<double>(s, w, spec) : sum_series<cplx>(s, w, spec);
}

inline void require_channel(const SampleSet& s, const MultiIndex& k) {
    if (!s.has_channel(k)) throw MissingChannelError("missing channel k = " + k.str());
    if (s.channel_complete(k)) return;
    if (auto miss = s.first_missing(k)) {
        std::string where;
        for (int v : *miss) where += (where.empty() ? "" : ",") + std::to_string(v);
        throw MissingChannelError("channel k = " + k.str() + " lacks node m = (" + where + ")");
    }
}

inline void require_hermite_lattice(const SampleSet& s, const char* who) {
    if (s.theta() != Spacing::hermite) {
        throw WrongLatticeError(std::string(who) + ": needs the theta = 2 lattice");
    }
}

inline SeriesSpec hermite_nd_spec(const SampleSet& s, const std::optional<MultiIndex>& drop) {
    require_hermite_lattice(s, "hermite-nd");
    if (drop && drop->dim() != s.dim()) throw DimensionError("hermite-nd: drop_channel dimension mismatch");
    SeriesSpec spec;
    for (const auto& k : enum_multi_indices(s.dim())) {
        if (drop && k == *drop) continue;
        require_channel(s, k);
        spec.masks.push_back(k.mask());
    }
    return spec;
}

} // namespace detail

/// Classical cardinal series on the Nyquist lattice (theta = 1, k = 0 only).
inline cplx wks_eval(const SampleSet& s, const ComplexPoint& z) {
    if (s.theta() != Spacing::nyquist) throw WrongLatticeError("wks: needs the theta = 1 lattice");
    const auto zero = MultiIndex::zero(s.dim());
    for (const auto& k : s.channels()) {
        if (k != zero) throw MissingChannelError("wks: unexpected channel k = " + k.str());
    }
    detail::require_channel(s, zero);
    return detail::run_series(s, z, {1, {0u}, std::nullopt}).value;
}

/// One-variable value-and-derivative series.
inline cplx hermite1_eval(const SampleSet& s, cplx z) {
    if (s.dim() != 1) throw DimensionError("hermite1: needs a one-dimensional sample set");
    detail::require_hermite_lattice(s, "hermite1");
    detail::require_channel(s, MultiIndex{0});
    detail::require_channel(s, MultiIndex{1});
    return detail::run_series(s, ComplexPoint{z}, {2, {0u, 1u}, std::nullopt}).value;
}

/// The n-dimensional series over all 2^n mixed first-order channels.
/// drop_channel removes one channel's polynomial from every node.
inline cplx hermite_nd_eval(const SampleSet& s, const ComplexPoint& z,
                            const std::optional<MultiIndex>& drop_channel = std::nullopt) {
    return detail::run_series(s, z, detail::hermite_nd_spec(s, drop_channel)).value;
}

/// The two-dimensional formula without the mixed channel; (1,1) records are ignored.
inline cplx legacy2d_eval(const SampleSet& s, const ComplexPoint& z) {
    if (s.dim() != 2) throw DimensionError("legacy2d: needs a two-dimensional sample set");
    detail::require_hermite_lattice(s, "legacy2d");
    for (std::uint32_t mask : {0u, 1u, 2u}) detail::require_channel(s, MultiIndex::from_mask(mask, 2));
    return detail::run_series(s, z, {2, {0u, 1u, 2u}, std::nullopt}).value;
}

struct SeriesMass {
    double total = 0.0; // sum of |term| over the window
    double tail = 0.0;  // same, over nodes outside `inner`
};

/// Absolute term mass of the hermite-nd series at z.
inline SeriesMass hermite_nd_abs_mass(const SampleSet& s, const ComplexPoint& z, const TruncationWindow& inner) {
    auto spec = detail::hermite_nd_spec(s, std::nullopt);
    const double total = detail::run_series(s, z, spec).abs_mass;
    spec.skip_inside = inner;
    return {total, detail::run_series(s, z, spec).abs_mass};
}

inline cplx evaluate(const SampleSet& s, Method method, const ComplexPoint& z) {
    switch (method) {
        case Method::wks: return wks_eval(s, z);
        case Method::hermite1:
            if (z.dim() != 1) throw DimensionError("hermite1: query must be one-dimensional");
            return hermite1_eval(s, z[0]);
        case Method::hermite_nd: return hermite_nd_eval(s, z);
        case Method::legacy2d: return legacy2d_eval(s, z);
    }
    throw DomainError("unknown method");
}

/// Tensor grid given as one coordinate list per axis.
using Grid = std::vector<std::vector<double>>;

inline std::size_t grid_size(const Grid& grid) {
    std::size_t n = 1;
    for (const auto& axis : grid) n *= axis.size();
    return grid.empty() ? 0 : n;
}

/// Grid point at row-major position idx (first axis slowest).
inline std::vector<double> grid_point(const Grid& grid, std::size_t idx) {
    std::vector<double> x(grid.size());
    for (std::size_t j = grid.size(); j-- > 0;) {
        x[j] = grid[j][idx % grid[j].size()];
        idx /= grid[j].size();
    }
    return x;
}

/// Evaluates the chosen series at every grid point, row-major. Threads split
/// the grid, never a sum, so results do not depend on `threads`.
inline std::vector<cplx> reconstruct_grid(const SampleSet& s, Method method, const Grid& grid,
                                          unsigned threads = 1) {
    if (grid.size() != s.dim()) throw DimensionError("reconstruct_grid: grid axes do not match the sample set");
    if (grid_size(grid) == 0) throw ShapeError("reconstruct_grid: empty grid");
    // surface precondition errors before any worker starts
    (void)evaluate(s, method, ComplexPoint(grid_point(grid, 0)));

    const std::size_t total = grid_size(grid);
    std::vector<cplx> out(total);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total)));
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = evaluate(s, method, ComplexPoint(grid_point(grid, i)));
    };
    if (threads == 1) {
        work(0, total);
        return out;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (total + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t b = t * chunk;
            const std::size_t e = std::min(total, b + chunk);
            if (b >= e) break;
            pool.emplace_back([&, t, b, e] {
                try {
                    work(b, e);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    return out;
}

} // namespace bsamp
