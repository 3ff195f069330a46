#pragma once

// Multi-indices of {0,1}^n, bandwidth vectors, truncation windows and the
// sampling lattices (theta pi / sigma) Z^n.

#include <algorithm>
#include <bit>
#include <cmath>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsamp/errors.hpp"
#include "bsamp/kernels.hpp"

namespace bsamp {

inline constexpr std::size_t max_dim = 16;

/// An element k of {0,1}^n selecting the mixed partial d^k. Bit j of mask()
/// is axis j+1.
class MultiIndex {
public:
    MultiIndex() = default;

    MultiIndex(std::initializer_list<int> bits) : MultiIndex(std::vector<int>(bits)) {}

    explicit MultiIndex(const std::vector<int>& bits) : dim_(bits.size()) {
        check_dim(dim_);
        for (std::size_t j = 0; j < bits.size(); ++j) {
            if (bits[j] != 0 && bits[j] != 1) throw DomainError("MultiIndex: entries must be 0 or 1");
            if (bits[j]) mask_ |= 1u << j;
        }
    }

    static MultiIndex from_mask(std::uint32_t mask, std::size_t n) {
        check_dim(n);
        if (n < 32 && (mask >> n) != 0) throw DomainError("MultiIndex: mask has bits beyond dimension");
        MultiIndex k;
        k.dim_ = n;
        k.mask_ = mask;
        return k;
    }

    static MultiIndex zero(std::size_t n) { return from_mask(0, n); }
    static MultiIndex ones(std::size_t n) { return from_mask((1u << n) - 1u, n); }

    /// Parses the n-character 0/1 string, axis 1 first ("10" is (1,0)).
    static MultiIndex parse(std::string_view bits) {
        std::vector<int> v;
        for (char c : bits) {
            if (c != '0' && c != '1') throw DomainError("MultiIndex: bad bit string '" + std::string(bits) + "'");
            v.push_back(c - '0');
        }
        return MultiIndex(v);
    }

    std::size_t dim() const noexcept { return dim_; }
    std::uint32_t mask() const noexcept { return mask_; }
    int operator[](std::size_t j) const noexcept { return static_cast<int>((mask_ >> j) & 1u); }
    int order() const noexcept { return std::popcount(mask_); }
    bool is_zero() const noexcept { return mask_ == 0; }

    MultiIndex complement() const { return from_mask(~mask_ & ((1u << dim_) - 1u), dim_); }

    std::string str() const {
        std::string s;
        for (std::size_t j = 0; j < dim_; ++j) s.push_back((*this)[j] ? '1' : '0');
        return s;
    }

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) {
        if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
        return a.mask_ <=> b.mask_;
    }

private:
    static void check_dim(std::size_t n) {
        if (n < 1 || n > max_dim) throw DimensionError("dimension must be in [1, 16], got " + std::to_string(n));
    }

    std::size_t dim_ = 0;
    std::uint32_t mask_ = 0;
};

/// All 2^n elements of {0,1}^n in binary-counting order (axis 1 least significant).
inline std::vector<MultiIndex> enum_multi_indices(std::size_t n) {
    if (n < 1 || n > max_dim) throw DimensionError("enum_multi_indices: n must be in [1, 16], got " + std::to_string(n));
    std::vector<MultiIndex> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint32_t m = 0; m < (1u << n); ++m) out.push_back(MultiIndex::from_mask(m, n));
    return out;
}

/// Per-axis bandwidth sigma, every entry positive and finite.
class Bandwidth {
public:
    Bandwidth(std::initializer_list<double> s) : Bandwidth(std::vector<double>(s)) {}

    explicit Bandwidth(std::vector<double> s) : sigma_(std::move(s)) {
        if (sigma_.empty() || sigma_.size() > max_dim) throw DimensionError("Bandwidth: dimension must be in [1, 16]");
        for (double v : sigma_) {
            if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("Bandwidth: sigma_j must be positive and finite");
        }
    }

    static Bandwidth uniform(std::size_t n, double s) { return Bandwidth(std::vector<double>(n, s)); }

    std::size_t dim() const noexcept { return sigma_.size(); }
    double operator[](std::size_t j) const noexcept { return sigma_[j]; }
    std::span<const double> values() const noexcept { return sigma_; }

    friend bool operator==(const Bandwidth&, const Bandwidth&) = default;

private:
    std::vector<double> sigma_;
};

/// Per-axis node-index radius: the window is { m in Z^n : |m_j| <= tau_j }.
class TruncationWindow {
public:
    static constexpr std::int64_t max_cardinality = std::int64_t{1} << 31;

    TruncationWindow(std::initializer_list<int> t) : TruncationWindow(std::vector<int>(t)) {}

    explicit TruncationWindow(std::vector<int> t) : tau_(std::move(t)) {
        if (tau_.empty() || tau_.size() > max_dim) throw DimensionError("TruncationWindow: dimension must be in [1, 16]");
        for (int v : tau_) {
            if (v < 0) throw DomainError("TruncationWindow: tau_j must be nonnegative");
        }
    }

    static TruncationWindow uniform(std::size_t n, int t) { return TruncationWindow(std::vector<int>(n, t)); }

    std::size_t dim() const noexcept { return tau_.size(); }
    int operator[](std::size_t j) const noexcept { return tau_[j]; }
    std::span<const int> values() const noexcept { return tau_; }

    /// prod_j (2 tau_j + 1); WindowError beyond 2^31.
    std::size_t cardinality() const {
        std::int64_t c = 1;
        for (int v : tau_) {
            c *= 2 * std::int64_t{v} + 1;
            if (c > max_cardinality) throw WindowError("truncation window has more than 2^31 nodes");
        }
        return static_cast<std::size_t>(c);
    }

    bool contains(std::span<const int> m) const noexcept {
        if (m.size() != tau_.size()) return false;
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (m[j] < -tau_[j] || m[j] > tau_[j]) return false;
        }
        return true;
    }

    /// True when this window fits inside `outer` axis by axis.
    bool within(const TruncationWindow& outer) const noexcept {
        if (outer.dim() != dim()) return false;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (tau_[j] > outer[j]) return false;
        }
        return true;
    }

    /// Position of m in lexicographic order (m_1 slowest). m must be inside.
    std::size_t linear_index(std::span<const int> m) const noexcept {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < tau_.size(); ++j) {
            idx = idx * static_cast<std::size_t>(2 * tau_[j] + 1) + static_cast<std::size_t>(m[j] + tau_[j]);
        }
        return idx;
    }

    std::vector<int> node(std::size_t index) const {
        std::vector<int> m(tau_.size());
        for (std::size_t j = tau_.size(); j-- > 0;) {
            const auto w = static_cast<std::size_t>(2 * tau_[j] + 1);
            m[j] = static_cast<int>(index % w) - tau_[j];
            index /= w;
        }
        return m;
    }

    friend bool operator==(const TruncationWindow&, const TruncationWindow&) = default;

private:
    std::vector<int> tau_;
};

/// Advances m to its lexicographic successor inside the window; false after the last node.
inline bool next_node(std::vector<int>& m, const TruncationWindow& tau) {
    for (std::size_t j = m.size(); j-- > 0;) {
        if (m[j] < tau[j]) {
            ++m[j];
            return true;
        }
        m[j] = -tau[j];
    }
    return false;
}

inline std::vector<int> first_node(const TruncationWindow& tau) {
    std::vector<int> m(tau.dim());
    for (std::size_t j = 0; j < tau.dim(); ++j) m[j] = -tau[j];
    return m;
}

/// Every m with |m_j| <= tau_j, lexicographic by (m_1, ..., m_n).
inline std::vector<std::vector<int>> enum_window(const TruncationWindow& tau) {
    std::vector<std::vector<int>> out;
    out.reserve(tau.cardinality());
    auto m = first_node(tau);
    do {
        out.push_back(m);
    } while (next_node(m, tau));
    return out;
}

/// Lattice spacing factor theta: nodes at theta pi m / sigma.
enum class Spacing : int { nyquist = 1, hermite = 2 };

inline Spacing spacing_from_int(int theta) {
    if (theta == 1) return Spacing::nyquist;
    if (theta == 2) return Spacing::hermite;
    throw DomainError("spacing theta must be 1 or 2, got " + std::to_string(theta));
}

inline int to_int(Spacing s) noexcept { return static_cast<int>(s); }

inline std::vector<double> lattice_coords(std::span<const int> m, const Bandwidth& sigma, Spacing theta) {
    if (m.size() != sigma.dim()) throw DimensionError("lattice_coords: length mismatch");
    const double scale = to_int(theta) * detail::pi;
    std::vector<double> u(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) u[j] = scale * m[j] / sigma[j];
    return u;
}

/// z in lattice units, w_j = sigma_j z_j / (theta pi). Real parts within a few
/// ulp of an integer are snapped onto it so that queries built from
/// lattice_coords() hit nodes exactly.
inline std::vector<cplx> lattice_units(const ComplexPoint& z, const Bandwidth& sigma, Spacing theta) {
    if (z.dim() != sigma.dim()) throw DimensionError("lattice_units: length mismatch");
    const double scale = to_int(theta) * detail::pi;
    std::vector<cplx> w(z.dim());
    for (std::size_t j = 0; j < z.dim(); ++j) {
        double re = z[j].real() * sigma[j] / scale;
        const double near = std::nearbyint(re);
        if (std::fabs(re - near) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(near))) {
            re = near;
        }
        w[j] = {re, z[j].imag() * sigma[j] / scale};
    }
    return w;
}

} // namespace bsamp
