#pragma once

// Bandlimited test functions with exact (closed-form or quadrature-backed)
// mixed partials, used as reconstruction oracles.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bsamp/errors.hpp"
#include "bsamp/kernels.hpp"
#include "bsamp/lattice.hpp"
#include "bsamp/quadrature.hpp"
#include "bsamp/sample_set.hpp"

namespace bsamp {

/// An entire function of exponential type with known spectrum box and a rule
/// for every d^k f, k in {0,1}^n, at real or complex points.
class CorpusFunction {
public:
    class Evaluator {
    public:
        virtual ~Evaluator() = default;
        virtual cplx partial(const MultiIndex& k, const ComplexPoint& z) const = 0;
    };

    CorpusFunction(std::string family, Bandwidth sigma, std::vector<double> p_membership,
                   std::optional<double> sup_norm, std::shared_ptr<const Evaluator> eval)
        : family_(std::move(family)), sigma_(std::move(sigma)), p_(std::move(p_membership)),
          sup_norm_(sup_norm), eval_(std::move(eval)) {
        if (p_.empty()) throw DomainError("CorpusFunction: empty p_membership");
        std::sort(p_.begin(), p_.end());
    }

    const std::string& family() const noexcept { return family_; }
    std::size_t dim() const noexcept { return sigma_.dim(); }
    const Bandwidth& sigma() const noexcept { return sigma_; }
    const std::vector<double>& p_membership() const noexcept { return p_; }
    double smallest_p() const noexcept { return p_.front(); }
    const std::optional<double>& sup_norm() const noexcept { return sup_norm_; }

    cplx partial(const MultiIndex& k, const ComplexPoint& z) const {
        if (k.dim() != dim() || z.dim() != dim()) throw DimensionError("CorpusFunction: dimension mismatch");
        return eval_->partial(k, z);
    }

    cplx operator()(const ComplexPoint& z) const { return partial(MultiIndex::zero(dim()), z); }

private:
    std::string family_;
    Bandwidth sigma_;
    std::vector<double> p_;
    std::optional<double> sup_norm_;
    std::shared_ptr<const Evaluator> eval_;
};

namespace detail {

// One-variable factor: returns h(z) for order 0 and h'(z) for order 1.
using AxisFactor = std::function<cplx(cplx, int)>;

class SeparableProduct final : public CorpusFunction::Evaluator {
public:
    explicit SeparableProduct(std::vector<AxisFactor> axes) : axes_(std::move(axes)) {}

    cplx partial(const MultiIndex& k, const ComplexPoint& z) const override {
        cplx out = 1.0;
        for (std::size_t j = 0; j < axes_.size(); ++j) out *= axes_[j](z[j], k[j]);
        return out;
    }

private:
    std::vector<AxisFactor> axes_;
};

// spherical Bessel j1(x) = (sin x / x - cos x) / x, by series near 0
template <class T>
T j1_series(T x) {
    const T q = -x * x / 2.0;
    T term = 1.0 / 3.0;
    T sum = term;
    for (int k = 1; k < 12; ++k) {
        term *= q / (static_cast<double>(k) * (2.0 * k + 3.0));
        sum += term;
    }
    return x * sum;
}

// d/dt sinc1(t) = -pi j1(pi t)
inline cplx sinc1_prime(cplx t) {
    const cplx x = pi * t;
    if (std::abs(x) < 0.5) return -pi * j1_series(x);
    return -pi * (sinc1(t) - cospi(t)) / x;
}

// Fourier transform of the one-axis bump phi(t) = exp(-1/(1 - (t/a)^2)), |t| < a,
// and its first two derivatives, memoized per (order, z).
class BumpTransform {
public:
    explicit BumpTransform(double half_width) : a_(half_width) {}

    // d^order/dz^order of int e^{-izt} phi(t) dt, order in {0, 1, 2}
    cplx operator()(cplx z, int order) const {
        const Key key{order, std::bit_cast<std::uint64_t>(z.real()), std::bit_cast<std::uint64_t>(z.imag())};
        {
            std::shared_lock lock(mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        const cplx v = compute(z, order);
        std::unique_lock lock(mutex_);
        memo_.emplace(key, v);
        return v;
    }

    double half_width() const noexcept { return a_; }

private:
    struct Key {
        int order;
        std::uint64_t re, im;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const noexcept {
            std::size_t h = std::hash<std::uint64_t>{}(k.re);
            h ^= std::hash<std::uint64_t>{}(k.im) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h ^ static_cast<std::size_t>(k.order);
        }
    };

    static double bump(double v) {
        const double d = 1.0 - v * v;
        return d > 0.0 ? std::exp(-1.0 / d) : 0.0;
    }

    // phi even: transform = a int cos(a z v) b(v) dv, derivative orders bring
    // (-i t)^order and keep only the even part of the integrand.
    cplx compute(cplx z, int order) const {
        const double a = a_;
        switch (order) {
            case 0:
                return a * quad::integrate([&](double v) { return std::cos(a * z * v) * bump(v); }, -1.0, 1.0);
            case 1:
                return -a * a * quad::integrate([&](double v) { return v * std::sin(a * z * v) * bump(v); }, -1.0, 1.0);
            case 2:
                return -a * a * a *
                       quad::integrate([&](double v) { return v * v * std::cos(a * z * v) * bump(v); }, -1.0, 1.0);
            default:
                throw DomainError("BumpTransform: order must be 0, 1 or 2");
        }
    }

    double a_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<Key, cplx, KeyHash> memo_;
};

inline double clamp_sharpness(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("bump_sharpness must be positive");
    return std::min(s, 1.0);
}

} // namespace detail

/// f(x) = prod_j sinc1(sigma_j x_j / (2 pi))^2, in B^1 of the box sigma.
inline CorpusFunction make_sinc_sq_product(const Bandwidth& sigma) {
    std::vector<detail::AxisFactor> axes;
    for (std::size_t j = 0; j < sigma.dim(); ++j) {
        const double s = sigma[j] / (2.0 * detail::pi);
        axes.emplace_back([s](cplx z, int order) -> cplx {
            const cplx t = s * z;
            const cplx c = sinc1(t);
            if (order == 0) return c * c;
            return s * 2.0 * c * detail::sinc1_prime(t);
        });
    }
    return {"sinc-sq-product", sigma, {1.0, 2.0}, 1.0, std::make_shared<detail::SeparableProduct>(std::move(axes))};
}

/// f(x) = prod_j sinc1(sigma_j (x_j - shift_j) / pi); in B^p for p > 1 only.
inline CorpusFunction make_shifted_sinc(const Bandwidth& sigma, const std::vector<double>& shift) {
    if (shift.size() != sigma.dim()) throw DimensionError("make_shifted_sinc: shift length mismatch");
    std::vector<detail::AxisFactor> axes;
    for (std::size_t j = 0; j < sigma.dim(); ++j) {
        const double s = sigma[j] / detail::pi;
        const double c = shift[j];
        axes.emplace_back([s, c](cplx z, int order) -> cplx {
            const cplx t = s * (z - c);
            if (order == 0) return sinc1(t);
            return s * detail::sinc1_prime(t);
        });
    }
    return {"shifted-sinc", sigma, {2.0}, 1.0, std::make_shared<detail::SeparableProduct>(std::move(axes))};
}

/// How the channel-exactness witness builds the axes where k~_j = 0.
enum class TildeForm {
    /// (sigma/2) chî cos(sigma z/2) - chî' sin(sigma z/2): derivative samples vanish on the lattice.
    corrected,
    /// (sigma/2) chî cos(sigma z/2) alone; leaves chî'(u) in the derivative samples.
    literal,
};

/// chî(z) times prod_j of sin(sigma_j z_j / 2) (axes with k~_j = 1) or its
/// cosine companion (axes with k~_j = 0), where chî is the Fourier transform
/// of the product bump supported in |t_j| < sigma_j s / 2. Every sampled
/// channel except k~ vanishes on (2 pi / sigma) Z^n.
inline CorpusFunction make_tilde_f(const Bandwidth& sigma, const MultiIndex& k_tilde, double bump_sharpness = 1.0,
                                   TildeForm form = TildeForm::corrected) {
    if (k_tilde.dim() != sigma.dim()) throw DimensionError("make_tilde_f: k_tilde dimension mismatch");
    const double s = detail::clamp_sharpness(bump_sharpness);
    std::vector<detail::AxisFactor> axes;
    for (std::size_t j = 0; j < sigma.dim(); ++j) {
        const double half = sigma[j] / 2.0;
        auto chi = std::make_shared<detail::BumpTransform>(sigma[j] * s / 2.0);
        // sin(sigma z / 2) and cos(sigma z / 2), exact zeros on the lattice
        auto sn = [half](cplx z) { return sinpi(half * z / detail::pi); };
        auto cs = [half](cplx z) { return cospi(half * z / detail::pi); };
        if (k_tilde[j] == 1) {
            axes.emplace_back([=](cplx z, int order) -> cplx {
                if (order == 0) return (*chi)(z, 0) * sn(z);
                return (*chi)(z, 1) * sn(z) + (*chi)(z, 0) * half * cs(z);
            });
        } else if (form == TildeForm::corrected) {
            axes.emplace_back([=](cplx z, int order) -> cplx {
                if (order == 0) return half * (*chi)(z, 0) * cs(z) - (*chi)(z, 1) * sn(z);
                return -(half * half * (*chi)(z, 0) + (*chi)(z, 2)) * sn(z);
            });
        } else {
            axes.emplace_back([=](cplx z, int order) -> cplx {
                if (order == 0) return half * (*chi)(z, 0) * cs(z);
                return half * ((*chi)(z, 1) * cs(z) - (*chi)(z, 0) * half * sn(z));
            });
        }
    }
    const std::string family = k_tilde == MultiIndex::ones(sigma.dim()) ? "counterexample" : "tilde-f";
    return {family, sigma, {1.0, 2.0}, std::nullopt, std::make_shared<detail::SeparableProduct>(std::move(axes))};
}

/// f(z) = chî(z) sic_n(sigma z): f and every first partial along a single axis
/// vanish on (2 pi / sigma) Z^n, yet f is not zero.
inline CorpusFunction make_counterexample(const Bandwidth& sigma, double bump_sharpness = 1.0) {
    return make_tilde_f(sigma, MultiIndex::ones(sigma.dim()), bump_sharpness);
}

namespace detail {

class Normalized final : public CorpusFunction::Evaluator {
public:
    Normalized(CorpusFunction inner, double theta) : inner_(std::move(inner)), theta_(theta) {}

    cplx partial(const MultiIndex& k, const ComplexPoint& z) const override {
        std::vector<cplx> w(z.dim());
        double chain = theta_;
        for (std::size_t j = 0; j < z.dim(); ++j) {
            const double r = pi / inner_.sigma()[j];
            w[j] = r * z[j];
            if (k[j]) chain *= r;
        }
        return chain * inner_.partial(k, ComplexPoint(std::move(w)));
    }

private:
    CorpusFunction inner_;
    double theta_;
};

} // namespace detail

/// g(z) = theta f(pi z / sigma), theta = (prod sigma_j / pi^n)^(1/p) with p the
/// smallest listed membership exponent; g is bandlimited to the box pi.
inline CorpusFunction normalize_to_pi(const CorpusFunction& f) {
    double prod = 1.0;
    for (double s : f.sigma().values()) prod *= s / detail::pi;
    const double theta = std::pow(prod, 1.0 / f.smallest_p());
    std::optional<double> sup;
    if (f.sup_norm()) sup = theta * *f.sup_norm();
    return {f.family(), Bandwidth::uniform(f.dim(), detail::pi), f.p_membership(), sup,
            std::make_shared<detail::Normalized>(f, theta)};
}

/// Evaluates d^k f at every node theta pi m / sigma of the window for each
/// requested k.
inline SampleSet sample_function(const CorpusFunction& f, Spacing theta, const TruncationWindow& tau,
                                 const std::vector<MultiIndex>& which_k) {
    if (which_k.empty()) throw DomainError("sample_function: no channels requested");
    if (tau.dim() != f.dim()) throw DimensionError("sample_function: window dimension mismatch");
    for (const auto& k : which_k) {
        if (k.dim() != f.dim()) throw DimensionError("sample_function: channel dimension mismatch");
        if (theta == Spacing::nyquist && !k.is_zero()) {
            throw DomainError("sample_function: theta = 1 requires which_k = {0}");
        }
    }
    SampleSet out(f.sigma(), theta, tau, f.smallest_p(), ValueKind::real);
    for (const auto& k : which_k) {
        auto m = first_node(tau);
        do {
            const auto u = lattice_coords(m, f.sigma(), theta);
            // corpus functions are real on R^n; drop round-off imaginary parts
            out.insert(k, m, f.partial(k, ComplexPoint(u)).real());
        } while (next_node(m, tau));
    }
    return out;
}

} // namespace bsamp
