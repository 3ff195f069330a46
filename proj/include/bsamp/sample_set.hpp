#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsamp/errors.hpp"
#include "bsamp/kernels.hpp"
#include "bsamp/lattice.hpp"

namespace bsamp {

enum class ValueKind { real, complex };

/// Values d^k f(u) on a truncated lattice u = theta pi m / sigma, |m_j| <= tau_j,
/// keyed by (k, m). Channels are stored densely over the window and allocated on
/// first insert.
class SampleSet {
public:
    SampleSet(Bandwidth sigma, Spacing theta, TruncationWindow tau, double p, ValueKind kind)
        : sigma_(std::move(sigma)), theta_(theta), tau_(std::move(tau)), p_(p), kind_(kind) {
        if (sigma_.dim() != tau_.dim()) throw DimensionError("SampleSet: sigma and tau dimensions differ");
        if (!(p_ >= 1.0) || !std::isfinite(p_)) throw DomainError("SampleSet: p must be finite and >= 1");
        window_size_ = tau_.cardinality();
        channels_.resize(std::size_t{1} << dim());
    }

    std::size_t dim() const noexcept { return sigma_.dim(); }
    const Bandwidth& sigma() const noexcept { return sigma_; }
    Spacing theta() const noexcept { return theta_; }
    const TruncationWindow& tau() const noexcept { return tau_; }
    double p() const noexcept { return p_; }
    ValueKind kind() const noexcept { return kind_; }
    std::size_t window_size() const noexcept { return window_size_; }
    std::size_t size() const noexcept { return records_; }

    /// Adds the record (k, m) -> v. Rejects duplicates, out-of-window m,
    /// non-finite values, k != 0 on the Nyquist lattice and complex values in a
    /// real set.
    void insert(const MultiIndex& k, std::span<const int> m, cplx v) {
        if (k.dim() != dim() || m.size() != dim()) throw DimensionError("SampleSet: record dimension mismatch");
        if (!tau_.contains(m)) throw WindowError("SampleSet: node index outside the truncation window");
        if (theta_ == Spacing::nyquist && !k.is_zero()) {
            throw DomainError("SampleSet: theta = 1 sets admit only the k = 0 channel");
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("SampleSet: non-finite value");
        if (kind_ == ValueKind::real && v.imag() != 0.0) throw DomainError("SampleSet: complex value in a real set");
        auto& ch = channels_[k.mask()];
        if (ch.present.empty()) {
            ch.values.assign(window_size_, cplx{});
            ch.present.assign(window_size_, 0);
        }
        const std::size_t idx = tau_.linear_index(m);
        if (ch.present[idx]) throw DomainError("SampleSet: duplicate record " + k.str());
        ch.present[idx] = 1;
        ch.values[idx] = v;
        ++ch.count;
        ++records_;
    }

    std::optional<cplx> get(const MultiIndex& k, std::span<const int> m) const {
        if (k.dim() != dim() || !tau_.contains(m)) return std::nullopt;
        const auto& ch = channels_[k.mask()];
        if (ch.count == 0) return std::nullopt;
        const std::size_t idx = tau_.linear_index(m);
        if (!ch.present[idx]) return std::nullopt;
        return ch.values[idx];
    }

    bool has_channel(const MultiIndex& k) const { return k.dim() == dim() && channels_[k.mask()].count > 0; }

    bool channel_complete(const MultiIndex& k) const {
        return k.dim() == dim() && channels_[k.mask()].count == window_size_;
    }

    /// Channel values in window order; meaningful only where present.
    std::span<const cplx> channel_values(const MultiIndex& k) const { return channels_.at(k.mask()).values; }

    /// Presence flags of channel k in window order (empty when the channel is absent).
    std::span<const unsigned char> channel_presence(const MultiIndex& k) const {
        return channels_.at(k.mask()).present;
    }

    /// First window node missing from channel k, if any.
    std::optional<std::vector<int>> first_missing(const MultiIndex& k) const {
        const auto& ch = channels_.at(k.mask());
        for (std::size_t i = 0; i < window_size_; ++i) {
            if (ch.present.empty() || !ch.present[i]) return tau_.node(i);
        }
        return std::nullopt;
    }

    std::vector<MultiIndex> channels() const {
        std::vector<MultiIndex> out;
        for (std::uint32_t mask = 0; mask < channels_.size(); ++mask) {
            if (channels_[mask].count > 0) out.push_back(MultiIndex::from_mask(mask, dim()));
        }
        return out;
    }

    /// Visits records in canonical order: k in binary-counting order, then m lexicographic.
    template <class F>
    void for_each(F&& fn) const {
        for (std::uint32_t mask = 0; mask < channels_.size(); ++mask) {
            const auto& ch = channels_[mask];
            if (ch.count == 0) continue;
            const auto k = MultiIndex::from_mask(mask, dim());
            auto m = first_node(tau_);
            std::size_t idx = 0;
            do {
                if (ch.present[idx]) fn(k, std::span<const int>(m), ch.values[idx]);
                ++idx;
            } while (next_node(m, tau_));
        }
    }

    friend bool operator==(const SampleSet& a, const SampleSet& b) {
        if (!(a.sigma_ == b.sigma_ && a.theta_ == b.theta_ && a.tau_ == b.tau_ && a.p_ == b.p_ &&
              a.kind_ == b.kind_ && a.records_ == b.records_)) {
            return false;
        }
        for (std::size_t c = 0; c < a.channels_.size(); ++c) {
            const auto& x = a.channels_[c];
            const auto& y = b.channels_[c];
            if (x.count != y.count) return false;
            if (x.count == 0) continue;
            if (x.present != y.present) return false;
            for (std::size_t i = 0; i < a.window_size_; ++i) {
                if (x.present[i] && x.values[i] != y.values[i]) return false;
            }
        }
        return true;
    }

private:
    struct Channel {
        std::vector<cplx> values;
        std::vector<unsigned char> present;
        std::size_t count = 0;
    };

    Bandwidth sigma_;
    Spacing theta_;
    TruncationWindow tau_;
    double p_;
    ValueKind kind_;
    std::size_t window_size_ = 0;
    std::size_t records_ = 0;
    std::vector<Channel> channels_;
};

} // namespace bsamp
