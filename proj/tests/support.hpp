#pragma once

// Helpers shared by the suites that drive the library itself.

#include <vector>

#include "bsamp/bsamp.hpp"

namespace support {

using namespace bsamp;

/// Samples every channel of f on the lattice of `sigma`, which may be wider
/// than f's own band (so that the samples are not all trivially zero).
inline SampleSet sample_on(const CorpusFunction& f, const Bandwidth& sigma, const TruncationWindow& tau,
                           Spacing theta = Spacing::hermite) {
    SampleSet s(sigma, theta, tau, f.smallest_p(), ValueKind::real);
    const auto ks = theta == Spacing::hermite ? enum_multi_indices(f.dim())
                                              : std::vector<MultiIndex>{MultiIndex::zero(f.dim())};
    for (const auto& k : ks) {
        for (const auto& m : enum_window(tau)) {
            s.insert(k, m, f.partial(k, ComplexPoint(lattice_coords(m, sigma, theta))).real());
        }
    }
    return s;
}

/// n identical axes of `points` evenly spaced values on [a, b].
inline Grid uniform_grid(std::size_t n, double a, double b, int points) {
    std::vector<double> axis;
    for (int i = 0; i < points; ++i) axis.push_back(points == 1 ? a : a + (b - a) * i / (points - 1));
    return Grid(n, axis);
}

} // namespace support
