#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "bsamp/bounds.hpp"
#include "bsamp/corpus.hpp"
#include "oracles.hpp"

using namespace bsamp;

namespace {

constexpr double pi = std::numbers::pi;

struct Family {
    std::string label;
    CorpusFunction f;
};

std::vector<Family> families() {
    return {
        {"sinc-sq 1d", make_sinc_sq_product(Bandwidth{pi})},
        {"sinc-sq 2d", make_sinc_sq_product(Bandwidth{pi, 2.3})},
        {"shifted 1d", make_shifted_sinc(Bandwidth{1.7}, {0.4})},
        {"shifted 2d", make_shifted_sinc(Bandwidth{pi, pi}, {0.3, -0.8})},
        {"counterexample 1d", make_counterexample(Bandwidth{pi})},
        {"counterexample 2d", make_counterexample(Bandwidth{pi, 2.0})},
        {"tilde-f 00", make_tilde_f(Bandwidth{pi, pi}, MultiIndex{0, 0})},
        {"tilde-f 10", make_tilde_f(Bandwidth{pi, pi}, MultiIndex{1, 0})},
        {"tilde-f 01 narrow", make_tilde_f(Bandwidth{pi, 1.5}, MultiIndex{0, 1}, 0.6)},
    };
}

double real_part(const CorpusFunction& f, const std::vector<double>& x) { return f(ComplexPoint(x)).real(); }

} // namespace

TEST(Corpus, FiniteDifferenceConsistency) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> d(-6.0, 6.0);
    const double h = 1e-4;
    for (const auto& [label, f] : families()) {
        const std::size_t n = f.dim();
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> x(n);
            for (auto& v : x) v = d(rng);
            for (const auto& k : enum_multi_indices(n)) {
                if (k.is_zero()) continue;
                const double exact = f.partial(k, ComplexPoint(x)).real();
                const double fd = oracle::mixed_difference(
                    [&](const std::vector<double>& y) { return real_part(f, y); }, x, k.mask(), h);
                EXPECT_LE(std::fabs(fd - exact), 1e-6 * (1.0 + std::fabs(exact)))
                    << label << " k=" << k.str() << " x0=" << x[0];
            }
        }
    }
}

TEST(Corpus, SupNormRespected) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-20.0, 20.0);
    for (const auto& [label, f] : families()) {
        if (!f.sup_norm()) continue;
        for (int trial = 0; trial < 2000; ++trial) {
            std::vector<double> x(f.dim());
            for (auto& v : x) v = d(rng);
            EXPECT_LE(std::abs(f(ComplexPoint(x))), *f.sup_norm() * (1 + 1e-12)) << label;
        }
    }
}

TEST(Corpus, SincSquaredExamples) {
    const auto f1 = make_sinc_sq_product(Bandwidth{pi});
    EXPECT_EQ(f1(ComplexPoint{0.0}), cplx(1.0));
    EXPECT_NEAR(f1(ComplexPoint{1.0}).real(), 4.0 / (pi * pi), 1e-15);
    EXPECT_EQ(f1.p_membership(), (std::vector<double>{1.0, 2.0}));

    const auto f2 = make_sinc_sq_product(Bandwidth{pi, pi});
    EXPECT_EQ(f2(ComplexPoint{0.0, 0.0}), cplx(1.0));
    EXPECT_EQ(f2.partial(MultiIndex{1, 1}, ComplexPoint{0.0, 0.0}), cplx(0.0));
    EXPECT_EQ(f2.family(), "sinc-sq-product");
}

TEST(Corpus, ShiftedSincExamples) {
    const auto f = make_shifted_sinc(Bandwidth{pi, pi}, {0.0, 0.0});
    EXPECT_NEAR(f(ComplexPoint{0.5, 0.0}).real(), 2.0 / pi, 1e-15);
    const auto g = make_shifted_sinc(Bandwidth{2.5, 0.9}, {0.4, -1.1});
    EXPECT_EQ(g(ComplexPoint{0.4, -1.1}), cplx(1.0));
    for (int m = -5; m <= 5; ++m) {
        if (m == 0) continue;
        EXPECT_LE(std::abs(g(ComplexPoint{0.4 + pi / 2.5 * m, -1.1})), 1e-15);
    }
    EXPECT_EQ(g.p_membership(), std::vector<double>{2.0});
    EXPECT_THROW(make_shifted_sinc(Bandwidth{pi}, {0.0, 1.0}), DimensionError);
}

TEST(Corpus, BumpTransformAtOriginMatchesIndependentQuadrature) {
    // chî(0) per axis is a * int exp(-1/(1-v^2)) dv with a = sigma s / 2
    const double a = pi / 2.0;
    const long double ref = a * oracle::bump_integral([](long double) { return 1.0L; });
    detail::BumpTransform chi(a);
    const cplx v = chi(0.0, 0);
    EXPECT_GT(v.real(), 0.0);
    EXPECT_NEAR(v.real(), static_cast<double>(ref), 1e-12);

    // second-order moment for the second derivative
    const long double ref2 = -a * a * a * oracle::bump_integral([](long double t) { return t * t; });
    EXPECT_NEAR(chi(0.0, 2).real(), static_cast<double>(ref2), 1e-12);

    const double z = 1.3;
    const long double ref_z = a * oracle::bump_integral([&](long double t) { return std::cos(a * z * t); });
    EXPECT_NEAR(chi(z, 0).real(), static_cast<double>(ref_z), 1e-12);
}

TEST(Corpus, CounterexampleVanishesOnLattice) {
    const Bandwidth sigma{pi, pi};
    const auto f = make_counterexample(sigma);
    EXPECT_EQ(f.family(), "counterexample");
    for (int a = -4; a <= 4; ++a) {
        for (int b = -4; b <= 4; ++b) {
            const std::vector<int> m{a, b};
            const ComplexPoint u(lattice_coords(m, sigma, Spacing::hermite));
            for (const auto& k : enum_multi_indices(2)) {
                if (k == MultiIndex{1, 1}) continue;
                EXPECT_LE(std::abs(f.partial(k, u)), 1e-10) << k.str();
            }
        }
    }
    EXPECT_GT(std::abs(f(ComplexPoint{1.0, 1.0})), 1e-6);
}

TEST(Corpus, TildeFChannelExactness) {
    const Bandwidth sigma{pi, pi};
    for (const auto& kt : enum_multi_indices(2)) {
        const auto f = make_tilde_f(sigma, kt);
        for (int a = -3; a <= 3; ++a) {
            for (int b = -3; b <= 3; ++b) {
                const std::vector<int> m{a, b};
                const ComplexPoint u(lattice_coords(m, sigma, Spacing::hermite));
                for (const auto& k : enum_multi_indices(2)) {
                    if (k == kt) continue;
                    EXPECT_LE(std::abs(f.partial(k, u)), 1e-10) << "kt=" << kt.str() << " k=" << k.str();
                }
            }
        }
        EXPECT_GT(std::abs(f.partial(kt, ComplexPoint{0.0, 0.0})), 1e-6) << kt.str();
    }
}

TEST(Corpus, TildeFAllOnesIsCounterexample) {
    const Bandwidth sigma{pi, 2.0};
    const auto a = make_tilde_f(sigma, MultiIndex{1, 1});
    const auto b = make_counterexample(sigma);
    for (double x : {-2.1, 0.3, 1.7}) {
        for (const auto& k : enum_multi_indices(2)) {
            EXPECT_EQ(a.partial(k, ComplexPoint{x, 0.5 * x}), b.partial(k, ComplexPoint{x, 0.5 * x}));
        }
    }
}

TEST(Corpus, LiteralTildeFormLeavesStraySamples) {
    // without the derivative correction the k = 0 samples of an axis with
    // k~_j = 0 pick up chî' on the lattice
    const Bandwidth sigma{pi};
    const auto f = make_tilde_f(sigma, MultiIndex{0}, 1.0, TildeForm::literal);
    const std::vector<int> m{1};
    const ComplexPoint u(lattice_coords(m, sigma, Spacing::hermite));
    EXPECT_GT(std::abs(f.partial(MultiIndex{1}, u)), 1e-3);
}

TEST(Corpus, SharpnessGuard) {
    EXPECT_THROW(make_counterexample(Bandwidth{pi}, 0.0), DomainError);
    EXPECT_THROW(make_counterexample(Bandwidth{pi}, -1.0), DomainError);
    // sharpness above 1 clamps to 1
    const auto a = make_counterexample(Bandwidth{pi}, 5.0);
    const auto b = make_counterexample(Bandwidth{pi}, 1.0);
    EXPECT_EQ(a(ComplexPoint{0.7}), b(ComplexPoint{0.7}));
    EXPECT_THROW(make_tilde_f(Bandwidth{pi, pi}, MultiIndex{1}), DimensionError);
}

TEST(Normalize, IdentityAtPi) {
    const auto f = make_sinc_sq_product(Bandwidth{pi, pi});
    const auto g = normalize_to_pi(f);
    for (double x : {-1.3, 0.0, 0.25, 4.0}) {
        const ComplexPoint z{x, 1.0 - x};
        for (const auto& k : enum_multi_indices(2)) EXPECT_EQ(g.partial(k, z), f.partial(k, z));
    }
    EXPECT_EQ(*g.sup_norm(), 1.0);
}

TEST(Normalize, ScalesByTheta) {
    const auto f = make_sinc_sq_product(Bandwidth{2 * pi});
    const auto g = normalize_to_pi(f);
    EXPECT_DOUBLE_EQ(g.sigma()[0], pi);
    EXPECT_DOUBLE_EQ(g(ComplexPoint{1.0}).real(), 2.0 * f(ComplexPoint{0.5}).real());
    EXPECT_DOUBLE_EQ(*g.sup_norm(), 2.0);
}

TEST(Normalize, ChainRuleByFiniteDifferences) {
    const double h = 1e-5;
    for (const auto& f : {make_sinc_sq_product(Bandwidth{2.0 * pi}), make_shifted_sinc(Bandwidth{0.8}, {0.2})}) {
        const auto g = normalize_to_pi(f);
        for (double x : {-2.2, -0.4, 0.9, 3.3}) {
            const double fd = (g(ComplexPoint{x + h}).real() - g(ComplexPoint{x - h}).real()) / (2 * h);
            const double exact = g.partial(MultiIndex{1}, ComplexPoint{x}).real();
            EXPECT_NEAR(fd, exact, 1e-8 * (1 + std::fabs(exact)));
        }
    }
}

TEST(Corpus, GrowthBoundAfterNormalization) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> re(-6.0, 6.0), im(-3.0, 3.0);
    for (const auto& f : {make_sinc_sq_product(Bandwidth{pi, 1.2}), make_shifted_sinc(Bandwidth{2.0, pi}, {0.5, 0.0})}) {
        const auto g = normalize_to_pi(f);
        // sup estimated on a dense real grid, with slack
        double sup = 0.0;
        for (double a = -8.0; a <= 8.0; a += 0.05) {
            for (double b = -8.0; b <= 8.0; b += 0.05) sup = std::max(sup, std::abs(g(ComplexPoint{a, b})));
        }
        EXPECT_LE(sup, *g.sup_norm() * (1 + 1e-12));
        sup *= 1 + 1e-3;
        for (int trial = 0; trial < 200; ++trial) {
            const ComplexPoint z{cplx(re(rng), im(rng)), cplx(re(rng), im(rng))};
            const double bound = sup * std::exp(pi * (std::fabs(z[0].imag()) + std::fabs(z[1].imag())));
            EXPECT_LE(std::abs(g(z)), bound);
            EXPECT_TRUE(growth_check(g, z).pass);
        }
    }
}

TEST(Corpus, SampleNormsAreCauchy) {
    // l^1 partial sums of every channel on both lattices. Every theta = 2 node
    // is a zero of sinc^2 except the origin, so theta = 1 (nodes m pi / sigma)
    // carries the nontrivial case; its 1/m^2 tail needs tau >= 128 per axis
    // (512 in two dimensions, where the increment doubles) to get the
    // doubling increment under 1e-3 of the total.
    auto l1 = [](const CorpusFunction& f, const MultiIndex& k, Spacing th, int tau) {
        double acc = 0.0;
        for (const auto& m : enum_window(TruncationWindow::uniform(f.dim(), tau))) {
            acc += std::abs(f.partial(k, ComplexPoint(lattice_coords(m, f.sigma(), th))));
        }
        return acc;
    };
    const auto f1 = make_sinc_sq_product(Bandwidth{pi});
    const auto f2 = make_sinc_sq_product(Bandwidth{pi, pi});
    for (auto th : {Spacing::nyquist, Spacing::hermite}) {
        for (const auto& k : enum_multi_indices(1)) {
            const int tau = th == Spacing::nyquist ? 128 : 64;
            const double a = l1(f1, k, th, tau);
            const double b = l1(f1, k, th, 2 * tau);
            EXPECT_LE(b - a, 1e-3 * b + 1e-14) << "n=1 theta=" << to_int(th) << " k=" << k.str();
        }
        for (const auto& k : enum_multi_indices(2)) {
            // the family is separable, so the 2-D sum over a square window is
            // the product of the axis sums; checked directly at tau = 64
            auto sep = [&](int tau) {
                return l1(f1, MultiIndex{k[0]}, th, tau) * l1(f1, MultiIndex{k[1]}, th, tau);
            };
            const double direct = l1(f2, k, th, 64);
            EXPECT_NEAR(direct, sep(64), 1e-12 * (1 + direct));
            const int tau = th == Spacing::nyquist ? 512 : 64;
            const double a = sep(tau);
            const double b = sep(2 * tau);
            EXPECT_LE(b - a, 1e-3 * b + 1e-14) << "n=2 theta=" << to_int(th) << " k=" << k.str();
            if (th == Spacing::nyquist) {
                EXPECT_GT(b, 0.1);
            }
        }
    }
    // the same through lp_sample_norm on a stored set
    const auto small = sample_function(f1, Spacing::hermite, TruncationWindow{128}, {MultiIndex{0}});
    const auto big = sample_function(f1, Spacing::hermite, TruncationWindow{256}, {MultiIndex{0}});
    const double a = lp_sample_norm(small, MultiIndex{0}, 1.0);
    const double b = lp_sample_norm(big, MultiIndex{0}, 1.0);
    EXPECT_LT(b - a, 1e-3 * b);
}

TEST(Sampling, SingleNode) {
    const auto f = make_sinc_sq_product(Bandwidth{pi});
    const auto s = sample_function(f, Spacing::hermite, TruncationWindow{0}, enum_multi_indices(1));
    EXPECT_EQ(s.size(), 2u);
    const std::vector<int> m0{0};
    EXPECT_EQ(*s.get(MultiIndex{0}, m0), cplx(1.0));
    EXPECT_EQ(*s.get(MultiIndex{1}, m0), cplx(0.0));
    EXPECT_EQ(s.p(), 1.0);
}

TEST(Sampling, CounterexampleSamplesVanish) {
    const auto f = make_counterexample(Bandwidth{pi, pi});
    const auto s = sample_function(f, Spacing::hermite, TruncationWindow{5, 5}, enum_multi_indices(2));
    s.for_each([](const MultiIndex& k, std::span<const int>, cplx v) {
        if (k != MultiIndex{1, 1}) {
            EXPECT_LE(std::abs(v), 1e-10);
        }
    });
}

TEST(Sampling, RecordCount) {
    const auto f = make_shifted_sinc(Bandwidth{pi, 2.0, 1.0}, {0.0, 0.1, 0.2});
    const auto s = sample_function(f, Spacing::hermite, TruncationWindow{2, 1, 0}, enum_multi_indices(3));
    EXPECT_EQ(s.size(), 8u * 5u * 3u * 1u);
    EXPECT_EQ(s.theta(), Spacing::hermite);
    EXPECT_EQ(s.p(), 2.0);
}

TEST(Sampling, Errors) {
    const auto f = make_sinc_sq_product(Bandwidth{pi, pi});
    EXPECT_THROW(sample_function(f, Spacing::hermite, TruncationWindow{1, 1}, {}), DomainError);
    EXPECT_THROW(sample_function(f, Spacing::nyquist, TruncationWindow{1, 1}, {MultiIndex{1, 0}}), DomainError);
    EXPECT_THROW(sample_function(f, Spacing::hermite, TruncationWindow{1}, {MultiIndex{0, 0}}), DimensionError);
    EXPECT_NO_THROW(sample_function(f, Spacing::nyquist, TruncationWindow{1, 1}, {MultiIndex{0, 0}}));
}

TEST(Corpus, ConcurrentEvaluationIsIdentical) {
    const auto f = make_counterexample(Bandwidth{pi, 2.0});
    std::vector<ComplexPoint> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(ComplexPoint{0.37 * i - 7.0, 0.11 * i});
    // serial reference from a fresh function so the memo table starts cold
    const auto ref_f = make_counterexample(Bandwidth{pi, 2.0});
    std::vector<cplx> ref;
    for (const auto& z : pts) ref.push_back(ref_f.partial(MultiIndex{1, 0}, z));

    std::vector<std::vector<cplx>> got(4, std::vector<cplx>(pts.size()));
    {
        std::vector<std::jthread> pool;
        for (int t = 0; t < 4; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    const std::size_t j = (i + 7 * t) % pts.size();
                    got[t][j] = f.partial(MultiIndex{1, 0}, pts[j]);
                }
            });
        }
    }
    for (const auto& row : got) {
        for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(row[i], ref[i]);
    }
}
