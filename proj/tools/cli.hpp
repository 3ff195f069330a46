#pragma once

// Command-line front end. run() returns 0 on success, 1 on usage errors and 2
// on computation errors (including a failed kernel-check audit). Diagnostics
// go to `err`, data to files or `out`.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsamp/bsamp.hpp"

namespace bsamp::cli {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

inline double parse_number(const std::string& tok) {
    if (tok == "pi") return std::numbers::pi;
    if (tok == "-pi") return -std::numbers::pi;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw UsageError("bad number '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) throw UsageError("bad number '" + tok + "'");
    return v;
}

inline std::vector<double> parse_reals(const std::string& s) {
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(parse_number(t));
    return out;
}

inline std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (const auto& t : split(s, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            throw UsageError("bad integer '" + t + "'");
        }
        if (used != t.size()) throw UsageError("bad integer '" + t + "'");
        out.push_back(v);
    }
    return out;
}

/// One axis per comma-separated `start:stop:step` (or a single value). stop is
/// included when (stop - start) / step is integral within 1e-9.
inline Grid parse_grid(const std::string& s) {
    Grid grid;
    for (const auto& axis : split(s, ',')) {
        const auto parts = split(axis, ':');
        if (parts.size() == 1) {
            grid.push_back({parse_number(parts[0])});
            continue;
        }
        if (parts.size() != 3) throw UsageError("grid axis must be start:stop:step, got '" + axis + "'");
        const double a = parse_number(parts[0]);
        const double b = parse_number(parts[1]);
        const double h = parse_number(parts[2]);
        if (!(h > 0.0) || b < a) throw UsageError("grid axis needs step > 0 and stop >= start: '" + axis + "'");
        const double steps = (b - a) / h;
        const double rounded = std::round(steps);
        const bool integral = std::fabs(steps - rounded) <= 1e-9;
        const auto count = static_cast<std::size_t>(integral ? rounded : std::floor(steps)) + 1;
        if (count > 10'000'000) throw UsageError("grid axis too large: '" + axis + "'");
        std::vector<double> pts(count);
        for (std::size_t i = 0; i < count; ++i) pts[i] = a + static_cast<double>(i) * h;
        if (integral) pts.back() = b;
        grid.push_back(std::move(pts));
    }
    return grid;
}

inline Method method_arg(const std::string& s) {
    try {
        return parse_method(s);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

inline MultiIndex bits_arg(const std::string& s, const char* flag) {
    try {
        return MultiIndex::parse(s);
    } catch (const Error&) {
        throw UsageError(std::string(flag) + " must be a 0/1 string, got '" + s + "'");
    }
}

struct CorpusArgs {
    std::string name;
    std::string shift;
    std::string ktilde;
    double sharpness = 1.0;
};

inline CorpusFunction make_corpus(const CorpusArgs& a, const Bandwidth& sigma) {
    if (a.name == "sinc-sq-product") return make_sinc_sq_product(sigma);
    if (a.name == "shifted-sinc") {
        std::vector<double> shift(sigma.dim(), 0.0);
        if (!a.shift.empty()) shift = parse_reals(a.shift);
        if (shift.size() != sigma.dim()) throw UsageError("--shift needs one value per axis");
        return make_shifted_sinc(sigma, shift);
    }
    if (a.name == "counterexample") return make_counterexample(sigma, a.sharpness);
    if (a.name == "tilde-f") {
        if (a.ktilde.size() != sigma.dim()) throw UsageError("tilde-f needs --ktilde with one bit per axis");
        return make_tilde_f(sigma, bits_arg(a.ktilde, "--ktilde"), a.sharpness);
    }
    throw UsageError("unknown corpus '" + a.name + "' (sinc-sq-product, shifted-sinc, counterexample, tilde-f)");
}

inline void add_corpus_options(CLI::App* sub, CorpusArgs& a, bool required) {
    auto* opt = sub->add_option("--corpus", a.name, "sinc-sq-product | shifted-sinc | counterexample | tilde-f");
    if (required) opt->required();
    sub->add_option("--shift", a.shift, "shifted-sinc: comma-separated shift per axis (default 0)");
    sub->add_option("--ktilde", a.ktilde, "tilde-f: kept channel as a bit string, axis 1 first");
    sub->add_option("--sharpness", a.sharpness, "bump width fraction in (0, 1] (counterexample, tilde-f)");
}

inline SampleSet load_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return read_samples(in);
}

template <class Fn>
void with_output(const std::string& path, std::ostream& out, Fn&& fn) {
    if (path == "-") {
        fn(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot open '" + path + "' for writing");
    fn(file);
    file.close();
    if (!file) throw Error("write failure on '" + path + "'");
}

inline double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

inline std::vector<cplx> corpus_on_grid(const CorpusFunction& f, const Grid& grid) {
    std::vector<cplx> out(grid_size(grid));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(ComplexPoint(grid_point(grid, i)));
    return out;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bandlimited reconstruction from function and mixed-derivative samples", "bsamp"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    std::function<int()> action;

    // sample
    CorpusArgs s_corpus;
    std::string s_sigma, s_tau, s_out;
    int s_theta = 2;
    auto* sample = app.add_subcommand("sample", "Sample a corpus function on a truncated lattice into a DSAMP file");
    add_corpus_options(sample, s_corpus, true);
    sample->add_option("--sigma", s_sigma, "bandwidth per axis, e.g. pi,pi")->required();
    sample->add_option("--tau", s_tau, "window radius per axis, e.g. 32,32")->required();
    sample->add_option("--theta", s_theta, "lattice spacing factor: 1 (values only) or 2 (all mixed partials)");
    sample->add_option("--out", s_out, "output DSAMP path, '-' for stdout")->required();
    sample->callback([&] {
        action = [&] {
            const Bandwidth sigma(parse_reals(s_sigma));
            const TruncationWindow tau(parse_ints(s_tau));
            if (tau.dim() != sigma.dim()) throw UsageError("--tau and --sigma need the same number of axes");
            if (s_theta != 1 && s_theta != 2) throw UsageError("--theta must be 1 or 2");
            const auto f = make_corpus(s_corpus, sigma);
            const Spacing theta = spacing_from_int(s_theta);
            const auto which = theta == Spacing::nyquist ? std::vector<MultiIndex>{MultiIndex::zero(sigma.dim())}
                                                         : enum_multi_indices(sigma.dim());
            const auto samples = sample_function(f, theta, tau, which);
            with_output(s_out, out, [&](std::ostream& os) { write_samples(samples, os); });
            return 0;
        };
    });

    // reconstruct
    std::string r_samples, r_method, r_grid, r_out;
    unsigned r_threads = 1;
    auto* recon = app.add_subcommand("reconstruct", "Evaluate a sampling series on a tensor grid and write CSV");
    recon->add_option("--samples", r_samples, "input DSAMP file")->required();
    recon->add_option("--method", r_method, "wks | hermite1 | hermite-nd | legacy2d")->required();
    recon->add_option("--grid", r_grid, "start:stop:step per axis, comma-separated")->required();
    recon->add_option("--out", r_out, "output CSV path, '-' for stdout")->required();
    recon->add_option("--threads", r_threads, "worker threads for grid evaluation");
    recon->callback([&] {
        action = [&] {
            const auto samples = load_samples(r_samples);
            const Method method = method_arg(r_method);
            const Grid grid = parse_grid(r_grid);
            const auto values = reconstruct_grid(samples, method, grid, r_threads);
            with_output(r_out, out, [&](std::ostream& os) { write_field(values, grid, os, samples.kind()); });
            return 0;
        };
    });

    // compare
    CorpusArgs c_corpus;
    std::string c_samples, c_method, c_grid;
    unsigned c_threads = 1;
    auto* compare = app.add_subcommand("compare", "Report reconstruction error against the corpus oracle");
    compare->add_option("--samples", c_samples, "input DSAMP file")->required();
    add_corpus_options(compare, c_corpus, true);
    compare->add_option("--method", c_method, "wks | hermite1 | hermite-nd | legacy2d")->required();
    compare->add_option("--grid", c_grid, "start:stop:step per axis, comma-separated")->required();
    compare->add_option("--threads", c_threads, "worker threads for grid evaluation");
    compare->callback([&] {
        action = [&] {
            const auto samples = load_samples(c_samples);
            const auto f = make_corpus(c_corpus, samples.sigma());
            const Grid grid = parse_grid(c_grid);
            const auto values = reconstruct_grid(samples, method_arg(c_method), grid, c_threads);
            const auto truth = corpus_on_grid(f, grid);
            double mx = 0.0, sum = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                const double e = std::abs(values[i] - truth[i]);
                mx = std::max(mx, e);
                sum += e;
            }
            out << "points " << values.size() << '\n';
            out << "max_abs_error " << format_real(mx) << '\n';
            out << "mean_abs_error " << format_real(sum / static_cast<double>(values.size())) << '\n';
            return 0;
        };
    });

    // bound
    std::string b_samples, b_k, b_inner, b_grid;
    std::optional<double> b_p1;
    auto* bound = app.add_subcommand("bound", "Emit a truncation tail-bound certificate for one channel");
    bound->add_option("--samples", b_samples, "input DSAMP file (theta = 2)")->required();
    bound->add_option("--k", b_k, "channel as a bit string, axis 1 first")->required();
    bound->add_option("--tau-inner", b_inner, "kept window radius per axis")->required();
    bound->add_option("--p1", b_p1, "Hölder exponent, p1 >= p and > 1 (default max(p, 2))");
    bound->add_option("--probe-grid", b_grid, "start:stop:step per axis")->required();
    bound->callback([&] {
        action = [&] {
            const auto samples = load_samples(b_samples);
            const auto k = bits_arg(b_k, "--k");
            const TruncationWindow inner(parse_ints(b_inner));
            const Grid grid = parse_grid(b_grid);
            const auto rep = tail_bound(samples, k, inner, b_p1, grid);
            double observed = 0.0;
            for (std::size_t i = 0; i < grid_size(grid); ++i) {
                observed = std::max(observed, std::abs(tail_partial_sum(samples, k, inner, ComplexPoint(grid_point(grid, i)))));
            }
            std::string inner_s;
            for (int t : inner.values()) inner_s += (inner_s.empty() ? "" : ",") + std::to_string(t);
            out << "k " << k.str() << '\n';
            out << "tau_inner " << inner_s << '\n';
            out << "p1 " << format_real(rep.p1) << '\n';
            out << "q1 " << format_real(rep.q1) << '\n';
            out << "sample_tail_norm " << format_real(rep.sample_tail_norm) << '\n';
            out << "kernel_factor " << format_real(rep.kernel_factor) << '\n';
            out << "bound " << format_real(rep.bound) << '\n';
            out << "scope probe-grid\n";
            out << "probe_points " << rep.probe_points << '\n';
            out << "observed_tail_sup " << format_real(observed) << '\n';
            return 0;
        };
    });

    // demo-counterexample
    std::string d_sigma = "pi,pi", d_tau = "16,16", d_grid = "-4:4:0.25,-4:4:0.25";
    double d_sharp = 1.0;
    auto* demo = app.add_subcommand("demo-counterexample",
                                    "Show the three-channel two-dimensional series missing a nonzero function");
    demo->add_option("--sigma", d_sigma, "bandwidth, two axes");
    demo->add_option("--tau", d_tau, "window radius, two axes");
    demo->add_option("--grid", d_grid, "probe grid");
    demo->add_option("--sharpness", d_sharp, "bump width fraction in (0, 1]");
    demo->callback([&] {
        action = [&] {
            const Bandwidth sigma(parse_reals(d_sigma));
            if (sigma.dim() != 2) throw UsageError("demo-counterexample is two-dimensional");
            const TruncationWindow tau(parse_ints(d_tau));
            if (tau.dim() != 2) throw UsageError("--tau needs two axes");
            const Grid grid = parse_grid(d_grid);
            if (grid.size() != 2) throw UsageError("--grid needs two axes");
            const auto f = make_counterexample(sigma, d_sharp);
            const auto samples = sample_function(f, Spacing::hermite, tau, enum_multi_indices(2));
            const auto legacy = reconstruct_grid(samples, Method::legacy2d, grid);
            const auto full = reconstruct_grid(samples, Method::hermite_nd, grid);
            const auto truth = corpus_on_grid(f, grid);
            double full_err = 0.0;
            for (std::size_t i = 0; i < full.size(); ++i) full_err = std::max(full_err, std::abs(full[i] - truth[i]));
            out << "probe_points " << truth.size() << '\n';
            out << "max_abs_legacy2d " << format_real(max_abs(legacy)) << '\n';
            out << "max_abs_f " << format_real(max_abs(truth)) << '\n';
            out << "max_abs_error_hermite_nd " << format_real(full_err) << '\n';
            return 0;
        };
    });

    // demo-tilde-f
    std::string t_sigma = "pi,pi", t_tau = "16,16", t_grid = "-4:4:0.25,-4:4:0.25", t_ktilde;
    double t_sharp = 1.0;
    auto* tilde = app.add_subcommand("demo-tilde-f", "Full series versus the series with one channel dropped");
    tilde->add_option("--sigma", t_sigma, "bandwidth per axis");
    tilde->add_option("--tau", t_tau, "window radius per axis");
    tilde->add_option("--ktilde", t_ktilde, "dropped channel as a bit string, axis 1 first")->required();
    tilde->add_option("--grid", t_grid, "probe grid");
    tilde->add_option("--sharpness", t_sharp, "bump width fraction in (0, 1]");
    tilde->callback([&] {
        action = [&] {
            const Bandwidth sigma(parse_reals(t_sigma));
            const TruncationWindow tau(parse_ints(t_tau));
            const auto kt = bits_arg(t_ktilde, "--ktilde");
            if (tau.dim() != sigma.dim() || kt.dim() != sigma.dim()) throw UsageError("axis counts differ");
            const Grid grid = parse_grid(t_grid);
            if (grid.size() != sigma.dim()) throw UsageError("--grid axis count differs");
            const auto f = make_tilde_f(sigma, kt, t_sharp);
            const auto samples = sample_function(f, Spacing::hermite, tau, enum_multi_indices(sigma.dim()));
            std::vector<cplx> full(grid_size(grid)), dropped(grid_size(grid));
            for (std::size_t i = 0; i < full.size(); ++i) {
                const ComplexPoint z(grid_point(grid, i));
                full[i] = hermite_nd_eval(samples, z);
                dropped[i] = hermite_nd_eval(samples, z, kt);
            }
            const auto truth = corpus_on_grid(f, grid);
            double err = 0.0;
            for (std::size_t i = 0; i < full.size(); ++i) err = std::max(err, std::abs(full[i] - truth[i]));
            out << "ktilde " << kt.str() << '\n';
            out << "probe_points " << full.size() << '\n';
            out << "max_abs_full " << format_real(max_abs(full)) << '\n';
            out << "max_abs_dropped " << format_real(max_abs(dropped)) << '\n';
            out << "max_abs_f " << format_real(max_abs(truth)) << '\n';
            out << "max_abs_error_full " << format_real(err) << '\n';
            return 0;
        };
    });

    // kernel-check
    std::string k_r = "1.5,2,3";
    int k_trials = 20, k_window = 10000;
    unsigned long long k_seed = 1;
    auto* kcheck = app.add_subcommand("kernel-check", "Audit windowed sums of |sinc(a x - m)|^r against their uniform bound");
    kcheck->add_option("--r", k_r, "exponents r > 1, comma-separated");
    kcheck->add_option("--trials", k_trials, "random (a, x) pairs per exponent");
    kcheck->add_option("--window", k_window, "sum over |m| <= window");
    kcheck->add_option("--seed", k_seed, "random seed");
    kcheck->callback([&] {
        action = [&] {
            if (k_trials < 1 || k_window < 0) throw UsageError("--trials must be >= 1 and --window >= 0");
            bool all_ok = true;
            for (double r : parse_reals(k_r)) {
                const double limit = kernel_sum_bound(r, 1);
                std::mt19937_64 rng(k_seed);
                std::uniform_real_distribution<double> da(0.1, 10.0), dx(-5.0, 5.0);
                double lo = INFINITY, hi = 0.0;
                for (int t = 0; t < k_trials; ++t) {
                    const double a = da(rng);
                    const double x = dx(rng);
                    const double v = kernel_power_sum(a, x, r, k_window);
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                const bool ok = hi <= limit + 1e-6;
                all_ok = all_ok && ok;
                out << "r " << format_real(r) << " bound " << format_real(limit) << " min_sum " << format_real(lo)
                    << " max_sum " << format_real(hi) << " pass " << (ok ? "true" : "false") << '\n';
            }
            return all_ok ? 0 : 2;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        return action ? action() : 1;
    } catch (const UsageError& e) {
        err << "bsamp: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "bsamp: " << e.what() << '\n';
        return 2;
    }
}

} // namespace bsamp::cli
