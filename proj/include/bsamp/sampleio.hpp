#pragma once

// DSAMP v1 text format and CSV field export.
//
//   dsamp 1
//   dim <n>
//   sigma <v1> ... <vn>
//   theta <1|2>
//   tau <t1> ... <tn>
//   p <real>
//   kind <real|complex>
//   <kbits> <m1> ... <mn> <re> <im>      one line per record
//
// kbits is the 0/1 string of k, axis 1 first. Reals use 17 significant digits
// so write -> read is the identity; records are written in canonical order so
// equal sets give identical bytes.

#include <array>
#include <cmath>
#include <charconv>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bsamp/errors.hpp"
#include "bsamp/lattice.hpp"
#include "bsamp/reconstruct.hpp"
#include "bsamp/sample_set.hpp"

namespace bsamp {

/// Shortest-safe round-trip rendering: 17 significant digits, C locale.
inline std::string format_real(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

inline void check_sink(const std::ostream& out) {
    if (!out) throw Error("write failure on output stream");
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = line.find(' ', pos);
        out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline double parse_real(std::string_view tok, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw FormatError(line, "bad real number '" + std::string(tok) + "'");
    }
    return v;
}

inline long long parse_int(std::string_view tok, std::size_t line) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw FormatError(line, "bad integer '" + std::string(tok) + "'");
    }
    return v;
}

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        return true;
    }

    std::size_t number() const noexcept { return number_; }

    // header line "<key> <values...>"
    std::vector<std::string_view> header(std::string& storage, std::string_view key) {
        if (!next(storage)) throw FormatError(number_ + 1, "unexpected end of input, expected '" + std::string(key) + "'");
        auto toks = split_spaces(storage);
        if (toks.front() != key) throw FormatError(number_, "expected '" + std::string(key) + "'");
        toks.erase(toks.begin());
        for (auto t : toks) {
            if (t.empty()) throw FormatError(number_, "malformed spacing");
        }
        return toks;
    }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

} // namespace detail

inline void write_samples(const SampleSet& s, std::ostream& out) {
    const std::size_t n = s.dim();
    out << "dsamp 1\n";
    out << "dim " << n << '\n';
    out << "sigma";
    for (double v : s.sigma().values()) out << ' ' << format_real(v);
    out << "\ntheta " << to_int(s.theta()) << '\n';
    out << "tau";
    for (int t : s.tau().values()) out << ' ' << t;
    out << "\np " << format_real(s.p()) << '\n';
    out << "kind " << (s.kind() == ValueKind::real ? "real" : "complex") << '\n';
    s.for_each([&](const MultiIndex& k, std::span<const int> m, cplx v) {
        out << k.str();
        for (int mj : m) out << ' ' << mj;
        out << ' ' << format_real(v.real()) << ' ' << format_real(v.imag()) << '\n';
    });
    detail::check_sink(out);
}

inline SampleSet read_samples(std::istream& in) {
    detail::LineReader rd(in);
    std::string line;

    auto magic = rd.header(line, "dsamp");
    if (magic.size() != 1) throw FormatError(rd.number(), "malformed version line");
    if (magic[0] != "1") throw FormatError(rd.number(), "unsupported DSAMP version '" + std::string(magic[0]) + "'");

    auto dim_tok = rd.header(line, "dim");
    if (dim_tok.size() != 1) throw FormatError(rd.number(), "dim takes one value");
    const long long n_ll = detail::parse_int(dim_tok[0], rd.number());
    if (n_ll < 1 || n_ll > static_cast<long long>(max_dim)) throw FormatError(rd.number(), "dim must be in [1, 16]");
    const auto n = static_cast<std::size_t>(n_ll);

    auto sigma_tok = rd.header(line, "sigma");
    if (sigma_tok.size() != n) throw FormatError(rd.number(), "sigma count does not match dim");
    std::vector<double> sigma;
    for (auto t : sigma_tok) {
        sigma.push_back(detail::parse_real(t, rd.number()));
        if (!(sigma.back() > 0.0) || !std::isfinite(sigma.back())) throw FormatError(rd.number(), "sigma must be positive");
    }

    auto theta_tok = rd.header(line, "theta");
    if (theta_tok.size() != 1 || (theta_tok[0] != "1" && theta_tok[0] != "2")) {
        throw FormatError(rd.number(), "theta must be 1 or 2");
    }
    const Spacing theta = theta_tok[0] == "1" ? Spacing::nyquist : Spacing::hermite;

    auto tau_tok = rd.header(line, "tau");
    if (tau_tok.size() != n) throw FormatError(rd.number(), "tau count does not match dim");
    std::vector<int> tau;
    for (auto t : tau_tok) {
        const long long v = detail::parse_int(t, rd.number());
        if (v < 0 || v > (1 << 30)) throw FormatError(rd.number(), "tau out of range");
        tau.push_back(static_cast<int>(v));
    }

    auto p_tok = rd.header(line, "p");
    if (p_tok.size() != 1) throw FormatError(rd.number(), "p takes one value");
    const double p = detail::parse_real(p_tok[0], rd.number());
    if (!(p >= 1.0) || !std::isfinite(p)) throw FormatError(rd.number(), "p must be finite and >= 1");

    auto kind_tok = rd.header(line, "kind");
    if (kind_tok.size() != 1 || (kind_tok[0] != "real" && kind_tok[0] != "complex")) {
        throw FormatError(rd.number(), "kind must be 'real' or 'complex'");
    }
    const ValueKind kind = kind_tok[0] == "real" ? ValueKind::real : ValueKind::complex;

    auto build = [&]() -> SampleSet {
        try {
            return SampleSet(Bandwidth(sigma), theta, TruncationWindow(tau), p, kind);
        } catch (const Error& e) {
            throw FormatError(0, std::string("invalid header: ") + e.what());
        }
    };
    SampleSet s = build();

    std::vector<int> m(n);
    while (rd.next(line)) {
        const std::size_t ln = rd.number();
        const auto toks = detail::split_spaces(line);
        if (toks.size() != n + 3) throw FormatError(ln, "record has wrong field count for dim " + std::to_string(n));
        if (toks[0].size() != n) throw FormatError(ln, "kbits length does not match dim");
        MultiIndex k;
        try {
            k = MultiIndex::parse(toks[0]);
        } catch (const Error&) {
            throw FormatError(ln, "bad kbits '" + std::string(toks[0]) + "'");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const long long v = detail::parse_int(toks[1 + j], ln);
            if (v < -tau[j] || v > tau[j]) throw FormatError(ln, "node index outside the window");
            m[j] = static_cast<int>(v);
        }
        const double re = detail::parse_real(toks[n + 1], ln);
        const double im = detail::parse_real(toks[n + 2], ln);
        if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError(ln, "non-finite value");
        if (s.get(k, m)) throw FormatError(ln, "duplicate record for k = " + k.str());
        try {
            s.insert(k, m, {re, im});
        } catch (const Error& e) {
            throw FormatError(ln, e.what());
        }
    }
    return s;
}

/// CSV: header x1..xn,re[,im], then one row per grid point, first axis slowest.
inline void write_field(std::span<const cplx> values, const Grid& grid, std::ostream& out,
                        ValueKind kind = ValueKind::real) {
    if (grid.empty() || values.size() != grid_size(grid)) throw ShapeError("write_field: values do not match grid shape");
    for (std::size_t j = 0; j < grid.size(); ++j) out << (j ? ",x" : "x") << j + 1;
    out << ",re";
    if (kind == ValueKind::complex) out << ",im";
    out << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (double x : grid_point(grid, i)) out << format_real(x) << ',';
        out << format_real(values[i].real());
        if (kind == ValueKind::complex) out << ',' << format_real(values[i].imag());
        out << '\n';
    }
    detail::check_sink(out);
}

} // namespace bsamp
