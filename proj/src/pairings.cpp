#include "talbot/pairings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "talbot/parallel.hpp"

namespace talbot::pairings {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(double turns) {
    double f = turns - std::floor(turns);
    return std::polar(1.0, kTwoPi * f);
}

const testfns::GaussianTest& require_gaussian(const testfns::TestFunction& phi, const char* who) {
    if (const auto* g = std::get_if<testfns::GaussianTest>(&phi)) return *g;
    throw std::invalid_argument(std::string(who) +
                                ": needs a Schwartz (gaussian) test function; "
                                "trigonometric polynomials pair on horizontal lines only");
}

// sum over n = 0, +-1, ..., +-N in that fixed order
std::complex<double> ordered_sum(const Eigen::ArrayXcd& t) {
    const long long N = t.size() / 2;
    std::complex<double> acc = t[N];
    for (long long a = 1; a <= N; ++a) acc += t[N + a] + t[N - a];
    return acc;
}

std::complex<double> phi_hat(const testfns::TestFunction& phi, long long k) {
    if (const auto* g = std::get_if<testfns::GaussianTest>(&phi))
        return testfns::ft(*g, static_cast<double>(k));
    return testfns::periodic_coeff(std::get<testfns::PeriodicTest>(phi), k);
}

// Transform arguments (oscillation, decay) of the n-th term before any line
// geometry: v has (n^2/2, 0); w_r has (a_n, 0) on the propagating branch and
// (r^2, y_n) past it.
void term_freqs(fields::Field f, long long n, double r, double& x, double& y) {
    if (f == fields::Field::schrodinger) {
        x = 0.5 * static_cast<double>(n) * static_cast<double>(n);
        y = 0.0;
    } else if (std::llabs(n) <= static_cast<long long>(r)) {
        x = fields::helmholtz_phase_freq(n, r);
        y = 0.0;
    } else {
        x = r * r;
        y = fields::helmholtz_decay_rate(n, r);
    }
}

Eigen::ArrayXcd term_array(fields::Field f, const LineSpec& line,
                           const testfns::TestFunction& phi, long long n_max, double r) {
    Eigen::ArrayXcd t(2 * n_max + 1);
    const bool whole = line.restriction == Restriction::whole;

    switch (line.kind) {
    case LineKind::horizontal: {
        const double z = std::abs(line.zeta);
        for (long long n = -n_max; n <= n_max; ++n) {
            const std::complex<double> c = (f == fields::Field::schrodinger)
                                               ? fields::schrodinger_coeff(n, z)
                                               : fields::helmholtz_coeff(n, z, r);
            t[n + n_max] = c * phi_hat(phi, -n);
        }
        return t;
    }
    case LineKind::vertical: {
        const auto& g = require_gaussian(phi, "pair_vertical");
        const testfns::GaussianTest gr = testfns::reflected(g);
        for (long long a = 0; a <= n_max; ++a) {
            double x, y;
            term_freqs(f, a, r, x, y);
            std::complex<double> Phi = testfns::half_line_ft(g, x, y);
            if (whole) Phi += testfns::half_line_ft(gr, x, y);
            t[n_max + a] = unit_phase(static_cast<double>(a) * line.xi) * Phi;
            if (a > 0) t[n_max - a] = unit_phase(-static_cast<double>(a) * line.xi) * Phi;
        }
        return t;
    }
    case LineKind::oblique: {
        const auto& g = require_gaussian(phi, "pair_oblique");
        const double m = line.m; // normalized positive by the callers
        const double s = line.k / m;
        const testfns::ShiftedGaussian fwd = testfns::shifted(g, s);
        const testfns::ShiftedGaussian mir = testfns::shifted(testfns::reflected(g), -s);
        for (long long n = -n_max; n <= n_max; ++n) {
            double x, y;
            term_freqs(f, n, r, x, y);
            std::complex<double> val =
                testfns::half_line_ft(fwd, m * x - static_cast<double>(n), m * y);
            if (whole)
                val += testfns::half_line_ft(mir, m * x + static_cast<double>(n), m * y);
            t[n + n_max] = unit_phase(static_cast<double>(n) * s) * val;
        }
        return t;
    }
    }
    throw std::logic_error("term_array: unknown line kind");
}

double tail_bound_horizontal(const testfns::TestFunction& phi, long long n_max) {
    // field coefficients have modulus <= 1, so sum |phi_hat(-n)| over dropped n
    if (const auto* g = std::get_if<testfns::GaussianTest>(&phi)) {
        double acc = 0.0;
        for (long long n = n_max + 1; n <= n_max + 200000; ++n) {
            const double b = std::abs(testfns::ft(*g, static_cast<double>(n))) +
                             std::abs(testfns::ft(*g, -static_cast<double>(n)));
            acc += b;
            if (b < 1e-300) break;
        }
        return acc;
    }
    const auto& p = std::get<testfns::PeriodicTest>(phi);
    double acc = 0.0;
    for (long long n = n_max + 1; n <= p.degree; ++n)
        acc += std::abs(testfns::periodic_coeff(p, n)) + std::abs(testfns::periodic_coeff(p, -n));
    return acc;
}

// Dropped-term bound for the absolutely summable branches on vertical lines:
// |Phi| <= C/(2 pi x_n) with x_n >= n^2/2, summed two-sided past n_max.
double tail_bound_vertical(fields::Field f, const testfns::GaussianTest& g, bool whole,
                           long long n_max, double r) {
    if (f == fields::Field::helmholtz && static_cast<double>(n_max) >= r) return 0.0;
    const double C = testfns::decay_constant(g) * (whole ? 2.0 : 1.0);
    return 2.0 * C / (kPi * static_cast<double>(n_max));
}

// Same for oblique lines; |freq_n| >= m n^2/4 once n >= 4/m.
double tail_bound_oblique(fields::Field f, const testfns::GaussianTest& g, bool whole,
                          long long n_max, double r, double m) {
    if (f == fields::Field::helmholtz && static_cast<double>(n_max) >= r) return 0.0;
    const double C = testfns::decay_constant(g) * (whole ? 2.0 : 1.0);
    const double L1 = g.width; // ||phi||_1, the trivial per-term bound
    double acc = 0.0;
    long long n = n_max + 1;
    for (; static_cast<double>(n) < 4.0 / m && n <= n_max + 1000000; ++n) {
        const double fpos = m * 0.5 * static_cast<double>(n) * n - static_cast<double>(n);
        const double bpos = fpos > 0.0 ? std::min(L1, C / (kTwoPi * fpos)) : L1;
        const double fneg = m * 0.5 * static_cast<double>(n) * n + static_cast<double>(n);
        acc += bpos + std::min(L1, C / (kTwoPi * fneg));
    }
    return acc + 4.0 * C / (kPi * m * static_cast<double>(n));
}

struct Normalized {
    LineSpec line;
    testfns::TestFunction phi;
};

// Oblique m < 0 reduces by xi -> -xi (the fields are even in xi): same k,
// slope -m, reflected test function; the half restriction is the xi < k/m
// side of the original line.
Normalized normalize(const LineSpec& line, const testfns::TestFunction& phi) {
    Normalized out{line, phi};
    if (line.kind == LineKind::oblique) {
        if (line.m == 0.0)
            throw std::invalid_argument("oblique line: m must be nonzero (use a horizontal line)");
        if (line.m < 0.0) {
            out.line.m = -line.m;
            out.phi = testfns::reflected(require_gaussian(phi, "pair_oblique"));
        }
    }
    return out;
}

void check_field_args(fields::Field f, double r, long long n_max) {
    if (n_max < 0) throw std::invalid_argument("pairing: n_max must be >= 0");
    if (f == fields::Field::helmholtz && !(r > 0.0))
        throw std::invalid_argument("pairing: w_r needs r > 0");
}

double column_value(const SweepRecord& rec, const std::string& column) {
    if (column == "err_pair") return rec.err_pair;
    if (column == "err_low") return rec.err_low;
    if (column == "err_mid") return rec.err_mid;
    if (column == "err_high") return rec.err_high;
    if (column == "err_tail_v") return rec.err_tail_v;
    if (column == "err_hs") {
        if (!rec.err_hs) throw std::invalid_argument("rate_fit: err_hs not present in records");
        return *rec.err_hs;
    }
    throw std::invalid_argument("rate_fit: unknown column '" + column + "'");
}

} // namespace

PairingResult pair_horizontal(fields::Field f, double zeta, const testfns::TestFunction& phi,
                              long long n_max, double r) {
    check_field_args(f, r, n_max);
    LineSpec line;
    line.kind = LineKind::horizontal;
    line.zeta = zeta;
    const Eigen::ArrayXcd t = term_array(f, line, phi, n_max, r);
    return PairingResult{ordered_sum(t), tail_bound_horizontal(phi, n_max), n_max};
}

PairingResult pair_vertical(fields::Field f, double xi, const testfns::TestFunction& phi,
                            Restriction restriction, long long n_max, double r) {
    check_field_args(f, r, n_max);
    const auto& g = require_gaussian(phi, "pair_vertical");
    LineSpec line;
    line.kind = LineKind::vertical;
    line.xi = xi;
    line.restriction = restriction;
    const Eigen::ArrayXcd t = term_array(f, line, phi, n_max, r);
    const bool whole = restriction == Restriction::whole;
    return PairingResult{ordered_sum(t), tail_bound_vertical(f, g, whole, n_max, r), n_max};
}

PairingResult pair_oblique(fields::Field f, double m, double k, const testfns::TestFunction& phi,
                           Restriction restriction, long long n_max, double r) {
    check_field_args(f, r, n_max);
    LineSpec line;
    line.kind = LineKind::oblique;
    line.m = m;
    line.k = k;
    line.restriction = restriction;
    const Normalized nl = normalize(line, phi);
    const auto& g = require_gaussian(nl.phi, "pair_oblique");
    const Eigen::ArrayXcd t = term_array(f, nl.line, nl.phi, n_max, r);
    const bool whole = restriction == Restriction::whole;
    return PairingResult{ordered_sum(t), tail_bound_oblique(f, g, whole, n_max, r, nl.line.m),
                         n_max};
}

double hs_error(double r, double zeta, double s, long long n_max) {
    if (!(s > 0.5)) throw std::invalid_argument("hs_error: requires s > 1/2");
    if (!(r > 0.0)) throw std::invalid_argument("hs_error: r must be positive");
    if (n_max < 1) throw std::invalid_argument("hs_error: n_max must be >= 1");
    zeta = std::abs(zeta);
    if (zeta == 0.0) return 0.0; // every coefficient difference vanishes
    double acc = 0.0;
    for (long long n = -n_max; n <= n_max; ++n) {
        const std::complex<double> d =
            fields::helmholtz_coeff(n, zeta, r) - fields::schrodinger_coeff(n, zeta);
        acc += std::pow(1.0 + static_cast<double>(n) * n, -s) * std::norm(d);
    }
    acc += testfns::hs_norm_tail_bound(n_max, s);
    return std::sqrt(acc);
}

std::vector<double> default_r_grid() {
    return {1e1, std::pow(10.0, 1.5), 1e2, std::pow(10.0, 2.5), 1e3, std::pow(10.0, 3.5), 1e4};
}

long long default_n_max(double r, const testfns::TestFunction& phi) {
    const long long base = static_cast<long long>(std::ceil(std::max(r, 0.0))) + 2;
    long long cutoff = 0;
    if (const auto* g = std::get_if<testfns::GaussianTest>(&phi)) {
        const double arg = g->width * 1e16;
        const double d = arg > 1.0 ? std::sqrt(std::log(arg) / kPi) / g->width : 0.0;
        cutoff = static_cast<long long>(std::ceil(std::abs(g->modulation) + d));
    } else {
        cutoff = std::get<testfns::PeriodicTest>(phi).degree;
    }
    return std::max(base, cutoff);
}

std::vector<SweepRecord> sweep(const LineSpec& line, const testfns::TestFunction& phi,
                               const std::vector<double>& r_grid,
                               const fields::MuSchedule& mu, std::optional<double> s) {
    if (r_grid.empty()) throw std::invalid_argument("sweep: empty r grid");
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        if (!(r_grid[i] > 0.0)) throw std::invalid_argument("sweep: r values must be positive");
        if (i > 0 && !(r_grid[i] > r_grid[i - 1]))
            throw std::invalid_argument("sweep: r grid must be strictly increasing");
    }
    if (s && line.kind != LineKind::horizontal)
        throw std::invalid_argument("sweep: err_hs is defined for horizontal lines only");

    const Normalized nl = normalize(line, phi);
    std::vector<SweepRecord> records(r_grid.size());

    parallel_for(r_grid.size(), [&](std::size_t i) {
        const double r = r_grid[i];
        SweepRecord rec;
        rec.r = r;
        rec.mu = mu(r);
        rec.integer_r = std::floor(r) == r;
        const long long n_max = default_n_max(r, nl.phi);
        const fields::BandEdges edges = fields::band_edges(r, rec.mu);

        const Eigen::ArrayXcd tw =
            term_array(fields::Field::helmholtz, nl.line, nl.phi, n_max, r);
        const Eigen::ArrayXcd tv =
            term_array(fields::Field::schrodinger, nl.line, nl.phi, n_max, 0.0);

        auto band_sum = [n_max](const Eigen::ArrayXcd& t, long long lo, long long hi) {
            std::complex<double> acc{0.0, 0.0};
            for (long long a = std::max<long long>(lo, 0); a <= hi; ++a) {
                if (a == 0)
                    acc += t[n_max];
                else
                    acc += t[n_max + a] + t[n_max - a];
            }
            return acc;
        };

        const std::complex<double> low_w = band_sum(tw, 0, edges.mu);
        const std::complex<double> mid_w =
            band_sum(tw, edges.mu + 1, std::min(edges.mid_hi, n_max));
        const std::complex<double> high_w = band_sum(tw, edges.mid_hi + 1, n_max);
        const std::complex<double> low_v = band_sum(tv, 0, edges.mu);
        const std::complex<double> tail_v = band_sum(tv, edges.mu + 1, n_max);

        const std::complex<double> pair_w = low_w + mid_w + high_w;
        const std::complex<double> pair_v = low_v + tail_v;

        rec.err_pair = std::abs(pair_w - pair_v);
        rec.err_low = std::abs(low_w - low_v);
        rec.err_mid = std::abs(mid_w);
        rec.err_high = std::abs(high_w);
        rec.err_tail_v = std::abs(tail_v);
        if (s) rec.err_hs = hs_error(r, nl.line.zeta, *s, n_max);
        records[i] = rec;
    });
    return records;
}

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "r,mu,err_pair,err_low,err_mid,err_high,err_tail_v,err_hs\n";
    char buf[40];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const auto& rec : records) {
        put(rec.r);
        out << ',' << rec.mu << ',';
        put(rec.err_pair);
        out << ',';
        put(rec.err_low);
        out << ',';
        put(rec.err_mid);
        out << ',';
        put(rec.err_high);
        out << ',';
        put(rec.err_tail_v);
        out << ',';
        if (rec.err_hs) put(*rec.err_hs);
        out << '\n';
    }
}

RateFit rate_fit(const std::vector<SweepRecord>& records, const std::string& column) {
    if (records.size() < 3) throw std::invalid_argument("rate_fit: need at least 3 records");
    std::vector<double> xs, ys;
    xs.reserve(records.size());
    ys.reserve(records.size());
    for (const auto& rec : records) {
        const double e = column_value(rec, column);
        if (e == 0.0) return RateFit{0.0, true};
        if (!(rec.r > 0.0)) throw std::invalid_argument("rate_fit: r must be positive");
        xs.push_back(std::log(rec.r));
        ys.push_back(std::log(e));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("rate_fit: all r values identical");
    return RateFit{sxy / sxx, false};
}

} // namespace talbot::pairings
