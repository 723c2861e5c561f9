#include "talbot/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "talbot/quadrature.hpp"

namespace talbot::fields {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// |t| must stay clear of the int64 edge; q <= 1e6 and |n| mod 2q < 2e6 keep
// every product below ~4e12.
long long positive_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

std::complex<double> unit_phase(double turns) {
    // e^{2 pi i turns}, reduced before multiplication by 2 pi.
    double f = turns - std::floor(turns);
    return std::polar(1.0, kTwoPi * f);
}

} // namespace

std::complex<double> schrodinger_coeff(long long n, double zeta) {
    // phase/(-pi) = n^2 zeta reduced mod 2
    double m = std::fmod(static_cast<double>(n) * static_cast<double>(n) * zeta, 2.0);
    return std::polar(1.0, -std::numbers::pi * m);
}

std::complex<double> schrodinger_coeff(long long n, const Rational& zeta) {
    const long long q = zeta.den;
    const long long c2 = 2 * q;
    const long long nr = positive_mod(n, c2);
    const long long pr = positive_mod(zeta.num, c2);
    const long long t = (((nr * nr) % c2) * pr) % c2;
    return std::polar(1.0, -std::numbers::pi * static_cast<double>(t) / static_cast<double>(q));
}

double helmholtz_phase_freq(long long n, double r) {
    const double x = static_cast<double>(n) / r;
    return static_cast<double>(n) * static_cast<double>(n) / (1.0 + std::sqrt(1.0 - x * x));
}

double helmholtz_decay_rate(long long n, double r) {
    const double an = std::abs(static_cast<double>(n));
    // r^2 sqrt((n/r)^2 - 1) = r sqrt((|n|-r)(|n|+r)); the difference form is
    // stable just above the light line.
    return r * std::sqrt((an - r) * (an + r));
}

std::complex<double> helmholtz_coeff(long long n, double zeta, double r) {
    if (r <= 0.0) throw std::invalid_argument("helmholtz_coeff: r must be positive");
    zeta = std::abs(zeta); // even extension in zeta
    const double an = std::abs(static_cast<double>(n));
    if (an <= r) {
        return unit_phase(-helmholtz_phase_freq(n, r) * zeta);
    }
    const double e = kTwoPi * helmholtz_decay_rate(n, r) * zeta;
    if (e > 745.0) return {0.0, 0.0}; // below ~1e-323, flush
    return unit_phase(-r * r * zeta) * std::exp(-e);
}

Eigen::ArrayXcd schrodinger_coeffs(long long n_max, double zeta) {
    Eigen::ArrayXcd out(2 * n_max + 1);
    for (long long n = -n_max; n <= n_max; ++n)
        out[n + n_max] = schrodinger_coeff(n, zeta);
    return out;
}

Eigen::ArrayXcd schrodinger_coeffs(long long n_max, const Rational& zeta) {
    Eigen::ArrayXcd out(2 * n_max + 1);
    for (long long n = -n_max; n <= n_max; ++n)
        out[n + n_max] = schrodinger_coeff(n, zeta);
    return out;
}

Eigen::ArrayXcd helmholtz_coeffs(long long n_max, double zeta, double r) {
    Eigen::ArrayXcd out(2 * n_max + 1);
    for (long long n = -n_max; n <= n_max; ++n)
        out[n + n_max] = helmholtz_coeff(n, zeta, r);
    return out;
}

namespace {

template <class Coeff>
std::complex<double> sum_series(double xi, long long lo, long long hi, Coeff coeff) {
    // lo..hi over |n|; lo == 0 contributes the single n = 0 term.
    std::complex<double> acc{0.0, 0.0};
    for (long long a = lo; a <= hi; ++a) {
        if (a == 0) {
            acc += coeff(0);
            continue;
        }
        const std::complex<double> e = unit_phase(static_cast<double>(a) * xi);
        acc += coeff(a) * e + coeff(-a) * std::conj(e);
    }
    return acc;
}

} // namespace

std::complex<double> eval_field(Field f, double xi, double zeta, long long n_max, double r) {
    if (n_max < 0) throw std::invalid_argument("eval_field: n_max must be >= 0");
    if (f == Field::schrodinger)
        return sum_series(xi, 0, n_max, [&](long long n) { return schrodinger_coeff(n, zeta); });
    return sum_series(xi, 0, n_max, [&](long long n) { return helmholtz_coeff(n, zeta, r); });
}

std::complex<double> eval_field(Field f, double xi, const Rational& zeta, long long n_max, double r) {
    if (n_max < 0) throw std::invalid_argument("eval_field: n_max must be >= 0");
    if (f == Field::schrodinger)
        return sum_series(xi, 0, n_max, [&](long long n) { return schrodinger_coeff(n, zeta); });
    return sum_series(xi, 0, n_max, [&](long long n) { return helmholtz_coeff(n, zeta.value(), r); });
}

long long MuSchedule::operator()(double r) const {
    if (!(alpha > 0.0 && alpha < 0.25))
        throw std::invalid_argument("MuSchedule: alpha must lie in (0, 1/4)");
    if (!(scale > 0.0)) throw std::invalid_argument("MuSchedule: scale must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("MuSchedule: r must be positive");
    double v = std::floor(scale * std::pow(r, alpha));
    return v < 1.0 ? 1 : static_cast<long long>(v);
}

BandEdges band_edges(double r, long long mu) {
    if (!(r > 0.0)) throw std::invalid_argument("band_edges: r must be positive");
    if (mu < 0) throw std::invalid_argument("band_edges: mu must be >= 0");
    return BandEdges{mu, static_cast<long long>(std::floor(r + 1.0))};
}

std::complex<double> eval_band(Band band, double xi, double zeta, double r, long long mu,
                               std::optional<long long> n_max) {
    const BandEdges e = band_edges(r, mu);
    auto coeff = [&](long long n) { return helmholtz_coeff(n, zeta, r); };
    switch (band) {
    case Band::low: {
        long long hi = e.mu;
        if (n_max) hi = std::min(hi, *n_max);
        return sum_series(xi, 0, hi, coeff);
    }
    case Band::mid: {
        long long lo = e.mu + 1, hi = e.mid_hi;
        if (n_max) hi = std::min(hi, *n_max);
        if (hi < lo) return {0.0, 0.0};
        return sum_series(xi, lo, hi, coeff);
    }
    case Band::high: {
        long long lo = e.mid_hi + 1;
        long long hi;
        if (n_max) {
            hi = *n_max;
        } else {
            if (!(std::abs(zeta) > 0.0))
                throw std::invalid_argument("eval_band: high band at zeta = 0 needs explicit n_max");
            // decay exponent passes 690 (terms < ~1e-300) at
            // sqrt(n^2 - r^2) = 690 / (2 pi r |zeta|)
            const double s = 690.0 / (kTwoPi * r * std::abs(zeta));
            hi = static_cast<long long>(std::ceil(std::sqrt(r * r + s * s))) + 1;
        }
        if (hi < lo) return {0.0, 0.0};
        return sum_series(xi, lo, hi, coeff);
    }
    }
    throw std::logic_error("eval_band: unknown band");
}

LowBandError low_band_sup_error(double r, long long mu, const GridSpec& grid) {
    if (!(r > 0.0)) throw std::invalid_argument("low_band_sup_error: r must be positive");
    if (mu > static_cast<long long>(r))
        throw std::invalid_argument("low_band_sup_error: mu exceeds r");
    if (mu < 0 || grid.nx < 1 || grid.nz < 1 || grid.zeta_max < 0.0)
        throw std::invalid_argument("low_band_sup_error: bad grid");

    const long long w = 2 * mu + 1;
    // D(n, k): coefficient difference at zeta_k; E(n, j): e^{2 pi i n xi_j}.
    // sup |sum_n D E| is the max modulus of E^T D.
    Eigen::MatrixXcd D(w, grid.nz);
    for (int k = 0; k < grid.nz; ++k) {
        const double zeta = grid.zeta_max * static_cast<double>(k + 1) / grid.nz;
        for (long long n = -mu; n <= mu; ++n)
            D(n + mu, k) = helmholtz_coeff(n, zeta, r) - schrodinger_coeff(n, zeta);
    }
    Eigen::MatrixXcd E(w, grid.nx);
    for (int j = 0; j < grid.nx; ++j) {
        const double xi = static_cast<double>(j) / grid.nx;
        for (long long n = -mu; n <= mu; ++n)
            E(n + mu, j) = unit_phase(static_cast<double>(n) * xi);
    }
    const double sup = (E.transpose() * D).cwiseAbs().maxCoeff();
    const double mu4 = static_cast<double>(mu) * mu * mu * mu;
    return LowBandError{sup, mu4 / r};
}

HighTailResult high_tail_sup(double r, double zeta) {
    if (!(zeta > 0.0)) throw std::invalid_argument("high_tail_sup: zeta must be positive");
    if (!(r > 2.0)) throw std::invalid_argument("high_tail_sup: r must exceed 2");

    const long long n0 = static_cast<long long>(std::floor(r + 1.0)) + 1;
    const double e0 = kTwoPi * helmholtz_decay_rate(n0, r) * zeta;

    double plain = 0.0;          // doubled, terms >= 1e-300 only
    double rel = 0.0;            // sum of e^{-(e_n - e0)} for n > n0
    long long terms = 0;
    for (long long n = n0;; ++n) {
        const double e = kTwoPi * helmholtz_decay_rate(n, r) * zeta;
        // stop once the term is both below the 1e-300 floor and negligible
        // next to the leading term
        if (e > 690.0 && e - e0 > 60.0) break;
        if (n > n0 && e - e0 <= 60.0) rel += std::exp(-(e - e0));
        if (e <= 690.0) {
            plain += 2.0 * std::exp(-e);
            ++terms;
        }
    }
    const double log_sum = std::log(2.0) - e0 + std::log1p(rel);

    const double zmax = 710.0 / (4.0 * std::numbers::pi * zeta);
    const double r4 = r * r * r * r;
    auto f = [&](double z) -> std::complex<double> {
        return z * std::exp(-4.0 * std::numbers::pi * z * zeta) /
               (r * r * r * std::sqrt(1.0 + z * z / r4));
    };
    AdaptiveOptions opts;
    opts.rel_tol = 1e-12;
    opts.initial_panels = 64; // the mass sits in the first 1/700 of [0, zmax]
    auto q = integrate(f, 0.0, zmax, opts);
    if (!q.converged)
        throw QuadratureError("high_tail_sup: comparison integral did not converge");

    const double lead = 1.0 / (16.0 * std::numbers::pi * std::numbers::pi * zeta * zeta * r * r * r);
    return HighTailResult{plain, log_sum, q.value.real(), lead, terms};
}

double borderline_term(double r, double zeta) {
    if (!(r > 1.0)) throw std::invalid_argument("borderline_term: r must exceed 1");
    if (std::floor(r) == r)
        throw std::invalid_argument("borderline_term: integer r leaves no borderline index");
    if (!(zeta > 0.0)) throw std::invalid_argument("borderline_term: zeta must be positive");
    const long long m = static_cast<long long>(std::floor(r + 1.0));
    return std::exp(-kTwoPi * helmholtz_decay_rate(m, r) * zeta);
}

} // namespace talbot::fields
