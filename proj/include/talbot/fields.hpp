#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "talbot/rational.hpp"

namespace talbot::fields {

// Periodic fields in rescaled coordinates: xi is position in units of the
// grating period, zeta is distance in units of the Talbot length.
//
//   v(xi,zeta)   = sum_n e^{2 pi i n xi} e^{-i pi n^2 zeta}
//   w_r(xi,zeta) = e^{-2 pi i r^2 zeta} sum_n a_n(zeta) e^{2 pi i n xi}
// with, writing x = n/r,
//   a_n = e^{ 2 pi i r^2 sqrt(1-x^2) zeta}            for |n| <= r
//   a_n = e^{-2 pi  r^2 sqrt(x^2-1) zeta}             for |n| >  r.
// w_r is evaluated at |zeta| (even extension); the propagating branch is
// computed through r^2(1 - sqrt(1-x^2)) = n^2/(1 + sqrt(1-x^2)), which is
// exact and avoids the cancellation for n << r.

enum class Field { schrodinger, helmholtz };

// e^{-i pi n^2 zeta}. Double-precision reduction of n^2 zeta mod 2.
std::complex<double> schrodinger_coeff(long long n, double zeta);
// Exact reduction for rational zeta = p/q: phase is -pi (n^2 p mod 2q)/q.
std::complex<double> schrodinger_coeff(long long n, const Rational& zeta);

// Combined coefficient of e^{2 pi i n xi} in w_r, carrier included.
std::complex<double> helmholtz_coeff(long long n, double zeta, double r);

// n^2/(1 + sqrt(1-(n/r)^2)) for |n| <= r: the effective phase frequency of
// the propagating branch (so its coefficient is e^{-2 pi i freq zeta}).
double helmholtz_phase_freq(long long n, double r);
// r^2 sqrt((n/r)^2 - 1) for |n| > r: the decay rate of the evanescent branch.
double helmholtz_decay_rate(long long n, double r);

// Coefficient vectors indexed n = -n_max..n_max.
Eigen::ArrayXcd schrodinger_coeffs(long long n_max, double zeta);
Eigen::ArrayXcd schrodinger_coeffs(long long n_max, const Rational& zeta);
Eigen::ArrayXcd helmholtz_coeffs(long long n_max, double zeta, double r);

// Truncated field value sum_{|n|<=n_max} coeff_n e^{2 pi i n xi}.
std::complex<double> eval_field(Field f, double xi, double zeta, long long n_max, double r = 0.0);
std::complex<double> eval_field(Field f, double xi, const Rational& zeta, long long n_max, double r = 0.0);

// Cutoff schedule mu(r) = max(1, floor(scale * r^alpha)); alpha < 1/4 keeps
// the low band within the regime where w_r and v agree.
struct MuSchedule {
    double alpha = 0.2;
    double scale = 1.0;
    long long operator()(double r) const;
};

// Frequency bands of w_r: low |n| <= mu, mid mu < |n| <= r+1 (the borderline
// index floor(r+1) rides the evanescent branch), high |n| > r+1.
enum class Band { low, mid, high };

struct BandEdges {
    long long mu;       // last low index
    long long mid_hi;   // floor(r+1), last mid index
};
BandEdges band_edges(double r, long long mu);

// Partial sum of w_r over one band. The high band needs either zeta > 0
// (terms are dropped once the decay exponent passes 690, i.e. below ~1e-300)
// or an explicit n_max.
std::complex<double> eval_band(Band band, double xi, double zeta, double r, long long mu,
                               std::optional<long long> n_max = std::nullopt);

struct LowBandError {
    double sup_error; // grid sup of |P_low w_r - P_low v|
    double reference; // mu^4 / r
};

struct GridSpec {
    int nx = 512;        // xi samples over [0,1)
    int nz = 512;        // zeta samples over (0, zeta_max]; all 0 when zeta_max = 0
    double zeta_max = 2.0;
};

LowBandError low_band_sup_error(double r, long long mu, const GridSpec& grid = {});

// Doubled evanescent tail sum_{|n| > r+1} e^{-2 pi r^2 sqrt((n/r)^2-1) zeta}
// next to the comparison integral from the corresponding bound,
//   integral = int_0^inf z e^{-4 pi z zeta} / (r^3 sqrt(1+z^2/r^4)) dz,
// whose leading behaviour is 1/(16 pi^2 zeta^2 r^3). The plain sum truncates
// terms below 1e-300 (and is exactly 0 when even the first term is below
// that); log_sum is the natural log of the same doubled sum evaluated by
// log-sum-exp, finite for every admissible input.
struct HighTailResult {
    double sum;
    double log_sum;
    double integral;
    double integral_leading;
    long long terms; // terms >= 1e-300 included in .sum
};
HighTailResult high_tail_sup(double r, double zeta);

// e^{-2 pi r^2 sqrt((floor(r+1)/r)^2 - 1) zeta}: the modulus of the single
// coefficient separating the mid band from the high band. Arbitrarily close
// to 1 when r approaches floor(r+1)^- fast enough (gap ~ M^-3), which is why
// the high band must start beyond r+1 and not at r.
double borderline_term(double r, double zeta);

} // namespace talbot::fields
