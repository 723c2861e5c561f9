#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "talbot/fields.hpp"
#include "talbot/testfns.hpp"

namespace talbot::pairings {

// Distributional pairings of the fields against test functions along three
// kinds of lines, plus the r-sweep machinery that turns the convergence
// statements w_r -> v into finite experiments.
//
// All pairings are truncated series sum_{|n| <= n_max} term_n. The truncation
// index is part of the object's definition: on vertical and oblique lines the
// evanescent-branch terms of w_r decay only like 1/(r |n|), which is not
// absolutely summable, so "the pairing of w_r" below always means the
// truncated sum under the default n_max rule (all propagating indices plus
// the certified-tail margin).

enum class LineKind { horizontal, vertical, oblique };

// half: the field restricted to the zeta > 0 side of the line.
// whole: the even-in-zeta extension, equal to the half pairing with the test
// function phi replaced by its suitable reflection.
enum class Restriction { half, whole };

struct LineSpec {
    LineKind kind = LineKind::horizontal;
    double zeta = 0.0;  // horizontal: the fixed height
    double xi = 0.0;    // vertical: the fixed abscissa
    double m = 1.0;     // oblique: slope of zeta = m xi - k, nonzero
    double k = 0.0;     // oblique: offset
    Restriction restriction = Restriction::half;
};

struct PairingResult {
    std::complex<double> value{0.0, 0.0};
    // Certified bound on the dropped |n| > n_max terms of every absolutely
    // summable branch: the full series for horizontal lines and for v, and
    // the propagating branch of w_r on vertical/oblique lines. The dropped
    // evanescent branch of w_r on those lines is excluded (see above); with
    // the default n_max it consists of terms beyond the certified margin
    // whose omission defines the object.
    double tail_bound = 0.0;
    long long n_max = 0;
};

// <field(.,zeta), phi> = sum_n coeff(n,|zeta|) phi_hat(-n); for PeriodicTest
// phi_hat(-n) is the stored coefficient at index -n.
PairingResult pair_horizontal(fields::Field f, double zeta, const testfns::TestFunction& phi,
                              long long n_max, double r = 0.0);

// <field(xi,.), phi> over zeta in (0,inf) (or the even extension):
//   v:   sum_n e^{2 pi i n xi} Phi(n^2/2, 0)
//   w_r: sum_{|n|<=r} e^{2 pi i n xi} Phi(a_n, 0)
//      + sum_{|n|>r}  e^{2 pi i n xi} Phi(r^2, y_n)
// with a_n the propagating phase frequency, y_n the evanescent decay rate and
// Phi the half-line transform of phi. Requires a Gaussian test function.
PairingResult pair_vertical(fields::Field f, double xi, const testfns::TestFunction& phi,
                            Restriction restriction, long long n_max, double r = 0.0);

// <field(xi, m xi - k) restricted to m xi - k > 0, phi>, s = k/m:
// every term collapses to e^{2 pi i n s} Phi_s(freq_n, decay_n) where Phi_s is
// the half-line transform of phi(. + s) and
//   v:             freq = m n^2/2 - n            decay = 0
//   w propagating: freq = m a_n - n              decay = 0
//   w evanescent:  freq = m r^2 - n              decay = m y_n.
// whole adds the mirror piece with phi(s - .) and the sign of n flipped in
// freq. m < 0 reduces to (-m, k, reflected phi) by xi -> -xi; the restriction
// is then the xi < k/m side. Requires a Gaussian test function; m != 0.
PairingResult pair_oblique(fields::Field f, double m, double k, const testfns::TestFunction& phi,
                           Restriction restriction, long long n_max, double r = 0.0);

// || w_r(.,|zeta|) - v(.,|zeta|) ||_{H^{-s}} from coefficient differences over
// |n| <= n_max plus the analytic tail bound; exactly 0 at zeta = 0 where all
// coefficients coincide. Requires s > 1/2.
double hs_error(double r, double zeta, double s, long long n_max);

struct SweepRecord {
    double r = 0.0;
    long long mu = 0;
    double err_pair = 0.0;    // |<w_r - v, phi>|
    double err_low = 0.0;     // |<P_low w_r - P_low v, phi>|
    double err_mid = 0.0;     // |<P_mid w_r, phi>|
    double err_high = 0.0;    // |<P_high w_r, phi>|
    double err_tail_v = 0.0;  // |<v - P_low v, phi>|
    std::optional<double> err_hs; // horizontal lines with s requested only
    // Integer r puts |n| = r+1 in the mid band with the decaying branch;
    // flagged rather than special-cased.
    bool integer_r = false;
};

// One record per r. Every band sum reuses the same per-n terms as the full
// pairings, so the decomposition identity
//   pair(w_r) - pair(v) = low_diff + mid + high - tail_v
// holds to rounding by construction. Rows are computed in parallel and
// assembled in r order. r_grid must be strictly increasing; s (horizontal
// lines only) requests the err_hs column.
std::vector<SweepRecord> sweep(const LineSpec& line, const testfns::TestFunction& phi,
                               const std::vector<double>& r_grid,
                               const fields::MuSchedule& mu = {},
                               std::optional<double> s = std::nullopt);

// {10, 10^1.5, 10^2, ..., 10^4}: three decades, two points per decade.
std::vector<double> default_r_grid();

// max(ceil(r) + 2, smallest N with |phi_hat(+-N)| < 1e-16) for Gaussians;
// max(ceil(r) + 2, degree) for trigonometric polynomials.
long long default_n_max(double r, const testfns::TestFunction& phi);

// Header pinned as below; floats at 17 significant digits; err_hs cell empty
// when absent. One row per record.
//   r,mu,err_pair,err_low,err_mid,err_high,err_tail_v,err_hs
void write_csv(std::ostream& out, const std::vector<SweepRecord>& records);

struct RateFit {
    double slope = 0.0;
    bool degenerate = false; // some value was exactly 0; no fit attempted
};

// Least-squares slope of log(err) vs log(r) for one error column, named as in
// the CSV header. Needs at least 3 records; throws if the column is absent.
RateFit rate_fit(const std::vector<SweepRecord>& records, const std::string& column);

} // namespace talbot::pairings
