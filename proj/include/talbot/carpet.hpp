#pragma once

#include <complex>
#include <ostream>
#include <vector>

#include <Eigen/Core>

#include "talbot/fields.hpp"
#include "talbot/rational.hpp"

namespace talbot::carpet {

// Revival structure at rational heights, and carpet rendering.
//
// At zeta = p/q (coprime) the Schrodinger field collapses to a finite comb
//   v(., p/q) = sum_{m=0}^{q-1} weight_m delta(. - xi_m),
//   xi_m = (shift + m/q) mod 1,  shift = (p mod 2)/2,
//   weight_m = Gamma(p,q;m)/q,   |weight_m| = 1/sqrt(q).

struct DeltaComb {
    long long p = 0;
    long long q = 1;
    double shift = 0.0;
    std::vector<double> location;               // index m in [0, q)
    std::vector<std::complex<double>> weight;
};

// Requires gcd(p, q) = 1, q >= 1.
DeltaComb revival_comb(long long p, long long q);

// Pointwise check of the comb identity after mollification: compares
//   A(xi) = sum_{|n| <= n_max} e^{-pi sigma^2 n^2} e^{2 pi i n xi - i pi n^2 p/q}
// (frequency-side mollified truncated field, evaluated by folding the
// coefficients onto a uniform grid and one FFT) against
//   B(xi) = sum_m weight_m g_sigma(xi - xi_m),
//   g_sigma(x) = (1/sigma) sum_k e^{-pi ((x-k)/sigma)^2}
// (the predicted comb convolved with the same periodized Gaussian, built
// independently from the spatial side). Equal in exact arithmetic; the
// residual is pure truncation. Preconditions: sigma <= 1/(8q) so adjacent
// teeth do not overlap above tolerance, and n_max >= 10/sigma so the dropped
// coefficients are below e^{-100 pi}.
struct CombCheck {
    double max_abs_diff = 0.0;       // max |A - B| over the xi grid
    double peak_scale = 0.0;         // g_sigma(0), the unit-comb peak height
    std::vector<double> peak_ratio;  // |A(xi_m)| / g_sigma(0), expected 1/sqrt(q)
};

CombCheck smoothed_comb_check(long long p, long long q, double sigma, long long n_max);

// |field|^2 over [0,1) x [0,2); row i sits at zeta = 2 i / height, so row
// order is increasing zeta starting from the grating itself.
struct IntensityGrid {
    int width = 0;
    int height = 0;
    std::vector<double> values; // row-major
};

struct RenderParams {
    fields::Field field = fields::Field::schrodinger;
    double r = 0.0;        // w_r only
    long long n_max = 4096;
    double sigma = 0.005;  // frequency mollifier e^{-pi sigma^2 n^2}; must be > 0 for v
    int width = 1024;
    int height = 1024;
};

// One row at an exact rational height (the v coefficients then carry exact
// phases): intensity_j = |sum_n e^{-pi sigma^2 n^2} c_n(zeta) e^{2 pi i n j/width}|^2,
// computed by coefficient folding and one FFT of length width.
Eigen::ArrayXd render_row(const RenderParams& params, const Rational& zeta);

// Full carpet, rows in parallel. Rejects sigma = 0 for the v field (the raw
// series has no pointwise meaning); sigma = 0 is allowed for w_r, whose
// coefficient sum is finite at every zeta > 0 and row 0 is the plain
// Dirichlet kernel.
IntensityGrid render(const RenderParams& params);

// Binary PGM, P5, maxval 65535, big-endian samples, linear map from
// [0, max over the grid]; row 0 of the file is the zeta = 0 row.
void write_pgm16(std::ostream& out, const IntensityGrid& grid);

// Single row as CSV with header xi,intensity and xi_j = j/width.
void write_row_csv(std::ostream& out, const IntensityGrid& grid, int row);

} // namespace talbot::carpet
