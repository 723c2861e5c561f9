#pragma once

#include <complex>
#include <string>
#include <variant>

#include <Eigen/Core>

namespace talbot::testfns {

// Measurement apparatus for the pairings: two concrete test-function
// families with analytic Fourier data.
//
//   GaussianTest  phi(x) = e^{-pi ((x-center)/width)^2} e^{2 pi i modulation x}
//   PeriodicTest  phi(x) = sum_{|n| <= degree} coeff_n e^{2 pi i n x}
//
// Transform convention throughout: phi_hat(k) = int phi(x) e^{-2 pi i k x} dx,
// so a pairing <sum c_n e^{2 pi i n xi}, phi> expands as sum c_n phi_hat(-n).

struct GaussianTest {
    double center = 0.0;
    double width = 1.0;
    double modulation = 0.0;
};

// Coefficients indexed n = -degree .. degree.
struct PeriodicTest {
    long long degree = 0;
    Eigen::ArrayXcd coeff;
};

std::complex<double> eval(const GaussianTest& phi, double x);
std::complex<double> eval(const PeriodicTest& phi, double x);

// Modulated-Gaussian transform, closed form:
//   phi_hat(k) = width e^{-pi width^2 (k-modulation)^2} e^{-2 pi i (k-modulation) center}.
std::complex<double> ft(const GaussianTest& phi, double k);

// Stored coefficient, 0 outside |n| <= degree.
std::complex<double> periodic_coeff(const PeriodicTest& phi, long long n);

// x -> phi(-x); stays inside the family.
GaussianTest reflected(const GaussianTest& phi);

// x -> phi(x + s) leaves the family only up to a constant phase:
// phi(x+s) = prefactor * base(x) with base = {center-s, width, modulation}
// and prefactor = e^{2 pi i modulation s}.
struct ShiftedGaussian {
    GaussianTest base;
    std::complex<double> prefactor;
};
ShiftedGaussian shifted(const GaussianTest& phi, double s);

// Half-line Fourier-Laplace transform
//   Phi(x, y) = int_0^inf phi(t) e^{-2 pi i x t} e^{-2 pi y t} dt,  y >= 0.
// Evaluated in closed form through erfcx:
//   Phi = (width/2) e^{-pi (center/width)^2} erfcx(z),
//   z   = sqrt(pi) [ width (y + i (x - modulation)) - center/width ],
// with the Re z < 0 branch rewritten through the erfcx reflection so the
// over-/underflowing factors combine analytically. Accurate to ~1e-13
// relative at any oscillation frequency, which is what lets vertical and
// oblique pairings reach x of order r^2.
std::complex<double> half_line_ft(const GaussianTest& phi, double x, double y);
std::complex<double> half_line_ft(const ShiftedGaussian& phi, double x, double y);

// Same transform by adaptive quadrature on [0, T], T chosen so the dropped
// tail is below 1e-14 of scale; relative tolerance 1e-10. Kept as an
// independent cross-check of the closed form; throws QuadratureError when
// the node budget is exhausted (ill-scaled phi or extreme x).
std::complex<double> half_line_ft_quadrature(const GaussianTest& phi, double x, double y);

// ||phi||_inf + ||phi'||_1, the constant in the decay bound
//   |Phi(x, 0)| <= (||phi||_inf + ||phi'||_1) / (2 pi |x|),  x != 0.
double decay_constant(const GaussianTest& phi);

// sqrt( sum_n (1+n^2)^s |c_n|^2 ) over coeff indexed -N..N. Any real s; pass
// -s for the H^{-s} norm of a coefficient difference.
double hs_norm(const Eigen::ArrayXcd& coeff, double s);
double hs_norm(const PeriodicTest& phi, double s);

// Tail bound for H^{-s} norms of w_r - v style differences (coefficient
// modulus <= 2): 4 sum_{|n| > N} (1+n^2)^{-s} <= 8 N^{1-2s} / (2s-1).
// Requires s > 1/2; the series is not summable otherwise.
double hs_norm_tail_bound(long long n_max, double s);

using TestFunction = std::variant<GaussianTest, PeriodicTest>;

// {"type":"gaussian","center":c,"width":w,"modulation":m} (each field
// optional, defaults 0/1/0) or {"type":"trigpoly","coeffs":[[n,re,im],...]}.
// Throws std::invalid_argument on malformed input.
TestFunction parse_test_function(const std::string& json_text);

} // namespace talbot::testfns
