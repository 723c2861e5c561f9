#include "talbot/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace talbot {

namespace {

constexpr int kN = 40; // polynomial degree of the rational approximation

struct WeidemanTable {
    double L;
    std::array<double, kN> a; // a[0] multiplies Z^{N-1}, ..., a[N-1] is constant
};

// Coefficients are the leading Fourier coefficients of
// f(theta) = (L^2 + t^2) e^{-t^2}, t = L tan(theta/2), sampled on 4N points.
// A direct DFT keeps this dependency-free; it runs once.
WeidemanTable build_table() {
    WeidemanTable tb{};
    const int M = 2 * kN;
    const int M2 = 2 * M;
    tb.L = std::sqrt(kN / std::numbers::sqrt2);
    std::vector<double> f(static_cast<std::size_t>(M2), 0.0);
    // f[0] corresponds to theta = -pi (t = -inf) where the sample is 0.
    for (int k = -M + 1; k <= M - 1; ++k) {
        double theta = k * std::numbers::pi / M;
        double t = tb.L * std::tan(0.5 * theta);
        f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (tb.L * tb.L + t * t);
    }
    // fftshift then real part of the DFT, matching Weideman's formulation.
    for (int j = 1; j <= kN; ++j) {
        double acc = 0.0;
        for (int i = 0; i < M2; ++i) {
            int src = (i + M) % M2; // shifted sample index
            acc += f[static_cast<std::size_t>(src)] *
                   std::cos(2.0 * std::numbers::pi * j * i / M2);
        }
        tb.a[static_cast<std::size_t>(kN - j)] = acc / M2;
    }
    return tb;
}

std::complex<double> upper_half(std::complex<double> z) {
    static const WeidemanTable tb = build_table();
    const std::complex<double> iz(-z.imag(), z.real());
    const std::complex<double> d = tb.L - iz;
    const std::complex<double> Z = (tb.L + iz) / d;
    std::complex<double> p{0.0, 0.0};
    for (int j = 0; j < kN; ++j) p = p * Z + tb.a[static_cast<std::size_t>(j)];
    return 2.0 * p / (d * d) + (1.0 / std::sqrt(std::numbers::pi)) / d;
}

} // namespace

std::complex<double> faddeeva_w(std::complex<double> z) {
    if (z.imag() >= 0.0) return upper_half(z);
    return 2.0 * std::exp(-z * z) - upper_half(-z);
}

std::complex<double> erfcx(std::complex<double> z) {
    return faddeeva_w(std::complex<double>(-z.imag(), z.real()));
}

} // namespace talbot
