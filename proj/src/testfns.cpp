#include "talbot/testfns.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "talbot/quadrature.hpp"
#include "talbot/special.hpp"

namespace talbot::testfns {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kSqrtPi = std::sqrt(std::numbers::pi);

void check_width(const GaussianTest& phi) {
    if (!(phi.width > 0.0)) throw std::invalid_argument("GaussianTest: width must be positive");
}
} // namespace

std::complex<double> eval(const GaussianTest& phi, double x) {
    check_width(phi);
    const double u = (x - phi.center) / phi.width;
    return std::exp(-kPi * u * u) * std::polar(1.0, kTwoPi * phi.modulation * x);
}

std::complex<double> eval(const PeriodicTest& phi, double x) {
    std::complex<double> acc{0.0, 0.0};
    for (long long n = -phi.degree; n <= phi.degree; ++n)
        acc += phi.coeff[n + phi.degree] * std::polar(1.0, kTwoPi * static_cast<double>(n) * x);
    return acc;
}

std::complex<double> ft(const GaussianTest& phi, double k) {
    check_width(phi);
    const double d = k - phi.modulation;
    const double mag = phi.width * std::exp(-kPi * phi.width * phi.width * d * d);
    return mag * std::polar(1.0, -kTwoPi * d * phi.center);
}

std::complex<double> periodic_coeff(const PeriodicTest& phi, long long n) {
    if (n < -phi.degree || n > phi.degree) return {0.0, 0.0};
    return phi.coeff[n + phi.degree];
}

GaussianTest reflected(const GaussianTest& phi) {
    return GaussianTest{-phi.center, phi.width, -phi.modulation};
}

ShiftedGaussian shifted(const GaussianTest& phi, double s) {
    check_width(phi);
    return ShiftedGaussian{GaussianTest{phi.center - s, phi.width, phi.modulation},
                           std::polar(1.0, kTwoPi * phi.modulation * s)};
}

std::complex<double> half_line_ft(const GaussianTest& phi, double x, double y) {
    check_width(phi);
    if (y < 0.0) throw std::invalid_argument("half_line_ft: y must be >= 0");
    const double w = phi.width;
    const double cw = phi.center / w;
    // z / sqrt(pi)
    const std::complex<double> zc{w * y - cw, w * (x - phi.modulation)};
    const std::complex<double> z = kSqrtPi * zc;
    if (zc.real() >= 0.0)
        return 0.5 * w * std::exp(-kPi * cw * cw) * erfcx(z);
    // erfcx(z) = 2 e^{z^2} - erfcx(-z); fold e^{-pi cw^2} into the exponent so
    // neither factor overflows. Re(zc^2 - cw^2) <= 0 on this branch.
    const std::complex<double> expo = kPi * (zc * zc - cw * cw);
    return 0.5 * w * (2.0 * std::exp(expo) - std::exp(-kPi * cw * cw) * erfcx(-z));
}

std::complex<double> half_line_ft(const ShiftedGaussian& phi, double x, double y) {
    return phi.prefactor * half_line_ft(phi.base, x, y);
}

std::complex<double> half_line_ft_quadrature(const GaussianTest& phi, double x, double y) {
    check_width(phi);
    if (y < 0.0) throw std::invalid_argument("half_line_ft_quadrature: y must be >= 0");
    // Beyond T the envelope is below e^{-pi 4.2^2} ~ 1e-24 of its peak.
    const double T = std::max(phi.center, 0.0) + 4.2 * phi.width;
    auto f = [&](double t) {
        return eval(phi, t) * std::polar(std::exp(-kTwoPi * y * t), -kTwoPi * x * t);
    };
    AdaptiveOptions opts;
    opts.rel_tol = 1e-10;
    opts.abs_tol = 1e-15;
    const double cycles = (std::abs(x) + y) * T;
    opts.initial_panels = static_cast<std::size_t>(std::min(100000.0, std::max(1.0, std::ceil(cycles))));
    auto q = integrate(f, 0.0, T, opts);
    if (!q.converged)
        throw QuadratureError("half_line_ft_quadrature: node budget exhausted before tolerance");
    return q.value;
}

double decay_constant(const GaussianTest& phi) {
    check_width(phi);
    // ||phi||_inf = 1. ||phi'||_1 = 2 when modulation = 0; otherwise by
    // quadrature of the exact |phi'| envelope.
    if (phi.modulation == 0.0) return 3.0;
    const double w = phi.width;
    const double mu = phi.modulation;
    auto f = [&](double u) -> std::complex<double> {
        const double env = std::exp(-kPi * u * u / (w * w));
        return env * kTwoPi * std::sqrt(u * u / (w * w * w * w) + mu * mu);
    };
    AdaptiveOptions opts;
    opts.rel_tol = 1e-12;
    auto q = integrate(f, -7.0 * w, 7.0 * w, opts);
    if (!q.converged) throw QuadratureError("decay_constant: quadrature failed");
    return 1.0 + q.value.real();
}

double hs_norm(const Eigen::ArrayXcd& coeff, double s) {
    const long long size = coeff.size();
    if (size % 2 == 0 || size < 1)
        throw std::invalid_argument("hs_norm: coefficients must be indexed -N..N");
    const long long N = size / 2;
    double acc = 0.0;
    for (long long n = -N; n <= N; ++n) {
        const double a = std::abs(coeff[n + N]);
        acc += std::pow(1.0 + static_cast<double>(n) * n, s) * a * a;
    }
    return std::sqrt(acc);
}

double hs_norm(const PeriodicTest& phi, double s) { return hs_norm(phi.coeff, s); }

double hs_norm_tail_bound(long long n_max, double s) {
    if (!(s > 0.5)) throw std::invalid_argument("hs_norm_tail_bound: requires s > 1/2");
    if (n_max < 1) throw std::invalid_argument("hs_norm_tail_bound: n_max must be >= 1");
    return 8.0 * std::pow(static_cast<double>(n_max), 1.0 - 2.0 * s) / (2.0 * s - 1.0);
}

TestFunction parse_test_function(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("test function JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw std::invalid_argument("test function JSON: need {\"type\": ...}");
    const std::string type = j["type"].get<std::string>();
    if (type == "gaussian") {
        GaussianTest g;
        if (j.contains("center")) g.center = j["center"].get<double>();
        if (j.contains("width")) g.width = j["width"].get<double>();
        if (j.contains("modulation")) g.modulation = j["modulation"].get<double>();
        check_width(g);
        return g;
    }
    if (type == "trigpoly") {
        if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
            throw std::invalid_argument("trigpoly: need nonempty coeffs [[n,re,im],...]");
        long long degree = 0;
        for (const auto& e : j["coeffs"]) {
            if (!e.is_array() || e.size() != 3)
                throw std::invalid_argument("trigpoly: each entry must be [n,re,im]");
            degree = std::max(degree, std::llabs(e[0].get<long long>()));
        }
        PeriodicTest p;
        p.degree = degree;
        p.coeff = Eigen::ArrayXcd::Zero(2 * degree + 1);
        for (const auto& e : j["coeffs"]) {
            const long long n = e[0].get<long long>();
            p.coeff[n + degree] += std::complex<double>(e[1].get<double>(), e[2].get<double>());
        }
        return p;
    }
    throw std::invalid_argument("test function JSON: unknown type '" + type + "'");
}

} // namespace talbot::testfns
