#include "talbot/gauss.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace talbot::gauss {

namespace {

long long positive_mod(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

void check_modulus(long long c, const char* what) {
    if (c < 1) throw std::invalid_argument(std::string(what) + ": modulus must be >= 1");
    if (c > kMaxModulus) throw std::invalid_argument(std::string(what) + ": modulus exceeds cap");
}

} // namespace

PhaseTable::PhaseTable(long long modulus_) : modulus(modulus_) {
    check_modulus(modulus, "PhaseTable");
    root.resize(static_cast<std::size_t>(modulus));
    const double step = 2.0 * std::numbers::pi / static_cast<double>(modulus);
    for (long long k = 0; k < modulus; ++k)
        root[static_cast<std::size_t>(k)] = std::polar(1.0, step * static_cast<double>(k));
}

std::complex<double> gauss_sum(long long a, long long b, long long c, const PhaseTable& table) {
    check_modulus(c, "gauss_sum");
    if (table.modulus != c) throw std::invalid_argument("gauss_sum: table modulus mismatch");
    a = positive_mod(a, c);
    b = positive_mod(b, c);
    std::complex<double> acc{0.0, 0.0};
    long long s = 0; // r^2 mod c, updated incrementally
    for (long long r = 0; r < c; ++r) {
        // a,s,b < c <= 1e6 so a*s + b*r < 2e12, well inside int64.
        long long t = (a * s + b * r) % c;
        acc += table.root[static_cast<std::size_t>(t)];
        s += 2 * r + 1;
        if (s >= c) s %= c;
    }
    return acc;
}

std::complex<double> gauss_sum(long long a, long long b, long long c) {
    check_modulus(c, "gauss_sum");
    return gauss_sum(a, b, c, PhaseTable(c));
}

namespace {

void check_gamma_args(long long p, long long q) {
    if (q < 1) throw std::invalid_argument("gamma_sum: q must be >= 1");
    if (q > kMaxModulus) throw std::invalid_argument("gamma_sum: q exceeds cap");
    long long pr = positive_mod(p, q);
    if (std::gcd(pr, q) != 1)
        throw std::invalid_argument("gamma_sum: p and q must be coprime");
}

} // namespace

std::complex<double> gamma_sum(long long p, long long q, long long m, const PhaseTable& table) {
    check_gamma_args(p, q);
    const long long c2 = 2 * q;
    if (table.modulus != c2) throw std::invalid_argument("gamma_sum: table modulus must be 2q");
    const long long eps = positive_mod(p, 2);
    const long long lin = positive_mod(q * eps + 2 * positive_mod(m, c2), c2);
    const long long quad = positive_mod(-p, c2); // -(p/2) r^2 over denominator q -> -p r^2 over 2q
    std::complex<double> acc{0.0, 0.0};
    long long s = 0; // r^2 mod 2q
    for (long long r = 0; r < q; ++r) {
        long long t = (lin * r + quad * s) % c2;
        acc += table.root[static_cast<std::size_t>(t)];
        s += 2 * r + 1;
        if (s >= c2) s %= c2;
    }
    return acc;
}

std::complex<double> gamma_sum(long long p, long long q, long long m) {
    check_gamma_args(p, q);
    return gamma_sum(p, q, m, PhaseTable(2 * q));
}

long long mod_inverse(long long a, long long m) {
    if (m < 1) throw std::invalid_argument("mod_inverse: modulus must be >= 1");
    a = positive_mod(a, m);
    long long r0 = m, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long k = r0 / r1;
        r0 -= k * r1; std::swap(r0, r1);
        t0 -= k * t1; std::swap(t0, t1);
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: argument not invertible");
    return positive_mod(t0, m);
}

std::complex<double> gamma_via_cases(long long p, long long q, long long m) {
    check_gamma_args(p, q);
    const long long eps = positive_mod(p, 2);
    if (eps == 0) {
        // Gamma(p,q;m) = G(-p/2, m, q) term by term.
        return gauss_sum(positive_mod(-(p / 2), q), positive_mod(m, q), q);
    }
    if (q % 2 == 1) {
        // Gamma = (1/2) G(-p, 2m+q, 2q); split 2q = 2 * q across coprime factors.
        const long long pq = positive_mod(p, q), mq = positive_mod(m, q);
        std::complex<double> g_odd = gauss_sum(positive_mod(-2 * pq, q), positive_mod(2 * mq + q, q), q);
        // -pq and 2m+q are both odd here, so the factor at modulus 2 is G(1,1,2).
        std::complex<double> g_two = gauss_sum(1, 1, 2);
        return 0.5 * g_odd * g_two;
    }
    // p odd, q even: complete the square in G(-p, 2m+q, 2q).
    const long long c2 = 2 * q;
    const long long pinv = mod_inverse(p, c2);
    const long long h = positive_mod(positive_mod(m, c2) + q / 2, c2); // (2m+q)/2 mod 2q
    const long long idx = (pinv * ((h * h) % c2)) % c2;
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(c2);
    return 0.5 * std::polar(1.0, ang) * gauss_sum(positive_mod(-p, c2), 0, c2);
}

} // namespace talbot::gauss
