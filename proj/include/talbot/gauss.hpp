#pragma once

#include <complex>
#include <vector>

namespace talbot::gauss {

// Quadratic Gauss sums with exact integer phase arithmetic.
//
//   gauss_sum:  G(a,b,c) = sum_{r=0}^{c-1} e^{2 pi i (a r^2 + b r)/c}
//   gamma_sum:  Gamma(p,q;m) = sum_{r=0}^{q-1}
//                 e^{2 pi i [ (q (p mod 2)/2 + m) r - (p/2) r^2 ] / q },
//               gcd(p,q) = 1.
//
// Half-integer exponents are handled by working over the common denominator
// 2q, so every phase is e^{2 pi i t / (2q)} with t an exact residue. Only the
// final exponential is floating point; |Gamma| = sqrt(q) then holds to
// rounding for every admissible (p,q,m).

inline constexpr long long kMaxModulus = 1'000'000;

// e^{2 pi i k / modulus} for k in [0, modulus). Reusable across many sums
// with the same modulus; the table is the only trigonometry involved.
struct PhaseTable {
    long long modulus;
    std::vector<std::complex<double>> root;
    explicit PhaseTable(long long modulus_);
};

std::complex<double> gauss_sum(long long a, long long b, long long c);
std::complex<double> gauss_sum(long long a, long long b, long long c, const PhaseTable& table);

std::complex<double> gamma_sum(long long p, long long q, long long m);
// table must have modulus 2q.
std::complex<double> gamma_sum(long long p, long long q, long long m, const PhaseTable& table);

// Gamma(p,q;m) evaluated through the case reductions instead of directly:
//   p even:          G(-p/2, m, q)
//   p odd, q odd:    (1/2) G(-2p, 2m+q, q) * G(-pq, 2m+q, 2)
//   p odd, q even:   (1/2) e^{2 pi i p^{-1} ((2m+q)/2)^2 / (2q)} * G(-p, 0, 2q)
// (multiplicativity of G across coprime moduli, and completing the square
// with the inverse of p modulo 2q). Agrees with gamma_sum as a complex value.
std::complex<double> gamma_via_cases(long long p, long long q, long long m);

// Inverse of a modulo m (extended Euclid); throws std::domain_error when
// gcd(a,m) != 1.
long long mod_inverse(long long a, long long m);

} // namespace talbot::gauss
