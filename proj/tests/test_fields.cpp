#include <doctest.h>

#include <cmath>
#include <complex>

#include "talbot/fields.hpp"

using namespace talbot;
using namespace talbot::fields;
using cplx = std::complex<double>;

namespace {
const double kPi = std::acos(-1.0);
bool close(cplx a, cplx b, double tol = 1e-13) { return std::abs(a - b) <= tol; }
} // namespace

TEST_CASE("schrodinger coefficients") {
    CHECK(schrodinger_coeff(3, 0.0) == cplx{1.0, 0.0});
    CHECK(schrodinger_coeff(2, 0.5) == cplx{1.0, 0.0}); // n^2 zeta = 2, exact even integer
    CHECK(close(schrodinger_coeff(1, 1.0 / 3.0), std::polar(1.0, -kPi / 3.0), 1e-15));
    CHECK(close(schrodinger_coeff(1, Rational(1, 3)), std::polar(1.0, -kPi / 3.0), 1e-15));
    // exact rational reduction agrees with the double path at moderate n
    for (long long n : {0LL, 3LL, 17LL, 101LL})
        CHECK(close(schrodinger_coeff(n, 5.0 / 7.0), schrodinger_coeff(n, Rational(5, 7)), 1e-10));
    // phases have unit modulus
    for (long long n : {1LL, 7LL, 40LL})
        CHECK(std::abs(std::abs(schrodinger_coeff(n, 0.7113)) - 1.0) < 1e-15);
}

TEST_CASE("helmholtz coefficients: branches, symmetry, magnitudes") {
    CHECK(helmholtz_coeff(0, 0.77, 12.0) == cplx{1.0, 0.0});
    CHECK(helmholtz_coeff(5, 0.0, 3.0) == cplx{1.0, 0.0});
    // a_3 = 9/(1+4/5) = 5 at r = 5, so the coefficient at zeta = 1/2 is e^{-5 pi i}
    CHECK(close(helmholtz_coeff(3, 0.5, 5.0), cplx{-1.0, 0.0}, 1e-14));
    // |n| = r sits on the propagating branch with frequency r^2
    CHECK(close(helmholtz_coeff(5, 0.3, 5.0), std::polar(1.0, -2.0 * kPi * 25.0 * 0.3), 1e-12));
    // evanescent magnitude e^{-3 pi sqrt(7)} at (n=4, zeta=0.5, r=3)
    CHECK(std::abs(std::abs(helmholtz_coeff(4, 0.5, 3.0)) - std::exp(-3.0 * kPi * std::sqrt(7.0))) <
          1e-12 * std::exp(-3.0 * kPi * std::sqrt(7.0)));
    // even in zeta, exactly
    CHECK(helmholtz_coeff(7, -0.4, 9.5) == helmholtz_coeff(7, 0.4, 9.5));
    CHECK(helmholtz_coeff(11, -0.4, 9.5) == helmholtz_coeff(11, 0.4, 9.5));
    // unit modulus on the propagating branch
    for (long long n = 0; n <= 9; ++n)
        CHECK(std::abs(std::abs(helmholtz_coeff(n, 0.37, 9.5)) - 1.0) < 1e-15);
    // decaying beyond, hard zero once the exponent passes the underflow guard
    CHECK(std::abs(helmholtz_coeff(11, 0.37, 9.5)) < 1.0);
    CHECK(helmholtz_coeff(1000, 1.0, 10.0) == cplx{0.0, 0.0});
}

TEST_CASE("phase frequency and decay rate") {
    CHECK(helmholtz_phase_freq(0, 7.0) == 0.0);
    CHECK(helmholtz_phase_freq(3, 5.0) == 5.0);
    // cancellation-free at n << r: a_1 -> 1/2 with no loss
    CHECK(std::abs(helmholtz_phase_freq(1, 1e8) - 0.5) < 1e-12);
    // y^2 + r^4 = r^2 n^2
    double y = helmholtz_decay_rate(11, 10.0);
    CHECK(std::abs(y * y + 1e4 - 100.0 * 121.0) < 1e-9);
}

TEST_CASE("coefficient vectors match scalar evaluations") {
    auto sv = schrodinger_coeffs(5, 0.4);
    auto sr = schrodinger_coeffs(5, Rational(2, 5));
    auto hv = helmholtz_coeffs(5, 0.4, 3.5);
    REQUIRE(sv.size() == 11);
    for (long long n = -5; n <= 5; ++n) {
        CHECK(sv[5 + n] == schrodinger_coeff(n, 0.4));
        CHECK(sr[5 + n] == schrodinger_coeff(n, Rational(2, 5)));
        CHECK(hv[5 + n] == helmholtz_coeff(n, 0.4, 3.5));
    }
}

TEST_CASE("eval_field basics and exact identities") {
    CHECK(close(eval_field(Field::schrodinger, 0.0, 0.0, 3), cplx{7.0, 0.0}, 1e-13));
    // 2-periodicity: exact through the rational reduction, exact for dyadic doubles
    for (double xi : {0.0, 0.21, 0.5}) {
        CHECK(eval_field(Field::schrodinger, xi, Rational(1, 3), 64) ==
              eval_field(Field::schrodinger, xi, Rational(7, 3), 64));
        CHECK(eval_field(Field::schrodinger, xi, 0.375, 64) ==
              eval_field(Field::schrodinger, xi, 2.375, 64));
        // half-period shift v(xi, 1) = v(xi + 1/2, 0)
        CHECK(close(eval_field(Field::schrodinger, xi, 1.0, 64),
                    eval_field(Field::schrodinger, xi + 0.5, 0.0, 64), 1e-10));
    }
}

TEST_CASE("mu schedule") {
    MuSchedule mu;
    CHECK(mu(10.0) == 1);
    CHECK(mu(100.0) == 2);
    CHECK(mu(1000.0) == 3);
    CHECK(mu(10000.0) == 6);
    CHECK(mu(1.2) == 1); // floor to >= 1
    CHECK((MuSchedule{0.24, 2.0}(100.0)) == 6);
    CHECK_THROWS_AS(((void)MuSchedule{0.25, 1.0}(10.0)), std::invalid_argument);
    CHECK_THROWS_AS(((void)MuSchedule{0.2, 0.0}(10.0)), std::invalid_argument);
    CHECK_THROWS_AS(((void)MuSchedule{}(0.0)), std::invalid_argument);
}

TEST_CASE("band edges and band sums") {
    CHECK(band_edges(10.0, 2).mid_hi == 11);
    CHECK(band_edges(10.5, 2).mid_hi == 11);
    CHECK(band_edges(10.999, 3).mid_hi == 11);

    CHECK(close(eval_band(Band::low, 0.0, 0.0, 100.0, 2), cplx{5.0, 0.0}, 1e-13));
    CHECK(close(eval_band(Band::mid, 0.0, 0.0, 10.0, 2, 20), cplx{18.0, 0.0}, 1e-12));

    // completeness: low + mid + high(truncated at N) = full truncated field
    double xi = 0.137, zeta = 0.52, r = 12.3;
    long long N = 40;
    cplx whole = eval_field(Field::helmholtz, xi, zeta, N, r);
    cplx parts = eval_band(Band::low, xi, zeta, r, 2, N) + eval_band(Band::mid, xi, zeta, r, 2, N) +
                 eval_band(Band::high, xi, zeta, r, 2, N);
    CHECK(std::abs(whole - parts) < 1e-12);

    // high band magnitude decreasing over growing r (saturates at 0)
    double prev = 1e300;
    for (double rr : {10.0, 100.0, 1000.0}) {
        double v = std::abs(eval_band(Band::high, 0.3, 0.5, rr, 2));
        CHECK(v <= prev);
        prev = v;
    }
    CHECK_THROWS_AS((void)eval_band(Band::high, 0.0, 0.0, 10.0, 2), std::invalid_argument);
}

TEST_CASE("low band sup error: reference, oracle point, degenerate grid") {
    auto e = low_band_sup_error(1000.0, 1);
    CHECK(e.reference == 1e-3);
    // value at the grid point (xi=0, zeta=1): three-term direct evaluation
    double a1 = helmholtz_phase_freq(1, 1000.0);
    cplx oracle = (std::polar(1.0, -2.0 * kPi * a1) - std::polar(1.0, -kPi)) * 2.0;
    CHECK(e.sup_error >= std::abs(oracle) - 1e-15);

    GridSpec zero_grid{8, 1, 0.0};
    CHECK(low_band_sup_error(100.0, 2, zero_grid).sup_error == 0.0);
    CHECK_THROWS_AS((void)low_band_sup_error(2.0, 5), std::invalid_argument);
}

TEST_CASE("high tail sum versus comparison integral") {
    CHECK_THROWS_AS((void)high_tail_sup(10.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)high_tail_sup(10.0, -0.5), std::invalid_argument);

    auto ht = high_tail_sup(10.0, 0.1);
    CHECK(ht.terms > 0);
    CHECK(ht.sum > 0.0);
    CHECK(ht.sum <= 2.0 * ht.integral);
    CHECK(std::abs(std::exp(ht.log_sum) - ht.sum) < 1e-12 * ht.sum);

    // underflowed plain sum still has a finite, strictly decreasing log
    double prev = 1e300;
    for (double r : {10.0, 100.0, 1000.0}) {
        auto h = high_tail_sup(r, 0.5);
        CHECK(h.sum <= 2.0 * h.integral);
        CHECK(h.log_sum < prev);
        prev = h.log_sum;
    }

    auto lead = high_tail_sup(1000.0, 0.5);
    CHECK(std::abs(lead.integral / lead.integral_leading - 1.0) < 0.01);
    CHECK(std::abs(lead.integral_leading - 1.0 / (16.0 * kPi * kPi * 0.25 * 1e9)) < 1e-20);
}

TEST_CASE("borderline coefficient between mid and high band") {
    CHECK_THROWS_AS((void)borderline_term(10.0, 0.5), std::invalid_argument); // integer r
    CHECK_THROWS_AS((void)borderline_term(10.5, 0.0), std::invalid_argument);
    CHECK(borderline_term(1000.0 - 1e-6, 0.5) == doctest::Approx(9.62132e-62).epsilon(1e-4));
    CHECK(borderline_term(10.5, 1e-12) > 1.0 - 1e-9);
    // decays like e^{-c r^{3/2}} at half-integer gap
    CHECK(borderline_term(999.5, 0.5) < 1e-80);
}
