#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "talbot/carpet.hpp"
#include "talbot/pairings.hpp"
#include "talbot/quadrature.hpp"

using namespace talbot;
using namespace talbot::pairings;
using talbot::fields::Field;
using talbot::testfns::GaussianTest;
using talbot::testfns::PeriodicTest;
using talbot::testfns::TestFunction;
using cplx = std::complex<double>;

namespace {
const double kPi = std::acos(-1.0);

// <field restricted to the line, phi> by direct quadrature of the truncated
// series: the oracle re-derives the closed-form collapse used by the pairings
cplx quad_vertical(Field f, double xi, const GaussianTest& g, bool whole, long long n_max,
                   double r) {
    const double T = std::abs(g.center) + 4.2 * g.width;
    AdaptiveOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-15;
    opts.initial_panels = 256;
    auto f1 = [&](double zeta) {
        cplx weight = testfns::eval(g, zeta);
        if (whole) weight += testfns::eval(g, -zeta);
        return fields::eval_field(f, xi, zeta, n_max, r) * weight;
    };
    auto q = integrate(f1, 0.0, T, opts);
    REQUIRE(q.converged);
    return q.value;
}

cplx quad_oblique_piece(Field f, double m, double k, const GaussianTest& g, long long n_max,
                        double r, bool mirror) {
    // forward piece: zeta = m xi - k > 0; mirror piece: the even extension
    // reaches zeta = k - m xi > 0 on the other side of xi = k/m
    const double s = k / m;
    const double reach = std::abs(g.center - s) + 4.2 * g.width;
    AdaptiveOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-15;
    opts.initial_panels = 512;
    auto f1 = [&](double xi) {
        const double zeta = mirror ? k - m * xi : m * xi - k;
        return fields::eval_field(f, xi, zeta, n_max, r) * testfns::eval(g, xi);
    };
    const bool left = (m > 0.0) == mirror; // integrate the xi < s side?
    auto q = left ? integrate(f1, s - reach, s, opts) : integrate(f1, s, s + reach, opts);
    REQUIRE(q.converged);
    return q.value;
}

std::vector<SweepRecord> synthetic(std::initializer_list<double> rs,
                                   std::function<double(double)> err) {
    std::vector<SweepRecord> recs;
    for (double r : rs) {
        SweepRecord rec;
        rec.r = r;
        rec.mu = 1;
        rec.err_pair = err(r);
        rec.err_low = 1.0;
        recs.push_back(rec);
    }
    return recs;
}
} // namespace

TEST_CASE("horizontal pairings: theta value, comb identities, periodic data") {
    GaussianTest g;
    auto pv = pair_horizontal(Field::schrodinger, 0.0, g, 8);
    // sum_n e^{-pi n^2} = pi^{1/4} / Gamma(3/4)
    CHECK(std::abs(pv.value - cplx{1.0864348112133080, 0.0}) < 1e-14);
    CHECK(pv.tail_bound < 1e-20);
    CHECK(pv.n_max == 8);
    auto pw = pair_horizontal(Field::helmholtz, 0.0, g, 8, 7.3);
    CHECK(pw.value == pv.value); // all coefficients are exactly 1 at zeta = 0

    // revival at zeta = 1/3: pairing equals the weighted comb sum
    auto comb = carpet::revival_comb(1, 3);
    cplx expect{0.0, 0.0};
    for (std::size_t m = 0; m < comb.weight.size(); ++m)
        for (long long j = -7; j <= 7; ++j)
            expect += comb.weight[m] * testfns::eval(g, comb.location[m] + j);
    CHECK(std::abs(pair_horizontal(Field::schrodinger, 1.0 / 3.0, g, 12).value - expect) < 1e-13);

    // zeta = 1 is the half-period shift: a unit comb at xi = 1/2
    cplx shifted{0.0, 0.0};
    for (long long j = -7; j <= 7; ++j) shifted += testfns::eval(g, 0.5 + j);
    CHECK(std::abs(pair_horizontal(Field::schrodinger, 1.0, g, 12).value - shifted) < 1e-13);

    PeriodicTest p;
    p.degree = 1;
    p.coeff = Eigen::ArrayXcd(3);
    p.coeff << cplx{0.0, 0.5}, cplx{0.0, 0.0}, cplx{-0.25, 0.0};
    const double z = 0.37;
    auto pp = pair_horizontal(Field::schrodinger, z, p, 4);
    const cplx c1 = fields::schrodinger_coeff(1, z);
    CHECK(std::abs(pp.value - c1 * (p.coeff[0] + p.coeff[2])) < 1e-15);
    CHECK(pp.tail_bound == 0.0);
    CHECK(pair_horizontal(Field::schrodinger, z, p, 0).tail_bound == 0.75);
}

TEST_CASE("vertical pairings against direct quadrature") {
    GaussianTest g{0.3, 0.7, 0.0};
    const double xi = 0.2;
    for (Field f : {Field::schrodinger, Field::helmholtz}) {
        const double r = f == Field::helmholtz ? 3.5 : 0.0;
        auto half = pair_vertical(f, xi, g, Restriction::half, 8, r);
        CHECK(std::abs(half.value - quad_vertical(f, xi, g, false, 8, r)) < 1e-10);
        auto whole = pair_vertical(f, xi, g, Restriction::whole, 8, r);
        CHECK(std::abs(whole.value - quad_vertical(f, xi, g, true, 8, r)) < 1e-10);
    }
    // dropped-term bounds: explicit for v, zero for w once n_max covers the
    // propagating range (the dropped evanescent terms define the object)
    CHECK(pair_vertical(Field::schrodinger, xi, g, Restriction::half, 8).tail_bound ==
          doctest::Approx(2.0 * 3.0 / (kPi * 8.0)).epsilon(1e-14));
    CHECK(pair_vertical(Field::schrodinger, xi, g, Restriction::whole, 8).tail_bound ==
          doctest::Approx(4.0 * 3.0 / (kPi * 8.0)).epsilon(1e-14));
    CHECK(pair_vertical(Field::helmholtz, xi, g, Restriction::half, 8, 3.5).tail_bound == 0.0);
}

TEST_CASE("whole restriction equals half plus reflected half") {
    GaussianTest g{0.3, 0.7, 1.1};
    GaussianTest gr = testfns::reflected(g);
    for (Field f : {Field::schrodinger, Field::helmholtz}) {
        const double r = f == Field::helmholtz ? 3.5 : 0.0;
        cplx whole = pair_vertical(f, 0.2, g, Restriction::whole, 8, r).value;
        cplx two = pair_vertical(f, 0.2, g, Restriction::half, 8, r).value +
                   pair_vertical(f, 0.2, gr, Restriction::half, 8, r).value;
        CHECK(std::abs(whole - two) < 1e-14);
        // through xi = k/m with k = 0 the mirror piece is the reflected half
        cplx owhole = pair_oblique(f, 2.0, 0.0, g, Restriction::whole, 8, r).value;
        cplx otwo = pair_oblique(f, 2.0, 0.0, g, Restriction::half, 8, r).value +
                    pair_oblique(f, 2.0, 0.0, gr, Restriction::half, 8, r).value;
        CHECK(std::abs(owhole - otwo) < 1e-14);
    }
}

TEST_CASE("oblique pairings against direct quadrature") {
    GaussianTest g{0.3, 0.7, 0.0};
    const double m = 2.0, k = 0.6;
    for (Field f : {Field::schrodinger, Field::helmholtz}) {
        const double r = f == Field::helmholtz ? 3.5 : 0.0;
        auto half = pair_oblique(f, m, k, g, Restriction::half, 6, r);
        CHECK(std::abs(half.value - quad_oblique_piece(f, m, k, g, 6, r, false)) < 1e-10);
        auto whole = pair_oblique(f, m, k, g, Restriction::whole, 6, r);
        cplx both = quad_oblique_piece(f, m, k, g, 6, r, false) +
                    quad_oblique_piece(f, m, k, g, 6, r, true);
        CHECK(std::abs(whole.value - both) < 1e-10);
    }
    // negative slope: the half restriction is the xi < k/m side
    auto neg = pair_oblique(Field::schrodinger, -m, k, g, Restriction::half, 6);
    CHECK(std::abs(neg.value - quad_oblique_piece(Field::schrodinger, -m, k, g, 6, 0.0, false)) <
          1e-10);
    // and reduces exactly to the reflected positive-slope pairing
    auto refl = pair_oblique(Field::schrodinger, m, k, testfns::reflected(g), Restriction::half, 6);
    CHECK(neg.value == refl.value);
    CHECK(neg.tail_bound == refl.tail_bound);

    CHECK(pair_oblique(Field::schrodinger, m, k, g, Restriction::half, 6).tail_bound ==
          doctest::Approx(4.0 * 3.0 / (kPi * m * 7.0)).epsilon(1e-14));
}

TEST_CASE("pairing validation") {
    GaussianTest g;
    PeriodicTest p;
    p.degree = 0;
    p.coeff = Eigen::ArrayXcd::Ones(1);
    CHECK_THROWS_AS((void)pair_vertical(Field::schrodinger, 0.0, p, Restriction::half, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)pair_oblique(Field::schrodinger, 1.0, 0.0, p, Restriction::half, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)pair_oblique(Field::schrodinger, 0.0, 0.0, g, Restriction::half, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)pair_horizontal(Field::helmholtz, 0.5, g, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)pair_horizontal(Field::schrodinger, 0.5, g, -1), std::invalid_argument);
}

TEST_CASE("Sobolev error of the field difference") {
    CHECK(hs_error(10.0, 0.0, 1.0, 64) == 0.0);
    CHECK(hs_error(10.0, -0.4, 1.0, 64) == hs_error(10.0, 0.4, 1.0, 64));
    CHECK(hs_error(10.0, 1.0 / 3.0, 2.0, 64) <= hs_error(10.0, 1.0 / 3.0, 0.6, 64));
    double prev = 1e300;
    for (double r : {10.0, 100.0, 1000.0, 10000.0}) {
        const double e = hs_error(r, 1.0 / 3.0, 1.0, static_cast<long long>(r) + 2);
        CHECK(e < prev);
        prev = e;
    }
    CHECK_THROWS_AS((void)hs_error(10.0, 0.4, 0.5, 64), std::invalid_argument);
    CHECK_THROWS_AS((void)hs_error(0.0, 0.4, 1.0, 64), std::invalid_argument);
    CHECK_THROWS_AS((void)hs_error(10.0, 0.4, 1.0, 0), std::invalid_argument);
}

TEST_CASE("sweep bands reassemble the pairings") {
    GaussianTest g;
    LineSpec line;
    line.kind = LineKind::horizontal;
    line.zeta = 1.0 / 3.0;
    auto recs = sweep(line, g, {std::pow(10.0, 1.5), 100.0}, {}, 1.0);
    REQUIRE(recs.size() == 2);

    // recompute the first record from the raw coefficients
    const double r = std::pow(10.0, 1.5);
    const long long n_max = default_n_max(r, TestFunction{g});
    CHECK(recs[0].r == r);
    CHECK(recs[0].mu == 1);
    CHECK_FALSE(recs[0].integer_r);
    const auto edges = fields::band_edges(r, recs[0].mu);
    auto band = [&](Field f, long long lo, long long hi) {
        cplx acc{0.0, 0.0};
        for (long long a = std::max<long long>(lo, 0); a <= hi; ++a) {
            cplx cp = f == Field::schrodinger ? fields::schrodinger_coeff(a, line.zeta)
                                              : fields::helmholtz_coeff(a, line.zeta, r);
            cplx cm = f == Field::schrodinger ? fields::schrodinger_coeff(-a, line.zeta)
                                              : fields::helmholtz_coeff(-a, line.zeta, r);
            cplx t = cp * testfns::ft(g, static_cast<double>(-a)) +
                     cm * testfns::ft(g, static_cast<double>(a));
            acc += a == 0 ? 0.5 * t : t; // a = 0 contributes once
        }
        return acc;
    };
    const cplx low_w = band(Field::helmholtz, 0, edges.mu);
    const cplx mid_w = band(Field::helmholtz, edges.mu + 1, std::min(edges.mid_hi, n_max));
    const cplx high_w = band(Field::helmholtz, edges.mid_hi + 1, n_max);
    const cplx low_v = band(Field::schrodinger, 0, edges.mu);
    const cplx tail_v = band(Field::schrodinger, edges.mu + 1, n_max);
    CHECK(std::abs(recs[0].err_pair - std::abs(low_w + mid_w + high_w - low_v - tail_v)) < 1e-12);
    CHECK(std::abs(recs[0].err_low - std::abs(low_w - low_v)) < 1e-12);
    CHECK(std::abs(recs[0].err_mid - std::abs(mid_w)) < 1e-12);
    CHECK(std::abs(recs[0].err_high - std::abs(high_w)) < 1e-12);
    CHECK(std::abs(recs[0].err_tail_v - std::abs(tail_v)) < 1e-12);
    REQUIRE(recs[0].err_hs.has_value());
    CHECK(*recs[0].err_hs == hs_error(r, line.zeta, 1.0, n_max));
}

TEST_CASE("sweep at the grating height and flags") {
    GaussianTest g;
    LineSpec line; // horizontal, zeta = 0
    auto recs = sweep(line, g, {2.0, 2.8, 4.0}, {}, 1.0);
    REQUIRE(recs.size() == 3);
    for (const auto& rec : recs) {
        CHECK(rec.err_pair == 0.0); // every coefficient pair coincides
        CHECK(rec.err_low == 0.0);
        CHECK(*rec.err_hs == 0.0);
        CHECK(rec.err_mid > 0.0); // the bands themselves are not empty
        // ...and cancel against the v tail, which also covers the high band
        CHECK(std::abs(rec.err_mid + rec.err_high - rec.err_tail_v) < 1e-15);
    }
    CHECK(recs[0].integer_r);
    CHECK_FALSE(recs[1].integer_r);
    CHECK(recs[2].integer_r);
}

TEST_CASE("sweep on vertical and oblique lines: decrease and triangle rows") {
    GaussianTest g;
    for (LineKind kind : {LineKind::vertical, LineKind::oblique}) {
        LineSpec line;
        line.kind = kind;
        line.xi = 0.0;
        line.m = 1.0;
        line.k = 0.0;
        auto recs = sweep(line, g, {100.0, std::pow(10.0, 2.5), 1000.0});
        REQUIRE(recs.size() == 3);
        CHECK(recs[0].err_pair > recs[1].err_pair);
        CHECK(recs[1].err_pair > recs[2].err_pair);
        for (const auto& rec : recs) {
            const double e[5] = {rec.err_pair, rec.err_low, rec.err_mid, rec.err_high,
                                 rec.err_tail_v};
            for (int i = 0; i < 5; ++i) {
                double others = 0.0;
                for (int j = 0; j < 5; ++j)
                    if (j != i) others += e[j];
                CHECK(e[i] <= others + 1e-12);
            }
        }
    }
}

TEST_CASE("sweep validation") {
    GaussianTest g;
    LineSpec line;
    CHECK_THROWS_AS((void)sweep(line, g, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)sweep(line, g, {10.0, 10.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)sweep(line, g, {-1.0, 10.0}), std::invalid_argument);
    LineSpec vert;
    vert.kind = LineKind::vertical;
    CHECK_THROWS_AS((void)sweep(vert, g, {10.0, 20.0}, {}, 1.0), std::invalid_argument);
}

TEST_CASE("default grids and truncation rule") {
    auto grid = default_r_grid();
    REQUIRE(grid.size() == 7);
    CHECK(grid.front() == 10.0);
    CHECK(grid.back() == 1e4);
    CHECK(grid[1] == std::pow(10.0, 1.5));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);

    GaussianTest g;
    CHECK(default_n_max(10.0, g) == 12);
    CHECK(default_n_max(0.0, g) == 4); // where e^{-pi n^2} passes 1e-16
    CHECK(default_n_max(1.0, GaussianTest{0.0, 1.0, 5.0}) == 9);
    PeriodicTest p;
    p.degree = 7;
    p.coeff = Eigen::ArrayXcd::Ones(15);
    CHECK(default_n_max(2.0, p) == 7);
}

TEST_CASE("csv output") {
    std::vector<SweepRecord> recs(2);
    recs[0] = SweepRecord{10.0, 1, 0.5, 0.25, 0.125, 0.0625, 0.0, 2.0, false};
    recs[1] = SweepRecord{20.0, 2, 1.0, 1.0, 1.0, 1.0, 1.0, std::nullopt, true};
    std::ostringstream out;
    write_csv(out, recs);
    CHECK(out.str() == "r,mu,err_pair,err_low,err_mid,err_high,err_tail_v,err_hs\n"
                       "10,1,0.5,0.25,0.125,0.0625,0,2\n"
                       "20,2,1,1,1,1,1,\n");
}

TEST_CASE("rate fits") {
    auto exact = synthetic({10.0, 100.0, 1000.0}, [](double r) { return 5.0 / (r * r); });
    auto fit = rate_fit(exact, "err_pair");
    CHECK_FALSE(fit.degenerate);
    CHECK(std::abs(fit.slope + 2.0) < 1e-12);

    auto flat = rate_fit(exact, "err_low"); // constant column
    CHECK_FALSE(flat.degenerate);
    CHECK(std::abs(flat.slope) < 1e-12);

    auto zero = synthetic({10.0, 100.0, 1000.0}, [](double r) { return r < 50.0 ? 0.0 : 1.0; });
    CHECK(rate_fit(zero, "err_pair").degenerate);

    auto two = synthetic({10.0, 100.0}, [](double) { return 1.0; });
    CHECK_THROWS_AS((void)rate_fit(two, "err_pair"), std::invalid_argument);
    CHECK_THROWS_AS((void)rate_fit(exact, "err_hs"), std::invalid_argument);
    CHECK_THROWS_AS((void)rate_fit(exact, "banana"), std::invalid_argument);

    // measured rates on horizontal sweeps
    GaussianTest g;
    LineSpec line;
    line.zeta = 1.0 / 3.0;
    auto recs = sweep(line, g, default_r_grid());
    CHECK(rate_fit(recs, "err_low").slope <= -0.1);
    line.zeta = 0.5;
    auto small = sweep(line, g, {2.0, 2.8, 4.0});
    auto high = rate_fit(small, "err_high");
    if (!high.degenerate) CHECK(high.slope <= -2.0);
}
