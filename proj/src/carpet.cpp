#include "talbot/carpet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "talbot/gauss.hpp"
#include "talbot/parallel.hpp"

namespace talbot::carpet {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Periodized Gaussian (1/sigma) sum_k e^{-pi ((x-k)/sigma)^2}; with
// sigma <= 1/8 only the nearest images matter, images beyond |k| = 2 are
// below 1e-300 for every x in (-1, 1).
double periodized_gaussian(double x, double sigma) {
    double s = 0.0;
    for (int k = -2; k <= 2; ++k) {
        double u = (x - k) / sigma;
        double e = kPi * u * u;
        if (e < 745.0) s += std::exp(-e);
    }
    return s / sigma;
}

// sum_n moll(n) c_n e^{2 pi i n j/size} for all j, by folding the
// coefficients mod size and one inverse FFT (which carries the e^{+i} sign).
std::vector<std::complex<double>> fold_and_fft(
    int size, long long n_max, const std::function<std::complex<double>(long long)>& coeff) {
    std::vector<std::complex<double>> bins(static_cast<std::size_t>(size));
    for (long long n = -n_max; n <= n_max; ++n) {
        std::complex<double> c = coeff(n);
        if (c == std::complex<double>(0.0, 0.0)) continue;
        long long b = ((n % size) + size) % size;
        bins[static_cast<std::size_t>(b)] += c;
    }
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> out(bins.size());
    fft.inv(out, bins);
    for (auto& z : out) z *= static_cast<double>(size); // undo the 1/N of inv
    return out;
}

} // namespace

DeltaComb revival_comb(long long p, long long q) {
    if (q < 1) throw std::invalid_argument("revival_comb: q must be >= 1");
    if (std::gcd(p, q) != 1) throw std::invalid_argument("revival_comb: gcd(p,q) must be 1");
    DeltaComb comb;
    comb.p = p;
    comb.q = q;
    long long pm2 = ((p % 2) + 2) % 2;
    comb.shift = 0.5 * static_cast<double>(pm2);
    comb.location.resize(static_cast<std::size_t>(q));
    comb.weight.resize(static_cast<std::size_t>(q));
    gauss::PhaseTable table(2 * q);
    for (long long m = 0; m < q; ++m) {
        comb.location[static_cast<std::size_t>(m)] =
            std::fmod(comb.shift + static_cast<double>(m) / static_cast<double>(q), 1.0);
        comb.weight[static_cast<std::size_t>(m)] =
            gauss::gamma_sum(p, q, m, table) / static_cast<double>(q);
    }
    return comb;
}

CombCheck smoothed_comb_check(long long p, long long q, double sigma, long long n_max) {
    DeltaComb comb = revival_comb(p, q);
    if (!(sigma > 0.0) || sigma > 1.0 / (8.0 * static_cast<double>(q)))
        throw std::invalid_argument("smoothed_comb_check: need 0 < sigma <= 1/(8q)");
    if (static_cast<double>(n_max) < 10.0 / sigma)
        throw std::invalid_argument("smoothed_comb_check: need n_max >= 10/sigma");

    int size = 4096;
    while (static_cast<double>(size) < 4.0 / sigma) size *= 2;

    // Frequency side: mollified coefficients of v at zeta = p/q.
    Rational zeta(p, q);
    auto coeff = [&](long long n) -> std::complex<double> {
        double e = kPi * sigma * sigma * static_cast<double>(n) * static_cast<double>(n);
        if (e > 745.0) return {0.0, 0.0};
        return std::exp(-e) * fields::schrodinger_coeff(n, zeta);
    };
    std::vector<std::complex<double>> a = fold_and_fft(size, n_max, coeff);

    // Spatial side: the predicted comb convolved with the same mollifier.
    CombCheck check;
    check.peak_scale = periodized_gaussian(0.0, sigma);
    for (int j = 0; j < size; ++j) {
        double xi = static_cast<double>(j) / static_cast<double>(size);
        std::complex<double> b(0.0, 0.0);
        for (long long m = 0; m < q; ++m)
            b += comb.weight[static_cast<std::size_t>(m)] *
                 periodized_gaussian(xi - comb.location[static_cast<std::size_t>(m)], sigma);
        check.max_abs_diff = std::max(check.max_abs_diff, std::abs(a[static_cast<std::size_t>(j)] - b));
    }

    // Peak heights straight from the coefficient sum at the exact tooth
    // positions xi_m = (q (p mod 2) + 2m)/(2q): every phase is an exact
    // residue mod 2q, so the only rounding is in the final exponentials.
    long long pm2 = ((p % 2) + 2) % 2;
    gauss::PhaseTable table(2 * q);
    check.peak_ratio.resize(static_cast<std::size_t>(q));
    for (long long m = 0; m < q; ++m) {
        std::complex<double> peak(0.0, 0.0);
        for (long long n = -n_max; n <= n_max; ++n) {
            double e = kPi * sigma * sigma * static_cast<double>(n) * static_cast<double>(n);
            if (e > 745.0) continue;
            __int128 t = static_cast<__int128>(-p) * n * n +
                         static_cast<__int128>(q * pm2 + 2 * m) * n;
            long long mod = 2 * q;
            long long tr = static_cast<long long>(((t % mod) + mod) % mod);
            peak += std::exp(-e) * table.root[static_cast<std::size_t>(tr)];
        }
        check.peak_ratio[static_cast<std::size_t>(m)] = std::abs(peak) / check.peak_scale;
    }
    return check;
}

Eigen::ArrayXd render_row(const RenderParams& params, const Rational& zeta) {
    auto coeff = [&](long long n) -> std::complex<double> {
        std::complex<double> c = params.field == fields::Field::schrodinger
                                     ? fields::schrodinger_coeff(n, zeta)
                                     : fields::helmholtz_coeff(n, zeta.value(), params.r);
        if (params.sigma > 0.0) {
            double e = kPi * params.sigma * params.sigma *
                       static_cast<double>(n) * static_cast<double>(n);
            if (e > 745.0) return {0.0, 0.0};
            c *= std::exp(-e);
        }
        return c;
    };
    std::vector<std::complex<double>> row = fold_and_fft(params.width, params.n_max, coeff);
    Eigen::ArrayXd intensity(params.width);
    for (int j = 0; j < params.width; ++j)
        intensity[j] = std::norm(row[static_cast<std::size_t>(j)]);
    return intensity;
}

IntensityGrid render(const RenderParams& params) {
    if (params.width < 1 || params.height < 1)
        throw std::invalid_argument("render: width and height must be >= 1");
    if (params.n_max < 0) throw std::invalid_argument("render: n_max must be >= 0");
    if (params.sigma < 0.0) throw std::invalid_argument("render: sigma must be >= 0");
    if (params.field == fields::Field::schrodinger && params.sigma == 0.0)
        throw std::invalid_argument("render: v needs sigma > 0, the raw series is not a function");
    if (params.field == fields::Field::helmholtz && !(params.r > 0.0))
        throw std::invalid_argument("render: w needs r > 0");

    IntensityGrid grid;
    grid.width = params.width;
    grid.height = params.height;
    grid.values.resize(static_cast<std::size_t>(params.width) *
                       static_cast<std::size_t>(params.height));
    parallel_for(static_cast<std::size_t>(params.height), [&](std::size_t i) {
        Rational zeta(2 * static_cast<long long>(i), params.height);
        Eigen::ArrayXd row = render_row(params, zeta);
        std::copy(row.data(), row.data() + params.width,
                  grid.values.begin() + static_cast<std::ptrdiff_t>(i) * params.width);
    });
    return grid;
}

void write_pgm16(std::ostream& out, const IntensityGrid& grid) {
    if (grid.width < 1 || grid.height < 1 ||
        grid.values.size() != static_cast<std::size_t>(grid.width) * static_cast<std::size_t>(grid.height))
        throw std::invalid_argument("write_pgm16: malformed grid");
    double vmax = *std::max_element(grid.values.begin(), grid.values.end());
    out << "P5\n" << grid.width << " " << grid.height << "\n65535\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(grid.values.size() * 2);
    for (double v : grid.values) {
        double t = vmax > 0.0 ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
        auto u = static_cast<unsigned int>(std::lround(t * 65535.0));
        bytes.push_back(static_cast<unsigned char>(u >> 8));
        bytes.push_back(static_cast<unsigned char>(u & 0xffu));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void write_row_csv(std::ostream& out, const IntensityGrid& grid, int row) {
    if (row < 0 || row >= grid.height)
        throw std::invalid_argument("write_row_csv: row out of range");
    out << "xi,intensity\n";
    char line[128];
    for (int j = 0; j < grid.width; ++j) {
        double xi = static_cast<double>(j) / static_cast<double>(grid.width);
        double v = grid.values[static_cast<std::size_t>(row) * grid.width + j];
        std::snprintf(line, sizeof line, "%.17g,%.17g\n", xi, v);
        out << line;
    }
}

} // namespace talbot::carpet
