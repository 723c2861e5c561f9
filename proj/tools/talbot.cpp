// talbot: command-line front end. Subcommands
//   gauss    quadratic Gauss sums and their case reductions      -> JSON
//   revival  delta-comb weights at rational heights (+ check)    -> JSON
//   pair     one distributional pairing along a line             -> JSON
//   sweep    band-error sweep over an r grid                     -> CSV
//   carpet   |field|^2 intensity grid                            -> PGM
//
// Every flag can come from --config file.json instead; config values override
// flags (keys are the long flag names with '-' replaced by '_'). Exit codes:
// 0 success, 1 validation error, 2 numerical-tolerance failure. Thread count
// comes from TALBOT_THREADS only. Outputs carry no timestamps; identical
// configuration gives identical bytes.

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "talbot/carpet.hpp"
#include "talbot/fields.hpp"
#include "talbot/gauss.hpp"
#include "talbot/pairings.hpp"
#include "talbot/quadrature.hpp"
#include "talbot/rational.hpp"
#include "talbot/testfns.hpp"

namespace {

using nlohmann::json;

double parse_real(const std::string& s) {
    if (s.find('/') != std::string::npos) return talbot::parse_rational(s).value();
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
}

talbot::fields::Field parse_field(const std::string& s) {
    if (s == "v" || s == "schrodinger") return talbot::fields::Field::schrodinger;
    if (s == "w" || s == "helmholtz") return talbot::fields::Field::helmholtz;
    throw std::invalid_argument("unknown field '" + s + "' (use v or w)");
}

talbot::testfns::TestFunction parse_phi(const std::string& s) {
    if (!s.empty() && s.front() == '{') return talbot::testfns::parse_test_function(s);
    if (s == "gaussian") return talbot::testfns::GaussianTest{};
    throw std::invalid_argument("unknown test function '" + s +
                                "' (use \"gaussian\" or a JSON object)");
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    return j;
}

// Pulls recognized keys out of j, erasing them; leftovers are reported by
// finish_config so typos fail loudly instead of silently keeping the flag.
template <typename T>
void take(json& j, const char* key, T& target) {
    auto it = j.find(key);
    if (it == j.end()) return;
    target = it->template get<T>();
    j.erase(it);
}

void take_phi(json& j, std::string& target) {
    auto it = j.find("phi");
    if (it == j.end()) return;
    target = it->is_string() ? it->get<std::string>() : it->dump();
    j.erase(it);
}

void finish_config(const json& j, const std::string& sub) {
    if (j.empty()) return;
    throw std::invalid_argument("config: unknown key '" + j.begin().key() +
                                "' for subcommand '" + sub + "'");
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << content;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- gauss ----------------------------------------------------------------

struct GaussArgs {
    std::vector<long long> gamma; // p q m
    std::vector<long long> sum;   // a b c
    std::string config, output;
};

int run_gauss(GaussArgs a) {
    if (!a.config.empty()) {
        json j = load_config(a.config);
        take(j, "gamma", a.gamma);
        take(j, "sum", a.sum);
        take(j, "output", a.output);
        finish_config(j, "gauss");
    }
    if (a.gamma.empty() == a.sum.empty())
        throw std::invalid_argument("gauss: give exactly one of --gamma p q m / --sum a b c");
    json out;
    if (!a.gamma.empty()) {
        if (a.gamma.size() != 3) throw std::invalid_argument("gauss: --gamma needs p q m");
        long long p = a.gamma[0], q = a.gamma[1], m = a.gamma[2];
        std::complex<double> value = talbot::gauss::gamma_sum(p, q, m);
        std::complex<double> via = talbot::gauss::gamma_via_cases(p, q, m);
        out["p"] = p;
        out["q"] = q;
        out["m"] = m;
        out["value_re"] = value.real();
        out["value_im"] = value.imag();
        out["modulus"] = std::abs(value);
        out["sqrt_q"] = std::sqrt(static_cast<double>(q));
        out["via_cases_re"] = via.real();
        out["via_cases_im"] = via.imag();
    } else {
        if (a.sum.size() != 3) throw std::invalid_argument("gauss: --sum needs a b c");
        long long av = a.sum[0], b = a.sum[1], c = a.sum[2];
        std::complex<double> value = talbot::gauss::gauss_sum(av, b, c);
        out["a"] = av;
        out["b"] = b;
        out["c"] = c;
        out["value_re"] = value.real();
        out["value_im"] = value.imag();
        out["modulus"] = std::abs(value);
        out["sqrt_c"] = std::sqrt(static_cast<double>(c));
    }
    write_text(a.output, dump(out));
    return 0;
}

// ---- revival ---------------------------------------------------------------

struct RevivalArgs {
    long long p = 0, q = 0;
    double sigma = 0.0;       // 0 = no smoothed check
    long long n_max = 0;      // 0 = ceil(10/sigma)
    double tol = -1.0;        // <0 = no threshold on max|A-B|
    std::string config, output;
};

int run_revival(RevivalArgs a) {
    if (!a.config.empty()) {
        json j = load_config(a.config);
        take(j, "p", a.p);
        take(j, "q", a.q);
        take(j, "sigma", a.sigma);
        take(j, "n_max", a.n_max);
        take(j, "tol", a.tol);
        take(j, "output", a.output);
        finish_config(j, "revival");
    }
    talbot::carpet::DeltaComb comb = talbot::carpet::revival_comb(a.p, a.q);
    json out;
    out["p"] = comb.p;
    out["q"] = comb.q;
    out["shift"] = comb.shift;
    json teeth = json::array();
    for (long long m = 0; m < comb.q; ++m) {
        auto i = static_cast<std::size_t>(m);
        teeth.push_back({{"m", m},
                         {"location", comb.location[i]},
                         {"weight_re", comb.weight[i].real()},
                         {"weight_im", comb.weight[i].imag()},
                         {"modulus", std::abs(comb.weight[i])}});
    }
    out["teeth"] = teeth;

    bool over_tol = false;
    if (a.sigma > 0.0) {
        long long n_max = a.n_max > 0 ? a.n_max
                                      : static_cast<long long>(std::ceil(10.0 / a.sigma));
        talbot::carpet::CombCheck check =
            talbot::carpet::smoothed_comb_check(a.p, a.q, a.sigma, n_max);
        json jc;
        jc["sigma"] = a.sigma;
        jc["n_max"] = n_max;
        jc["max_abs_diff"] = check.max_abs_diff;
        jc["peak_scale"] = check.peak_scale;
        jc["peak_ratios"] = check.peak_ratio;
        jc["expected_ratio"] = 1.0 / std::sqrt(static_cast<double>(comb.q));
        out["check"] = jc;
        if (a.tol >= 0.0 && check.max_abs_diff > a.tol) over_tol = true;
        if (over_tol)
            std::cerr << "tolerance failure: max|A-B| = " << check.max_abs_diff
                      << " exceeds " << a.tol << "\n";
    } else if (a.tol >= 0.0) {
        throw std::invalid_argument("revival: --tol needs --sigma (nothing to check)");
    }
    write_text(a.output, dump(out));
    return over_tol ? 2 : 0;
}

// ---- pair -------------------------------------------------------------------

struct PairArgs {
    std::string line;
    std::string field = "v";
    double r = 0.0;
    std::string zeta = "0";
    double xi = 0.0;
    double m = 1.0;
    double k = 0.0;
    std::string restriction = "half";
    std::string phi = "gaussian";
    long long n_max = -1; // <0 = default rule
    double tol = -1.0;    // <0 = no threshold on tail_bound
    std::string config, output;
};

int run_pair(PairArgs a) {
    if (!a.config.empty()) {
        json j = load_config(a.config);
        take(j, "line", a.line);
        take(j, "field", a.field);
        take(j, "r", a.r);
        take(j, "zeta", a.zeta);
        take(j, "xi", a.xi);
        take(j, "m", a.m);
        take(j, "k", a.k);
        take(j, "restriction", a.restriction);
        take_phi(j, a.phi);
        take(j, "n_max", a.n_max);
        take(j, "tol", a.tol);
        take(j, "output", a.output);
        finish_config(j, "pair");
    }
    talbot::fields::Field field = parse_field(a.field);
    talbot::testfns::TestFunction phi = parse_phi(a.phi);
    if (a.restriction != "half" && a.restriction != "whole")
        throw std::invalid_argument("pair: restriction must be half or whole");
    talbot::pairings::Restriction restr = a.restriction == "half"
                                              ? talbot::pairings::Restriction::half
                                              : talbot::pairings::Restriction::whole;
    long long n_max = a.n_max >= 0 ? a.n_max : talbot::pairings::default_n_max(a.r, phi);

    talbot::pairings::PairingResult res;
    json out;
    out["line"] = a.line;
    out["field"] = a.field;
    if (a.line == "horizontal") {
        double zeta = parse_real(a.zeta);
        res = talbot::pairings::pair_horizontal(field, zeta, phi, n_max, a.r);
        out["zeta"] = zeta;
    } else if (a.line == "vertical") {
        res = talbot::pairings::pair_vertical(field, a.xi, phi, restr, n_max, a.r);
        out["xi"] = a.xi;
        out["restriction"] = a.restriction;
    } else if (a.line == "oblique") {
        res = talbot::pairings::pair_oblique(field, a.m, a.k, phi, restr, n_max, a.r);
        out["m"] = a.m;
        out["k"] = a.k;
        out["restriction"] = a.restriction;
    } else {
        throw std::invalid_argument("pair: line must be horizontal, vertical or oblique");
    }
    if (field == talbot::fields::Field::helmholtz) out["r"] = a.r;
    out["value_re"] = res.value.real();
    out["value_im"] = res.value.imag();
    out["tail_bound"] = res.tail_bound;
    out["n_max"] = res.n_max;
    write_text(a.output, dump(out));
    if (a.tol >= 0.0 && res.tail_bound > a.tol) {
        std::cerr << "tolerance failure: tail bound " << res.tail_bound << " exceeds "
                  << a.tol << "; raise --n-max\n";
        return 2;
    }
    return 0;
}

// ---- sweep ------------------------------------------------------------------

struct SweepArgs {
    std::string line = "horizontal";
    std::string zeta = "0";
    double xi = 0.0;
    double m = 1.0;
    double k = 0.0;
    std::string restriction = "half";
    std::string phi = "gaussian";
    double s = 0.0; // 0 = no err_hs column (valid s is > 1/2)
    std::vector<double> r_grid;
    double mu_alpha = 0.2;
    double mu_scale = 1.0;
    std::string fit;
    std::string config, output;
};

int run_sweep(SweepArgs a) {
    if (!a.config.empty()) {
        json j = load_config(a.config);
        take(j, "line", a.line);
        take(j, "zeta", a.zeta);
        take(j, "xi", a.xi);
        take(j, "m", a.m);
        take(j, "k", a.k);
        take(j, "restriction", a.restriction);
        take_phi(j, a.phi);
        take(j, "s", a.s);
        take(j, "r_grid", a.r_grid);
        take(j, "mu_alpha", a.mu_alpha);
        take(j, "mu_scale", a.mu_scale);
        take(j, "fit", a.fit);
        take(j, "output", a.output);
        finish_config(j, "sweep");
    }
    talbot::pairings::LineSpec line;
    if (a.line == "horizontal") {
        line.kind = talbot::pairings::LineKind::horizontal;
        line.zeta = parse_real(a.zeta);
    } else if (a.line == "vertical") {
        line.kind = talbot::pairings::LineKind::vertical;
        line.xi = a.xi;
    } else if (a.line == "oblique") {
        line.kind = talbot::pairings::LineKind::oblique;
        line.m = a.m;
        line.k = a.k;
    } else {
        throw std::invalid_argument("sweep: line must be horizontal, vertical or oblique");
    }
    if (a.restriction != "half" && a.restriction != "whole")
        throw std::invalid_argument("sweep: restriction must be half or whole");
    line.restriction = a.restriction == "half" ? talbot::pairings::Restriction::half
                                               : talbot::pairings::Restriction::whole;

    talbot::testfns::TestFunction phi = parse_phi(a.phi);
    std::vector<double> grid = a.r_grid.empty() ? talbot::pairings::default_r_grid() : a.r_grid;
    talbot::fields::MuSchedule mu{a.mu_alpha, a.mu_scale};
    std::optional<double> s = a.s != 0.0 ? std::optional<double>(a.s) : std::nullopt;

    std::vector<talbot::pairings::SweepRecord> records =
        talbot::pairings::sweep(line, phi, grid, mu, s);
    for (const auto& rec : records)
        if (rec.integer_r)
            std::cerr << "note: r = " << rec.r << " is an integer; |n| = r+1 rides the "
                         "decaying branch and the mid band keeps it\n";

    std::ostringstream csv;
    talbot::pairings::write_csv(csv, records);
    write_text(a.output, csv.str());

    if (!a.fit.empty()) {
        talbot::pairings::RateFit fit = talbot::pairings::rate_fit(records, a.fit);
        json jf;
        jf["column"] = a.fit;
        jf["slope"] = fit.slope;
        jf["degenerate"] = fit.degenerate;
        bool csv_on_stdout = a.output.empty() || a.output == "-";
        (csv_on_stdout ? std::cerr : std::cout) << dump(jf);
    }
    return 0;
}

// ---- carpet -----------------------------------------------------------------

struct CarpetArgs {
    std::string field = "v";
    double r = 0.0;
    double sigma = 0.005;
    long long n_max = 4096;
    int width = 1024;
    int height = 1024;
    int row = -1;
    std::string row_output;
    std::string config, output;
};

int run_carpet(CarpetArgs a) {
    if (!a.config.empty()) {
        json j = load_config(a.config);
        take(j, "field", a.field);
        take(j, "r", a.r);
        take(j, "sigma", a.sigma);
        take(j, "n_max", a.n_max);
        take(j, "width", a.width);
        take(j, "height", a.height);
        take(j, "row", a.row);
        take(j, "row_output", a.row_output);
        take(j, "output", a.output);
        finish_config(j, "carpet");
    }
    if (a.output.empty())
        throw std::invalid_argument("carpet: --output image.pgm is required");
    talbot::carpet::RenderParams params;
    params.field = parse_field(a.field);
    params.r = a.r;
    params.sigma = a.sigma;
    params.n_max = a.n_max;
    params.width = a.width;
    params.height = a.height;
    talbot::carpet::IntensityGrid grid = talbot::carpet::render(params);

    std::ofstream out(a.output, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + a.output + "'");
    talbot::carpet::write_pgm16(out, grid);
    out.close();

    if (a.row >= 0) {
        std::ostringstream csv;
        talbot::carpet::write_row_csv(csv, grid, a.row);
        write_text(a.row_output, csv.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Talbot-effect toolkit: Gauss sums, revival combs, field pairings, carpets"};
    app.require_subcommand(1);

    GaussArgs ga;
    CLI::App* gauss = app.add_subcommand("gauss", "Quadratic Gauss sums -> JSON");
    gauss->add_option("--gamma", ga.gamma, "Gamma(p,q;m): three integers p q m")->expected(3);
    gauss->add_option("--sum", ga.sum, "G(a,b,c): three integers a b c")->expected(3);
    gauss->add_option("--config", ga.config, "JSON config overriding flags");
    gauss->add_option("--output,-o", ga.output, "Output path (default stdout)");

    RevivalArgs ra;
    CLI::App* revival = app.add_subcommand("revival", "Delta comb at zeta = p/q -> JSON");
    revival->add_option("--p", ra.p, "Numerator")->required();
    revival->add_option("--q", ra.q, "Denominator")->required();
    revival->add_option("--sigma", ra.sigma, "Mollifier width: runs the smoothed comb check");
    revival->add_option("--n-max", ra.n_max, "Truncation for the check (default ceil(10/sigma))");
    revival->add_option("--tol", ra.tol, "Exit 2 when max|A-B| exceeds this");
    revival->add_option("--config", ra.config, "JSON config overriding flags");
    revival->add_option("--output,-o", ra.output, "Output path (default stdout)");

    PairArgs pa;
    CLI::App* pair = app.add_subcommand("pair", "One pairing <field, phi> along a line -> JSON");
    pair->add_option("--line", pa.line, "horizontal | vertical | oblique")->required();
    pair->add_option("--field", pa.field, "v | w");
    pair->add_option("--r", pa.r, "Helmholtz frequency (w only)");
    pair->add_option("--zeta", pa.zeta, "Horizontal height, decimal or p/q");
    pair->add_option("--xi", pa.xi, "Vertical abscissa");
    pair->add_option("--m", pa.m, "Oblique slope of zeta = m xi - k");
    pair->add_option("--k", pa.k, "Oblique offset");
    pair->add_option("--restriction", pa.restriction, "half | whole");
    pair->add_option("--phi", pa.phi, "\"gaussian\" or JSON test function");
    pair->add_option("--n-max", pa.n_max, "Truncation (default: certified rule)");
    pair->add_option("--tol", pa.tol, "Exit 2 when the tail bound exceeds this");
    pair->add_option("--config", pa.config, "JSON config overriding flags");
    pair->add_option("--output,-o", pa.output, "Output path (default stdout)");

    SweepArgs sa;
    CLI::App* sweep = app.add_subcommand("sweep", "Band errors of w_r vs v over an r grid -> CSV");
    sweep->add_option("--line", sa.line, "horizontal | vertical | oblique");
    sweep->add_option("--zeta", sa.zeta, "Horizontal height, decimal or p/q");
    sweep->add_option("--xi", sa.xi, "Vertical abscissa");
    sweep->add_option("--m", sa.m, "Oblique slope");
    sweep->add_option("--k", sa.k, "Oblique offset");
    sweep->add_option("--restriction", sa.restriction, "half | whole");
    sweep->add_option("--phi", sa.phi, "\"gaussian\" or JSON test function");
    sweep->add_option("--s", sa.s, "Sobolev index: adds the err_hs column (horizontal only)");
    sweep->add_option("--r-grid", sa.r_grid, "Comma-separated r values (default 10..10^4)")
        ->delimiter(',');
    sweep->add_option("--mu-alpha", sa.mu_alpha, "Cutoff exponent in mu = scale * r^alpha");
    sweep->add_option("--mu-scale", sa.mu_scale, "Cutoff prefactor");
    sweep->add_option("--fit", sa.fit, "Also report the log-log slope of this column");
    sweep->add_option("--config", sa.config, "JSON config overriding flags");
    sweep->add_option("--output,-o", sa.output, "CSV path (default stdout)");

    CarpetArgs ca;
    CLI::App* carpet = app.add_subcommand("carpet", "Intensity grid on [0,1)x[0,2) -> 16-bit PGM");
    carpet->add_option("--field", ca.field, "v | w");
    carpet->add_option("--r", ca.r, "Helmholtz frequency (w only)");
    carpet->add_option("--sigma", ca.sigma, "Frequency mollifier width (must be > 0 for v)");
    carpet->add_option("--n-max", ca.n_max, "Coefficient truncation");
    carpet->add_option("--width", ca.width, "Columns");
    carpet->add_option("--height", ca.height, "Rows");
    carpet->add_option("--row", ca.row, "Also dump this zeta-row as CSV");
    carpet->add_option("--row-output", ca.row_output, "Row CSV path (default stdout)");
    carpet->add_option("--config", ca.config, "JSON config overriding flags");
    carpet->add_option("--output,-o", ca.output, "PGM path (required)");

    try {
        app.parse(argc, argv);
        if (gauss->parsed()) return run_gauss(ga);
        if (revival->parsed()) return run_revival(ra);
        if (pair->parsed()) return run_pair(pa);
        if (sweep->parsed()) return run_sweep(sa);
        if (carpet->parsed()) return run_carpet(ca);
        return 1;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const talbot::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
