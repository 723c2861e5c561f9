#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace talbot {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdaptiveOptions {
    double abs_tol = 0.0;
    double rel_tol = 1e-12;
    std::size_t max_evaluations = 2'000'000;
    // [a,b] is pre-split into this many panels before refinement; callers
    // integrating e^{-2 pi i x t} set it near |x| (b-a) so each panel holds
    // about one oscillation.
    std::size_t initial_panels = 1;
};

struct QuadratureResult {
    std::complex<double> value{0.0, 0.0};
    double abs_error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// Adaptive Gauss-Kronrod 7/15 on [a,b]. Bisects panels whose K15-G7
// discrepancy exceeds their share of the tolerance. Does not throw on budget
// exhaustion; check .converged (callers with hard requirements throw
// QuadratureError themselves).
QuadratureResult integrate(const std::function<std::complex<double>(double)>& f,
                           double a, double b, const AdaptiveOptions& opts = {});

} // namespace talbot
