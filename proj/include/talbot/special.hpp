#pragma once

#include <complex>

namespace talbot {

// Faddeeva function w(z) = e^{-z^2} erfc(-iz), Weideman's rational
// approximation (SIAM Rev. 36 (1994) 604) with N = 40 terms for Im z >= 0 and
// the reflection w(z) = 2 e^{-z^2} - w(-z) below the real axis. Relative
// accuracy ~1e-14 on the upper half plane; the reflection is only safe for
// moderately negative Im z (|Im z| small enough that e^{-z^2} stays finite),
// which covers every use in this library.
std::complex<double> faddeeva_w(std::complex<double> z);

// Scaled complementary error function erfcx(z) = e^{z^2} erfc(z) = w(iz).
std::complex<double> erfcx(std::complex<double> z);

} // namespace talbot
