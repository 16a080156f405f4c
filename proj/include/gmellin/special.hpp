#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace gmellin {

using Complex = std::complex<double>;

/// Thrown when a gamma-type function is evaluated at a nonpositive integer.
struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// True if z is a nonpositive integer to within `tol` (both components).
bool is_nonpositive_integer(Complex z, double tol = 1e-12);

/// log Gamma(z) on the whole plane minus the poles. The branch is not the
/// principal one away from the positive real axis; exp(log_gamma(z)) always
/// equals Gamma(z), which is all the ratio arithmetic here needs.
Complex log_gamma(Complex z);

/// Gamma(z) via a 9-term Lanczos sum (g = 7), reflection for Re(z) < 0.5.
/// Relative error is ~1e-13 for |z| <= 50. Throws PoleError at nonpositive
/// integers.
Complex gamma_complex(Complex z);

/// Gamma(a)/Gamma(b) with explicit pole bookkeeping instead of infinities.
struct GammaRatio {
  Complex numerator_arg{};
  Complex denominator_arg{};
  Complex value{};
  bool pole = false;  // numerator pole without a matching denominator pole
  std::string note;
};

/// Evaluated as exp(log_gamma(a) - log_gamma(b)) so that large arguments do
/// not overflow. A pole of the denominator alone gives 0; a pole of the
/// numerator alone is flagged; simultaneous poles take the finite limit
/// (-1)^(m-n) n!/m! for a -> -m, b -> -n.
GammaRatio gamma_ratio(Complex a, Complex b);

/// Beta(a, b) = Gamma(a)Gamma(b)/Gamma(a+b) through log_gamma.
/// Throws PoleError if a or b is a nonpositive integer; returns 0 when only
/// a+b is one.
Complex beta(Complex a, Complex b);

}  // namespace gmellin
