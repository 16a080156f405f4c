#include "gmellin/special.hpp"

#include <cmath>

namespace gmellin {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Lanczos approximation, g = 7, 9 terms (Godfrey's coefficient set).
constexpr double kLanczosCoeff[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Lanczos sum and exponent pieces for Re(z) >= 0.5.
Complex lanczos_series(Complex z) {
  Complex acc(kLanczosCoeff[0], 0.0);
  for (int k = 1; k < 9; ++k) acc += kLanczosCoeff[k] / (z + Complex(k - 1, 0));
  return acc;
}

Complex gamma_positive_half(Complex z) {
  // Shifted convention: Gamma(z) with w = z - 1.
  const Complex w = z - 1.0;
  const Complex t = w + 7.5;
  const Complex series = lanczos_series(z);
  return std::sqrt(2.0 * kPi) * std::pow(t, w + 0.5) * std::exp(-t) * series;
}

Complex log_gamma_positive_half(Complex z) {
  const Complex w = z - 1.0;
  const Complex t = w + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (w + 0.5) * std::log(t) - t +
         std::log(lanczos_series(z));
}

// log(sin(pi z)) without overflow for large |Im z|. Any branch will do.
Complex log_sin_pi(Complex z) {
  const Complex theta = kPi * z;
  const Complex log_2i = std::log(Complex(0.0, 2.0));
  if (z.imag() >= 0.0) {
    // sin t = e^{-it}(e^{2it} - 1)/(2i); |e^{2it}| <= 1 here.
    return -Complex(0, 1) * theta + std::log(std::exp(Complex(0, 2) * theta) - 1.0) -
           log_2i;
  }
  return Complex(0, 1) * theta + std::log(1.0 - std::exp(Complex(0, -2) * theta)) -
         log_2i;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

bool is_nonpositive_integer(Complex z, double tol) {
  if (std::abs(z.imag()) > tol) return false;
  if (z.real() > tol) return false;
  return std::abs(z.real() - std::round(z.real())) <= tol;
}

Complex log_gamma(Complex z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(Complex(kPi, 0.0)) - log_sin_pi(z) - log_gamma_positive_half(1.0 - z);
  }
  return log_gamma_positive_half(z);
}

Complex gamma_complex(Complex z) {
  if (is_nonpositive_integer(z)) throw PoleError("gamma: pole at nonpositive integer");
  if (z.real() < 0.5) {
    const Complex s = std::sin(kPi * z);
    if (finite(s)) return kPi / (s * gamma_positive_half(1.0 - z));
    return std::exp(log_gamma(z));  // |Im z| large enough that sin overflows
  }
  Complex g = gamma_positive_half(z);
  if (!finite(g)) g = std::exp(log_gamma(z));
  return g;
}

GammaRatio gamma_ratio(Complex a, Complex b) {
  GammaRatio r;
  r.numerator_arg = a;
  r.denominator_arg = b;
  const bool pa = is_nonpositive_integer(a);
  const bool pb = is_nonpositive_integer(b);
  if (pa && pb) {
    // Gamma(-m + e)/Gamma(-n + e) -> (-1)^(m-n) n!/m! as e -> 0.
    const int m = static_cast<int>(std::llround(-a.real()));
    const int n = static_cast<int>(std::llround(-b.real()));
    double sign = ((m - n) % 2 == 0) ? 1.0 : -1.0;
    r.value = Complex(sign * factorial(n) / factorial(m), 0.0);
    r.note = "limit of simultaneous poles";
    return r;
  }
  if (pa) {
    r.pole = true;
    r.value = Complex(std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN());
    r.note = "numerator pole";
    return r;
  }
  if (pb) {
    r.value = Complex(0.0, 0.0);
    r.note = "denominator pole";
    return r;
  }
  r.value = std::exp(log_gamma(a) - log_gamma(b));
  return r;
}

Complex beta(Complex a, Complex b) {
  if (is_nonpositive_integer(a) || is_nonpositive_integer(b))
    throw PoleError("beta: pole at nonpositive integer argument");
  if (is_nonpositive_integer(a + b)) return Complex(0.0, 0.0);
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

}  // namespace gmellin
