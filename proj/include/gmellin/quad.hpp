#pragma once

#include <complex>
#include <functional>
#include <limits>

namespace gmellin {

using Complex = std::complex<double>;

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_evals = 2'000'000;
};

struct QuadResult {
  Complex value{0.0, 0.0};
  double err_abs = std::numeric_limits<double>::infinity();
  long n_evals = 0;
  bool converged = false;
};

using Integrand = std::function<Complex(double)>;
/// Two-argument integrand: `off` is the signed offset from the nearest
/// interval endpoint (x = a + off with off > 0, or x = b + off with
/// off < 0). The offset stays accurate long after x - a or b - x would
/// cancel to zero in doubles, so endpoint-singular kernels should be built
/// from `off`.
using Integrand2 = std::function<Complex(double, double)>;
using ContourFn = std::function<Complex(Complex)>;

/// Double-exponential (tanh-sinh) rule on (a, b). Absorbs algebraic endpoint
/// singularities with exponent > -1. Non-finite integrand values in the
/// endpoint fringe are treated as zero; anywhere else they abort the result.
QuadResult integrate_finite(const Integrand2& g, double a, double b,
                            const Tolerance& tol = {});
QuadResult integrate_finite(const Integrand& g, double a, double b,
                            const Tolerance& tol = {});

/// exp-sinh rule on (0, inf); integrand must decay faster than 1/x^(1+eps).
QuadResult integrate_semi_infinite(const Integrand& g, const Tolerance& tol = {});

/// Integral over (0, inf) of an integrand that oscillates like
/// exp(i * im_freq * m(x)) against a power-law envelope in m, where m is a
/// monotone log-scale map (m = ln psi for Mellin-type integrals). Plain
/// double-exponential rules lose the oscillation at the singular endpoints;
/// here the axis is cut into panels spanning at most half a period of the
/// oscillation, placed through `x_of_u` = m^{-1}(u), and each panel is
/// integrated by adaptive Gauss-Kronrod. Panels are added outward from
/// u = 0 until their contributions stay below tolerance.
QuadResult integrate_multiplicative(const Integrand& g,
                                    const std::function<double(double)>& x_of_u,
                                    double im_freq, const Tolerance& tol = {});

/// sinh-sinh rule on the whole real line.
QuadResult integrate_whole_line(const Integrand& g, const Tolerance& tol = {});

/// Integral of G(p) dp over the segment p = gamma_re + i tau, tau in [-T, T].
/// The 1/(2 pi i) normalization of inversion formulas is the caller's
/// business. `osc_period` > 0 caps panel widths at half that period so that
/// x^{-p}-type oscillations are resolved instead of aliased.
QuadResult integrate_vertical_line(const ContourFn& G, double gamma_re, double T,
                                   const Tolerance& tol = {},
                                   double osc_period = 0.0);

/// Same, but T is doubled (hard cap 1e4) until the last doubling moves the
/// result by less than the tolerance and the integrand magnitude at the
/// truncation height is itself below tolerance.
QuadResult integrate_vertical_line_auto(const ContourFn& G, double gamma_re,
                                        const Tolerance& tol = {},
                                        double osc_period = 0.0,
                                        double* T_used = nullptr);

}  // namespace gmellin
