#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmellin/fracops.hpp"
#include "gmellin/transforms.hpp"

namespace gmellin {

/// Outcome of evaluating one operational identity at one parameter point.
struct IdentityReport {
  std::string identity_name;
  Complex lhs{0.0, 0.0};
  Complex rhs{0.0, 0.0};
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool diagnostic = false;  // reported, never counted as a failure
  std::string notes;
};

/// Parameters an identity may consume; unused fields are ignored.
struct IdentityParams {
  Complex p{1.0, 0.0};
  Complex a{0.0, 0.0};      // shift exponent
  Complex alpha{0.5, 0.0};  // fractional order
  Complex mu{0.0, 0.0};     // extra shift of the mu-shifted rule
  double beta = 0.0;        // Hilfer parameter
  int n = 1;                // derivative order
  double rel_threshold = 1e-6;
  Tolerance quad_tol{};
};

/// Evaluates the named identity: the left side through the actual operator
/// and transform machinery, the right side through the Gamma-ratio times a
/// shifted transform. Known names: shifting, shifting-literal, derivative,
/// rl-integral, rl-derivative, mu-shift, mu-shift-literal, caputo, hilfer,
/// laplace-classical, fourier-reading. The -literal forms and
/// fourier-reading are diagnostics.
IdentityReport check_identity(const std::string& name, const Expr& f,
                              const AdmissiblePsi& psi, const Weight& omega,
                              const IdentityParams& params);

/// Generalized multiplicative convolution (f *_{psi,omega} g)(x).
QuadResult convolve(const Expr& f, const Expr& g, const AdmissiblePsi& psi,
                    const Weight& omega, double x, const Tolerance& tol = {});

/// Transform-of-convolution against the product of transforms.
IdentityReport check_convolution_theorem(const Expr& f, const Expr& g,
                                         const AdmissiblePsi& psi,
                                         const Weight& omega, Complex p,
                                         double rel_threshold = 1e-4,
                                         const Tolerance& tol = {});

/// The boundary-value problem psi(x)^alpha D^alpha y = g with vanishing
/// limits at 0 and infinity, solved by inverse transform + convolution.
struct FdeProblem {
  double alpha = 1.5;  // (1, 2]
  Expr g;
  AdmissiblePsi psi;
  Weight omega;
};

/// Truncated-kernel factor h(x) = (1 - psi(x))_+^(alpha-1) /
/// (omega(x) psi(x)^alpha Gamma(alpha)); zero wherever psi(x) >= 1 or
/// psi(x) <= 0.
double fde_kernel_h(const AdmissiblePsi& psi, const Weight& omega, double alpha,
                    double x);

/// Integrand of the closed solution at quadrature point s (before the
/// 1/(omega(x) Gamma(alpha)) prefactor). Exposed so the particular cases can
/// be cross-checked term by term.
double fde_integrand(const FdeProblem& problem, double x, double s);

/// y(x) as the finite-interval integral over {s : 0 < psi(s) < 1}. A
/// divergent integrand (g growing too fast toward s = 0) comes back as a
/// non-converged result.
QuadResult solve_fde(const FdeProblem& problem, double x, const Tolerance& tol = {});

/// The classical reduction (psi = x, omega = 1), coded from its own formula:
/// y(x) = (1/Gamma(alpha)) integral_0^1 (1-s)^(alpha-1) s^(-alpha-1) g(x/s) ds.
QuadResult fde_case1_integral(const Expr& g, double alpha, double x,
                              const Tolerance& tol = {});

/// Power-law closed form for psi = x^k, g = x^n:
/// y(x) = x^n Gamma(-alpha - n/k) / Gamma(-n/k), valid when -alpha - n/k > 0.
/// Throws std::domain_error when the convergence condition fails.
double fde_closed_case3(double k, double n, double alpha, double x);

/// The shipped verification suite: every operational identity at pinned
/// parameter points plus the convolution theorem, with per-entry thresholds.
/// `name_filter` keeps only identities whose name contains the filter.
std::vector<IdentityReport> run_builtin_suite(
    const std::optional<std::string>& name_filter = std::nullopt,
    std::optional<double> rel_threshold_override = std::nullopt);

}  // namespace gmellin
