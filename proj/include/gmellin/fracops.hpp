#pragma once

#include "gmellin/funcspace.hpp"
#include "gmellin/quad.hpp"

namespace gmellin {

enum class FracKind { RlIntegral, RlDerivative, Caputo, Hilfer };

/// Description of one weighted fractional operator with respect to psi.
struct FracSpec {
  Complex alpha{0.5, 0.0};  // Re > 0
  FracKind kind = FracKind::RlIntegral;
  double beta = 0.0;       // Hilfer interpolation parameter, [0, 1]
  double base_point = 0.0;

  /// Smallest integer n with n-1 <= Re(alpha) < n, except that integer
  /// orders collapse to n = alpha so that alpha = 1 reproduces the
  /// first-order operator.
  int n() const;
};

int derivative_order(Complex alpha);

/// Weighted Riemann-Liouville integral to order alpha (Re > 0):
/// (1/(Gamma(alpha) omega(x))) integral_a^x (psi(x)-psi(t))^(alpha-1)
/// omega(t) f(t) psi'(t) dt. Returns 0 at x = a.
QuadResult rl_integral(const RealFn& f, const AdmissiblePsi& psi,
                       const Weight& omega, Complex alpha, double a, double x,
                       const Tolerance& tol = {});

/// Riemann-Liouville derivative D^alpha = (D_{psi,omega})^n I^(n-alpha).
/// The outer operator differentiates the inner quadrature numerically
/// (Richardson-extrapolated central differences, step max(1e-4 x, 1e-6)).
Complex rl_derivative(const RealFn& f, const AdmissiblePsi& psi,
                      const Weight& omega, Complex alpha, double a, double x,
                      const Tolerance& tol = {});

/// Caputo derivative I^(n-alpha) (D_{psi,omega})^n f. The inner operator is
/// exact tree differentiation, so f must be an expression.
Complex caputo_derivative(const Expr& f, const AdmissiblePsi& psi,
                          const Weight& omega, Complex alpha, double a, double x,
                          const Tolerance& tol = {});

/// Hilfer derivative I^(beta(n-alpha)) (D)^n I^((1-beta)(n-alpha)) f.
/// beta = 0 collapses to the RL derivative, beta = 1 to Caputo. The middle
/// operator is numeric, like rl_derivative; the Expr overload switches to
/// exact differentiation when beta = 1 makes the inner integral trivial.
Complex hilfer_derivative(const RealFn& f, const AdmissiblePsi& psi,
                          const Weight& omega, Complex alpha, double beta,
                          double a, double x, const Tolerance& tol = {});
Complex hilfer_derivative(const Expr& f, const AdmissiblePsi& psi,
                          const Weight& omega, Complex alpha, double beta,
                          double a, double x, const Tolerance& tol = {});

/// The transmutation route: the classical operator (psi = x, omega = 1)
/// applied to u -> omega(psi^{-1}(u)) f(psi^{-1}(u)) at u = psi(x), divided
/// by omega(x). Structurally independent of the direct evaluations above,
/// which makes it the oracle for all four operator kinds.
Complex conjugated_op(const Expr& f, const AdmissiblePsi& psi, const Weight& omega,
                      const FracSpec& spec, double x, const Tolerance& tol = {});

/// Numeric (D_{psi,omega})^n of a sampled function, n <= 2: Richardson
/// first/second differences of F combined with exact psi'/psi''/omega'/omega
/// trees. Exposed for the residual checks of the equation solver.
Complex d_psi_omega_numeric(const std::function<Complex(double)>& F,
                            const AdmissiblePsi& psi, const Weight& omega, int n,
                            double x, double step_hint = 0.0);

}  // namespace gmellin
