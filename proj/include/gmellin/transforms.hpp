#pragma once

#include <string>
#include <vector>

#include "gmellin/funcspace.hpp"
#include "gmellin/quad.hpp"

namespace gmellin {

/// Vertical strip of absolute convergence, lower < Re(p) < upper.
struct Strip {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool contains(double re) const { return re > lower && re < upper; }
  bool empty() const { return !(lower < upper); }
};

struct StripEstimate {
  Strip strip;
  bool conclusive = true;
  std::string note;
};

/// Fits the asymptotic exponents of omega*f against psi by log-log slope
/// regression: 16 geometric samples per end over [1e-8, 1e-3] and
/// [1e3, 1e8]. Decay faster than any power at infinity (detected by slope
/// divergence or wholesale underflow) gives upper = +inf.
StripEstimate estimate_strip(const Expr& f, const AdmissiblePsi& psi,
                             const Weight& omega);

enum class MellinMethod { Direct, Conjugated };

struct TransformJob {
  Expr f;
  AdmissiblePsi psi;
  Weight omega;
  std::vector<Complex> p_points;
  Tolerance tol{};
  MellinMethod method = MellinMethod::Direct;
  bool force = false;  // evaluate outside the estimated strip without protest
};

/// F(p) = integral_0^inf psi(x)^(p-1) omega(x) f(x) psi'(x) dx.
/// Direct evaluates that integrand on (0, inf); Conjugated substitutes
/// u = psi(x) and takes the classical Mellin transform of
/// omega(psi^{-1}(u)) f(psi^{-1}(u)). Divergence shows up as a
/// non-converged row, not an exception.
std::vector<QuadResult> mellin_forward(const TransformJob& job);
QuadResult mellin_forward_point(const Expr& f, const AdmissiblePsi& psi,
                                const Weight& omega, Complex p,
                                const Tolerance& tol = {},
                                MellinMethod method = MellinMethod::Direct);

/// Same integral with the integrand multiplied by psi(x)^shift (and, when
/// `extra_omega` is set, by another omega(x) factor). Drives the shifting
/// and mu-shift identity checks, including the paper's literal double-weight
/// readings.
QuadResult mellin_forward_shifted(const Expr& f, const AdmissiblePsi& psi,
                                  const Weight& omega, Complex p, Complex shift,
                                  bool extra_omega, const Tolerance& tol = {});

/// Transform of an arbitrary sampled function (used for operator identities
/// whose integrands are only available through quadrature).
QuadResult mellin_forward_fn(const RealFn& f, const AdmissiblePsi& psi,
                             const Weight& omega, Complex p,
                             const Tolerance& tol = {}, Complex psi_power_shift = 0.0,
                             bool extra_omega = false);

using ComplexFn = std::function<Complex(Complex)>;

/// Inversion: (1 / (2 pi i omega(x))) integral over Re(p) = gamma of
/// F(p) psi(x)^{-p} dp, with the truncation height chosen by doubling.
QuadResult mellin_inverse(const ComplexFn& F, const AdmissiblePsi& psi,
                          const Weight& omega, double x, double gamma,
                          const Tolerance& tol = {});

/// Bilateral Laplace transform with respect to psi and weight omega, both
/// understood as functions on the whole line (no admissibility demanded):
/// integral over R of e^{-p psi(x)} omega(x) f(x) psi'(x) dx.
QuadResult laplace_bilateral(const Expr& f, const Expr& psi_on_r,
                             const Expr& omega_on_r, Complex p,
                             const Tolerance& tol = {});

/// (1/sqrt(2 pi)) integral over R of e^{-i k psi(x)} omega(x) f(x) psi'(x) dx.
QuadResult fourier_psi_omega(const Expr& f, const Expr& psi_on_r,
                             const Expr& omega_on_r, double k,
                             const Tolerance& tol = {});

}  // namespace gmellin
