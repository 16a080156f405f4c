#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmellin/expr.hpp"

namespace gmellin {

using RealFn = std::function<double(double)>;

struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An increasing substitution function on (0, inf) with psi(0) = 0.
/// Construction via make() samples a 64-point logarithmic grid over
/// [1e-6, 1e6] and rejects candidates that fail positivity of psi',
/// monotonicity, the psi(0) = 0 limit, or inverse consistency. The checks
/// are sampled, not symbolic; pathologies between grid points slip through.
///
/// The inverse is recognized symbolically for x, c*x, x^k, ln(1+x) and
/// ln(x); anything else falls back to a bracketed Newton/bisection solve.
class AdmissiblePsi {
 public:
  static AdmissiblePsi make(Expr psi);
  static AdmissiblePsi from_source(std::string_view source);
  /// Skips validation. Escape hatch for substitutions the admissibility
  /// rules reject (e.g. ln(x), whose range extends below zero) but that the
  /// equation-solving machinery can still consume.
  static AdmissiblePsi unchecked(Expr psi, std::string note = {});

  double operator()(double x) const { return psi_.eval(x); }
  double prime(double x) const { return psi_prime_.eval(x); }
  double inverse(double u) const;

  /// psi(x) with full relative accuracy down to denormal x. Naive tree
  /// evaluation of e.g. ln(1+x) rounds to 0 below x ~ 1e-16, which a
  /// transform integrand cannot afford; here the midpoint linearization
  /// x psi'(x/2) takes over once it agrees with the raw value.
  double stable(double x) const;

  const Expr& expr() const { return psi_; }
  const Expr& prime_expr() const { return psi_prime_; }
  bool has_symbolic_inverse() const { return static_cast<bool>(symbolic_inverse_); }
  /// Expression of the inverse in its own variable; only when symbolic.
  const Expr& inverse_expr() const;
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  AdmissiblePsi() = default;
  void derive_inverse();
  double inverse_numeric(double u) const;

  Expr psi_;
  Expr psi_prime_;
  std::optional<Expr> symbolic_inverse_;
  bool small_x_linearizable_ = false;
  std::vector<std::string> notes_;
};

/// A positive weight on (0, inf). Unbounded growth is accepted (the
/// application examples use omega = e^x) but recorded as a note.
class Weight {
 public:
  static Weight make(Expr omega);
  static Weight from_source(std::string_view source);
  static Weight unit();

  double operator()(double x) const { return omega_.eval(x); }
  double prime(double x) const { return omega_prime_.eval(x); }

  const Expr& expr() const { return omega_; }
  const Expr& prime_expr() const { return omega_prime_; }
  bool is_unit() const { return omega_.is_constant(1.0); }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  Weight() = default;
  Expr omega_;
  Expr omega_prime_;
  std::vector<std::string> notes_;
};

enum class Direction { Forward, Inverse };

/// Q_psi f = f o psi (forward) or f o psi^{-1} (inverse).
RealFn q_psi(RealFn f, const AdmissiblePsi& psi, Direction dir);

/// M_omega f = omega * f (forward) or f / omega (inverse).
RealFn m_omega(RealFn f, const Weight& omega, Direction dir);

/// The first-order operator D f = (1/psi')(f' + (omega'/omega) f) applied to
/// an expression tree, as a tree. Exact differentiation throughout.
Expr d_psi_omega_expr(const Expr& f, const AdmissiblePsi& psi, const Weight& omega,
                      int n);

/// (D_{psi,omega})^n f evaluated at x > 0 via the exact tree form.
double d_psi_omega(const Expr& f, const AdmissiblePsi& psi, const Weight& omega,
                   int n, double x);

/// The conjugated function u -> omega(psi^{-1}(u)) f(psi^{-1}(u)), the bridge
/// between the weighted operators and their classical counterparts.
RealFn conjugate_to_classical(const Expr& f, const AdmissiblePsi& psi,
                              const Weight& omega);

/// Tree form of the above; only available when psi has a symbolic inverse.
Expr conjugate_to_classical_expr(const Expr& f, const AdmissiblePsi& psi,
                                 const Weight& omega);

}  // namespace gmellin
