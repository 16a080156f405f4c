#include "gmellin/funcspace.hpp"

#include <cmath>
#include <limits>

#include "gmellin/expr_nodes.hpp"

namespace gmellin {

namespace {

constexpr int kGridPoints = 64;
constexpr double kGridLo = 1e-6;
constexpr double kGridHi = 1e6;

std::vector<double> admissibility_grid() {
  std::vector<double> g(kGridPoints);
  const double step = std::log(kGridHi / kGridLo) / (kGridPoints - 1);
  for (int i = 0; i < kGridPoints; ++i) g[i] = kGridLo * std::exp(step * i);
  return g;
}

// Pattern matching for symbolic inverses. The returned expression is in the
// inverse's own variable u.
std::optional<Expr> match_inverse(const Expr& psi) {
  using detail::Fun;
  using detail::Kind;
  const auto& n = psi.node();
  const Expr u = Expr::variable();
  switch (n.kind) {
    case Kind::Variable:
      return u;
    case Kind::Mul: {
      // c*x or x*c
      if (n.a->kind == Kind::Constant && n.b->kind == Kind::Variable)
        return u / Expr::constant(n.a->value);
      if (n.b->kind == Kind::Constant && n.a->kind == Kind::Variable)
        return u / Expr::constant(n.b->value);
      return std::nullopt;
    }
    case Kind::Pow: {
      if (n.a->kind == Kind::Variable && n.b->kind == Kind::Constant &&
          n.b->value > 0.0)
        return pow(u, Expr::constant(1.0 / n.b->value));
      return std::nullopt;
    }
    case Kind::Fun: {
      if (n.fun != Fun::Ln) return std::nullopt;
      const auto& arg = *n.a;
      if (arg.kind == Kind::Variable) return exp(u);  // ln(x) -> e^u
      const bool one_plus_x =
          arg.kind == Kind::Add &&
          ((arg.a->kind == Kind::Constant && arg.a->value == 1.0 &&
            arg.b->kind == Kind::Variable) ||
           (arg.b->kind == Kind::Constant && arg.b->value == 1.0 &&
            arg.a->kind == Kind::Variable));
      if (one_plus_x) return exp(u) - Expr::constant(1.0);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

AdmissiblePsi AdmissiblePsi::make(Expr psi) {
  AdmissiblePsi out;
  out.psi_ = std::move(psi);
  out.psi_prime_ = out.psi_.derivative();

  // psi(0) = 0, as a limit from the right when the value at 0 is undefined.
  double v0 = out.psi_.eval(0.0);
  if (!std::isfinite(v0)) v0 = out.psi_.eval(1e-14);
  if (!(std::isfinite(v0) && std::fabs(v0) <= 1e-10))
    throw AdmissibilityError("psi(0) != 0 (got " + std::to_string(v0) + ")");

  const auto grid = admissibility_grid();
  double prev = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double p = out.psi_prime_.eval(x);
    if (!(std::isfinite(p) && p > 0.0))
      throw AdmissibilityError("psi' is not positive at x = " + std::to_string(x));
    const double v = out.psi_.eval(x);
    if (!std::isfinite(v))
      throw AdmissibilityError("psi is not finite at x = " + std::to_string(x));
    if (!(v > prev))
      throw AdmissibilityError("psi is not increasing near x = " + std::to_string(x));
    prev = v;
  }

  out.derive_inverse();

  for (double x : grid) {
    const double u = out.psi_.eval(x);
    const double back = out.inverse(u);
    if (!(std::fabs(back - x) <= 1e-9 * std::max(1.0, std::fabs(x))))
      throw AdmissibilityError("psi inverse check failed at x = " + std::to_string(x));
  }
  return out;
}

AdmissiblePsi AdmissiblePsi::from_source(std::string_view source) {
  return make(parse_expr(source));
}

AdmissiblePsi AdmissiblePsi::unchecked(Expr psi, std::string note) {
  AdmissiblePsi out;
  out.psi_ = std::move(psi);
  out.psi_prime_ = out.psi_.derivative();
  out.derive_inverse();
  out.notes_.push_back(note.empty() ? std::string("admissibility checks skipped")
                                    : std::move(note));
  return out;
}

void AdmissiblePsi::derive_inverse() {
  symbolic_inverse_ = match_inverse(psi_);
  if (!symbolic_inverse_) notes_.push_back("inverse via numeric root solve");

  // Probe whether psi(x) ~ x psi'(x/2) holds approaching 0, at points where
  // raw tree evaluation still has most of its bits. If so, the midpoint
  // linearization replaces raw evaluation below 1e-6, where forms like
  // ln(1+x) lose to the rounding of 1+x. psi with a singular derivative at
  // 0 (x^k, k < 1) fails the probe and keeps exact pow evaluation.
  small_x_linearizable_ = true;
  for (double x : {1e-7, 1e-8}) {
    const double raw = psi_.eval(x);
    const double lin = x * psi_prime_.eval(0.5 * x);
    if (!(raw > 0.0) || !(lin > 0.0) ||
        std::fabs(raw - lin) > 1e-4 * std::max(raw, lin)) {
      small_x_linearizable_ = false;
      break;
    }
  }
}

const Expr& AdmissiblePsi::inverse_expr() const {
  if (!symbolic_inverse_)
    throw AdmissibilityError("psi has no symbolic inverse");
  return *symbolic_inverse_;
}

double AdmissiblePsi::inverse(double u) const {
  if (symbolic_inverse_) return symbolic_inverse_->eval(u);
  return inverse_numeric(u);
}

double AdmissiblePsi::stable(double x) const {
  if (!(x > 0.0) || x > 1e-6 || !small_x_linearizable_) return psi_.eval(x);
  return x * psi_prime_.eval(0.5 * x);
}

double AdmissiblePsi::inverse_numeric(double u) const {
  // psi is increasing, so bracket by geometric expansion and bisect with a
  // Newton polish. Root solved in t: psi(t) = u.
  double lo = 1e-8, hi = 1.0;
  auto value = [&](double t) { return psi_.eval(t); };
  int guard = 0;
  while (value(hi) < u) {
    lo = hi;
    hi *= 8.0;
    if (++guard > 400 || hi > 1e300)
      throw EvalError("psi inverse: failed to bracket above for u = " +
                      std::to_string(u));
  }
  guard = 0;
  while (value(lo) > u) {
    hi = lo;
    lo /= 8.0;
    if (++guard > 400 || lo < 1e-300) {
      if (u <= 0.0 && value(lo) > u)
        throw EvalError("psi inverse: failed to bracket below for u = " +
                        std::to_string(u));
      lo = 0.0;
      break;
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = value(mid);
    // Newton step from the midpoint once the bracket is tight.
    if (hi - lo < 1e-2 * std::max(1.0, mid)) {
      const double d = psi_prime_.eval(mid);
      if (std::isfinite(d) && d > 0.0) {
        const double t = mid - (v - u) / d;
        if (t > lo && t < hi) {
          const double vt = value(t);
          if (std::fabs(vt - u) <= 1e-15 * std::max(1.0, std::fabs(u))) return t;
          if (vt < u) lo = t; else hi = t;
          continue;
        }
      }
    }
    if (v < u) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

Weight Weight::make(Expr omega) {
  Weight out;
  out.omega_ = std::move(omega);
  out.omega_prime_ = out.omega_.derivative();
  const auto grid = admissibility_grid();
  double max_ratio = 0.0;
  bool overflowed = false;
  int underflowed = 0, positive = 0;
  const double ref = out.omega_.eval(1.0);
  for (double x : grid) {
    const double v = out.omega_.eval(x);
    // Range excursions are not defects: e^x overflows and e^{-x} underflows
    // on the grid while staying positive and finite mathematically.
    if (std::isinf(v) && v > 0.0) {
      overflowed = true;
      continue;
    }
    if (v == 0.0) {
      ++underflowed;
      continue;
    }
    if (!(std::isfinite(v) && v > 0.0))
      throw AdmissibilityError("omega not positive and finite at x = " +
                               std::to_string(x));
    ++positive;
    if (ref > 0.0) max_ratio = std::max(max_ratio, v / ref);
  }
  if (underflowed > 0 && positive < kGridPoints / 2)
    throw AdmissibilityError("omega vanishes on most of the sample grid");
  if (overflowed || max_ratio > 1e12)
    out.notes_.push_back(
        "omega grows without bound on the sample grid; accepted, but the "
        "L-infinity hypothesis does not hold");
  if (underflowed > 0)
    out.notes_.push_back("omega underflows to zero at large sample points");
  return out;
}

Weight Weight::from_source(std::string_view source) {
  return make(parse_expr(source));
}

Weight Weight::unit() { return make(Expr::constant(1.0)); }

RealFn q_psi(RealFn f, const AdmissiblePsi& psi, Direction dir) {
  if (dir == Direction::Forward)
    return [f = std::move(f), &psi](double x) { return f(psi(x)); };
  return [f = std::move(f), &psi](double x) { return f(psi.inverse(x)); };
}

RealFn m_omega(RealFn f, const Weight& omega, Direction dir) {
  if (dir == Direction::Forward)
    return [f = std::move(f), &omega](double x) { return omega(x) * f(x); };
  return [f = std::move(f), &omega](double x) { return f(x) / omega(x); };
}

Expr d_psi_omega_expr(const Expr& f, const AdmissiblePsi& psi, const Weight& omega,
                      int n) {
  if (n < 0) throw std::invalid_argument("d_psi_omega: n must be >= 0");
  Expr g = f;
  for (int k = 0; k < n; ++k) {
    Expr term = g.derivative();
    if (!omega.is_unit())
      term = term + (omega.prime_expr() / omega.expr()) * g;
    g = term / psi.prime_expr();
  }
  return g;
}

double d_psi_omega(const Expr& f, const AdmissiblePsi& psi, const Weight& omega,
                   int n, double x) {
  return d_psi_omega_expr(f, psi, omega, n).eval(x);
}

RealFn conjugate_to_classical(const Expr& f, const AdmissiblePsi& psi,
                              const Weight& omega) {
  if (psi.has_symbolic_inverse()) {
    Expr tree = conjugate_to_classical_expr(f, psi, omega);
    return [tree](double u) { return tree.eval(u); };
  }
  return [&f, &psi, &omega](double u) {
    const double t = psi.inverse(u);
    return omega(t) * f.eval(t);
  };
}

Expr conjugate_to_classical_expr(const Expr& f, const AdmissiblePsi& psi,
                                 const Weight& omega) {
  const Expr& inv = psi.inverse_expr();
  return (omega.expr() * f).substitute(inv);
}

}  // namespace gmellin
