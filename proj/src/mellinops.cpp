#include "gmellin/mellinops.hpp"

#include <cmath>

#include "gmellin/special.hpp"

namespace gmellin {

namespace {

using ComplexFn1 = std::function<Complex(double)>;

Complex pow_pos(double base, Complex e) {
  if (e.imag() == 0.0) return Complex(std::pow(base, e.real()), 0.0);
  return std::pow(Complex(base, 0.0), e);
}

Tolerance nested_tolerance(const Tolerance& tol) {
  Tolerance t = tol;
  t.abs_tol = std::max(1e-13, 1e-3 * tol.abs_tol);
  t.rel_tol = std::max(1e-13, 1e-3 * tol.rel_tol);
  return t;
}

// Transform of a function that is itself only available through quadrature
// or finite differences. Values of x below the floor contribute mass bounded
// by floor^(1+eps) under the identity preconditions and are skipped so that
// the finite-difference machinery never runs with a collapsed step.
QuadResult mellin_of(const ComplexFn1& fn, const AdmissiblePsi& psi,
                     const Weight& omega, Complex p, const Tolerance& tol,
                     Complex shift = Complex(0.0, 0.0), bool extra_omega = false,
                     double x_floor = 0.0) {
  const Complex exponent = p - 1.0 + shift;
  auto integrand = [&](double x) -> Complex {
    if (x <= x_floor) return Complex(0.0, 0.0);
    const double px = psi.stable(x);
    if (!(px > 0.0)) return Complex(0.0, 0.0);
    double w = omega(x) * psi.prime(x);
    if (extra_omega) w *= omega(x);
    const Complex v = fn(x);
    if (v == Complex(0.0, 0.0)) return v;
    return pow_pos(px, exponent) * v * w;
  };
  return integrate_semi_infinite(integrand, tol);
}

IdentityReport finish_report(std::string name, Complex lhs, Complex rhs,
                             double threshold, bool diagnostic,
                             std::string notes) {
  IdentityReport r;
  r.identity_name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_diff = std::abs(lhs - rhs);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_diff = scale > 1e-250 ? r.abs_diff / scale : r.abs_diff;
  r.threshold = threshold;
  r.passed = scale > 1e-12 ? (r.rel_diff < threshold) : (r.abs_diff < threshold);
  r.diagnostic = diagnostic;
  r.notes = std::move(notes);
  return r;
}

std::string join_notes(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "; " + b;
}

}  // namespace

IdentityReport check_identity(const std::string& name, const Expr& f,
                              const AdmissiblePsi& psi, const Weight& omega,
                              const IdentityParams& prm) {
  const Tolerance& tol = prm.quad_tol;
  const Tolerance op_tol = nested_tolerance(tol);
  std::string notes;
  constexpr double kXFloor = 1e-9;

  auto transform_at = [&](Complex p) {
    return mellin_forward_point(f, psi, omega, p, tol);
  };
  auto note_quad = [&](const QuadResult& q, const char* which) {
    if (!q.converged)
      notes = join_notes(notes, std::string(which) + " quadrature not converged");
  };
  auto ratio_term = [&](Complex num, Complex den) {
    const GammaRatio gr = gamma_ratio(num, den);
    if (gr.pole || !gr.note.empty())
      notes = join_notes(notes, "gamma ratio: " + (gr.note.empty() ? "pole" : gr.note));
    return gr.value;
  };

  if (name == "shifting" || name == "shifting-literal") {
    const bool literal = (name == "shifting-literal");
    const QuadResult lhs =
        mellin_forward_shifted(f, psi, omega, prm.p, prm.a, literal, tol);
    const QuadResult rhs = transform_at(prm.p + prm.a);
    note_quad(lhs, "lhs");
    note_quad(rhs, "rhs");
    if (literal)
      notes = join_notes(notes,
                         "literal printed form with the weight inside the "
                         "transformed function; double-weights the integrand");
    return finish_report(name, lhs.value, rhs.value, prm.rel_threshold, literal,
                         notes);
  }

  if (name == "derivative") {
    const Expr dn = d_psi_omega_expr(f, psi, omega, prm.n);
    const QuadResult lhs = mellin_of(
        [&dn](double x) { return Complex(dn.eval(x), 0.0); }, psi, omega, prm.p,
        tol);
    const Complex ratio = ratio_term(1.0 - prm.p + Complex(prm.n, 0.0), 1.0 - prm.p);
    const QuadResult mf = transform_at(prm.p - Complex(prm.n, 0.0));
    note_quad(lhs, "lhs");
    note_quad(mf, "rhs");
    return finish_report(name, lhs.value, ratio * mf.value, prm.rel_threshold,
                         false, notes);
  }

  if (name == "rl-integral") {
    if (!((prm.alpha + prm.p).real() < 1.0))
      notes = join_notes(notes, "constraint Re(alpha + p) < 1 violated");
    auto op = [&](double x) {
      return rl_integral([&f](double t) { return f.eval(t); }, psi, omega,
                         prm.alpha, 0.0, x, op_tol)
          .value;
    };
    const QuadResult lhs = mellin_of(op, psi, omega, prm.p, tol);
    const Complex ratio = ratio_term(1.0 - prm.p - prm.alpha, 1.0 - prm.p);
    const QuadResult mf = transform_at(prm.p + prm.alpha);
    note_quad(lhs, "lhs");
    note_quad(mf, "rhs");
    return finish_report(name, lhs.value, ratio * mf.value, prm.rel_threshold,
                         false, notes);
  }

  if (name == "rl-derivative" || name == "mu-shift" || name == "mu-shift-literal") {
    const bool shifted = (name != "rl-derivative");
    const bool literal = (name == "mu-shift-literal");
    const Complex mu = shifted ? prm.mu : Complex(0.0, 0.0);
    auto op = [&](double x) {
      return rl_derivative([&f](double t) { return f.eval(t); }, psi, omega,
                           prm.alpha, 0.0, x, op_tol);
    };
    const QuadResult lhs =
        mellin_of(op, psi, omega, prm.p, tol, mu, literal, kXFloor);
    const Complex ratio =
        ratio_term(1.0 - mu - prm.p + prm.alpha, 1.0 - mu - prm.p);
    const QuadResult mf = transform_at(mu + prm.p - prm.alpha);
    note_quad(lhs, "lhs");
    note_quad(mf, "rhs");
    if (literal)
      notes = join_notes(notes,
                         "literal printed form with the extra weight factor");
    return finish_report(name, lhs.value, ratio * mf.value, prm.rel_threshold,
                         literal, notes);
  }

  if (name == "caputo") {
    auto op = [&](double x) {
      return caputo_derivative(f, psi, omega, prm.alpha, 0.0, x, op_tol);
    };
    const QuadResult lhs = mellin_of(op, psi, omega, prm.p, tol);
    const Complex ratio = ratio_term(1.0 - prm.p + prm.alpha, 1.0 - prm.p);
    const QuadResult mf = transform_at(prm.p - prm.alpha);
    note_quad(lhs, "lhs");
    note_quad(mf, "rhs");
    return finish_report(name, lhs.value, ratio * mf.value, prm.rel_threshold,
                         false, notes);
  }

  if (name == "hilfer") {
    auto op = [&](double x) {
      return hilfer_derivative(f, psi, omega, prm.alpha, prm.beta, 0.0, x, op_tol);
    };
    const QuadResult lhs = mellin_of(op, psi, omega, prm.p, tol, 0.0, false,
                                     kXFloor);
    const Complex ratio = ratio_term(1.0 - prm.p + prm.alpha, 1.0 - prm.p);
    const QuadResult mf = transform_at(prm.p - prm.alpha);
    note_quad(lhs, "lhs");
    note_quad(mf, "rhs");
    return finish_report(name, lhs.value, ratio * mf.value, prm.rel_threshold,
                         false, notes);
  }

  if (name == "laplace-classical") {
    const QuadResult lhs = transform_at(prm.p);
    const Expr f_of_exp = f.substitute(gmellin::exp(-Expr::variable()));
    const QuadResult rhs = laplace_bilateral(f_of_exp, Expr::variable(),
                                             Expr::constant(1.0), prm.p, tol);
    note_quad(lhs, "lhs");
    note_quad(rhs, "rhs");
    return finish_report(name, lhs.value, rhs.value, prm.rel_threshold, false,
                         notes);
  }

  if (name == "fourier-reading") {
    // The paper relates the transform of f(ln x) at 1 - ip to the Fourier
    // side but mixes its symbols; evaluated under the reading k = p with the
    // classical psi and omega, and reported rather than asserted.
    const double k = prm.p.real();
    const QuadResult lhs = fourier_psi_omega(f, Expr::variable(),
                                             Expr::constant(1.0), k, tol);
    const Expr f_of_ln = f.substitute(gmellin::ln(Expr::variable()));
    const QuadResult rhs = mellin_forward_point(
        f_of_ln, psi, omega, Complex(1.0, -k), tol);
    note_quad(lhs, "lhs");
    note_quad(rhs, "rhs");
    notes = join_notes(notes, "symbol-mixing in the source relation; diagnostic");
    return finish_report(name, lhs.value, rhs.value, prm.rel_threshold, true,
                         notes);
  }

  throw std::invalid_argument("check_identity: unknown identity '" + name + "'");
}

// ---------------------------------------------------------------------------
// Convolution

QuadResult convolve(const Expr& f, const Expr& g, const AdmissiblePsi& psi,
                    const Weight& omega, double x, const Tolerance& tol) {
  const double px = psi(x);
  if (!(px > 0.0)) throw std::domain_error("convolve: psi(x) must be positive");
  constexpr double kHuge = 1e290;

  auto integrand = [&](double s) -> Complex {
    const double ps = psi.stable(s);
    if (!(ps > 0.0) || !std::isfinite(ps)) return Complex(0.0, 0.0);
    const double outer = omega(s) * f.eval(s) * psi.prime(s) / ps;
    if (outer == 0.0 || !std::isfinite(outer)) return Complex(outer == 0.0 ? 0.0 : outer, 0.0);
    const double ratio = px / ps;
    double u;
    try {
      u = psi.inverse(ratio);
    } catch (const EvalError&) {
      return Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    }
    if (u > kHuge) u = kHuge;  // evaluate the tail through the decaying factor
    const double inner = omega(u) * g.eval(u);
    if (inner == 0.0) return Complex(0.0, 0.0);
    return Complex(outer * inner, 0.0);
  };

  QuadResult r = integrate_semi_infinite(integrand, tol);
  const double wx = omega(x);
  r.value /= wx;
  r.err_abs /= wx;
  return r;
}

IdentityReport check_convolution_theorem(const Expr& f, const Expr& g,
                                         const AdmissiblePsi& psi,
                                         const Weight& omega, Complex p,
                                         double rel_threshold,
                                         const Tolerance& tol) {
  const Tolerance conv_tol = nested_tolerance(tol);
  std::string notes;
  auto conv = [&](double x) { return convolve(f, g, psi, omega, x, conv_tol).value; };
  const QuadResult lhs = mellin_of(conv, psi, omega, p, tol);
  const QuadResult mf = mellin_forward_point(f, psi, omega, p, tol);
  const QuadResult mg = mellin_forward_point(g, psi, omega, p, tol);
  if (!lhs.converged) notes = join_notes(notes, "lhs quadrature not converged");
  if (!mf.converged || !mg.converged)
    notes = join_notes(notes, "rhs quadrature not converged");
  return finish_report("convolution", lhs.value, mf.value * mg.value,
                       rel_threshold, false, notes);
}

// ---------------------------------------------------------------------------
// The boundary-value problem

double fde_kernel_h(const AdmissiblePsi& psi, const Weight& omega, double alpha,
                    double x) {
  const double px = psi(x);
  if (!(px > 0.0 && px < 1.0)) return 0.0;
  return std::pow(1.0 - px, alpha - 1.0) /
         (omega(x) * std::pow(px, alpha) * std::tgamma(alpha));
}

namespace {

// Integrand of the solution integral before the 1/(omega(x) Gamma(alpha))
// prefactor, with optional endpoint-offset stabilization.
double fde_integrand_impl(const FdeProblem& prb, double x, double s, double off,
                          double s_lo, double s_hi) {
  const AdmissiblePsi& psi = prb.psi;
  const double span = s_hi - s_lo;
  double ps;
  if (off > 0.0 && off < 1e-8 * span && s_lo > 0.0) {
    // psi(s) ~ psi(s_lo) + off psi'(midpoint) with psi(s_lo) = 0.
    ps = off * psi.prime(s - 0.5 * off);
  } else {
    ps = (s_lo == 0.0) ? psi.stable(s) : psi(s);
  }
  if (!(ps > 0.0 && ps < 1.0)) return 0.0;

  double one_minus;
  if (off < 0.0 && -off < 1e-8 * span) {
    one_minus = (-off) * psi.prime(s + 0.5 * off);  // 1 - psi(s) near psi = 1
  } else {
    one_minus = 1.0 - ps;
  }
  if (!(one_minus > 0.0)) return 0.0;

  const double ratio = psi(x) / ps;
  double u;
  try {
    u = psi.inverse(ratio);
  } catch (const EvalError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (u > 1e290) u = 1e290;
  const double weight_g = prb.omega(u) * prb.g.eval(u);
  if (weight_g == 0.0) return 0.0;
  const double kernel = std::pow(one_minus, prb.alpha - 1.0) *
                        std::pow(ps, -prb.alpha) * psi.prime(s) / ps;
  return kernel * weight_g;
}

void check_alpha_range(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw std::invalid_argument("fde: alpha must lie in (1, 2]");
}

double lower_support_bound(const AdmissiblePsi& psi) {
  // Where does psi cross zero? At 0 for admissible substitutions; solved
  // numerically when psi starts out negative (the ln(x) case).
  if (psi(1e-10) > 0.0) return 0.0;
  return psi.inverse(0.0);
}

}  // namespace

double fde_integrand(const FdeProblem& problem, double x, double s) {
  check_alpha_range(problem.alpha);
  const double s_hi = problem.psi.inverse(1.0);
  const double s_lo = lower_support_bound(problem.psi);
  const double off =
      (s - s_lo <= s_hi - s) ? (s - s_lo) : -(s_hi - s);
  return fde_integrand_impl(problem, x, s, off, s_lo, s_hi);
}

QuadResult solve_fde(const FdeProblem& problem, double x, const Tolerance& tol) {
  check_alpha_range(problem.alpha);
  if (!(x > 0.0)) throw std::invalid_argument("solve_fde: x must be positive");
  const double s_hi = problem.psi.inverse(1.0);
  const double s_lo = lower_support_bound(problem.psi);

  auto g2 = [&](double s, double off) -> Complex {
    return Complex(fde_integrand_impl(problem, x, s, off, s_lo, s_hi), 0.0);
  };
  QuadResult r = integrate_finite(Integrand2(g2), s_lo, s_hi, tol);
  const double scale = problem.omega(x) * std::tgamma(problem.alpha);
  r.value /= scale;
  r.err_abs /= std::fabs(scale);
  return r;
}

QuadResult fde_case1_integral(const Expr& g, double alpha, double x,
                              const Tolerance& tol) {
  check_alpha_range(alpha);
  auto integrand = [&](double s, double off) -> Complex {
    const double one_minus = (off < 0.0 && -off < 1e-8) ? -off : 1.0 - s;
    if (!(s > 0.0 && one_minus > 0.0)) return Complex(0.0, 0.0);
    const double gv = g.eval(x / s);
    if (gv == 0.0) return Complex(0.0, 0.0);
    return Complex(std::pow(one_minus, alpha - 1.0) * std::pow(s, -alpha - 1.0) * gv,
                   0.0);
  };
  QuadResult r = integrate_finite(Integrand2(integrand), 0.0, 1.0, tol);
  const double scale = std::tgamma(alpha);
  r.value /= scale;
  r.err_abs /= scale;
  return r;
}

double fde_closed_case3(double k, double n, double alpha, double x) {
  check_alpha_range(alpha);
  if (!(k > 0.0)) throw std::invalid_argument("case 3 requires k > 0");
  const double head = -alpha - n / k;
  if (!(head > 0.0))
    throw std::domain_error(
        "case 3 integral diverges at s = 0 unless -alpha - n/k > 0");
  const GammaRatio gr = gamma_ratio(Complex(head, 0.0), Complex(-n / k, 0.0));
  return std::pow(x, n) * gr.value.real();
}

// ---------------------------------------------------------------------------
// The shipped verification suite

std::vector<IdentityReport> run_builtin_suite(
    const std::optional<std::string>& name_filter,
    std::optional<double> rel_threshold_override) {
  struct Entry {
    const char* name;
    const char* f;
    const char* psi;
    const char* omega;
    IdentityParams prm;
  };

  const Tolerance fast{1e-10, 1e-10, 2'000'000};
  const Tolerance nested{1e-8, 1e-8, 2'000'000};
  const Tolerance heavy{3e-7, 3e-7, 2'000'000};

  auto P = [](Complex p, double thr, Tolerance t) {
    IdentityParams prm;
    prm.p = p;
    prm.rel_threshold = thr;
    prm.quad_tol = t;
    return prm;
  };

  std::vector<Entry> entries;
  {
    IdentityParams s1 = P({1.2, 0.0}, 1e-9, fast);
    s1.a = {0.5, 0.0};
    entries.push_back({"shifting", "exp(-x)", "x", "1", s1});
    IdentityParams s2 = P({0.8, 0.0}, 1e-9, fast);
    s2.a = {1.0, 0.0};
    entries.push_back({"shifting", "exp(-x)", "ln(1+x)", "1+x", s2});
    IdentityParams s3 = P({1.5, 0.0}, 1e-9, fast);
    s3.a = {2.0, 1.0};
    entries.push_back({"shifting", "exp(-x)", "x", "1", s3});
    IdentityParams s4 = s2;
    entries.push_back({"shifting-literal", "exp(-x)", "ln(1+x)", "1+x", s4});

    IdentityParams d1 = P({1.7, 0.0}, 1e-8, fast);
    d1.n = 1;
    entries.push_back({"derivative", "exp(-x)", "x", "1", d1});
    IdentityParams d2 = P({2.5, 0.0}, 1e-8, fast);
    d2.n = 2;
    entries.push_back({"derivative", "exp(-x)", "x", "1", d2});
    IdentityParams d3 = P({1.7, 0.0}, 1e-5, fast);
    d3.n = 1;
    entries.push_back({"derivative", "exp(-x)", "ln(1+x)", "1+x", d3});

    IdentityParams r1 = P({0.3, 0.0}, 1e-5, nested);
    r1.alpha = {0.5, 0.0};
    entries.push_back({"rl-integral", "exp(-x)", "x", "1", r1});
    entries.push_back({"rl-integral", "exp(-x)", "ln(1+x)", "1+x", r1});

    IdentityParams rd = P({0.6, 0.0}, 1e-4, nested);
    rd.alpha = {0.5, 0.0};
    entries.push_back({"rl-derivative", "x*exp(-x)", "x", "1", rd});
    entries.push_back({"rl-derivative", "x*exp(-x)", "ln(1+x)", "1+x", rd});

    IdentityParams mu = P({0.5, 0.0}, 1e-4, nested);
    mu.alpha = {0.5, 0.0};
    mu.mu = {0.4, 0.0};
    entries.push_back({"mu-shift", "x*exp(-x)", "x", "1", mu});
    entries.push_back({"mu-shift", "x*exp(-x)", "ln(1+x)", "1+x", mu});
    entries.push_back({"mu-shift-literal", "x*exp(-x)", "ln(1+x)", "1+x", mu});

    IdentityParams ca = P({0.6, 0.0}, 1e-4, nested);
    ca.alpha = {0.7, 0.0};
    entries.push_back({"caputo", "x*exp(-x)", "x", "1", ca});
    entries.push_back({"caputo", "x*exp(-x)", "ln(1+x)", "1+x", ca});

    IdentityParams hi = P({0.6, 0.0}, 1e-4, heavy);
    hi.alpha = {0.5, 0.0};
    hi.beta = 0.5;
    entries.push_back({"hilfer", "x*exp(-x)", "x", "1", hi});

    entries.push_back({"laplace-classical", "exp(-x)", "x", "1",
                       P({2.5, 0.0}, 1e-8, fast)});
    entries.push_back({"fourier-reading", "exp(-(x^2)/2)", "x", "1",
                       P({1.0, 0.0}, 1e-8, fast)});
  }

  std::vector<IdentityReport> reports;
  auto matches = [&](const std::string& n) {
    return !name_filter || n.find(*name_filter) != std::string::npos;
  };

  for (const Entry& e : entries) {
    if (!matches(e.name)) continue;
    IdentityParams prm = e.prm;
    if (rel_threshold_override) prm.rel_threshold = *rel_threshold_override;
    try {
      const Expr f = parse_expr(e.f);
      const AdmissiblePsi psi = AdmissiblePsi::from_source(e.psi);
      const Weight omega = Weight::from_source(e.omega);
      reports.push_back(check_identity(e.name, f, psi, omega, prm));
    } catch (const std::exception& ex) {
      IdentityReport r;
      r.identity_name = e.name;
      r.lhs = r.rhs = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
      r.abs_diff = r.rel_diff = std::numeric_limits<double>::quiet_NaN();
      r.threshold = prm.rel_threshold;
      r.passed = false;
      r.notes = std::string("evaluation failed: ") + ex.what();
      reports.push_back(std::move(r));
    }
  }

  // Convolution theorem fixtures.
  struct ConvEntry {
    const char* f;
    const char* g;
    const char* psi;
    const char* omega;
    Complex p;
    double thr;
  };
  const ConvEntry conv_entries[] = {
      {"exp(-x)", "exp(-x)", "x", "1", {1.5, 0.0}, 1e-6},
      {"(1+x)^-2", "(1+x)^-2", "ln(1+x)", "1", {1.0, 0.0}, 1e-4},
      {"exp(-x)", "exp(-x)", "x", "exp(-x/2)", {1.5, 0.0}, 1e-4},
  };
  if (matches("convolution")) {
    for (const ConvEntry& c : conv_entries) {
      const double thr = rel_threshold_override.value_or(c.thr);
      try {
        reports.push_back(check_convolution_theorem(
            parse_expr(c.f), parse_expr(c.g), AdmissiblePsi::from_source(c.psi),
            Weight::from_source(c.omega), c.p, thr, Tolerance{1e-8, 1e-8}));
      } catch (const std::exception& ex) {
        IdentityReport r;
        r.identity_name = "convolution";
        r.passed = false;
        r.threshold = thr;
        r.notes = std::string("evaluation failed: ") + ex.what();
        reports.push_back(std::move(r));
      }
    }
  }
  return reports;
}

}  // namespace gmellin
