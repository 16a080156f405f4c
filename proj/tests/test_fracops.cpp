#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gmellin/fracops.hpp"
#include "gmellin/quad.hpp"
#include "gmellin/special.hpp"

using namespace gmellin;

namespace {

AdmissiblePsi psi_of(const char* s) { return AdmissiblePsi::from_source(s); }
Weight omega_of(const char* s) { return Weight::from_source(s); }

RealFn fn_of(const Expr& e) {
  return [e](double x) { return e.eval(x); };
}

}  // namespace

TEST_CASE("derivative order bookkeeping") {
  CHECK(derivative_order({0.5, 0.0}) == 1);
  CHECK(derivative_order({0.999, 0.0}) == 1);
  CHECK(derivative_order({1.0, 0.0}) == 1);  // integer orders collapse
  CHECK(derivative_order({1.5, 0.0}) == 2);
  CHECK(derivative_order({2.0, 0.0}) == 2);
  CHECK_THROWS_AS(derivative_order({-0.5, 0.0}), std::invalid_argument);
}

TEST_CASE("rl_integral fixtures") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  const Expr one = parse_expr("1");
  const Expr lin = parse_expr("x");

  // I^{1/2} 1 at x = 1: 2 sqrt(x) / Gamma(1/2) ... = 1/Gamma(1.5).
  const QuadResult a = rl_integral(fn_of(one), id, unit, {0.5, 0.0}, 0.0, 1.0);
  CHECK(a.converged);
  CHECK(a.value.real() == doctest::Approx(1.1283791670955125739).epsilon(1e-10));
  CHECK(std::abs(a.value.imag()) < 1e-13);

  // Empty interval.
  const QuadResult b = rl_integral(fn_of(one), id, unit, {0.7, 0.0}, 0.5, 0.5);
  CHECK(b.converged);
  CHECK(b.value == Complex(0.0, 0.0));

  // alpha = 1 is plain integration: int_0^2 t dt = 2.
  const QuadResult c = rl_integral(fn_of(lin), id, unit, {1.0, 0.0}, 0.0, 2.0);
  CHECK(c.value.real() == doctest::Approx(2.0).epsilon(1e-11));

  CHECK_THROWS_AS(rl_integral(fn_of(one), id, unit, {-0.5, 0.0}, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(rl_integral(fn_of(one), id, unit, {0.5, 0.0}, 2.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("rl_integral against the classical power rule") {
  // I^alpha t^k = Gamma(k+1)/Gamma(k+1+alpha) x^{k+alpha}
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  const Expr f = parse_expr("x^2");
  const double alpha = 0.75, x = 1.7;
  const double want = std::tgamma(3.0) / std::tgamma(3.0 + alpha) *
                      std::pow(x, 2.0 + alpha);
  const QuadResult r = rl_integral(fn_of(f), id, unit, {alpha, 0.0}, 0.0, x);
  CHECK(r.value.real() == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("weighted integral with integer order collapses to the plain one") {
  const AdmissiblePsi psi = psi_of("ln(1+x)");
  const Weight w = omega_of("1+x");
  const Expr f = parse_expr("exp(-x)");
  const double x = 1.3;
  // (1/omega(x)) int_0^x omega f psi'
  auto integrand = [&](double t) {
    return Complex(w(t) * f.eval(t) * psi.prime(t), 0.0);
  };
  const QuadResult plain = integrate_finite(Integrand(integrand), 0.0, x);
  const QuadResult viaop = rl_integral(fn_of(f), psi, w, {1.0, 0.0}, 0.0, x);
  CHECK(viaop.value.real() ==
        doctest::Approx(plain.value.real() / w(x)).epsilon(1e-6));
}

TEST_CASE("rl_derivative power rule") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  // D^{1/2} x = x^{1/2} Gamma(2)/Gamma(1.5)
  const Complex v =
      rl_derivative([](double t) { return t; }, id, unit, {0.5, 0.0}, 0.0, 1.0);
  CHECK(v.real() == doctest::Approx(1.1283791670955125739).epsilon(1e-7));
  CHECK(std::abs(v.imag()) < 1e-10);
}

TEST_CASE("rl_derivative at integer order matches the exact derivative") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  for (const char* src : {"exp(-x)", "x^3", "sin(x)"}) {
    const Expr f = parse_expr(src);
    const Expr df = f.derivative();
    for (double x : {0.5, 1.5}) {
      const Complex v = rl_derivative(fn_of(f), id, unit, {1.0, 0.0}, 0.0, x);
      INFO(std::string(src), " at ", x);
      CHECK(std::abs(v - Complex(df.eval(x), 0.0)) <
            1e-6 * std::max(1.0, std::fabs(df.eval(x))));
    }
  }
}

TEST_CASE("caputo fixtures") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();

  // Constants die under the Caputo derivative (omega = 1).
  const Complex c = caputo_derivative(parse_expr("3"), psi_of("ln(1+x)"), unit,
                                      {0.5, 0.0}, 0.0, 1.2);
  CHECK(std::abs(c) < 1e-12);

  // Power rule; equals RL here because f(0) = 0.
  const Complex p =
      caputo_derivative(parse_expr("x"), id, unit, {0.5, 0.0}, 0.0, 1.0);
  CHECK(p.real() == doctest::Approx(1.1283791670955125739).epsilon(1e-9));

  // alpha -> 1 approaches the plain derivative.
  const Complex near1 =
      caputo_derivative(parse_expr("x^2"), id, unit, {0.999, 0.0}, 0.0, 1.0);
  CHECK(near1.real() == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("hilfer endpoints collapse to RL and Caputo") {
  const AdmissiblePsi psi = psi_of("ln(1+x)");
  const Weight w = omega_of("1+x");
  const Expr f = parse_expr("x*exp(-x)");
  const Complex alpha(0.6, 0.0);
  const double x = 1.1;

  const Complex rl = rl_derivative(fn_of(f), psi, w, alpha, 0.0, x);
  const Complex cap = caputo_derivative(f, psi, w, alpha, 0.0, x);
  const Complex h0 = hilfer_derivative(f, psi, w, alpha, 0.0, 0.0, x);
  const Complex h1 = hilfer_derivative(f, psi, w, alpha, 1.0, 0.0, x);

  CHECK(std::abs(h0 - rl) < 1e-4 * std::max(1.0, std::abs(rl)));
  CHECK(std::abs(h1 - cap) < 1e-4 * std::max(1.0, std::abs(cap)));
  CHECK_THROWS_AS(
      hilfer_derivative(f, psi, w, alpha, 1.5, 0.0, x), std::invalid_argument);
}

TEST_CASE("hilfer interpolant on the classical power function") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  const Expr f = parse_expr("x");
  // For f = x with f(0) = 0, RL and Caputo coincide, so every beta must give
  // the same value.
  const Complex h =
      hilfer_derivative(f, id, unit, {0.5, 0.0}, 0.5, 0.0, 1.0);
  CHECK(h.real() == doctest::Approx(1.1283791670955125739).epsilon(1e-4));
}

TEST_CASE("conjugated route is the identity when psi = x, omega = 1") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  const Expr f = parse_expr("exp(-x)");
  FracSpec spec;
  spec.alpha = {0.5, 0.0};
  spec.kind = FracKind::RlIntegral;
  const Complex conj = conjugated_op(f, id, unit, spec, 1.3);
  const Complex direct =
      rl_integral(fn_of(f), id, unit, spec.alpha, 0.0, 1.3).value;
  CHECK(std::abs(conj - direct) < 1e-12 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("conjugated RL integral of a constant under psi = ln(1+x)") {
  // Classical result on the conjugated constant: psi(x)^{1/2} / Gamma(1.5);
  // at x = e - 1 this is 1/Gamma(1.5).
  const AdmissiblePsi psi = psi_of("ln(1+x)");
  const Weight unit = Weight::unit();
  FracSpec spec;
  spec.alpha = {0.5, 0.0};
  spec.kind = FracKind::RlIntegral;
  const Complex v =
      conjugated_op(parse_expr("1"), psi, unit, spec, std::exp(1.0) - 1.0);
  CHECK(v.real() == doctest::Approx(1.1283791670955125739).epsilon(1e-9));
}

TEST_CASE("direct and conjugated operators agree across the suite") {
  const AdmissiblePsi psi = psi_of("ln(1+x)");
  const Weight w = omega_of("1+x");
  const Expr f = parse_expr("exp(-x)");
  const double x = 1.0;

  FracSpec spec;
  spec.alpha = {0.7, 0.0};

  spec.kind = FracKind::RlIntegral;
  const Complex ci = conjugated_op(f, psi, w, spec, x);
  const Complex di = rl_integral(fn_of(f), psi, w, spec.alpha, 0.0, x).value;
  CHECK(std::abs(ci - di) < 1e-6 * std::max(1.0, std::abs(di)));

  spec.kind = FracKind::RlDerivative;
  const Complex cd = conjugated_op(f, psi, w, spec, x);
  const Complex dd = rl_derivative(fn_of(f), psi, w, spec.alpha, 0.0, x);
  CHECK(std::abs(cd - dd) < 1e-4 * std::max(1.0, std::abs(dd)));

  spec.kind = FracKind::Caputo;
  const Complex cc = conjugated_op(f, psi, w, spec, x);
  const Complex dc = caputo_derivative(f, psi, w, spec.alpha, 0.0, x);
  CHECK(std::abs(cc - dc) < 1e-4 * std::max(1.0, std::abs(dc)));

  spec.kind = FracKind::Hilfer;
  spec.beta = 0.5;
  const Complex ch = conjugated_op(f, psi, w, spec, x);
  const Complex dh = hilfer_derivative(f, psi, w, spec.alpha, 0.5, 0.0, x);
  CHECK(std::abs(ch - dh) < 1e-4 * std::max(1.0, std::abs(dh)));
}

TEST_CASE("conjugated route with a numeric inverse") {
  const AdmissiblePsi psi = psi_of("x+x^2/2");
  const Weight unit = Weight::unit();
  const Expr f = parse_expr("exp(-x)");
  FracSpec spec;
  spec.alpha = {0.5, 0.0};
  spec.kind = FracKind::RlIntegral;
  const Complex conj = conjugated_op(f, psi, unit, spec, 1.0);
  const Complex direct =
      rl_integral(fn_of(f), psi, unit, spec.alpha, 0.0, 1.0).value;
  CHECK(std::abs(conj - direct) < 1e-6 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("semigroup of fractional integrals") {
  const AdmissiblePsi psi = psi_of("ln(1+x)");
  const Weight w = omega_of("1+x");
  const Expr f = parse_expr("exp(-x)");
  const Complex a1(0.4, 0.0), a2(0.8, 0.0);
  const double x = 1.5;

  const Tolerance inner{1e-11, 1e-11, 2'000'000};
  auto inner_int = [&](double t) {
    return rl_integral(fn_of(f), psi, w, a2, 0.0, t, inner).value.real();
  };
  const Complex nested = rl_integral(inner_int, psi, w, a1, 0.0, x).value;
  const Complex direct = rl_integral(fn_of(f), psi, w, a1 + a2, 0.0, x).value;
  CHECK(std::abs(nested - direct) < 1e-5 * std::max(1.0, std::abs(direct)));
}

TEST_CASE("complex order is supported in the integral") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  // I^{0.5+0.3i} of 1 at x: x^{alpha} / Gamma(alpha+1).
  const Complex alpha(0.5, 0.3);
  const QuadResult r =
      rl_integral([](double) { return 1.0; }, id, unit, alpha, 0.0, 1.0);
  const Complex want = 1.0 / gamma_complex(alpha + 1.0);
  CHECK(std::abs(r.value - want) < 1e-9 * std::abs(want));
}

TEST_CASE("rl_derivative refuses the base point") {
  const AdmissiblePsi id = psi_of("x");
  const Weight unit = Weight::unit();
  CHECK_THROWS_AS(
      rl_derivative([](double t) { return t; }, id, unit, {0.5, 0.0}, 0.0, 0.0),
      std::domain_error);
}
