#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gmellin/special.hpp"

using namespace gmellin;

namespace {

double crel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace

TEST_CASE("gamma fixed values") {
  CHECK(crel(gamma_complex({1.0, 0.0}), {1.0, 0.0}) < 1e-13);
  CHECK(crel(gamma_complex({0.5, 0.0}), {1.7724538509055160273, 0.0}) < 1e-13);
  CHECK(crel(gamma_complex({2.5, 0.0}), {1.3293403881791370205, 0.0}) < 1e-13);
  CHECK(crel(gamma_complex({10.0, 0.0}), {362880.0, 0.0}) < 1e-13);
  CHECK(crel(gamma_complex({20.5, 0.0}), {5.406242982335075044e17, 0.0}) < 1e-12);
  CHECK(crel(gamma_complex({1e-3, 0.0}), {999.42377248459546611, 0.0}) < 1e-12);
  CHECK(crel(gamma_complex({-0.5, 0.0}), {-3.5449077018110320546, 0.0}) < 1e-12);
}

TEST_CASE("gamma complex-plane values against an independent oracle") {
  // Frozen from 25-digit arbitrary-precision evaluation.
  const std::vector<std::pair<Complex, Complex>> table = {
      {{1.5, 2.0}, {0.16591510893899095487, 0.14946347326641948739}},
      {{0.5, 30.0}, {-8.3736476967132581791e-21, 1.8665376522944921191e-21}},
      {{-4.5, 1.0}, {2.6756982301150570413e-4, -5.7104100871641653601e-3}},
      {{3.0, -7.0}, {-4.4117241856449159318e-3, 3.6521031574413261485e-3}},
      {{45.5, 10.0}, {5.3219260789575342322e54, 2.5630568950036124948e54}},
  };
  for (const auto& [z, want] : table) {
    INFO("z = ", z.real(), " + ", z.imag(), "i");
    CHECK(crel(gamma_complex(z), want) < 1e-12);
  }
}

TEST_CASE("recurrence Gamma(z+1) = z Gamma(z) on a complex grid") {
  int checked = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const Complex z(-19.3 + 4.1 * i, -18.7 + 4.2 * j);
      if (std::abs(z) > 20.0 || is_nonpositive_integer(z) ||
          is_nonpositive_integer(z + 1.0))
        continue;
      const Complex lhs = gamma_complex(z + 1.0);
      const Complex rhs = z * gamma_complex(z);
      INFO("z = ", z.real(), " + ", z.imag(), "i");
      CHECK(crel(lhs, rhs) < 1e-11);
      ++checked;
    }
  }
  CHECK(checked >= 60);
}

TEST_CASE("reflection Gamma(z) Gamma(1-z) sin(pi z)/pi = 1") {
  for (double re : {-3.3, -1.2, 0.25, 0.75, 2.6}) {
    for (double im : {-2.0, -0.3, 0.4, 1.7}) {
      const Complex z(re, im);
      const Complex prod =
          gamma_complex(z) * gamma_complex(1.0 - z) * std::sin(kPi * z) / kPi;
      INFO("z = ", re, " + ", im, "i");
      CHECK(crel(prod, {1.0, 0.0}) < 1e-10);
    }
  }
}

TEST_CASE("gamma pole handling") {
  CHECK_THROWS_AS(gamma_complex({0.0, 0.0}), PoleError);
  CHECK_THROWS_AS(gamma_complex({-3.0, 0.0}), PoleError);
  CHECK_THROWS_AS(log_gamma({-7.0, 0.0}), PoleError);
  CHECK(is_nonpositive_integer({-2.0, 0.0}));
  CHECK(is_nonpositive_integer({-2.0 + 1e-14, 1e-14}));
  CHECK(!is_nonpositive_integer({-2.1, 0.0}));
  CHECK(!is_nonpositive_integer({2.0, 0.0}));
}

TEST_CASE("log_gamma exponentiates back to gamma") {
  for (double re : {0.3, 1.7, 12.0, -2.4}) {
    for (double im : {-6.0, 0.5, 25.0}) {
      const Complex z(re, im);
      CHECK(crel(std::exp(log_gamma(z)), gamma_complex(z)) < 1e-11);
    }
  }
  // Large arguments where gamma itself would overflow.
  const Complex big = log_gamma({250.0, 3.0});
  CHECK(std::isfinite(big.real()));
}

TEST_CASE("gamma_ratio basics") {
  CHECK(crel(gamma_ratio({3.7, 0.0}, {3.7, 0.0}).value, {1.0, 0.0}) < 1e-14);
  CHECK(crel(gamma_ratio({3.0, 0.0}, {2.0, 0.0}).value, {2.0, 0.0}) < 1e-13);
  CHECK(crel(gamma_ratio({0.5, 0.0}, {2.0, 0.0}).value,
             {1.7724538509055160273, 0.0}) < 1e-13);
  // Overflow-proof: Gamma(300)/Gamma(299) = 299.
  CHECK(crel(gamma_ratio({300.0, 0.0}, {299.0, 0.0}).value, {299.0, 0.0}) < 1e-12);
}

TEST_CASE("gamma_ratio pole bookkeeping") {
  const GammaRatio pole = gamma_ratio({-3.0, 0.0}, {1.2, 0.0});
  CHECK(pole.pole);
  const GammaRatio zero = gamma_ratio({1.1, 0.0}, {-2.0, 0.0});
  CHECK(!zero.pole);
  CHECK(zero.value == Complex(0.0, 0.0));
  // Simultaneous poles take the finite limit (-1)^(m-n) n!/m!.
  const GammaRatio both = gamma_ratio({-2.0, 0.0}, {-5.0, 0.0});
  CHECK(!both.pole);
  CHECK(crel(both.value, {-60.0, 0.0}) < 1e-12);
}

TEST_CASE("gamma_ratio(a,b) * gamma_ratio(b,a) = 1") {
  const std::vector<Complex> args = {{0.4, 0.0}, {2.5, -1.0}, {-1.3, 0.7},
                                     {15.0, 4.0}, {0.5, 30.0}};
  for (const auto& a : args)
    for (const auto& b : args) {
      const Complex prod = gamma_ratio(a, b).value * gamma_ratio(b, a).value;
      CHECK(crel(prod, {1.0, 0.0}) < 1e-11);
    }
}

TEST_CASE("beta values") {
  CHECK(crel(beta({1.0, 0.0}, {1.0, 0.0}), {1.0, 0.0}) < 1e-14);
  CHECK(crel(beta({0.5, 0.0}, {1.5, 0.0}), {kPi / 2.0, 0.0}) < 1e-13);
  CHECK(crel(beta({2.0, 0.0}, {3.0, 0.0}), {1.0 / 12.0, 0.0}) < 1e-13);
  CHECK_THROWS_AS(beta({0.0, 0.0}, {1.0, 0.0}), PoleError);
  CHECK_THROWS_AS(beta({1.0, 0.0}, {-4.0, 0.0}), PoleError);
  // Only the sum hits a pole: Beta -> 0.
  CHECK(beta({-0.5, 0.0}, {-0.5, 0.0}) == Complex(0.0, 0.0));
}
