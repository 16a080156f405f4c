#include "gmellin/transforms.hpp"

#include <cmath>

namespace gmellin {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676656;

// z^w for z > 0 without the complex pow when w is real.
Complex real_base_pow(double z, Complex w) {
  if (w.imag() == 0.0) return Complex(std::pow(z, w.real()), 0.0);
  return std::pow(Complex(z, 0.0), w);
}

struct SlopeFit {
  double slope = 0.0;
  int n_valid = 0;
  bool diverging = false;  // |slope| still growing toward the boundary
  bool all_underflow = false;
};

// Least-squares slope of log|omega f| against log psi over a geometric grid.
// Divergence is judged by comparing the fits of the two halves of the grid
// (the half closer to the boundary is listed second).
SlopeFit fit_slope(const Expr& f, const AdmissiblePsi& psi, const Weight& omega,
                   double lo, double hi, bool boundary_is_zero) {
  constexpr int kSamples = 16;
  std::vector<double> ts, ys;
  const double step = std::log(hi / lo) / (kSamples - 1);
  int underflow = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double x = lo * std::exp(step * i);
    const double px = psi(x);
    const double v = std::fabs(omega(x) * f.eval(x));
    if (!(px > 0.0) || !std::isfinite(px)) continue;
    if (v == 0.0) {
      ++underflow;
      continue;
    }
    if (!std::isfinite(v)) continue;
    ts.push_back(std::log(px));
    ys.push_back(std::log(v));
  }
  SlopeFit out;
  out.n_valid = static_cast<int>(ts.size());
  if (underflow >= kSamples / 2) {
    out.all_underflow = true;
    return out;
  }
  if (out.n_valid < 4) return out;

  auto ls = [](const std::vector<double>& t, const std::vector<double>& y,
               std::size_t b, std::size_t e) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double n = static_cast<double>(e - b);
    for (std::size_t i = b; i < e; ++i) {
      st += t[i];
      sy += y[i];
      stt += t[i] * t[i];
      sty += t[i] * y[i];
    }
    const double denom = n * stt - st * st;
    return denom != 0.0 ? (n * sty - st * sy) / denom : 0.0;
  };

  const std::size_t n = ts.size();
  out.slope = ls(ts, ys, 0, n);
  const double first = ls(ts, ys, 0, n / 2);
  const double second = ls(ts, ys, n / 2, n);
  // Order halves so "second" is nearer the boundary under study.
  const double near_boundary = boundary_is_zero ? first : second;
  const double far_from_boundary = boundary_is_zero ? second : first;
  if (std::fabs(near_boundary - far_from_boundary) > 1.0) out.diverging = true;
  return out;
}

}  // namespace

StripEstimate estimate_strip(const Expr& f, const AdmissiblePsi& psi,
                             const Weight& omega) {
  StripEstimate est;
  const SlopeFit zero_end = fit_slope(f, psi, omega, 1e-8, 1e-3, true);
  const SlopeFit inf_end = fit_slope(f, psi, omega, 1e3, 1e8, false);

  if (zero_end.all_underflow) {
    est.strip.lower = -std::numeric_limits<double>::infinity();
  } else if (zero_end.n_valid < 4) {
    est.conclusive = false;
    est.note = "inconclusive fit near 0; strip left unbounded";
    est.strip.lower = -std::numeric_limits<double>::infinity();
  } else if (zero_end.diverging) {
    // Vanishing faster than any power of psi at 0 relaxes the bound to -inf;
    // growth faster than any power means no strip at all.
    est.strip.lower = (zero_end.slope > 0.0)
                          ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
    if (est.strip.lower > 0.0) {
      est.conclusive = false;
      est.note = "omega*f grows superpolynomially near 0";
    }
  } else {
    est.strip.lower = -zero_end.slope;
  }

  if (inf_end.all_underflow) {
    est.strip.upper = std::numeric_limits<double>::infinity();
  } else if (inf_end.n_valid < 4) {
    if (est.conclusive) {
      est.conclusive = false;
      est.note = "inconclusive fit near infinity; strip left unbounded";
    }
    est.strip.upper = std::numeric_limits<double>::infinity();
  } else if (inf_end.diverging) {
    est.strip.upper = (inf_end.slope < 0.0)
                          ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    if (est.strip.upper < 0.0 && est.conclusive) {
      est.conclusive = false;
      est.note = "omega*f grows superpolynomially near infinity";
    }
  } else {
    est.strip.upper = -inf_end.slope;
  }
  return est;
}

namespace {

// Panel map for the multiplicative engine: x(u) = psi^{-1}(e^u), with the
// out-of-range cases collapsed to infinity so the sweep stops there.
std::function<double(double)> log_scale_map(const AdmissiblePsi& psi) {
  return [&psi](double u) -> double {
    const double target = std::exp(u);
    if (!std::isfinite(target)) return std::numeric_limits<double>::infinity();
    try {
      return psi.inverse(target);
    } catch (const EvalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };
}

}  // namespace

QuadResult mellin_forward_fn(const RealFn& f, const AdmissiblePsi& psi,
                             const Weight& omega, Complex p, const Tolerance& tol,
                             Complex psi_power_shift, bool extra_omega) {
  const Complex exponent = p - 1.0 + psi_power_shift;
  auto integrand = [&](double x) -> Complex {
    const double px = psi.stable(x);
    if (!(px > 0.0)) return Complex(0.0, 0.0);
    double factor = omega(x) * f(x) * psi.prime(x);
    if (extra_omega) factor *= omega(x);
    if (factor == 0.0 || !std::isfinite(factor))
      return Complex(factor == 0.0 ? 0.0 : factor, 0.0);
    return real_base_pow(px, exponent) * factor;
  };
  return integrate_multiplicative(integrand, log_scale_map(psi),
                                  exponent.imag(), tol);
}

QuadResult mellin_forward_point(const Expr& f, const AdmissiblePsi& psi,
                                const Weight& omega, Complex p, const Tolerance& tol,
                                MellinMethod method) {
  if (method == MellinMethod::Direct) {
    return mellin_forward_fn([&f](double x) { return f.eval(x); }, psi, omega, p,
                             tol);
  }
  // Conjugated route: classical Mellin transform of the conjugate function.
  const RealFn conj = conjugate_to_classical(f, psi, omega);
  auto integrand = [&](double u) -> Complex {
    const double v = conj(u);
    if (v == 0.0 || !std::isfinite(v)) return Complex(v == 0.0 ? 0.0 : v, 0.0);
    return real_base_pow(u, p - 1.0) * v;
  };
  auto identity_map = [](double u) { return std::exp(u); };
  return integrate_multiplicative(integrand, identity_map, p.imag(), tol);
}

QuadResult mellin_forward_shifted(const Expr& f, const AdmissiblePsi& psi,
                                  const Weight& omega, Complex p, Complex shift,
                                  bool extra_omega, const Tolerance& tol) {
  return mellin_forward_fn([&f](double x) { return f.eval(x); }, psi, omega, p, tol,
                           shift, extra_omega);
}

std::vector<QuadResult> mellin_forward(const TransformJob& job) {
  std::vector<QuadResult> out;
  out.reserve(job.p_points.size());
  Strip strip;
  if (!job.force) strip = estimate_strip(job.f, job.psi, job.omega).strip;
  for (const Complex& p : job.p_points) {
    QuadResult r =
        mellin_forward_point(job.f, job.psi, job.omega, p, job.tol, job.method);
    if (!job.force && !strip.contains(p.real())) r.converged = false;
    out.push_back(r);
  }
  return out;
}

QuadResult mellin_inverse(const ComplexFn& F, const AdmissiblePsi& psi,
                          const Weight& omega, double x, double gamma,
                          const Tolerance& tol) {
  const double px = psi(x);
  if (!(px > 0.0))
    throw std::domain_error("mellin_inverse: psi(x) must be positive");
  const double log_px = std::log(px);
  const double period = (log_px != 0.0) ? kTwoPi / std::fabs(log_px) : 0.0;
  auto G = [&](Complex p) { return F(p) * std::exp(-p * log_px); };
  QuadResult line = integrate_vertical_line_auto(G, gamma, tol, period);
  const double scale = kTwoPi * omega(x);
  line.value /= Complex(0.0, scale);
  line.err_abs /= scale;
  return line;
}

QuadResult laplace_bilateral(const Expr& f, const Expr& psi_on_r,
                             const Expr& omega_on_r, Complex p,
                             const Tolerance& tol) {
  const Expr psi_prime = psi_on_r.derivative();
  auto integrand = [&](double x) -> Complex {
    const double factor = omega_on_r.eval(x) * f.eval(x) * psi_prime.eval(x);
    if (factor == 0.0) return Complex(0.0, 0.0);
    return std::exp(-p * psi_on_r.eval(x)) * factor;
  };
  return integrate_whole_line(integrand, tol);
}

QuadResult fourier_psi_omega(const Expr& f, const Expr& psi_on_r,
                             const Expr& omega_on_r, double k,
                             const Tolerance& tol) {
  const Expr psi_prime = psi_on_r.derivative();
  auto integrand = [&](double x) -> Complex {
    const double factor = omega_on_r.eval(x) * f.eval(x) * psi_prime.eval(x);
    if (factor == 0.0) return Complex(0.0, 0.0);
    return std::exp(Complex(0.0, -k * psi_on_r.eval(x))) * factor;
  };
  QuadResult r = integrate_whole_line(integrand, tol);
  const double norm = std::sqrt(kTwoPi);
  r.value /= norm;
  r.err_abs /= norm;
  return r;
}

}  // namespace gmellin
