#include "gmellin/quad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace gmellin {

namespace {

constexpr double kHalfPi = 1.57079632679489661923132169164;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxLevel = 12;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

QuadResult failed_result(long n_evals) {
  QuadResult r;
  r.value = Complex(kNaN, kNaN);
  r.err_abs = std::numeric_limits<double>::infinity();
  r.n_evals = n_evals;
  r.converged = false;
  return r;
}

// One abscissa of a double-exponential rule.
struct DeNode {
  double x = 0.0;    // abscissa
  double off = 0.0;  // signed offset from the nearest endpoint (0 if none)
  double w = 0.0;    // weight, dx/dt
  bool dead = false; // underflowed past machine range; contributes nothing
  bool fringe = false;  // close enough to a singular endpoint to forgive Inf/NaN
};

// Shared level-doubling driver. `node(t)` realizes the change of variables.
template <typename NodeFn>
QuadResult de_levels(const NodeFn& node, const Integrand2& g, double t_max,
                     const Tolerance& tol) {
  QuadResult res;
  Complex sum(0.0, 0.0);   // current trapezoidal sum, step h
  double l1 = 0.0;         // accumulated sum of |contribution|, for the noise floor
  bool bad = false;

  auto contrib = [&](double t) -> Complex {
    const DeNode n = node(t);
    if (n.dead || n.w == 0.0) return Complex(0.0, 0.0);
    const Complex v = g(n.x, n.off);
    ++res.n_evals;
    if (v == Complex(0.0, 0.0)) return v;
    const Complex c = v * n.w;
    if (!finite(c)) {
      if (n.fringe || !std::isfinite(n.w)) {
        // Singular endpoint fringe: a true integrable singularity decays
        // double-exponentially here, so the lost mass is below tolerance.
        // A non-finite weight at the far fringe means the same thing unless
        // the integrand failed to decay, which the level sums will expose.
        if (finite(v) && std::isfinite(n.w)) return Complex(0.0, 0.0);
        if (n.fringe) return Complex(0.0, 0.0);
      }
      bad = true;
      return Complex(0.0, 0.0);
    }
    l1 += std::abs(c);
    return c;
  };

  double h = 1.0;
  // Level 0: lattice t = k for |t| <= t_max.
  sum = contrib(0.0);
  for (int k = 1; k * h <= t_max && !bad; ++k)
    sum += contrib(k * h) + contrib(-k * h);
  Complex prev_sum = sum * h;
  double prev_diff = std::numeric_limits<double>::infinity();

  for (int level = 1; level <= kMaxLevel; ++level) {
    h *= 0.5;
    Complex add(0.0, 0.0);
    bool level_complete = true;
    for (long j = 0;; ++j) {
      const double t = (2 * j + 1) * h;
      if (t > t_max) break;
      add += contrib(t) + contrib(-t);
      if (bad) break;
      if (res.n_evals > tol.max_evals) {
        level_complete = false;
        break;
      }
    }
    if (bad) return failed_result(res.n_evals);
    if (!level_complete) {
      // Ran out of budget mid-level: report the last complete level.
      res.value = prev_sum;
      res.err_abs = prev_diff;
      res.converged = false;
      return res;
    }
    const Complex cur = prev_sum * 0.5 + add * h;
    const double diff = std::abs(cur - prev_sum);
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * l1 * h;
    res.value = cur;
    res.err_abs = std::max(diff, floor);
    const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(cur));
    if (level >= 2 && diff <= target && prev_diff <= std::max(1.0e3 * target, 1e-280)) {
      res.converged = true;
      return res;
    }
    if (res.n_evals > tol.max_evals) return res;  // budget exhausted, not converged
    prev_sum = cur;
    prev_diff = diff;
  }
  return res;
}

}  // namespace

QuadResult integrate_finite(const Integrand2& g, double a, double b,
                            const Tolerance& tol) {
  if (!(a <= b)) throw std::invalid_argument("integrate_finite: requires a <= b");
  if (a == b) {
    QuadResult r;
    r.err_abs = 0.0;
    r.n_evals = 1;
    r.converged = true;
    return r;
  }
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fringe_off = 1e-12 * (b - a);

  auto node = [&](double t) {
    DeNode n;
    const double s = kHalfPi * std::sinh(t);
    const double em = std::exp(-2.0 * std::fabs(s));  // underflows past |s|~354
    if (em == 0.0) {
      n.dead = true;
      return n;
    }
    const double one_minus_abs_u = 2.0 * em / (1.0 + em);
    const double sech2 = 4.0 * em / ((1.0 + em) * (1.0 + em));
    const double delta = half * one_minus_abs_u;
    if (t >= 0.0) {
      n.x = b - delta;
      n.off = -delta;
    } else {
      n.x = a + delta;
      n.off = delta;
    }
    if (t == 0.0) {
      n.x = mid;
      n.off = mid - a;
    }
    n.w = half * kHalfPi * std::cosh(t) * sech2;
    n.fringe = delta <= fringe_off || n.x <= a || n.x >= b;
    if (n.x <= a || n.x >= b) {
      // Collided with an endpoint in double precision; the exact node is
      // strictly interior, so keep it representable one ulp inside.
      n.x = (t >= 0.0) ? b : a;
      n.dead = (delta == 0.0);
      n.fringe = true;
    }
    return n;
  };
  return de_levels(node, g, 6.2, tol);
}

QuadResult integrate_finite(const Integrand& g, double a, double b,
                            const Tolerance& tol) {
  return integrate_finite(
      Integrand2([&g](double x, double) { return g(x); }), a, b, tol);
}

QuadResult integrate_semi_infinite(const Integrand& g, const Tolerance& tol) {
  auto node = [](double t) {
    DeNode n;
    const double s = kHalfPi * std::sinh(t);
    if (std::fabs(s) > 705.0) {
      n.dead = true;
      return n;
    }
    n.x = std::exp(s);
    n.off = n.x;  // distance from the 0 endpoint; exact by construction
    n.w = kHalfPi * std::cosh(t) * n.x;
    n.fringe = n.x < 1e-150 || n.x > 1e150;
    return n;
  };
  return de_levels(node, Integrand2([&g](double x, double) { return g(x); }), 6.9,
                   tol);
}

QuadResult integrate_whole_line(const Integrand& g, const Tolerance& tol) {
  auto node = [](double t) {
    DeNode n;
    const double s = kHalfPi * std::sinh(t);
    if (std::fabs(s) > 705.0) {
      n.dead = true;
      return n;
    }
    n.x = std::sinh(s);
    n.w = kHalfPi * std::cosh(t) * std::cosh(s);
    n.fringe = std::fabs(n.x) > 1e150;
    return n;
  };
  return de_levels(node, Integrand2([&g](double x, double) { return g(x); }), 6.9,
                   tol);
}

// ---------------------------------------------------------------------------
// Contour segments: panels integrated by adaptive Gauss-Kronrod 7/15.

namespace {

// QUADPACK dqk15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759,
                            0.864864423359769, 0.741531185599394,
                            0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979,
                            0.104790010322250, 0.140653259715525,
                            0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct PanelResult {
  Complex value{0.0, 0.0};
  double err = 0.0;
  bool bad = false;
};

// One GK15 application of f over [lo, hi]; err from |K15 - G7|.
template <typename Fn>
PanelResult gk15(const Fn& f, double lo, double hi, long& n_evals) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  Complex kron(0.0, 0.0), gauss(0.0, 0.0);
  for (int i = 0; i < 8; ++i) {
    Complex v;
    if (i == 7) {
      v = f(c);
      ++n_evals;
      kron += kWgk[7] * v;
      gauss += kWg[3] * v;
      break;
    }
    const Complex vp = f(c + h * kXgk[i]);
    const Complex vm = f(c - h * kXgk[i]);
    n_evals += 2;
    kron += kWgk[i] * (vp + vm);
    if (i % 2 == 1) gauss += kWg[i / 2] * (vp + vm);
  }
  PanelResult r;
  r.value = kron * h;
  r.err = std::abs(kron - gauss) * h;
  r.bad = !finite(r.value);
  return r;
}

struct Panel {
  double lo, hi;
  Complex value;
  double err;
};

struct PanelWorse {
  bool operator()(const Panel& a, const Panel& b) const { return a.err < b.err; }
};

// Globally adaptive GK15 over [lo, hi], pre-split into `n_panels` slices.
template <typename Fn>
QuadResult adaptive_segment(const Fn& f, double lo, double hi, int n_panels,
                            const Tolerance& tol) {
  QuadResult res;
  std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
  Complex total(0.0, 0.0);
  double err_total = 0.0;
  const double width = (hi - lo) / n_panels;
  for (int i = 0; i < n_panels; ++i) {
    const double a = lo + i * width;
    const double b = (i + 1 == n_panels) ? hi : a + width;
    const PanelResult pr = gk15(f, a, b, res.n_evals);
    if (pr.bad) return failed_result(res.n_evals);
    total += pr.value;
    err_total += pr.err;
    heap.push(Panel{a, b, pr.value, pr.err});
  }
  auto target = [&] { return std::max(tol.abs_tol, tol.rel_tol * std::abs(total)); };
  while (err_total > target() && !heap.empty() && res.n_evals < tol.max_evals) {
    const Panel worst = heap.top();
    heap.pop();
    if (worst.hi - worst.lo < 1e-13 * (hi - lo)) break;  // refinement floor
    const double mid = 0.5 * (worst.lo + worst.hi);
    const PanelResult l = gk15(f, worst.lo, mid, res.n_evals);
    const PanelResult r = gk15(f, mid, worst.hi, res.n_evals);
    if (l.bad || r.bad) return failed_result(res.n_evals);
    total += l.value + r.value - worst.value;
    err_total += l.err + r.err - worst.err;
    heap.push(Panel{worst.lo, mid, l.value, l.err});
    heap.push(Panel{mid, worst.hi, r.value, r.err});
  }
  res.value = total;
  res.err_abs = err_total;
  res.converged = err_total <= target();
  return res;
}

int panel_count(double lo, double hi, double osc_period) {
  double width = std::min(4.0, (hi - lo) / 4.0);
  if (osc_period > 0.0) width = std::min(width, 0.5 * osc_period);
  width = std::max(width, (hi - lo) / 4096.0);
  return std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
}

template <typename Fn>
QuadResult contour_segment(const Fn& f, double lo, double hi, double osc_period,
                           const Tolerance& tol) {
  return adaptive_segment(f, lo, hi, panel_count(lo, hi, osc_period), tol);
}

}  // namespace

QuadResult integrate_multiplicative(const Integrand& g,
                                    const std::function<double(double)>& x_of_u,
                                    double im_freq, const Tolerance& tol) {
  double du = 2.0;
  if (std::fabs(im_freq) > 0.0)
    du = std::min(du, 3.14159265358979323846 / std::fabs(im_freq));
  constexpr double kUMax = 690.0;  // e^u leaves the double range beyond this

  QuadResult res;
  Complex total(0.0, 0.0);
  double err_total = 0.0;
  Tolerance ptol = tol;
  ptol.abs_tol = std::max(2e-3 * tol.abs_tol, 8e-16);
  ptol.rel_tol = std::max(2e-3 * tol.rel_tol, 8e-16);

  // A u-panel can span many decades of x (u is doubly logarithmic for
  // substitutions like ln(1+x)), hiding the integrand's support between
  // Gauss nodes. Subdivide geometrically so that no slice spans more than a
  // fixed ratio in x.
  auto panel_value = [&](double xa, double xb, QuadResult& out) -> bool {
    constexpr double kMaxRatio = 16.0;
    int n_sub = 1;
    if (xa > 0.0 && xb / xa > kMaxRatio)
      n_sub = static_cast<int>(
          std::min(2048.0, std::ceil(std::log(xb / xa) / std::log(kMaxRatio))));
    const double q = std::pow(xb / xa, 1.0 / n_sub);
    double lo = xa;
    for (int i = 0; i < n_sub; ++i) {
      const double hi = (i + 1 == n_sub) ? xb : lo * q;
      const QuadResult pr = adaptive_segment(g, lo, hi, 1, ptol);
      out.n_evals += pr.n_evals;
      if (!finite(pr.value)) return false;
      out.value += pr.value;
      out.err_abs += pr.err_abs;
      lo = hi;
    }
    return true;
  };

  // One direction: panels [u, u + s*du] for k = 0, 1, ... Stops after three
  // consecutive panels below threshold (oscillation can zero out a single
  // panel without the tail being done). When the map collapses at the lower
  // edge -- psi-space has reached the double floor -- the leftover slice
  // down to the origin gets one tanh-sinh pass, which absorbs the endpoint
  // power law that Gauss panels cannot.
  auto sweep = [&](double sign) -> bool {
    int small_run = 0;
    double u = 0.0;
    for (int k = 0; k < 20000; ++k) {
      const double u2 = u + sign * du;
      double xa = x_of_u(std::min(u, u2));
      double xb = x_of_u(std::max(u, u2));
      const bool geometry_collapsed =
          !std::isfinite(xa) || !std::isfinite(xb) || !(xb > xa) ||
          (sign < 0.0 && xa < 1e-3 * xb);
      if (geometry_collapsed) {
        if (sign < 0.0) {
          const double edge = x_of_u(u);
          if (std::isfinite(edge) && edge > 0.0) {
            const QuadResult tail = integrate_finite(g, 0.0, edge, ptol);
            res.n_evals += tail.n_evals;
            if (!finite(tail.value)) return false;
            total += tail.value;
            err_total += tail.err_abs;
            return true;
          }
        }
        // Ran off the representable axis; fine only if the tail was already
        // negligible.
        return small_run >= 1;
      }
      QuadResult pr;
      pr.value = Complex(0.0, 0.0);
      pr.err_abs = 0.0;
      if (!panel_value(xa, xb, pr)) return false;
      res.n_evals += pr.n_evals;
      total += pr.value;
      err_total += pr.err_abs;
      const double target =
          0.05 * std::max(tol.abs_tol, tol.rel_tol * std::abs(total));
      if (std::abs(pr.value) < target)
        ++small_run;
      else
        small_run = 0;
      if (small_run >= 3) return true;
      if (std::fabs(u2) > kUMax || res.n_evals > tol.max_evals) return false;
      u = u2;
    }
    return false;
  };

  const bool up_ok = sweep(+1.0);
  const bool down_ok = sweep(-1.0);
  res.value = total;
  res.err_abs = err_total;
  res.converged = up_ok && down_ok &&
                  err_total <= std::max(tol.abs_tol,
                                        tol.rel_tol * std::abs(total));
  return res;
}

QuadResult integrate_vertical_line(const ContourFn& G, double gamma_re, double T,
                                   const Tolerance& tol, double osc_period) {
  if (!(T > 0.0)) throw std::invalid_argument("integrate_vertical_line: T > 0");
  auto f = [&](double tau) { return Complex(0.0, 1.0) * G(Complex(gamma_re, tau)); };
  return contour_segment(f, -T, T, osc_period, tol);
}

QuadResult integrate_vertical_line_auto(const ContourFn& G, double gamma_re,
                                        const Tolerance& tol, double osc_period,
                                        double* T_used) {
  constexpr double kTCap = 1e4;
  auto f = [&](double tau) { return Complex(0.0, 1.0) * G(Complex(gamma_re, tau)); };

  // Each segment gets a slice of the budget so the summed error estimate can
  // still satisfy the caller's tolerance.
  Tolerance seg_tol = tol;
  seg_tol.abs_tol = 0.2 * tol.abs_tol;
  seg_tol.rel_tol = 0.2 * tol.rel_tol;

  double T = 8.0;
  if (osc_period > 0.0) T = std::max(T, 4.0 * osc_period);
  QuadResult acc = contour_segment(f, -T, T, osc_period, seg_tol);
  if (T_used != nullptr) *T_used = T;
  if (!finite(acc.value)) return acc;

  bool tails_done = false;
  while (T < kTCap) {
    const double T2 = std::min(2.0 * T, kTCap);
    const QuadResult up = contour_segment(f, T, T2, osc_period, seg_tol);
    const QuadResult dn = contour_segment(f, -T2, -T, osc_period, seg_tol);
    if (!finite(up.value) || !finite(dn.value)) return failed_result(acc.n_evals);
    const Complex sides = up.value + dn.value;
    acc.value += sides;
    acc.err_abs += up.err_abs + dn.err_abs;
    acc.n_evals += up.n_evals + dn.n_evals;
    T = T2;
    if (T_used != nullptr) *T_used = T;
    const double target = std::max(tol.abs_tol, tol.rel_tol * std::abs(acc.value));
    const double tail =
        std::max(std::abs(G(Complex(gamma_re, T))), std::abs(G(Complex(gamma_re, -T))));
    acc.n_evals += 2;
    if (std::abs(sides) < target && tail < target) {
      tails_done = true;
      break;
    }
  }
  acc.converged =
      tails_done &&
      acc.err_abs <= std::max(tol.abs_tol, tol.rel_tol * std::abs(acc.value));
  return acc;
}

}  // namespace gmellin
