// Test-only reference computations. None of these call into the library's
// integrators or closed forms; they exist to check them.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int depth = 50) {
  auto rec = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi,
                 double whole, double eps, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return self(self, lo, mid, flo, flm, fmid, left, 0.5 * eps, d - 1) +
           self(self, mid, hi, fmid, frm, fhi, right, 0.5 * eps, d - 1);
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(rec, a, b, fa, fm, fb, whole, tol, depth);
}

/// Time for the nonlinear stance to rotate from theta0 to theta1 given the
/// starting rate, from energy conservation: T = int dtheta / theta_dot(theta).
inline double nonlinear_stance_time(double w2, double theta0, double v0, double theta1) {
  auto rate = [=](double th) {
    return std::sqrt(v0 * v0 + 2.0 * w2 * (std::cos(theta0) - std::cos(th)));
  };
  return simpson([&](double th) { return 1.0 / rate(th); }, theta0, theta1, 1e-14);
}

/// Same for the quadratic potential.
inline double linear_stance_time(double w2, double theta0, double v0, double theta1) {
  auto rate = [=](double th) { return std::sqrt(v0 * v0 + w2 * (th * th - theta0 * theta0)); };
  return simpson([&](double th) { return 1.0 / rate(th); }, theta0, theta1, 1e-14);
}

/// Fine fixed-step RK4 of theta'' = w2 * theta.
inline std::pair<double, double> integrate_linear(double w2, double theta, double v, double t,
                                                  int n) {
  const double h = t / n;
  for (int i = 0; i < n; ++i) {
    const double k1x = v, k1v = w2 * theta;
    const double k2x = v + 0.5 * h * k1v, k2v = w2 * (theta + 0.5 * h * k1x);
    const double k3x = v + 0.5 * h * k2v, k3v = w2 * (theta + 0.5 * h * k2x);
    const double k4x = v + h * k3v, k4v = w2 * (theta + h * k3x);
    theta += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return {theta, v};
}

/// K_{i+1} = eps K_i + dE iterated until successive values stop changing.
inline double recurrence_limit(double eps, double de, double k0) {
  double k = k0;
  for (int i = 0; i < 100000; ++i) {
    const double next = eps * k + de;
    if (next == k) break;
    k = next;
  }
  return k;
}

/// Golden-section maximizer of a unimodal function on [a, b].
inline double golden_max(const std::function<double(double)>& f, double a, double b,
                         int iters = 200) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters && b - a > 1e-15; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

/// F(alpha, phi) written from the steady linearized states rather than the
/// simplified closed form: tanh(omega T) = sinh / cosh of the 2x2 solve.
inline double period_ratio_from_states(double alpha, double phi) {
  const double w = 1.0;  // F is independent of omega; use unit rate.
  const double th_pre = alpha / 2 + phi;
  const double th_post = phi - alpha / 2;
  const double v_pre = w * std::sqrt(2 * alpha * phi) / std::sin(alpha);
  const double v_post = std::cos(alpha) * v_pre;
  return (v_post * th_pre - th_post * v_pre) / (v_post * v_pre / w - th_post * th_pre * w);
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<>(lo, hi)(gen); }
};

}  // namespace oracle
