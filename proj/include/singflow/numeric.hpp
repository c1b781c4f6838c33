#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "singflow/errors.hpp"

namespace singflow {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Reduce an angle into the principal interval (-pi/2, pi/2].
inline double wrap_principal(double phi) {
  double r = std::remainder(phi, kPi);
  if (r <= -kPi / 2) r += kPi;
  return r;
}

// Reduce into (-pi, pi].
inline double wrap_two_pi(double phi) {
  double r = std::remainder(phi, 2 * kPi);
  if (r <= -kPi) r += 2 * kPi;
  return r;
}

struct RootResult {
  double x;
  double fx;
  int iterations;
};

// Bracketed root solve: secant steps safeguarded by bisection. fa and fb must
// have opposite signs.
template <class F>
RootResult find_root_bracketed(F&& f, double a, double b, double fa, double fb,
                               double xtol_abs, double xtol_rel,
                               int max_iter = 200) {
  if (std::isnan(fa) || std::isnan(fb) || fa * fb > 0)
    throw NumericalError("find_root_bracketed: root not bracketed");
  if (fa == 0) return {a, fa, 0};
  if (fb == 0) return {b, fb, 0};
  double lo = a, hi = b, flo = fa, fhi = fb;
  double x = lo, fx = flo;
  for (int it = 1; it <= max_iter; ++it) {
    double width = hi - lo;
    // Try a secant step; fall back to bisection when it leaves the bracket
    // or fails to shrink it meaningfully.
    double xs = (std::abs(fhi - flo) > 0)
                    ? (lo * fhi - hi * flo) / (fhi - flo)
                    : lo + 0.5 * width;
    double margin = 0.01 * std::abs(width);
    if (!(xs > lo + margin && xs < hi - margin)) xs = lo + 0.5 * width;
    x = xs;
    fx = f(x);
    if (fx == 0) return {x, fx, it};
    if (flo * fx < 0) {
      hi = x;
      fhi = fx;
    } else {
      lo = x;
      flo = fx;
    }
    if (std::abs(hi - lo) <=
        xtol_abs + xtol_rel * std::max(std::abs(lo), std::abs(hi)))
      return {0.5 * (lo + hi), fx, it};
  }
  return {0.5 * (lo + hi), fx, max_iter};
}

struct QuadratureResult {
  double value;
  double error_estimate;
  long evaluations;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1] (symmetric; nonnegative half listed).
inline constexpr double kKronrodNode[8] = {
    0.000000000000000000000000000000000, 0.207784955007898467600689403773245,
    0.405845151377397166906606412076961, 0.586087235467691130294144838258730,
    0.741531185599394439863864773280788, 0.864864423359769072789712788640926,
    0.949107912342758524526189684047851, 0.991455371120812639206854697526329};
inline constexpr double kKronrodWeight[8] = {
    0.209482141084727828012999174891714, 0.204432940075298892414161999234649,
    0.190350578064785409913256402421014, 0.169004726639267902826583426598550,
    0.140653259715525918745189590510238, 0.104790010322250183839876322541518,
    0.063092092629978553290700663189204, 0.022935322010529224963732008058970};
inline constexpr double kGaussWeight[4] = {
    0.417959183673469387755102040816327, 0.381830050505118944950369775488975,
    0.279705391489276667901467771423780, 0.129484966168869693270611432679082};

template <class F>
inline void gk15(F&& f, double a, double b, double* value, double* error) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fk[15];
  fk[7] = f(c);
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kKronrodNode[i];
    fk[7 - i] = f(c - dx);
    fk[7 + i] = f(c + dx);
  }
  double resk = kKronrodWeight[0] * fk[7];
  double resg = kGaussWeight[0] * fk[7];
  for (int i = 1; i < 8; ++i)
    resk += kKronrodWeight[i] * (fk[7 - i] + fk[7 + i]);
  for (int i = 1; i < 4; ++i)
    resg += kGaussWeight[i] * (fk[7 - 2 * i] + fk[7 + 2 * i]);
  *value = resk * h;
  *error = std::abs((resk - resg) * h);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration over [a, b] (a > b allowed).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                    double abs_tol, int max_depth = 48) {
  if (a == b) return {0.0, 0.0, 0};
  struct Seg {
    double a, b, value, error;
    int depth;
  };
  double v0, e0;
  detail::gk15(f, a, b, &v0, &e0);
  long evals = 15;
  std::vector<Seg> stack{{a, b, v0, e0, 0}};
  double total = 0, total_err = 0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    const double tol =
        std::max(abs_tol, rel_tol * std::abs(s.value)) *
        std::max(1e-3, std::abs(s.b - s.a) / std::abs(b - a));
    if (s.error <= tol || s.depth >= max_depth) {
      total += s.value;
      total_err += s.error;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    double v1, e1, v2, e2;
    detail::gk15(f, s.a, m, &v1, &e1);
    detail::gk15(f, m, s.b, &v2, &e2);
    evals += 30;
    stack.push_back({s.a, m, v1, e1, s.depth + 1});
    stack.push_back({m, s.b, v2, e2, s.depth + 1});
  }
  return {total, total_err, evals};
}

struct LineFit {
  double slope;
  double intercept;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("fit_line: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double d = n * sxx - sx * sx;
  if (d == 0) throw DomainError("fit_line: degenerate abscissae");
  return {(n * sxy - sx * sy) / d, (sxx * sy - sx * sxy) / d};
}

inline std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > 0)) throw DomainError("log_spaced: positive range required");
  if (count < 1) throw DomainError("log_spaced: count >= 1 required");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] =
        std::exp(la + (lb - la) * i / (count - 1));
  return out;
}

inline std::vector<double> lin_spaced(double lo, double hi, int count) {
  if (count < 1) throw DomainError("lin_spaced: count >= 1 required");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return out;
}

// Runs body(i) for i in [0, n) on a small thread pool. Results must be written
// to preallocated slots so the output order is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace singflow
