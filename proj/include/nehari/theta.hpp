#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "nehari/errors.hpp"

namespace nehari {

// Angular average (1/2pi) \int_0^{2pi} (a^2 + 2ab cos t + b^2)^{(p+1)/2} dt
// and the matching derivative pair.  The integrand is smooth and 2pi-periodic,
// so the periodic trapezoid rule converges geometrically except when
// |a| ~ |b|, where the base touches zero at t = pi and convergence degrades
// to algebraic; that regime is handled by doubling the node count until the
// value settles.
//
// power  = average of base^{(p+1)/2}
// force  = ( average of base^{(p-1)/2} (a + b cos t),
//            average of base^{(p-1)/2} (b + a cos t) )
// so that d(power)/da = (p+1) * force.first holds exactly, node by node, for
// the discrete rule as well.
struct ThetaEval {
  double power = 0.0;
  double force_a = 0.0;
  double force_b = 0.0;
  int m_used = 0;
};

namespace theta_detail {

inline const std::vector<double>& cos_table(int m) {
  thread_local std::map<int, std::vector<double>> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<double> tab(static_cast<std::size_t>(m) / 2 + 1);
  for (int k = 0; k <= m / 2; ++k)
    tab[static_cast<std::size_t>(k)] = std::cos(2.0 * std::numbers::pi * k / m);
  return cache.emplace(m, std::move(tab)).first->second;
}

enum class PowKind { Quarter, Half, ThreeQuarter, One, Two, Generic };

inline PowKind classify_exponent(double qm) {
  if (qm == 0.25) return PowKind::Quarter;
  if (qm == 0.5) return PowKind::Half;
  if (qm == 0.75) return PowKind::ThreeQuarter;
  if (qm == 1.0) return PowKind::One;
  if (qm == 2.0) return PowKind::Two;
  return PowKind::Generic;
}

inline double pow_base(double base, double qm, PowKind kind) {
  switch (kind) {
    case PowKind::Quarter: return std::sqrt(std::sqrt(base));
    case PowKind::Half: return std::sqrt(base);
    case PowKind::ThreeQuarter: {
      const double s = std::sqrt(base);
      return s * std::sqrt(s);
    }
    case PowKind::One: return base;
    case PowKind::Two: return base * base;
    case PowKind::Generic: return std::pow(base, qm);
  }
  return std::pow(base, qm);
}

inline ThetaEval fixed_rule(double a, double b, double p, int m) {
  const double x = a * a + b * b;
  const double y = 2.0 * a * b;
  const double qm = 0.5 * (p - 1.0);
  const PowKind kind = classify_exponent(qm);
  const auto& tab = cos_table(m);
  double sp = 0.0, sa = 0.0, sb = 0.0;
  for (int k = 0; k <= m / 2; ++k) {
    const double c = tab[static_cast<std::size_t>(k)];
    double base = x + y * c;
    if (base < 0.0) base = 0.0;  // roundoff guard at |a| == |b|, t == pi
    const double t = pow_base(base, qm, kind);
    const double w = (k == 0 || k == m / 2) ? 1.0 : 2.0;
    sp += w * t * base;
    sa += w * t * (a + b * c);
    sb += w * t * (b + a * c);
  }
  ThetaEval out;
  out.power = sp / m;
  out.force_a = sa / m;
  out.force_b = sb / m;
  out.m_used = m;
  return out;
}

}  // namespace theta_detail

inline ThetaEval theta_eval(double a, double b, double p, int m = 128) {
  if (!(p > 1.0) || !(p <= 5.0)) throw config_error("theta average: exponent must lie in (1, 5]");
  if (m < 8 || m % 2 != 0) throw config_error("theta average: node count must be even and >= 8");
  ThetaEval out;
  const double x = a * a + b * b;
  if (x == 0.0) {
    out.m_used = m;
    return out;
  }
  const double y = 2.0 * a * b;
  if (y == 0.0) {
    // base is constant in the angle; the rule is exact with any m
    const double t = std::pow(x, 0.5 * (p - 1.0));
    out.power = std::pow(x, 0.5 * (p + 1.0));
    out.force_a = t * a;
    out.force_b = t * b;
    out.m_used = m;
    return out;
  }
  const double rho = std::abs(y) / x;
  out = theta_detail::fixed_rule(a, b, p, m);
  if (rho > 0.98) {
    // near-degenerate: refine until the value settles
    while (out.m_used < 16384) {
      ThetaEval next = theta_detail::fixed_rule(a, b, p, out.m_used * 2);
      const bool settled =
          std::abs(next.power - out.power) <= 1e-10 * std::max(1.0, std::abs(next.power));
      out = next;
      if (settled) break;
    }
  }
  return out;
}

inline double theta_avg_power(double a, double b, double p, int m = 128) {
  return theta_eval(a, b, p, m).power;
}

inline std::pair<double, double> theta_avg_force(double a, double b, double p, int m = 128) {
  ThetaEval e = theta_eval(a, b, p, m);
  return {e.force_a, e.force_b};
}

// (1/2pi) \int_0^{2pi} (1 + 2 sqrt(s(1-s)) cos t)^{(p+1)/2} dt, the factor by
// which the angular coupling beats the uncoupled power; > 1 on (0,1), -> 1 at
// the endpoints.
inline double jensen_factor(double s, double p, int m = 128) {
  if (!(s >= 0.0) || !(s <= 1.0)) throw config_error("jensen factor: share must lie in [0, 1]");
  return theta_avg_power(std::sqrt(s), std::sqrt(1.0 - s), p, m);
}

}  // namespace nehari
