#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bregsolve/errors.hpp"

namespace bregsolve {

/// Parameter sequences of the iteration, all closed-form functions of the
/// iteration index n >= 1.
struct ParamSchedule {
  using Seq = std::function<double(long)>;

  Seq alpha1, alpha2, alpha3, alpha4;  // anchor / carry / resolvent / averaged weights
  Seq gamma1, gamma2, gamma3;          // v / z / Sz weights
  Seq beta;                            // w vs Sw weight
  Seq delta;                           // resolvent-average weight
  Seq lambda;                          // prox step size

  std::string name = "custom";
};

/// Corrected example schedule: alpha_{n,1} = 1/(4n) with the remaining
/// three alphas sharing 1 - alpha_{n,1} equally, beta_n = 1/2 + 1/(n+2),
/// delta_n = 1/2, gamma_{n,i} = 1/3.
inline ParamSchedule paper_example_schedule(double lam = 1.0 / 32.0) {
  ParamSchedule s;
  s.alpha1 = [](long n) { return 1.0 / (4.0 * static_cast<double>(n)); };
  auto rest = [](long n) { return (1.0 - 1.0 / (4.0 * static_cast<double>(n))) / 3.0; };
  s.alpha2 = rest;
  s.alpha3 = rest;
  s.alpha4 = rest;
  s.gamma1 = s.gamma2 = s.gamma3 = [](long) { return 1.0 / 3.0; };
  s.beta = [](long n) { return 0.5 + 1.0 / (static_cast<double>(n) + 2.0); };
  s.delta = [](long) { return 0.5; };
  s.lambda = [lam](long) { return lam; };
  s.name = "paper-example";
  return s;
}

/// Uncorrected variant of the example schedule: alpha_{n,2..4} = 1/3 - 3/(4n)
/// and beta_n = 1/2 + 1/n. Fails validation at small n (negative alphas,
/// alphas not summing to one, beta outside (0,1)); kept as a regression
/// fixture for the validator.
inline ParamSchedule paper_literal_schedule(double lam = 1.0 / 32.0) {
  ParamSchedule s;
  s.alpha1 = [](long n) { return 1.0 / (4.0 * static_cast<double>(n)); };
  auto rest = [](long n) { return 1.0 / 3.0 - 3.0 / (4.0 * static_cast<double>(n)); };
  s.alpha2 = rest;
  s.alpha3 = rest;
  s.alpha4 = rest;
  s.gamma1 = s.gamma2 = s.gamma3 = [](long) { return 1.0 / 3.0; };
  s.beta = [](long n) { return 0.5 + 1.0 / static_cast<double>(n); };
  s.delta = [](long) { return 0.5; };
  s.lambda = [lam](long) { return lam; };
  s.name = "paper-literal";
  return s;
}

/// Anchor-heavy schedule with alpha_{n,1} = 1/sqrt(n+1); the anchor weight
/// decays slowly enough that the anchored limit is reached in a few hundred
/// iterations on contractive problems.
inline ParamSchedule halpern_sqrt_schedule(double lam) {
  ParamSchedule s;
  s.alpha1 = [](long n) { return 1.0 / std::sqrt(static_cast<double>(n) + 1.0); };
  auto rest = [](long n) { return (1.0 - 1.0 / std::sqrt(static_cast<double>(n) + 1.0)) / 3.0; };
  s.alpha2 = rest;
  s.alpha3 = rest;
  s.alpha4 = rest;
  s.gamma1 = s.gamma2 = s.gamma3 = [](long) { return 1.0 / 3.0; };
  s.beta = [](long n) { return 0.5 + 1.0 / (static_cast<double>(n) + 2.0); };
  s.delta = [](long) { return 0.5; };
  s.lambda = [lam](long) { return lam; };
  s.name = "halpern-sqrt";
  return s;
}

struct ScheduleViolation {
  long n = 0;
  std::string field;
  double value = 0.0;
  std::string constraint;
};

struct ScheduleReport {
  std::vector<ScheduleViolation> violations;
  long horizon = 0;

  bool pass() const { return violations.empty(); }

  std::string summary() const {
    std::ostringstream os;
    if (pass()) {
      os << "schedule OK on horizon " << horizon << "\n";
      return os.str();
    }
    os << violations.size() << " schedule violation(s) on horizon " << horizon << ":\n";
    const std::size_t shown = std::min<std::size_t>(violations.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& v = violations[i];
      os << "  n=" << v.n << "  " << v.field << " = " << v.value << "  violates " << v.constraint
         << "\n";
    }
    if (shown < violations.size()) os << "  ... " << violations.size() - shown << " more\n";
    return os.str();
  }
};

struct ValidateOptions {
  double sum_tol = 1e-12;      ///< |sum - 1| bound for alpha and gamma
  double liminf_floor = 1e-3;  ///< floor for the tail-min of liminf products
};

/// Checks the admissibility conditions pointwise for n = 1..horizon and the
/// liminf-type conditions as a floor on the tail (last half) of the horizon:
///   alpha_{n,i}, gamma_{n,i}, beta_n, delta_n in (0,1); alpha and gamma
///   sum to 1; 0 < lambda_n < min(1/c1, 1/c2); tail-min of alpha2*alpha3,
///   of every gamma_i*gamma_j, and of beta(1-beta) at least the floor.
inline ScheduleReport validate_schedule(const ParamSchedule& s, long horizon, double c1, double c2,
                                        const ValidateOptions& opts = {}) {
  if (horizon < 1) throw DomainError("validate_schedule: horizon must be >= 1");
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw DomainError("validate_schedule: c1, c2 must be positive");
  const double p = std::min(1.0 / c1, 1.0 / c2);

  ScheduleReport rep;
  rep.horizon = horizon;
  auto in_unit = [&](long n, const char* field, double v) {
    if (!(v > 0.0 && v < 1.0)) rep.violations.push_back({n, field, v, "(0, 1)"});
  };

  double tail_a23 = 1.0, tail_g12 = 1.0, tail_g13 = 1.0, tail_g23 = 1.0, tail_b = 1.0;
  const long tail_start = horizon / 2 + 1;
  for (long n = 1; n <= horizon; ++n) {
    const double a1 = s.alpha1(n), a2 = s.alpha2(n), a3 = s.alpha3(n), a4 = s.alpha4(n);
    const double g1 = s.gamma1(n), g2 = s.gamma2(n), g3 = s.gamma3(n);
    const double b = s.beta(n), d = s.delta(n), lam = s.lambda(n);
    in_unit(n, "alpha1", a1);
    in_unit(n, "alpha2", a2);
    in_unit(n, "alpha3", a3);
    in_unit(n, "alpha4", a4);
    const double asum = a1 + a2 + a3 + a4;
    if (std::abs(asum - 1.0) > opts.sum_tol)
      rep.violations.push_back({n, "sum(alpha)", asum, "= 1"});
    in_unit(n, "gamma1", g1);
    in_unit(n, "gamma2", g2);
    in_unit(n, "gamma3", g3);
    const double gsum = g1 + g2 + g3;
    if (std::abs(gsum - 1.0) > opts.sum_tol)
      rep.violations.push_back({n, "sum(gamma)", gsum, "= 1"});
    in_unit(n, "beta", b);
    in_unit(n, "delta", d);
    if (!(lam > 0.0 && lam < p))
      rep.violations.push_back({n, "lambda", lam, "(0, min(1/c1, 1/c2))"});
    if (n >= tail_start) {
      tail_a23 = std::min(tail_a23, a2 * a3);
      tail_g12 = std::min(tail_g12, g1 * g2);
      tail_g13 = std::min(tail_g13, g1 * g3);
      tail_g23 = std::min(tail_g23, g2 * g3);
      tail_b = std::min(tail_b, b * (1.0 - b));
    }
  }
  auto tail_check = [&](const char* field, double v) {
    if (v < opts.liminf_floor)
      rep.violations.push_back({tail_start, field, v, "tail-min >= liminf floor"});
  };
  tail_check("alpha2*alpha3", tail_a23);
  tail_check("gamma1*gamma2", tail_g12);
  tail_check("gamma1*gamma3", tail_g13);
  tail_check("gamma2*gamma3", tail_g23);
  tail_check("beta*(1-beta)", tail_b);
  return rep;
}

}  // namespace bregsolve
