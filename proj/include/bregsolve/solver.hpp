#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bregsolve/errors.hpp"
#include "bregsolve/legendre.hpp"
#include "bregsolve/linalg.hpp"
#include "bregsolve/problem.hpp"
#include "bregsolve/projection.hpp"
#include "bregsolve/schedule.hpp"
#include "bregsolve/sets.hpp"
#include "bregsolve/tolerances.hpp"

namespace bregsolve {

/// Resolvent wiring runs the general iteration; DirectProjection replaces
/// every resolvent evaluation with the Bregman projection (the projection
/// specialization of the method; equivalent when phi = 0).
enum class Wiring { Resolvent, DirectProjection };

/// One iteration's intermediates. After step(), x holds the new iterate
/// x_{n+1} while y..h are the stage values of iteration n.
struct IterateState {
  long n = 1;
  Vector x, y, z, v, w, u, k, h;

  static IterateState initial(Vector x1) {
    IterateState st;
    st.n = 1;
    st.x = std::move(x1);
    return st;
  }
};

struct RunConfig {
  Vector x1;
  Vector anchor_u;
  long max_iters = 20000;
  double residual_tol = 1e-10;
  std::optional<Vector> track_target;  ///< known solution, for diagnostics only
  Wiring wiring = Wiring::Resolvent;
  int cert_samples = 8;                ///< set samples per iteration for the projection certificate
  unsigned long cert_seed = 0x9e3779b97f4a7c15ULL;
  Tolerances tol;
};

struct TraceRow {
  long n = 0;
  Vector x, y, z;
  double residual = 0.0;
  double df_target = std::numeric_limits<double>::quiet_NaN();
  double lemma_arg_slack = std::numeric_limits<double>::quiet_NaN();
  double projection_cert_slack = std::numeric_limits<double>::quiet_NaN();
};

enum class RunStatus { Converged, MaxIters, Error };

inline const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIters: return "MaxIters";
    default: return "Error";
  }
}

struct RunResult {
  Vector solution;
  std::vector<TraceRow> trace;
  RunStatus status = RunStatus::Error;
  long iterations = 0;
  std::string error;  ///< stage-annotated message when status == Error
};

/// Slack of the two-step descent estimate at a certified equilibrium point
/// xstar: D_f(x*,x) - (1 - lam c1) D_f(y,x) - (1 - lam c2) D_f(z,y) - D_f(x*,z).
/// Nonnegative (up to roundoff) when y and z are the two prox iterates from x.
inline double lemma_arg_slack(const ProblemBundle& pb, const Vector& xstar, const Vector& x,
                              const Vector& y, const Vector& z, double lam,
                              const Tolerances& tol = default_tolerances()) {
  return bregman_distance(pb.spec, xstar, x, tol) -
         (1.0 - lam * pb.c1) * bregman_distance(pb.spec, y, x, tol) -
         (1.0 - lam * pb.c2) * bregman_distance(pb.spec, z, y, tol) -
         bregman_distance(pb.spec, xstar, z, tol);
}

namespace detail {

template <typename F>
auto run_stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace detail

/// One iteration of the method:
///   y  <- prox of g at x              (step lambda_n)
///   z  <- prox of g at y, distance anchored at x
///   v  <- dual average of Res(x), Res(z)          (delta_n)
///   w  <- dual average of v, z, Sz                (gamma_n)
///   u  <- Res(w)
///   k  <- dual average of w, Sw                   (beta_n)
///   h  <- dual average of anchor, x, u, k         (alpha_n)
///   x+ <- Bregman projection of h onto C
/// Errors from sub-operations propagate annotated with the stage name.
inline IterateState step(const ProblemBundle& pb, const ParamSchedule& sched, const IterateState& st,
                         const Vector& anchor_u, Wiring wiring = Wiring::Resolvent,
                         const Tolerances& tol = default_tolerances()) {
  const long n = st.n;
  const double lam = sched.lambda(n);
  const double delta = sched.delta(n);
  const double g1 = sched.gamma1(n), g2 = sched.gamma2(n), g3 = sched.gamma3(n);
  const double beta = sched.beta(n);
  const double a1 = sched.alpha1(n), a2 = sched.alpha2(n), a3 = sched.alpha3(n),
               a4 = sched.alpha4(n);

  auto res = [&](const Vector& p) {
    return wiring == Wiring::DirectProjection ? bregman_project(pb.spec, pb.set, p, tol)
                                              : resolvent(pb.spec, pb.phi, pb.set, p, tol);
  };

  IterateState out;
  out.n = n + 1;
  const Vector& x = st.x;
  out.y = detail::run_stage("y_prox", [&] { return bregman_prox(pb.spec, pb.g, pb.set, lam, x, x, tol); });
  out.z = detail::run_stage("z_prox",
                            [&] { return bregman_prox(pb.spec, pb.g, pb.set, lam, out.y, x, tol); });
  out.v = detail::run_stage("v_average", [&] {
    const Vector rx = res(x), rz = res(out.z);
    return dual_average(pb.spec, {delta, 1.0 - delta}, {rx, rz}, tol);
  });
  out.w = detail::run_stage("w_average", [&] {
    return dual_average(pb.spec, {g1, g2, g3}, {out.v, out.z, pb.S.apply(out.z)}, tol);
  });
  out.u = detail::run_stage("u_resolvent", [&] { return res(out.w); });
  out.k = detail::run_stage("k_average", [&] {
    return dual_average(pb.spec, {beta, 1.0 - beta}, {out.w, pb.S.apply(out.w)}, tol);
  });
  out.h = detail::run_stage("h_average", [&] {
    return dual_average(pb.spec, {a1, a2, a3, a4}, {anchor_u, x, out.u, out.k}, tol);
  });
  out.x = detail::run_stage("x_projection", [&] { return bregman_project(pb.spec, pb.set, out.h, tol); });
  return out;
}

/// Runs the iteration from cfg.x1 until the step residual |x_{n+1} - x_n|
/// drops below cfg.residual_tol or cfg.max_iters is reached. The trace gets
/// one row per executed iteration; target-based diagnostics fill in when
/// cfg.track_target is set. Stage errors stop the run with a partial trace.
inline RunResult run(const ProblemBundle& pb, const ParamSchedule& sched, const RunConfig& cfg) {
  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(std::min<long>(cfg.max_iters, 1 << 20)));
  IterateState state = IterateState::initial(cfg.x1);
  std::mt19937_64 cert_rng(cfg.cert_seed);

  for (long n = 1; n <= cfg.max_iters; ++n) {
    IterateState next;
    try {
      next = step(pb, sched, state, cfg.anchor_u, cfg.wiring, cfg.tol);
    } catch (const Error& e) {
      result.status = RunStatus::Error;
      result.error = e.what();
      result.solution = state.x;
      result.iterations = n - 1;
      return result;
    }

    TraceRow row;
    row.n = n;
    row.x = state.x;
    row.y = next.y;
    row.z = next.z;
    row.residual = inf_norm(next.x - state.x);
    if (cfg.track_target) {
      row.df_target = bregman_distance(pb.spec, *cfg.track_target, state.x, cfg.tol);
      row.lemma_arg_slack =
          lemma_arg_slack(pb, *cfg.track_target, state.x, next.y, next.z, sched.lambda(n), cfg.tol);
    }
    if (cfg.cert_samples > 0) {
      try {
        const auto ys = sample_points(pb.set, cfg.cert_samples, cert_rng,
                                      pb.spec.kind == LegendreKind::NegativeEntropy ? 1e-9 : 0.0);
        row.projection_cert_slack = projection_vi_gap(pb.spec, next.h, next.x, ys);
      } catch (const Error&) {
        // diagnostics only; an unsampleable geometry never stops the run
      }
    }
    result.trace.push_back(std::move(row));
    state = std::move(next);
    result.iterations = n;

    if (result.trace.back().residual < cfg.residual_tol) {
      result.status = RunStatus::Converged;
      result.solution = state.x;
      return result;
    }
  }
  result.status = RunStatus::MaxIters;
  result.solution = state.x;
  return result;
}

}  // namespace bregsolve
