#pragma once

namespace bregsolve {

/// One record for every tolerance knob in the library. Operations take a
/// `const Tolerances&` defaulting to `default_tolerances()`, so a run can
/// override the whole set at once.
struct Tolerances {
  double atol = 1e-10;  ///< absolute comparison tolerance
  double rtol = 1e-9;   ///< relative comparison tolerance

  /// Bregman distances in [-df_clamp, 0) are treated as roundoff and
  /// clamped to zero (counted); anything below -df_clamp is an error.
  double df_clamp = 1e-12;

  double weight_sum = 1e-12;     ///< |sum of weights - 1| bound
  double membership = 1e-9;      ///< set-membership slack
  double inner_step = 1e-12;     ///< inner-solver step residual target
  long inner_max_iters = 100000;     ///< projected-gradient iteration cap
  long resolvent_max_iters = 10000;  ///< resolvent fixed-point iteration cap
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace bregsolve
