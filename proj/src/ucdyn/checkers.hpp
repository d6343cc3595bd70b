#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ucdyn/config.hpp"
#include "ucdyn/orbit.hpp"
#include "ucdyn/verdict.hpp"

namespace ucdyn {

// Finite-horizon semi-decisions for the dynamical properties. Every checker
// sees the system only through a StepSequence, so (X, F) and (X, f) are
// handled by identical code.

Verdict check_equicontinuity(const SystemView& sys, const CheckConfig& cfg);
Verdict check_sensitivity(const SystemView& sys, const CheckConfig& cfg);
Verdict check_cofinite_sensitivity(const SystemView& sys, const CheckConfig& cfg);
Verdict check_transitivity(const SystemView& sys, const CheckConfig& cfg);
Verdict check_weak_mixing(const SystemView& sys, const CheckConfig& cfg);
Verdict check_topological_mixing(const SystemView& sys, const CheckConfig& cfg);
Verdict check_minimality(const SystemView& sys, const CheckConfig& cfg);

/// Least n <= max_period with d(omega_{nk}(x), x) <= tol for k = 1..repetitions.
Verdict check_periodic(const SystemView& sys, const Point& x, const CheckConfig& cfg, std::size_t max_period,
                       std::size_t repetitions);
/// Some grid point is periodic.
Verdict check_periodic_points(const SystemView& sys, const CheckConfig& cfg);
Verdict check_dense_periodicity(const SystemView& sys, const CheckConfig& cfg, std::size_t max_period,
                                std::size_t repetitions);

/// liminf proxy: tail-window minimum of d(omega_n x, omega_n y).
Verdict proximal_check(const SystemView& sys, const Point& x, const Point& y, const CheckConfig& cfg);
/// Tail-window minimum < eps and tail-window maximum > delta.
Verdict li_yorke_check(const SystemView& sys, const Point& x, const Point& y, const CheckConfig& cfg);

enum class PairPredicate { Proximal, LiYorke };

/// Every grid eps-ball contains a partner y of x satisfying the predicate.
Verdict cell_density(const SystemView& sys, const Point& x, const CheckConfig& cfg, PairPredicate pred);

/// cell_density(Proximal) for every grid x.
Verdict check_proximal_cells(const SystemView& sys, const CheckConfig& cfg);
/// Every pair of grid eps-balls contains a proximal pair.
Verdict check_proximal_pairs(const SystemView& sys, const CheckConfig& cfg);
/// cell_density(LiYorke) for every grid x.
Verdict check_li_yorke_sensitivity(const SystemView& sys, const CheckConfig& cfg);

/// Dispatch by report property name.
Verdict run_property(const SystemView& sys, const std::string& property, const CheckConfig& cfg);

}  // namespace ucdyn
