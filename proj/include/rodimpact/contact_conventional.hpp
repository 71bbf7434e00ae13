#pragma once

#include <utility>

#include "rodimpact/rods.hpp"

namespace rodimpact {

// Parameters of the penalty contact solvers. tau has no default: the spring
// stiffness controls the accuracy/stiffness trade-off and must be chosen
// deliberately for each study.
struct PenaltySpec {
    double tau = 0.0;                // contact spring stiffness (N/m)
    int max_fixed_point_iters = 50;  // implicit variant only
    double fp_tol = 1e-10;           // force-increment convergence tolerance (N)

    void validate() const;
};

// The four monolithic two-rod baselines. All advance both rods with one shared
// time step from the rods' current time to t_end and record one sample per
// step (plus the initial state). The contact force column is instantaneous
// and compression-positive.
//
// - penalty explicit: central-difference Newmark; the contact spring force
//   tau*max(0, gap) is evaluated from the step-start positions.
// - penalty implicit: trapezoidal Newmark; the spring force at the end of the
//   step is resolved by fixed-point iteration on the force value, warm-started
//   from the previous step. The per-step pass count lands in `iterations`.
// - Lagrange explicit: central-difference Newmark plus a forward-increment
//   multiplier: whenever the unconstrained update predicts overlap, the exact
//   impulse closing that overlap is applied at the two contact nodes and the
//   update is re-completed, so the corrected gap is zero to round-off.
//   Requires lumped mass.
// - Lagrange implicit: backward Euler with a single multiplier row enforcing
//   a zero gap; the multiplier row is dropped whenever the multiplier would
//   turn tensile, which coincides with the unconstrained step predicting
//   separation.
TimeSeries solve_penalty_explicit(std::pair<Rod, Rod> rods, const PenaltySpec& spec, double dt,
                                  double t_end);
TimeSeries solve_penalty_implicit(std::pair<Rod, Rod> rods, const PenaltySpec& spec, double dt,
                                  double t_end);
TimeSeries solve_lagrange_explicit(std::pair<Rod, Rod> rods, double dt, double t_end);
TimeSeries solve_lagrange_implicit(std::pair<Rod, Rod> rods, double dt, double t_end);

}  // namespace rodimpact
