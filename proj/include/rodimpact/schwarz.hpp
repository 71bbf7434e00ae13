#pragma once

#include <limits>
#include <vector>

#include "rodimpact/integrators.hpp"
#include "rodimpact/rods.hpp"
#include "rodimpact/transfer.hpp"

namespace rodimpact {

// Transmission role of a rod on the shared contact boundary. The Dirichlet
// side receives position/velocity/acceleration; the Neumann side receives the
// reaction traction. Roles are interchangeable between the two rods.
enum class Role { Dirichlet, Neumann };

// One rod together with its local time discretization and its transmission
// role. The stepper is the persistent integrator instance so matrix
// factorizations survive across controller intervals.
struct Subdomain {
    Subdomain(Rod rod_in, IntegratorSpec integrator_in, double dt_in, Role role_in)
        : rod(std::move(rod_in)),
          integrator(integrator_in),
          dt(dt_in),
          role(role_in),
          stepper(integrator_in) {}

    Rod rod;
    IntegratorSpec integrator;
    double dt = 1e-7;
    Role role = Role::Dirichlet;
    Integrator stepper;
};

// Builds a subdomain for one side of the two-rod benchmark. `lumped` defaults
// to lumped mass for explicit schemes and consistent mass for implicit ones.
Subdomain make_subdomain(const BenchmarkSpec& spec, RodSide side, int n_elements,
                         const IntegratorSpec& integrator, double dt, Role role);
Subdomain make_subdomain(const BenchmarkSpec& spec, RodSide side, int n_elements,
                         const IntegratorSpec& integrator, double dt, Role role, bool lumped);

// Convergence controls of the alternating iteration. There is deliberately no
// relaxation parameter: the plain alternating sweep is used as-is. Chatter
// stabilization is not configured here; it rides with each subdomain's
// integrator spec.
struct SchwarzSettings {
    double tol_rel = 1e-12;   // relative position increment tolerance
    double tol_abs = 1e-15;   // absolute position increment tolerance (m)
    int max_iterations = 100; // per controller interval
    int max_status_flips = 3; // contact status changes tolerated per interval

    // Throws ValidationError when tolerances or counts are out of range.
    void validate() const;
};

// States of one subdomain at its local time stops over one controller
// interval; element 0 is the interval-start state, element l_max the
// interval-end state.
using IntervalHistory = std::vector<State>;

// Converged (or trial) histories of one controller interval, in the same
// order as the subdomains were passed, plus the number of alternating
// iterations spent.
struct IntervalSolution {
    IntervalHistory first;
    IntervalHistory second;
    int iterations = 0;
};

// Boundary traction at the subdomain's contact node for the given state: the
// axial stress of the tip element (stress contracted with the outward
// normal), signed so that compression exerted on the opposing body is
// positive. This is the coupling quantity of the whole method: it is what the
// Neumann side receives and what the release test inspects. It is a pure
// function of the positions; extracting the nodal equation residual instead
// would feed the prescribed tip acceleration back with alternating gain -1
// between equal-impedance rods and stall the iteration.
double extract_contact_traction(const Subdomain& sd, const State& state);

// Contact status decision from the status under which the interval was just
// computed (`assumed_active`), the converged end-of-interval traction on the
// constrained side, and the end-of-interval gap (right tip of the left rod
// minus left tip of the right rod). If contact was assumed: keep it while the
// traction is compressive (traction > 0); exactly zero or tension releases.
// If no contact was assumed: activate on strictly positive overlap (gap > 0);
// bodies that merely touch share no volume and stay uncoupled, which is also
// what lets a freshly released pair part without re-triggering.
bool detect_active_contact(bool assumed_active, double end_traction, double end_gap);

// Same decision taken from the two subdomains' current states. The traction is
// extracted from the Dirichlet-role subdomain.
bool detect_active_contact(bool assumed_active, const Subdomain& a, const Subdomain& b);

// Builds the step context that imposes the projected boundary kinematics at
// the subdomain's contact node. With NaiveStabilized the prescribed
// acceleration is zeroed; with ContactStabilized a zero-gap barrier anchored
// at the prescribed position is installed for the prediction phase. The
// context borrows the rod's operators, so the subdomain must outlive it.
StepContext apply_dirichlet_contact_bc(const Subdomain& sd, const DirichletBC& bc,
                                       Stabilization stabilization);

// Advances one subdomain through its local stops of [state.t, t_end] without
// any contact coupling and returns the history (start state included). The
// subdomain's committed state is not modified.
IntervalHistory advance_free(Subdomain& sd, double t_end);

// Alternating Dirichlet-Neumann iteration over one controller interval
// [t_k, t_end], where t_k is the subdomains' current state time. Exactly one
// of the two subdomains must hold each role. `guess_first`/`guess_second` are
// the iterate-0 histories covering the interval (typically the aborted free
// trial at impact, or the previous converged interval shifted forward in
// time); their end positions seed the convergence test and the Neumann-role
// guess provides the first Dirichlet sweep's boundary data.
//
// Each iteration runs the Dirichlet sweep against the Neumann side's
// previous-iterate kinematics (time-interpolated, spatially projected), then
// the Neumann sweep against the Dirichlet side's freshly extracted reaction
// history, then evaluates
//   eps_abs = sqrt(|dx1|^2 + |dx2|^2),
//   eps_rel = sqrt(|dx1|^2/|x1|^2 + |dx2|^2/|x2|^2)
// on the end-of-interval position vectors; the iteration stops when either
// drops to its tolerance. Committed subdomain states are left untouched.
// Throws MaxIterationsExceeded when settings.max_iterations is spent.
IntervalSolution schwarz_interval(Subdomain& first, Subdomain& second, double t_end,
                                  const IntervalHistory& guess_first,
                                  const IntervalHistory& guess_second,
                                  const SchwarzSettings& settings);

// Full run over [t0, t_end] with controller stops every `interval` seconds.
struct SimulationResult {
    TimeSeries series;  // one sample per controller stop
    // Start of the first interval committed with active contact / end of the
    // last such interval; NaN when the event never occurs.
    double t_impact = std::numeric_limits<double>::quiet_NaN();
    double t_release = std::numeric_limits<double>::quiet_NaN();
};

// Drives the per-interval state machine: free flight advances the rods
// independently; active contact runs schwarz_interval. The contact status is
// re-evaluated at each interval's end from the trial solution; on a change the
// interval is restored and recomputed under the new status (more than
// settings.max_status_flips changes raise StatusOscillation). One exception
// breaks ties on intervals that straddle the release event: once a contact
// trial of the interval has ended in tension, a re-overlap of the free redo
// does not re-enter contact -- the interval commits the free trial, since no
// status is self-consistent there and a sustained impact would be re-detected
// one interval later anyway. Samples are recorded at every controller stop
// with the committed contact force and iteration count. Both rods must start
// at the same time; `interval` must divide the time span and each local dt
// must divide `interval`.
SimulationResult run_simulation(Subdomain first, Subdomain second, double interval, double t_end,
                                const SchwarzSettings& settings);

}  // namespace rodimpact
