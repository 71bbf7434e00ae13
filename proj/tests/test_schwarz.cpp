#include "rodimpact/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rodimpact/errors.hpp"
#include "rodimpact/oracle.hpp"

namespace ri = rodimpact;

namespace {

// Scaled-down benchmark: impact at t = 0, release at t = 100 us, contact
// force plateau 100 N (independent of rod length), end time well past release.
ri::BenchmarkSpec small_benchmark() {
    ri::BenchmarkSpec s;
    s.L = 0.05;
    s.g = 0.002;
    s.t0 = -2e-5;
    s.tN = 1.6e-4;
    return s;
}

constexpr double kDt = 1e-7;
constexpr int kNx = 25;

ri::Subdomain make_side(const ri::BenchmarkSpec& spec, ri::RodSide side,
                        const ri::IntegratorSpec& integ, ri::Role role, double dt = kDt,
                        int nx = kNx) {
    return ri::make_subdomain(spec, side, nx, integ, dt, role);
}

ri::IntegratorSpec implicit_spec() { return ri::integrator_preset("classic_newmark", true); }
ri::IntegratorSpec explicit_spec() { return ri::integrator_preset("classic_newmark", false); }

// Rigid translation of the whole rod state; strain-free because a uniform
// shift lies in the stiffness kernel.
void translate(ri::Subdomain& sd, double dx) {
    sd.rod.state.x.array() += dx;
}

// Constant-in-time guess history holding the current state at every local
// stop of [state.t, t_end].
ri::IntervalHistory constant_guess(const ri::Subdomain& sd, double t_end) {
    const double t0 = sd.rod.state.t;
    const int n = static_cast<int>(std::llround((t_end - t0) / sd.dt));
    ri::IntervalHistory h;
    for (int l = 0; l <= n; ++l) {
        ri::State s = sd.rod.state;
        s.t = t0 + l * sd.dt;
        h.push_back(s);
    }
    return h;
}

struct RunCheck {
    double energy_drift_rel = 0.0;   // |E(tN) - E(t0)| / E(t0)
    double max_interpenetration = 0.0;
    double max_velocity_mismatch = 0.0;
    double max_abs_momentum = 0.0;
    double mean_contact_force = 0.0;  // over the middle of the contact window
};

RunCheck inspect(const ri::SimulationResult& run) {
    RunCheck c;
    const auto& samples = run.series.samples();
    const double e0 = samples.front().system_energy();
    c.energy_drift_rel = std::abs(samples.back().system_energy() - e0) / e0;
    const double span = run.t_release - run.t_impact;
    double force_sum = 0.0;
    int force_count = 0;
    for (const auto& s : samples) {
        c.max_abs_momentum = std::max(c.max_abs_momentum, std::abs(s.momentum));
        if (s.iterations > 0) {
            c.max_interpenetration = std::max(c.max_interpenetration, s.x1 - s.x2);
            c.max_velocity_mismatch = std::max(c.max_velocity_mismatch, std::abs(s.v1 - s.v2));
        }
        if (std::isfinite(span) && s.t > run.t_impact + 0.3 * span &&
            s.t < run.t_impact + 0.7 * span) {
            force_sum += s.force;
            ++force_count;
        }
    }
    if (force_count > 0) c.mean_contact_force = force_sum / force_count;
    return c;
}

}  // namespace

TEST_SUITE("schwarz") {
    TEST_CASE("settings validation") {
        ri::SchwarzSettings ok;
        CHECK_NOTHROW(ok.validate());
        CHECK(ok.tol_rel == 1e-12);
        CHECK(ok.tol_abs == 1e-15);
        CHECK(ok.max_iterations == 100);
        CHECK(ok.max_status_flips == 3);

        ri::SchwarzSettings s = ok;
        s.tol_rel = 0.0;
        CHECK_THROWS_AS(s.validate(), ri::ValidationError);
        s = ok;
        s.tol_abs = -1e-15;
        CHECK_THROWS_AS(s.validate(), ri::ValidationError);
        s = ok;
        s.max_iterations = 0;
        CHECK_THROWS_AS(s.validate(), ri::ValidationError);
        s = ok;
        s.max_status_flips = -1;
        CHECK_THROWS_AS(s.validate(), ri::ValidationError);
    }

    TEST_CASE("contact detection truth table") {
        // No contact assumed: separated rods stay inactive.
        CHECK_FALSE(ri::detect_active_contact(false, 0.0, -0.01));
        // No contact assumed: strictly positive overlap activates; an exact
        // touch shares no volume and stays inactive (this is also what lets a
        // just-released pair part instead of re-triggering).
        CHECK(ri::detect_active_contact(false, 0.0, 1e-6));
        CHECK_FALSE(ri::detect_active_contact(false, 0.0, 0.0));
        // Contact assumed: tension releases, regardless of gap.
        CHECK_FALSE(ri::detect_active_contact(true, -5.0, 0.0));
        // Contact assumed: exactly zero traction also releases.
        CHECK_FALSE(ri::detect_active_contact(true, 0.0, 0.01));
        // Contact assumed: compression sustains, gap not consulted.
        CHECK(ri::detect_active_contact(true, 3.0, -1.0));

        const auto spec = small_benchmark();
        auto left = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto right = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);

        // Separated at rest: inactive.
        CHECK_FALSE(ri::detect_active_contact(false, left, right));
        // Exact touch: still no shared volume, still inactive.
        translate(left, spec.g);
        translate(right, -spec.g);
        CHECK_FALSE(ri::detect_active_contact(false, left, right));
        // Push the tips past each other: overlap, impact.
        translate(left, 1e-9);
        CHECK(ri::detect_active_contact(false, left, right));
        translate(left, -1e-9);

        // Sustained-contact branch reads the Dirichlet-side traction: compress
        // the left rod by pulling its tip back linearly (zero at far end).
        const auto& X = left.rod.X;
        const double delta = 1e-6;
        for (int i = 0; i < left.rod.n_nodes(); ++i) {
            const double s01 = (X[i] - X[0]) / (X[X.size() - 1] - X[0]);
            left.rod.state.x[i] = X[i] + spec.g - delta * s01;
        }
        CHECK(ri::extract_contact_traction(left, left.rod.state) > 0.0);
        CHECK(ri::detect_active_contact(true, left, right));

        // Stretch instead: tension, release.
        for (int i = 0; i < left.rod.n_nodes(); ++i) {
            const double s01 = (X[i] - X[0]) / (X[X.size() - 1] - X[0]);
            left.rod.state.x[i] = X[i] + spec.g + delta * s01;
        }
        CHECK(ri::extract_contact_traction(left, left.rod.state) < 0.0);
        CHECK_FALSE(ri::detect_active_contact(true, left, right));

        // Both subdomains on the same side is a wiring error.
        auto left2 = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Neumann);
        CHECK_THROWS_AS(ri::detect_active_contact(false, left, left2), ri::ValidationError);
    }

    TEST_CASE("traction extraction free node and static compression") {
        const auto spec = small_benchmark();

        // Free flight: unstrained rod carries zero traction, independent of
        // the nodal accelerations (the traction is a position functional).
        auto sd = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        CHECK(ri::extract_contact_traction(sd, sd.rod.state) == 0.0);
        sd.rod.state.a[sd.rod.contact_node] = 250.0;
        CHECK(ri::extract_contact_traction(sd, sd.rod.state) == 0.0);

        // Static two-node bar compressed by an end force F: reaction at the
        // held contact end equals F, traction F/A. Right-side rod, contact
        // node at its left end; push the far node toward the interface by the
        // static displacement -F*h/(EA).
        const double F = 12.5;
        auto bar = ri::make_subdomain(spec, ri::RodSide::Right, 1, implicit_spec(), kDt,
                                      ri::Role::Dirichlet, false);
        const double h = bar.rod.mesh.length();
        const double EA = spec.E * spec.A;
        bar.rod.state.x[1] = bar.rod.X[1] - F * h / EA;
        bar.rod.state.v.setZero();
        bar.rod.state.a.setZero();
        CHECK(ri::extract_contact_traction(bar, bar.rod.state) ==
              doctest::Approx(F / spec.A).epsilon(1e-12));

        // Uniform compression of magnitude delta over the rod length L gives
        // strain -delta/L and compressive traction E*delta/L on either side.
        // The strain is recovered from a difference of coordinate-scale
        // positions, so roundoff enters at eps*|X|/(delta*h/L) relative, a few
        // parts in 1e9 here; the tolerance allows for that cancellation.
        for (auto side : {ri::RodSide::Left, ri::RodSide::Right}) {
            auto rod = make_side(spec, side, explicit_spec(), ri::Role::Dirichlet);
            const auto& X = rod.rod.X;
            const double delta = 1e-6;
            for (int i = 0; i < rod.rod.n_nodes(); ++i) {
                const double s01 = (X[i] - X[0]) / (X[X.size() - 1] - X[0]);
                rod.rod.state.x[i] = X[i] - delta * s01;
            }
            CHECK(ri::extract_contact_traction(rod, rod.rod.state) ==
                  doctest::Approx(spec.E * delta / spec.L).epsilon(1e-7));
        }
    }

    TEST_CASE("dirichlet contact context wiring") {
        const auto spec = small_benchmark();
        auto sd = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        const ri::DirichletBC bc{sd.rod.contact_node, -1.5e-3, 2.0, 750.0};

        auto plain = ri::apply_dirichlet_contact_bc(sd, bc, ri::Stabilization::None);
        REQUIRE(plain.bcs.size() == 1);
        CHECK(plain.bcs[0].dof == sd.rod.contact_node);
        CHECK(plain.bcs[0].x == bc.x);
        CHECK(plain.bcs[0].v == bc.v);
        CHECK(plain.bcs[0].a == bc.a);
        CHECK(plain.contact_phase);
        CHECK_FALSE(plain.barrier.has_value());

        auto naive = ri::apply_dirichlet_contact_bc(sd, bc, ri::Stabilization::NaiveStabilized);
        CHECK(naive.bcs[0].x == bc.x);
        CHECK(naive.bcs[0].v == bc.v);
        CHECK(naive.bcs[0].a == 0.0);

        auto stab = ri::apply_dirichlet_contact_bc(sd, bc, ri::Stabilization::ContactStabilized);
        REQUIRE(stab.barrier.has_value());
        CHECK(stab.barrier->dof == sd.rod.contact_node);
        CHECK(stab.barrier->position == bc.x);
        CHECK(stab.barrier->normal == sd.rod.contact_normal);
        CHECK(stab.barrier->stiffness > 0.0);

        // Prescribing exactly the unconstrained solution leaves the step
        // unchanged (up to solver roundoff).
        for (bool implicit_form : {true, false}) {
            auto probe = make_side(spec, ri::RodSide::Left,
                                   implicit_form ? implicit_spec() : explicit_spec(),
                                   ri::Role::Dirichlet);
            ri::StepContext free_ctx;
            free_ctx.M = &probe.rod.M;
            free_ctx.K = &probe.rod.K;
            free_ctx.X = &probe.rod.X;
            // Make the motion nontrivial: compress the tip region slightly.
            probe.rod.state.x[probe.rod.contact_node] -= 1e-5;
            const ri::State s0 = probe.rod.state;
            ri::State free_step = probe.stepper.step(free_ctx, s0, kDt);

            const int p = probe.rod.contact_node;
            const ri::DirichletBC same{p, free_step.x[p], free_step.v[p], free_step.a[p]};
            auto ctx = ri::apply_dirichlet_contact_bc(probe, same, ri::Stabilization::None);
            ri::State pinned = probe.stepper.step(ctx, s0, kDt);
            CHECK((pinned.x - free_step.x).norm() <= 1e-12);
            CHECK((pinned.v - free_step.v).norm() <= 1e-10);
            CHECK((pinned.a - free_step.a).norm() <= 1e-6);
        }
    }

    TEST_CASE("interval preconditions") {
        const auto spec = small_benchmark();
        ri::SchwarzSettings settings;

        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);
        const double t_end = spec.t0 + 1e-6;
        auto gd = constant_guess(d, t_end);
        auto gn = constant_guess(n, t_end);

        // Two Dirichlet roles.
        auto n_bad = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Dirichlet);
        CHECK_THROWS_AS(ri::schwarz_interval(d, n_bad, t_end, gd, gn, settings),
                        ri::ValidationError);

        // Local dt must divide the interval.
        auto n_dt = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann, 3e-7);
        CHECK_THROWS_AS(
            ri::schwarz_interval(d, n_dt, t_end, gd, constant_guess(n_dt, t_end), settings),
            ri::ValidationError);

        // Subdomains must agree on the interval start.
        auto n_late = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);
        n_late.rod.state.t += 1e-6;
        CHECK_THROWS_AS(ri::schwarz_interval(d, n_late, t_end, gd, gn, settings),
                        ri::ValidationError);

        // Guess histories must cover the interval.
        auto short_guess = gn;
        short_guess.pop_back();
        CHECK_THROWS_AS(ri::schwarz_interval(d, n, t_end, gd, short_guess, settings),
                        ri::ValidationError);

        // Settings are validated on entry.
        ri::SchwarzSettings bad;
        bad.tol_rel = 0.0;
        CHECK_THROWS_AS(ri::schwarz_interval(d, n, t_end, gd, gn, bad), ri::ValidationError);
    }

    TEST_CASE("mutually consistent subdomains converge in one iteration") {
        const auto spec = small_benchmark();
        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);
        // Touching at rest: the alternating sweep reproduces the rest state,
        // so the first increment is identically zero.
        translate(d, spec.g);
        translate(n, -spec.g);
        d.rod.state.v.setZero();
        n.rod.state.v.setZero();

        const double t_end = spec.t0 + 1e-6;
        ri::SchwarzSettings settings;
        auto sol = ri::schwarz_interval(d, n, t_end, constant_guess(d, t_end),
                                        constant_guess(n, t_end), settings);

        CHECK(sol.iterations == 1);
        const int l1 = static_cast<int>(std::llround(1e-6 / d.dt));
        REQUIRE(static_cast<int>(sol.first.size()) == l1 + 1);
        CHECK(sol.first.front().t == d.rod.state.t);
        CHECK(sol.first.back().t == doctest::Approx(t_end).epsilon(1e-12));
        // Rest stays rest.
        CHECK((sol.first.back().x - d.rod.state.x).norm() <= 1e-12);
        CHECK((sol.second.back().x - n.rod.state.x).norm() <= 1e-12);
        CHECK(sol.first.back().v.norm() <= 1e-9);
        // Committed states untouched by the interval solve.
        CHECK(d.rod.state.t == spec.t0);
        CHECK(n.rod.state.t == spec.t0);
    }

    TEST_CASE("max iterations exceeded") {
        const auto spec = small_benchmark();
        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);
        // Rods touching and closing at full speed: a genuine impact interval
        // needs more than one sweep.
        translate(d, spec.g);
        translate(n, -spec.g);

        const double t_end = spec.t0 + 1e-6;
        ri::SchwarzSettings starved;
        starved.max_iterations = 1;
        CHECK_THROWS_AS(ri::schwarz_interval(d, n, t_end, constant_guess(d, t_end),
                                             constant_guess(n, t_end), starved),
                        ri::MaxIterationsExceeded);
    }

    TEST_CASE("impact run events and interface matching") {
        const auto spec = small_benchmark();
        const auto oracle = ri::build_oracle(spec);
        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);

        ri::SchwarzSettings settings;
        auto run = ri::run_simulation(std::move(d), std::move(n), kDt, spec.tN, settings);

        // One sample per controller stop, inclusive.
        const auto n_stops = static_cast<std::size_t>(std::llround((spec.tN - spec.t0) / kDt)) + 1;
        REQUIRE(run.series.size() == n_stops);

        // Impact interval starts within two controller intervals of the exact
        // impact time; release within the wave-smearing width of this mesh.
        REQUIRE(std::isfinite(run.t_impact));
        REQUIRE(std::isfinite(run.t_release));
        CHECK(std::abs(run.t_impact - oracle.t_imp()) <= 2 * kDt);
        CHECK(std::abs(run.t_release - oracle.t_rel()) <= 5e-6);

        // Iterations only on contact intervals; the impact interval needs at
        // least two sweeps and nothing needs pathologically many.
        bool any_outside = false;
        int first_active_iters = 0;
        for (const auto& s : run.series.samples()) {
            const bool inside = s.t > run.t_impact && s.t <= run.t_release + 1e-12;
            if (!inside && s.iterations > 0) any_outside = true;
            if (first_active_iters == 0 && s.iterations > 0) first_active_iters = s.iterations;
        }
        CHECK_FALSE(any_outside);
        CHECK(first_active_iters >= 2);
        CHECK(run.series.max_iterations() <= 15);
        CHECK(run.series.avg_iterations() > 1.0);

        const auto c = inspect(run);
        CHECK(c.max_interpenetration <= 10 * settings.tol_abs);
        CHECK(c.max_velocity_mismatch <= 1e-8);
        // Coarse-mesh (25 elements) smoke bounds. The impact deposits energy
        // in undamped node-scale ringing whose share shrinks with the mesh:
        // drift here is ~1.4%, versus ~0.2% at the benchmark resolution where
        // the 0.3% requirement is enforced by the acceptance suite.
        CHECK(c.energy_drift_rel <= 2e-2);
        // Momentum exchange is driven by the tip-element stress while each
        // rod's own balance uses consistent nodal forces; the mismatch is a
        // tip-inertia effect, first order in the element size. Rod momentum
        // scale is 5e-3 kg m/s; the drift observed here is ~2e-4.
        CHECK(c.max_abs_momentum <= 1e-3);
        CHECK(c.mean_contact_force == doctest::Approx(oracle.f_contact()).epsilon(0.1));
    }

    TEST_CASE("explicit coupling run conserves energy") {
        const auto spec = small_benchmark();
        const auto oracle = ri::build_oracle(spec);
        auto d = make_side(spec, ri::RodSide::Left, explicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, explicit_spec(), ri::Role::Neumann);

        ri::SchwarzSettings settings;
        auto run = ri::run_simulation(std::move(d), std::move(n), kDt, spec.tN, settings);

        CHECK(std::abs(run.t_impact - oracle.t_imp()) <= 2 * kDt);
        CHECK(std::abs(run.t_release - oracle.t_rel()) <= 5e-6);

        const auto c = inspect(run);
        CHECK(c.max_interpenetration <= 10 * settings.tol_abs);
        CHECK(c.max_velocity_mismatch <= 1e-8);
        // Coarse-mesh smoke bound (see the implicit run above); measured ~0.7%
        // at 25 elements, ~0.1% at benchmark resolution.
        CHECK(c.energy_drift_rel <= 2e-2);
        CHECK(c.mean_contact_force == doctest::Approx(oracle.f_contact()).epsilon(0.1));
    }

    TEST_CASE("role swap invariance at converged stops") {
        // The converged interface state must not depend on which rod receives
        // the kinematic condition and which the traction. Asserted where the
        // claim lives: on a converged contact interval, stop by stop. The
        // fixture is the mid-contact plateau - both rods uniformly compressed
        // against each other, at rest - whose exact solution is static, so any
        // per-stop difference between the two role assignments is pure
        // coupling asymmetry.
        const auto spec = small_benchmark();
        ri::SchwarzSettings settings;
        const double strain = 1e-4;

        auto build = [&](ri::Role left_role) {
            auto d = make_side(spec, ri::RodSide::Left, implicit_spec(),
                               left_role);
            auto n = make_side(spec, ri::RodSide::Right, implicit_spec(),
                               left_role == ri::Role::Dirichlet ? ri::Role::Neumann
                                                                : ri::Role::Dirichlet);
            translate(d, spec.g);
            translate(n, -spec.g);
            for (auto* sd : {&d, &n}) {
                ri::Rod& rod = sd->rod;
                const double x_tip = rod.X[rod.contact_node];
                for (int i = 0; i < rod.n_nodes(); ++i)
                    rod.state.x[i] += -strain * (rod.X[i] - x_tip);
                rod.state.v.setZero();
                rod.state.a.setZero();
            }
            return std::pair{std::move(d), std::move(n)};
        };

        const double t_end = spec.t0 + 1e-6;
        auto [da, na] = build(ri::Role::Dirichlet);
        auto sol_a = ri::schwarz_interval(da, na, t_end, constant_guess(da, t_end),
                                          constant_guess(na, t_end), settings);
        auto [nb, db] = build(ri::Role::Neumann);  // left rod is Neumann now
        auto sol_b = ri::schwarz_interval(nb, db, t_end, constant_guess(nb, t_end),
                                          constant_guess(db, t_end), settings);

        // sol_a.first / sol_b.first both hold the left rod's history.
        REQUIRE(sol_a.first.size() == sol_b.first.size());
        REQUIRE(sol_a.second.size() == sol_b.second.size());
        double max_dx = 0.0;
        const int tip_l = da.rod.contact_node;
        const int tip_r = na.rod.contact_node;
        for (std::size_t l = 0; l < sol_a.first.size(); ++l)
            max_dx = std::max(max_dx,
                              std::abs(sol_a.first[l].x[tip_l] - sol_b.first[l].x[tip_l]));
        for (std::size_t l = 0; l < sol_a.second.size(); ++l)
            max_dx = std::max(max_dx,
                              std::abs(sol_a.second[l].x[tip_r] - sol_b.second[l].x[tip_r]));
        CHECK(max_dx < 1e-9);

        // Role assignment must not influence convergence behaviour on full
        // runs either: identical detected events and iteration counts. (The
        // trajectories themselves accumulate a small tip-inertia asymmetry
        // between the pinned and the loaded rod, so they are compared at the
        // scale of that drift, not at interface tolerance.)
        auto run_a = ri::run_simulation(
            make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet),
            make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann), kDt, spec.tN,
            settings);
        auto run_b = ri::run_simulation(
            make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Neumann),
            make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Dirichlet), kDt,
            spec.tN, settings);
        CHECK(run_a.t_impact == run_b.t_impact);
        CHECK(run_a.t_release == run_b.t_release);
        CHECK(run_a.series.max_iterations() == run_b.series.max_iterations());
        CHECK(run_a.series.avg_iterations() == doctest::Approx(run_b.series.avg_iterations()));
        REQUIRE(run_a.series.size() == run_b.series.size());
        double run_dx = 0.0;
        for (std::size_t i = 0; i < run_a.series.size(); ++i) {
            const auto& a = run_a.series.samples()[i];
            const auto& b = run_b.series.samples()[i];
            run_dx = std::max({run_dx, std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2)});
        }
        CHECK(run_dx < 2e-3);
    }

    TEST_CASE("mixed local time steps") {
        const auto spec = small_benchmark();
        const auto oracle = ri::build_oracle(spec);
        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet, 1e-7);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann, 5e-8);

        ri::SchwarzSettings settings;
        auto run = ri::run_simulation(std::move(d), std::move(n), 1e-7, spec.tN, settings);

        CHECK(std::abs(run.t_impact - oracle.t_imp()) <= 2e-7);
        CHECK(std::abs(run.t_release - oracle.t_rel()) <= 5e-6);
        const auto c = inspect(run);
        // Coarse-mesh smoke bound (see the implicit run above).
        CHECK(c.energy_drift_rel <= 2e-2);
        CHECK(c.max_interpenetration <= 10 * settings.tol_abs);
    }

    TEST_CASE("parting rods never iterate") {
        const auto spec = small_benchmark();
        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);
        d.rod.state.v.array() = -spec.v0;
        n.rod.state.v.array() = spec.v0;

        ri::SchwarzSettings settings;
        auto run = ri::run_simulation(std::move(d), std::move(n), kDt, spec.t0 + 2e-5, settings);

        CHECK_FALSE(std::isfinite(run.t_impact));
        CHECK_FALSE(std::isfinite(run.t_release));
        CHECK(run.series.max_iterations() == 0);
        for (const auto& s : run.series.samples()) CHECK(s.force == 0.0);
    }

    TEST_CASE("status oscillation guard") {
        const auto spec = small_benchmark();
        auto d = make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann);

        // Forbidding any status change makes the legitimate impact flip fatal.
        ri::SchwarzSettings strict;
        strict.max_status_flips = 0;
        CHECK_THROWS_AS(ri::run_simulation(std::move(d), std::move(n), kDt, spec.tN, strict),
                        ri::StatusOscillation);
    }

    TEST_CASE("run preconditions") {
        const auto spec = small_benchmark();
        ri::SchwarzSettings settings;

        // Interval must divide the span.
        CHECK_THROWS_AS(
            ri::run_simulation(
                make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet),
                make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann), 7e-7,
                spec.tN, settings),
            ri::ValidationError);
        // Local dt must divide the interval.
        CHECK_THROWS_AS(
            ri::run_simulation(
                make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet, 3e-8),
                make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann), 1e-7,
                spec.tN, settings),
            ri::ValidationError);
        // Roles must be complementary.
        CHECK_THROWS_AS(
            ri::run_simulation(
                make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Neumann),
                make_side(spec, ri::RodSide::Right, implicit_spec(), ri::Role::Neumann), 1e-7,
                spec.tN, settings),
            ri::ValidationError);
        // Both rods on one side.
        CHECK_THROWS_AS(
            ri::run_simulation(
                make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Dirichlet),
                make_side(spec, ri::RodSide::Left, implicit_spec(), ri::Role::Neumann), 1e-7,
                spec.tN, settings),
            ri::ValidationError);
    }

    TEST_CASE("naive stabilized coupling runs clean") {
        const auto spec = small_benchmark();
        const auto oracle = ri::build_oracle(spec);
        auto d = make_side(spec, ri::RodSide::Left,
                           ri::integrator_preset("naive_stabilized", true), ri::Role::Dirichlet);
        auto n = make_side(spec, ri::RodSide::Right,
                           ri::integrator_preset("naive_stabilized", true), ri::Role::Neumann);

        ri::SchwarzSettings settings;
        auto run = ri::run_simulation(std::move(d), std::move(n), kDt, spec.tN, settings);

        CHECK(std::abs(run.t_impact - oracle.t_imp()) <= 2 * kDt);
        CHECK(std::abs(run.t_release - oracle.t_rel()) <= 5e-6);
        const auto c = inspect(run);
        CHECK(c.energy_drift_rel <= 3e-3);
        CHECK(c.max_interpenetration <= 10 * settings.tol_abs);
    }
}
