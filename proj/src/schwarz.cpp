#include "rodimpact/schwarz.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "rodimpact/errors.hpp"

namespace rodimpact {
namespace {

// Number of local steps covering `span` exactly; rejects non-dividing steps.
int exact_step_count(double span, double dt, const char* what) {
    if (!(dt > 0.0)) throw ValidationError(std::string(what) + ": time step must be positive");
    if (!(span > 0.0)) throw ValidationError(std::string(what) + ": time span must be positive");
    const long long n = std::llround(span / dt);
    if (n < 1 || std::abs(static_cast<double>(n) * dt - span) > 1e-9 * span)
        throw ValidationError(std::string(what) + ": time step must divide the span evenly");
    return static_cast<int>(n);
}

void require_cfl(const Subdomain& sd) {
    if (sd.integrator.is_implicit()) return;
    const double limit = cfl_time_step(sd.rod.mesh, sd.rod.material);
    if (sd.dt > limit)
        throw ValidationError("explicit subdomain dt=" + std::to_string(sd.dt) +
                              " exceeds the stable step " + std::to_string(limit));
}

void check_guess(const IntervalHistory& guess, double t_begin, double t_end, const char* side) {
    if (guess.empty())
        throw ValidationError(std::string("schwarz_interval: empty guess history for the ") +
                              side + " subdomain");
    const double snap = 1e-9 * (t_end - t_begin);
    if (guess.front().t > t_begin + snap || guess.back().t < t_end - snap)
        throw ValidationError(std::string("schwarz_interval: guess history for the ") + side +
                              " subdomain does not cover the interval");
}

// (x, v, a) of the subdomain's contact node along an interval history.
TimeHistory boundary_kinematics(const Subdomain& sd, const IntervalHistory& hist) {
    const int p = sd.rod.contact_node;
    std::vector<double> stops;
    std::vector<Eigen::VectorXd> values;
    stops.reserve(hist.size());
    values.reserve(hist.size());
    for (const State& s : hist) {
        stops.push_back(s.t);
        Eigen::VectorXd v(3);
        v << s.x[p], s.v[p], s.a[p];
        values.push_back(std::move(v));
    }
    return TimeHistory(std::move(stops), std::move(values));
}

// Extracted reaction traction along an interval history, interval start
// included so the receiving side can interpolate from the very first stop.
TimeHistory traction_history(const Subdomain& sd, const IntervalHistory& hist) {
    std::vector<double> stops;
    std::vector<Eigen::VectorXd> values;
    stops.reserve(hist.size());
    values.reserve(hist.size());
    for (const State& s : hist) {
        stops.push_back(s.t);
        Eigen::VectorXd v(1);
        v[0] = extract_contact_traction(sd, s);
        values.push_back(std::move(v));
    }
    return TimeHistory(std::move(stops), std::move(values));
}

// Routes one scalar interface value through the spatial operators. The 1D
// contact interface is a single point, so the operators are 1x1, but the data
// still flows through the same projection path as a general interface would.
double project_scalar_dirichlet(const TransferOperator& op, double value) {
    Eigen::VectorXd v(1);
    v[0] = value;
    return project_dirichlet(op, v)[0];
}

double project_scalar_neumann(const TransferOperator& op, double value) {
    Eigen::VectorXd v(1);
    v[0] = value;
    return project_neumann(op, v)[0];
}

struct RolePair {
    Subdomain* dirichlet = nullptr;
    Subdomain* neumann = nullptr;
};

RolePair split_roles(Subdomain& first, Subdomain& second, const char* what) {
    if (first.role == Role::Dirichlet && second.role == Role::Neumann) return {&first, &second};
    if (first.role == Role::Neumann && second.role == Role::Dirichlet) return {&second, &first};
    throw ValidationError(std::string(what) +
                          ": exactly one Dirichlet and one Neumann subdomain required");
}

// Gap between the facing tips: right tip of the left rod minus left tip of
// the right rod. Throws when both rods sit on the same side of the interface.
double tip_gap(const Subdomain& a, const Subdomain& b, const char* what) {
    const Subdomain* left = nullptr;
    const Subdomain* right = nullptr;
    for (const Subdomain* sd : {&a, &b}) {
        if (sd->rod.contact_normal > 0.0)
            left = sd;
        else
            right = sd;
    }
    if (left == nullptr || right == nullptr)
        throw ValidationError(std::string(what) + ": need one left-side and one right-side rod");
    return left->rod.contact_position() - right->rod.contact_position();
}

IntervalHistory shift_history(const IntervalHistory& hist, double dt_shift) {
    IntervalHistory out = hist;
    for (State& s : out) s.t += dt_shift;
    return out;
}

}  // namespace

void SchwarzSettings::validate() const {
    if (!(tol_rel > 0.0)) throw ValidationError("tol_rel must be positive");
    if (!(tol_abs > 0.0)) throw ValidationError("tol_abs must be positive");
    if (max_iterations < 1) throw ValidationError("max_iterations must be at least 1");
    if (max_status_flips < 0) throw ValidationError("max_status_flips must be non-negative");
}

Subdomain make_subdomain(const BenchmarkSpec& spec, RodSide side, int n_elements,
                         const IntegratorSpec& integrator, double dt, Role role) {
    return make_subdomain(spec, side, n_elements, integrator, dt, role,
                          !integrator.is_implicit());
}

Subdomain make_subdomain(const BenchmarkSpec& spec, RodSide side, int n_elements,
                         const IntegratorSpec& integrator, double dt, Role role, bool lumped) {
    integrator.validate();
    if (!(dt > 0.0)) throw ValidationError("subdomain dt must be positive");
    return Subdomain(make_rod(spec, side, n_elements, lumped), integrator, dt, role);
}

double extract_contact_traction(const Subdomain& sd, const State& state) {
    const Rod& rod = sd.rod;
    const int p = rod.contact_node;
    const int nb = p - static_cast<int>(rod.contact_normal);  // interior neighbor node
    // Axial stress of the tip element, compression-positive. Using the
    // boundary stress (rather than the nodal equation residual) keeps the
    // traction a pure function of the positions; a residual-based reaction
    // carries the prescribed tip acceleration, whose alternating gain between
    // equal-impedance rods is exactly -1, stalling the iteration.
    const double du = (state.x[p] - rod.X[p]) - (state.x[nb] - rod.X[nb]);
    const double dX = rod.X[p] - rod.X[nb];
    return -rod.material.E * du / dX;
}

bool detect_active_contact(bool assumed_active, double end_traction, double end_gap) {
    if (assumed_active) return end_traction > 0.0;
    // Strictly positive overlap: the bodies must share a region of positive
    // measure, so exact touching does not count as impact. The strictness
    // matters at release: one explicit interval out of a converged contact
    // state reproduces the constrained tip kinematics bit for bit (positions
    // there depend only on start-of-interval data, which the constraint had
    // matched), so the trial gap is exactly zero and a >= test would lock the
    // status machine into an impact/release cycle.
    return end_gap > 0.0;
}

bool detect_active_contact(bool assumed_active, const Subdomain& a, const Subdomain& b) {
    const double gap = tip_gap(a, b, "detect_active_contact");
    RolePair roles = split_roles(const_cast<Subdomain&>(a), const_cast<Subdomain&>(b),
                                 "detect_active_contact");
    const double traction =
        extract_contact_traction(*roles.dirichlet, roles.dirichlet->rod.state);
    return detect_active_contact(assumed_active, traction, gap);
}

StepContext apply_dirichlet_contact_bc(const Subdomain& sd, const DirichletBC& bc,
                                       Stabilization stabilization) {
    if (bc.dof != sd.rod.contact_node)
        throw ValidationError("apply_dirichlet_contact_bc: BC dof is not the contact node");
    StepContext ctx;
    ctx.M = &sd.rod.M;
    ctx.K = &sd.rod.K;
    ctx.X = &sd.rod.X;
    DirichletBC eff = bc;
    if (stabilization == Stabilization::NaiveStabilized) eff.a = 0.0;
    ctx.bcs = {eff};
    ctx.contact_phase = true;
    if (stabilization == Stabilization::ContactStabilized) {
        const Material& m = sd.rod.material;
        const double h = sd.rod.mesh.min_element_length();
        ctx.barrier =
            ContactBarrier{eff.dof, eff.x, sd.rod.contact_normal, 1e3 * m.E * m.A / h};
    }
    return ctx;
}

IntervalHistory advance_free(Subdomain& sd, double t_end) {
    const double t_begin = sd.rod.state.t;
    const int n = exact_step_count(t_end - t_begin, sd.dt, "advance_free");
    StepContext ctx;
    ctx.M = &sd.rod.M;
    ctx.K = &sd.rod.K;
    ctx.X = &sd.rod.X;
    IntervalHistory hist;
    hist.reserve(static_cast<std::size_t>(n) + 1);
    hist.push_back(sd.rod.state);
    State s = sd.rod.state;
    for (int l = 1; l <= n; ++l) {
        s = sd.stepper.step(ctx, s, sd.dt);
        // Land the final step exactly on the interval bound: both subdomains
        // must share bitwise-identical stamps there, or cross-domain history
        // lookups drift out of range as rounding accumulates over many
        // intervals.
        s.t = (l == n) ? t_end : t_begin + l * sd.dt;
        hist.push_back(s);
    }
    return hist;
}

IntervalSolution schwarz_interval(Subdomain& first, Subdomain& second, double t_end,
                                  const IntervalHistory& guess_first,
                                  const IntervalHistory& guess_second,
                                  const SchwarzSettings& settings) {
    settings.validate();
    RolePair roles = split_roles(first, second, "schwarz_interval");
    Subdomain& dir = *roles.dirichlet;
    Subdomain& neu = *roles.neumann;

    const double t_begin = first.rod.state.t;
    if (std::abs(second.rod.state.t - t_begin) > 1e-12 * std::max(1.0, std::abs(t_begin)))
        throw ValidationError("schwarz_interval: subdomains start at different times");
    const int n_dir = exact_step_count(t_end - t_begin, dir.dt, "schwarz_interval");
    const int n_neu = exact_step_count(t_end - t_begin, neu.dt, "schwarz_interval");

    check_guess(guess_first, t_begin, t_end, "first");
    check_guess(guess_second, t_begin, t_end, "second");
    const IntervalHistory& guess_dir = (&dir == &first) ? guess_first : guess_second;
    const IntervalHistory& guess_neu = (&neu == &first) ? guess_first : guess_second;

    // Spatial operators across the shared contact point, kinematics toward the
    // Dirichlet side and loads toward the Neumann side.
    const InterfaceMesh interface_point = InterfaceMesh::point();
    const TransferOperator to_dirichlet = build_operators(interface_point, interface_point);
    const TransferOperator to_neumann = build_operators(interface_point, interface_point);

    const int p_dir = dir.rod.contact_node;
    const int q_neu = neu.rod.contact_node;
    const int n_nodes_neu = neu.rod.n_nodes();
    const double area_neu = neu.rod.material.A;
    const double normal_neu = neu.rod.contact_normal;

    IntervalHistory hist_dir = guess_dir;  // previous iterate (starts at iterate 0)
    IntervalHistory hist_neu = guess_neu;

    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        // Dirichlet sweep against the Neumann side's previous-iterate
        // kinematics.
        const TimeHistory neumann_motion = boundary_kinematics(neu, hist_neu);
        IntervalHistory new_dir;
        new_dir.reserve(static_cast<std::size_t>(n_dir) + 1);
        new_dir.push_back(dir.rod.state);
        State s = dir.rod.state;
        for (int l = 1; l <= n_dir; ++l) {
            // Final stamp lands exactly on t_end (see advance_free).
            const double t_l = (l == n_dir) ? t_end : t_begin + l * dir.dt;
            const Eigen::VectorXd kin = interpolate_history(neumann_motion, t_l);
            DirichletBC bc;
            bc.dof = p_dir;
            bc.x = project_scalar_dirichlet(to_dirichlet, kin[0]);
            bc.v = project_scalar_dirichlet(to_dirichlet, kin[1]);
            bc.a = project_scalar_dirichlet(to_dirichlet, kin[2]);
            const StepContext ctx =
                apply_dirichlet_contact_bc(dir, bc, dir.integrator.stabilization);
            s = dir.stepper.step(ctx, s, dir.dt);
            s.t = t_l;
            new_dir.push_back(s);
        }

        // Neumann sweep against the freshly extracted reaction history.
        const TimeHistory reactions = traction_history(dir, new_dir);
        StepContext ctx_neu;
        ctx_neu.M = &neu.rod.M;
        ctx_neu.K = &neu.rod.K;
        ctx_neu.X = &neu.rod.X;
        ctx_neu.f_ext = [&](double t) {
            const double traction =
                project_scalar_neumann(to_neumann, interpolate_history(reactions, t)[0]);
            Eigen::VectorXd f = Eigen::VectorXd::Zero(n_nodes_neu);
            f[q_neu] = -normal_neu * traction * area_neu;
            return f;
        };
        IntervalHistory new_neu;
        new_neu.reserve(static_cast<std::size_t>(n_neu) + 1);
        new_neu.push_back(neu.rod.state);
        State sn = neu.rod.state;
        const bool naive_neu = neu.integrator.stabilization == Stabilization::NaiveStabilized;
        for (int l = 1; l <= n_neu; ++l) {
            sn = neu.stepper.step(ctx_neu, sn, neu.dt);
            sn.t = (l == n_neu) ? t_end : t_begin + l * neu.dt;
            if (naive_neu) sn = apply_naive_stabilization(sn, {q_neu});
            new_neu.push_back(sn);
        }

        // Convergence test on the end-of-interval position vectors.
        const double dx_dir = (new_dir.back().x - hist_dir.back().x).norm();
        const double dx_neu = (new_neu.back().x - hist_neu.back().x).norm();
        const double nx_dir = new_dir.back().x.norm();
        const double nx_neu = new_neu.back().x.norm();
        const double eps_abs = std::sqrt(dx_dir * dx_dir + dx_neu * dx_neu);
        const double eps_rel = std::sqrt(dx_dir * dx_dir / (nx_dir * nx_dir) +
                                         dx_neu * dx_neu / (nx_neu * nx_neu));
        hist_dir = std::move(new_dir);
        hist_neu = std::move(new_neu);
        if (eps_abs <= settings.tol_abs || eps_rel <= settings.tol_rel) {
            IntervalSolution out;
            out.iterations = iter;
            if (&dir == &first) {
                out.first = std::move(hist_dir);
                out.second = std::move(hist_neu);
            } else {
                out.first = std::move(hist_neu);
                out.second = std::move(hist_dir);
            }
            return out;
        }
    }
    throw MaxIterationsExceeded("schwarz_interval: no convergence within " +
                                std::to_string(settings.max_iterations) + " iterations");
}

SimulationResult run_simulation(Subdomain first, Subdomain second, double interval, double t_end,
                                const SchwarzSettings& settings) {
    settings.validate();
    split_roles(first, second, "run_simulation");
    const bool first_is_left = first.rod.contact_normal > 0.0;
    Subdomain& left = first_is_left ? first : second;
    Subdomain& right = first_is_left ? second : first;
    if (!(left.rod.contact_normal > 0.0) || !(right.rod.contact_normal < 0.0))
        throw ValidationError("run_simulation: need one left-side and one right-side rod");
    const double t0 = first.rod.state.t;
    if (second.rod.state.t != t0)
        throw ValidationError("run_simulation: subdomains start at different times");
    const int n_intervals = exact_step_count(t_end - t0, interval, "run_simulation");
    exact_step_count(interval, first.dt, "run_simulation");
    exact_step_count(interval, second.dt, "run_simulation");
    require_cfl(first);
    require_cfl(second);

    SimulationResult result;
    result.series.append(sample_rods(left.rod, right.rod, 0.0, 0));

    bool active = false;  // the benchmark starts out of contact
    IntervalHistory committed_first;
    IntervalHistory committed_second;

    for (int k = 0; k < n_intervals; ++k) {
        // Interval bounds come from the committed stamps, not from
        // t0 + k*interval: reconstructing them would drift away from the
        // accumulated step stamps and eventually fail the divisibility checks.
        const State start_first = first.rod.state;
        const State start_second = second.rod.state;
        const double t_k = start_first.t;
        const double t_k1 = t_k + interval;

        bool status = active;
        int flips = 0;
        bool release_evidence = false;
        IntervalHistory trial_first;
        IntervalHistory trial_second;
        int iterations = 0;

        for (;;) {
            first.rod.state = start_first;
            second.rod.state = start_second;
            if (status) {
                // Iterate-0 guess: the aborted attempt of this interval when
                // one exists, otherwise the previous committed interval
                // shifted forward by one interval length.
                const IntervalHistory guess_first =
                    trial_first.empty() ? shift_history(committed_first, interval) : trial_first;
                const IntervalHistory guess_second = trial_second.empty()
                                                         ? shift_history(committed_second, interval)
                                                         : trial_second;
                IntervalSolution sol =
                    schwarz_interval(first, second, t_k1, guess_first, guess_second, settings);
                trial_first = std::move(sol.first);
                trial_second = std::move(sol.second);
                iterations = sol.iterations;
            } else {
                trial_first = advance_free(first, t_k1);
                trial_second = advance_free(second, t_k1);
                iterations = 0;
            }
            first.rod.state = trial_first.back();
            second.rod.state = trial_second.back();

            const bool now = detect_active_contact(status, first, second);
            if (status && !now) release_evidence = true;
            if (now == status) break;
            // Grazing release: when this interval's contact trial has already
            // ended in tension (the constraint let go), a re-overlap of the
            // free trial is a sub-interval transient with no consistent
            // status -- the contact trial would immediately show tension
            // again and the two trials would cycle forever. Separation wins:
            // commit the free trial and let a genuine impact, if any, be
            // detected on a later interval.
            if (!status && now && release_evidence) break;
            ++flips;
            if (flips > settings.max_status_flips)
                throw StatusOscillation("run_simulation: contact status flipped " +
                                        std::to_string(flips) + " times within [" +
                                        std::to_string(t_k) + ", " + std::to_string(t_k1) + "]");
            status = now;
        }

        committed_first = std::move(trial_first);
        committed_second = std::move(trial_second);
        active = status;
        if (active && std::isnan(result.t_impact)) result.t_impact = t_k;
        if (active) result.t_release = t_k1;

        double force = 0.0;
        if (active) {
            const Subdomain& dir = (first.role == Role::Dirichlet) ? first : second;
            force = extract_contact_traction(dir, dir.rod.state) * dir.rod.material.A;
        }
        result.series.append(sample_rods(left.rod, right.rod, force, iterations));
    }
    return result;
}

}  // namespace rodimpact
