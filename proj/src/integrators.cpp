#include "rodimpact/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rodimpact/errors.hpp"

namespace rodimpact {

namespace {

Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
    return out;
}

// Boundary conditions sorted by dof, validated against the system size.
std::vector<DirichletBC> sorted_bcs(const StepContext& ctx, int n) {
    std::vector<DirichletBC> bcs = ctx.bcs;
    std::sort(bcs.begin(), bcs.end(),
              [](const DirichletBC& a, const DirichletBC& b) { return a.dof < b.dof; });
    for (std::size_t i = 0; i < bcs.size(); ++i) {
        if (bcs[i].dof < 0 || bcs[i].dof >= n)
            throw ValidationError("prescribed dof out of range");
        if (i > 0 && bcs[i].dof == bcs[i - 1].dof)
            throw ValidationError("duplicate prescribed dof");
    }
    return bcs;
}

std::vector<int> dofs_of(const std::vector<DirichletBC>& bcs) {
    std::vector<int> out;
    out.reserve(bcs.size());
    for (const auto& bc : bcs) out.push_back(bc.dof);
    return out;
}

}  // namespace

void IntegratorSpec::validate() const {
    switch (kind) {
        case IntegratorKind::NewmarkExplicit:
            if (!(gamma >= 0.0 && gamma <= 1.0))
                throw ValidationError("newmark gamma must lie in [0, 1]");
            if (beta != 0.0) throw ValidationError("explicit newmark requires beta = 0");
            break;
        case IntegratorKind::NewmarkImplicit:
            if (!(gamma >= 0.0 && gamma <= 1.0))
                throw ValidationError("newmark gamma must lie in [0, 1]");
            if (!(beta > 0.0 && 2.0 * beta <= 1.0))
                throw ValidationError("implicit newmark requires beta in (0, 1/2]");
            break;
        case IntegratorKind::TchamwaWielgosz:
            if (!(phi >= 1.0)) throw ValidationError("tchamwa-wielgosz requires phi >= 1");
            break;
        case IntegratorKind::ChungLee:
            if (std::abs(gamma - 1.5) > 1e-12)
                throw ValidationError("chung-lee requires gamma = 3/2");
            if (!(beta >= 1.0 && beta <= 28.0 / 27.0 + 1e-12))
                throw ValidationError("chung-lee requires beta in [1, 28/27]");
            break;
    }
    if ((stabilization == Stabilization::ContactImplicit ||
         stabilization == Stabilization::ContactStabilized) &&
        kind != IntegratorKind::NewmarkImplicit)
        throw ValidationError(
            "contact_implicit and contact_stabilized require the implicit newmark scheme");
}

const std::vector<std::string>& integrator_preset_names() {
    static const std::vector<std::string> names = {
        "classic_newmark", "dissipative_newmark", "chaudhary_bathe", "tchamwa_wielgosz",
        "chung_lee",       "naive_stabilized",    "contact_implicit", "contact_stabilized"};
    return names;
}

IntegratorSpec integrator_preset(const std::string& name, bool implicit_form) {
    auto only = [&](bool want_implicit) {
        if (implicit_form != want_implicit)
            throw ValidationError("integrator preset '" + name + "' exists only in " +
                                  (want_implicit ? "implicit" : "explicit") + " form");
    };
    IntegratorSpec sp;
    auto classic = [&]() {
        sp.gamma = 0.5;
        if (implicit_form) {
            sp.kind = IntegratorKind::NewmarkImplicit;
            sp.beta = 0.25;
        } else {
            sp.kind = IntegratorKind::NewmarkExplicit;
            sp.beta = 0.0;
        }
    };
    if (name == "classic_newmark") {
        classic();
    } else if (name == "dissipative_newmark") {
        sp.gamma = 0.9;
        if (implicit_form) {
            sp.kind = IntegratorKind::NewmarkImplicit;
            sp.beta = 0.25 * (sp.gamma + 0.5) * (sp.gamma + 0.5);  // 0.49
        } else {
            sp.kind = IntegratorKind::NewmarkExplicit;
            sp.beta = 0.0;
        }
    } else if (name == "chaudhary_bathe") {
        only(true);
        sp.kind = IntegratorKind::NewmarkImplicit;
        sp.gamma = 0.5;
        sp.beta = 0.5;
    } else if (name == "tchamwa_wielgosz") {
        only(false);
        sp.kind = IntegratorKind::TchamwaWielgosz;
        sp.phi = 1.05;
    } else if (name == "chung_lee") {
        only(false);
        sp.kind = IntegratorKind::ChungLee;
        sp.gamma = 1.5;
        sp.beta = 1.0;
    } else if (name == "naive_stabilized") {
        classic();
        sp.stabilization = Stabilization::NaiveStabilized;
    } else if (name == "contact_implicit") {
        only(true);
        classic();
        sp.stabilization = Stabilization::ContactImplicit;
    } else if (name == "contact_stabilized") {
        only(true);
        classic();
        sp.stabilization = Stabilization::ContactStabilized;
    } else {
        throw ValidationError("unknown integrator preset '" + name + "'");
    }
    sp.validate();
    return sp;
}

Eigen::VectorXd StepContext::external_force(double t, int n) const {
    if (!f_ext) return Eigen::VectorXd::Zero(n);
    Eigen::VectorXd f = f_ext(t);
    if (f.size() != n) throw std::runtime_error("external force callback returned wrong size");
    return f;
}

Integrator::Integrator(IntegratorSpec spec) : spec_(spec) { spec_.validate(); }

std::vector<int> Integrator::constrained_dofs(const StepContext& ctx) {
    std::vector<int> out;
    out.reserve(ctx.bcs.size());
    for (const auto& bc : ctx.bcs) out.push_back(bc.dof);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Integrator::free_dofs(int n, const std::vector<int>& cons) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) - cons.size());
    std::size_t c = 0;
    for (int i = 0; i < n; ++i) {
        if (c < cons.size() && cons[c] == i) {
            ++c;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

Eigen::VectorXd Integrator::solve_mass_increment(const StepContext& ctx, const Eigen::VectorXd& r,
                                                 const std::vector<int>& cons,
                                                 const Eigen::VectorXd& delta_a_cons) {
    const int n = static_cast<int>(r.size());
    Eigen::VectorXd rhs = r;
    if (!ctx.M->is_lumped()) {
        for (std::size_t i = 0; i < cons.size(); ++i)
            rhs -= ctx.M->dense().col(cons[i]) * delta_a_cons[static_cast<Eigen::Index>(i)];
    }
    FactorCache& c = mass_cache_;
    if (!(c.valid && c.M == ctx.M && c.cons == cons)) {
        c.valid = false;
        c.M = ctx.M;
        c.K = nullptr;
        c.dt = 0.0;
        c.beta = 0.0;
        c.cons = cons;
        c.free = free_dofs(n, cons);
        if (ctx.M->is_lumped()) {
            c.lumped_ff = select(ctx.M->diag(), c.free);
        } else {
            Eigen::MatrixXd Mff = ctx.M->dense()(c.free, c.free);
            c.llt.compute(Mff);
            if (c.llt.info() != Eigen::Success)
                throw std::runtime_error("internal error: mass matrix factorization failed");
        }
        c.valid = true;
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    if (ctx.M->is_lumped()) {
        for (std::size_t i = 0; i < c.free.size(); ++i)
            out[c.free[i]] = rhs[c.free[i]] / c.lumped_ff[static_cast<Eigen::Index>(i)];
    } else {
        Eigen::VectorXd sol = c.llt.solve(select(rhs, c.free));
        for (std::size_t i = 0; i < c.free.size(); ++i)
            out[c.free[i]] = sol[static_cast<Eigen::Index>(i)];
    }
    return out;
}

State Integrator::step_newmark_explicit_(const StepContext& ctx, const State& s, double dt) {
    const int n = static_cast<int>(s.x.size());
    const double g = spec_.gamma;
    const auto bcs = sorted_bcs(ctx, n);
    const auto cons = dofs_of(bcs);

    State out;
    out.t = s.t + dt;
    out.x = s.x + dt * s.v + (0.5 * dt * dt) * s.a;
    Eigen::VectorXd v_pred = s.v + dt * (1.0 - g) * s.a;
    for (const auto& bc : bcs) out.x[bc.dof] = bc.x;

    Eigen::VectorXd r = ctx.external_force(out.t, n) - internal_force(*ctx.K, out.x, *ctx.X) -
                        ctx.M->apply(s.a);
    Eigen::VectorXd da_cons(static_cast<Eigen::Index>(bcs.size()));
    for (std::size_t i = 0; i < bcs.size(); ++i)
        da_cons[static_cast<Eigen::Index>(i)] = bcs[i].a - s.a[bcs[i].dof];
    Eigen::VectorXd da = solve_mass_increment(ctx, r, cons, da_cons);

    out.a = s.a + da;
    out.v = v_pred + (dt * g) * out.a;
    for (const auto& bc : bcs) {
        out.a[bc.dof] = bc.a;
        out.v[bc.dof] = bc.v;
    }
    return out;
}

State Integrator::step_tchamwa_wielgosz_(const StepContext& ctx, const State& s, double dt) {
    const int n = static_cast<int>(s.x.size());
    const auto bcs = sorted_bcs(ctx, n);
    const auto cons = dofs_of(bcs);

    State out;
    out.t = s.t + dt;
    out.x = s.x + dt * s.v + (dt * dt * spec_.phi) * s.a;
    out.v = s.v + dt * s.a;  // velocity advances on the old acceleration
    for (const auto& bc : bcs) out.x[bc.dof] = bc.x;

    Eigen::VectorXd r = ctx.external_force(out.t, n) - internal_force(*ctx.K, out.x, *ctx.X) -
                        ctx.M->apply(s.a);
    Eigen::VectorXd da_cons(static_cast<Eigen::Index>(bcs.size()));
    for (std::size_t i = 0; i < bcs.size(); ++i)
        da_cons[static_cast<Eigen::Index>(i)] = bcs[i].a - s.a[bcs[i].dof];
    out.a = s.a + solve_mass_increment(ctx, r, cons, da_cons);

    for (const auto& bc : bcs) {
        out.a[bc.dof] = bc.a;
        out.v[bc.dof] = bc.v;
    }
    return out;
}

State Integrator::step_chung_lee_(const StepContext& ctx, const State& s, double dt) {
    const int n = static_cast<int>(s.x.size());
    const double g = spec_.gamma;
    const double b = spec_.beta;
    const double bh = 0.5 - b;
    const double gh = 1.0 - g;
    const auto bcs = sorted_bcs(ctx, n);
    const auto cons = dofs_of(bcs);

    State out;
    out.t = s.t + dt;
    Eigen::VectorXd x_pred = s.x + dt * s.v + (dt * dt * bh) * s.a;
    Eigen::VectorXd v_pred = s.v + (dt * gh) * s.a;
    for (const auto& bc : bcs) x_pred[bc.dof] = bc.x;

    Eigen::VectorXd r = ctx.external_force(out.t, n) - internal_force(*ctx.K, x_pred, *ctx.X);
    Eigen::VectorXd a_cons(static_cast<Eigen::Index>(bcs.size()));
    for (std::size_t i = 0; i < bcs.size(); ++i)
        a_cons[static_cast<Eigen::Index>(i)] = bcs[i].a;
    out.a = solve_mass_increment(ctx, r, cons, a_cons);
    for (const auto& bc : bcs) out.a[bc.dof] = bc.a;

    out.x = x_pred + (dt * dt * b) * out.a;
    out.v = v_pred + (dt * g) * out.a;
    for (const auto& bc : bcs) {
        out.x[bc.dof] = bc.x;
        out.v[bc.dof] = bc.v;
    }
    return out;
}

State Integrator::step_newmark_implicit_(const StepContext& ctx, const State& s, double dt) {
    const int n = static_cast<int>(s.x.size());
    const double g = spec_.gamma;
    const double b = spec_.beta;
    const auto bcs = sorted_bcs(ctx, n);
    const auto cons = dofs_of(bcs);
    const double t_end = s.t + dt;

    Eigen::VectorXd x_pred = s.x + dt * s.v + (dt * dt * (0.5 - b)) * s.a;
    Eigen::VectorXd v_pred = s.v + dt * (1.0 - g) * s.a;
    if (ctx.contact_phase && spec_.stabilization == Stabilization::ContactStabilized)
        x_pred = predict_stabilized(ctx, s, dt, newton_tol);

    FactorCache& c = newton_cache_;
    if (!(c.valid && c.M == ctx.M && c.K == ctx.K && c.dt == dt && c.beta == b &&
          c.cons == cons)) {
        c.valid = false;
        c.M = ctx.M;
        c.K = ctx.K;
        c.dt = dt;
        c.beta = b;
        c.cons = cons;
        c.free = free_dofs(n, cons);
        Eigen::MatrixXd A = *ctx.K;
        if (ctx.M->is_lumped()) {
            A.diagonal() += ctx.M->diag() / (dt * dt * b);
        } else {
            A += ctx.M->dense() / (dt * dt * b);
        }
        c.llt.compute(A(c.free, c.free));
        if (c.llt.info() != Eigen::Success)
            throw std::runtime_error("internal error: newmark iteration matrix not SPD");
        c.valid = true;
    }

    // Newton works on the increment dx = x - x_pred; forming the acceleration
    // from dx (instead of subtracting two absolute positions) avoids
    // cancellation that otherwise wrecks energy conservation at small dt.
    const Eigen::VectorXd u_pred = x_pred - *ctx.X;
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
    for (const auto& bc : bcs) dx[bc.dof] = bc.x - x_pred[bc.dof];
    const Eigen::VectorXd f = ctx.external_force(t_end, n);
    const double inv = 1.0 / (dt * dt * b);

    int iters = 0;
    bool converged = false;
    Eigen::VectorXd a_full(n);
    while (iters < newton_max) {
        a_full = dx * inv;
        for (const auto& bc : bcs) a_full[bc.dof] = bc.a;
        Eigen::VectorXd r = f - *ctx.K * (u_pred + dx) - ctx.M->apply(a_full);
        Eigen::VectorXd step = c.llt.solve(select(r, c.free));
        for (std::size_t i = 0; i < c.free.size(); ++i)
            dx[c.free[i]] += step[static_cast<Eigen::Index>(i)];
        ++iters;
        if (step.norm() <= newton_tol * std::max(1.0, (x_pred + dx).norm())) {
            converged = true;
            break;
        }
    }
    last_newton_iters_ = iters;
    if (!converged)
        throw NewtonDivergence("implicit newmark did not converge within " +
                               std::to_string(newton_max) + " iterations");

    Eigen::VectorXd x = x_pred + dx;
    for (const auto& bc : bcs) x[bc.dof] = bc.x;

    if (ctx.contact_phase && (spec_.stabilization == Stabilization::ContactImplicit ||
                              spec_.stabilization == Stabilization::ContactStabilized)) {
        State pred_state;
        pred_state.t = s.t;
        pred_state.x = x_pred;
        pred_state.v = s.v;
        pred_state.a = s.a;
        return correct_contact(ctx, pred_state, x, dt);
    }

    State out;
    out.t = t_end;
    out.x = x;
    out.a = dx * inv;
    out.v = v_pred + (dt * g) * out.a;
    for (const auto& bc : bcs) {
        out.a[bc.dof] = bc.a;
        out.v[bc.dof] = bc.v;
    }
    return out;
}

State Integrator::correct_contact(const StepContext& ctx, const State& state_pred,
                                  const Eigen::VectorXd& x_solved, double dt) {
    const int n = static_cast<int>(x_solved.size());
    const double g = spec_.gamma;
    const double b = spec_.beta;
    const auto bcs = sorted_bcs(ctx, n);
    const auto cons = dofs_of(bcs);
    const double t_end = state_pred.t + dt;

    Eigen::VectorXd x = x_solved;
    for (const auto& bc : bcs) x[bc.dof] = bc.x;

    // Internal acceleration: dynamic equilibrium at the solved positions.
    Eigen::VectorXd r = ctx.external_force(t_end, n) - internal_force(*ctx.K, x, *ctx.X);
    Eigen::VectorXd a_cons(static_cast<Eigen::Index>(bcs.size()));
    for (std::size_t i = 0; i < bcs.size(); ++i)
        a_cons[static_cast<Eigen::Index>(i)] = bcs[i].a;
    Eigen::VectorXd a_int = solve_mass_increment(ctx, r, cons, a_cons);
    for (const auto& bc : bcs) a_int[bc.dof] = bc.a;

    // Contact acceleration: what the position constraint added beyond the predictor.
    Eigen::VectorXd a_con = (x - state_pred.x) / (dt * dt) - 2.0 * b * a_int;
    for (const auto& bc : bcs) a_con[bc.dof] = 0.0;

    State out;
    out.t = t_end;
    out.x = x;
    out.a = a_int + a_con;
    out.v = state_pred.v + dt * (1.0 - g) * a_int + (dt * g) * a_int + dt * a_con;
    for (const auto& bc : bcs) {
        out.a[bc.dof] = bc.a;
        out.v[bc.dof] = bc.v;
    }
    return out;
}

Eigen::VectorXd Integrator::predict_stabilized(const StepContext& ctx, const State& state_k,
                                               double dt, double tol) {
    const int n = static_cast<int>(state_k.x.size());
    const auto bcs = sorted_bcs(ctx, n);
    const auto cons = dofs_of(bcs);

    FactorCache& c = pred_cache_;
    const int bdof = ctx.barrier ? ctx.barrier->dof : -1;
    if (!(c.valid && c.M == ctx.M && c.cons == cons && c.smw_dof == bdof)) {
        c.valid = false;
        c.M = ctx.M;
        c.K = nullptr;
        c.dt = 0.0;
        c.beta = 0.0;
        c.cons = cons;
        c.free = free_dofs(n, cons);
        c.smw_dof = bdof;
        c.smw.resize(0);
        if (ctx.M->is_lumped()) {
            c.lumped_ff = select(ctx.M->diag(), c.free);
        } else {
            c.llt.compute(ctx.M->dense()(c.free, c.free));
            if (c.llt.info() != Eigen::Success)
                throw std::runtime_error("internal error: mass matrix factorization failed");
        }
        // Rank-one solve helper for the barrier dof, if it is a free dof.
        const auto it = std::find(c.free.begin(), c.free.end(), bdof);
        if (ctx.barrier && it != c.free.end()) {
            const Eigen::Index pf = static_cast<Eigen::Index>(it - c.free.begin());
            Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.free.size()));
            e[pf] = 1.0;
            c.smw = ctx.M->is_lumped()
                        ? Eigen::VectorXd(e.array() / c.lumped_ff.array())
                        : Eigen::VectorXd(c.llt.solve(e));
            c.smw_ee = c.smw[pf];
        }
        c.valid = true;
    }

    auto base_solve = [&](const Eigen::VectorXd& rhs) {
        return ctx.M->is_lumped() ? Eigen::VectorXd(rhs.array() / c.lumped_ff.array())
                                  : Eigen::VectorXd(c.llt.solve(rhs));
    };
    int pf = -1;
    if (ctx.barrier) {
        const auto it = std::find(c.free.begin(), c.free.end(), bdof);
        if (it != c.free.end()) pf = static_cast<int>(it - c.free.begin());
    }

    const Eigen::VectorXd target = state_k.x + dt * state_k.v;
    Eigen::VectorXd x_pred = state_k.x;
    for (const auto& bc : bcs) x_pred[bc.dof] = bc.x;

    for (int l = 0; l < newton_max; ++l) {
        bool active = false;
        double gap = 0.0;
        if (pf >= 0) {
            gap = ctx.barrier->normal * (x_pred[bdof] - ctx.barrier->position);
            active = gap > 0.0;
        }
        Eigen::VectorXd F = ctx.M->apply(x_pred - target);
        if (active) F[bdof] += ctx.barrier->stiffness * gap * ctx.barrier->normal;
        Eigen::VectorXd dx = base_solve(-select(F, c.free));
        if (active) {
            const double tau = ctx.barrier->stiffness;
            dx -= c.smw * (tau * dx[pf] / (1.0 + tau * c.smw_ee));
        }
        for (std::size_t i = 0; i < c.free.size(); ++i)
            x_pred[c.free[i]] += dx[static_cast<Eigen::Index>(i)];
        if (dx.norm() <= tol * std::max(1.0, x_pred.norm())) return x_pred;
    }
    throw NewtonDivergence("contact-stabilized prediction did not converge within " +
                           std::to_string(newton_max) + " iterations");
}

State Integrator::step(const StepContext& ctx, const State& s, double dt) {
    if (!(dt > 0.0)) throw ValidationError("time step must be positive");
    if (ctx.M == nullptr || ctx.K == nullptr || ctx.X == nullptr)
        throw std::runtime_error("step context is missing operators");
    switch (spec_.kind) {
        case IntegratorKind::NewmarkExplicit:
            return step_newmark_explicit_(ctx, s, dt);
        case IntegratorKind::NewmarkImplicit:
            return step_newmark_implicit_(ctx, s, dt);
        case IntegratorKind::TchamwaWielgosz:
            return step_tchamwa_wielgosz_(ctx, s, dt);
        case IntegratorKind::ChungLee:
            return step_chung_lee_(ctx, s, dt);
    }
    throw std::runtime_error("unreachable integrator kind");
}

State step_newmark_explicit(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                            double dt) {
    if (spec.kind != IntegratorKind::NewmarkExplicit)
        throw ValidationError("step_newmark_explicit requires an explicit newmark spec");
    Integrator integ(spec);
    return integ.step(ctx, s, dt);
}

State step_newmark_implicit(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                            double dt, double newton_tol, int newton_max) {
    if (spec.kind != IntegratorKind::NewmarkImplicit)
        throw ValidationError("step_newmark_implicit requires an implicit newmark spec");
    Integrator integ(spec);
    integ.newton_tol = newton_tol;
    integ.newton_max = newton_max;
    return integ.step(ctx, s, dt);
}

State step_tchamwa_wielgosz(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                            double dt) {
    if (spec.kind != IntegratorKind::TchamwaWielgosz)
        throw ValidationError("step_tchamwa_wielgosz requires a tchamwa-wielgosz spec");
    Integrator integ(spec);
    return integ.step(ctx, s, dt);
}

State step_chung_lee(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                     double dt) {
    if (spec.kind != IntegratorKind::ChungLee)
        throw ValidationError("step_chung_lee requires a chung-lee spec");
    Integrator integ(spec);
    return integ.step(ctx, s, dt);
}

State apply_naive_stabilization(State s, const std::vector<int>& contact_dofs) {
    for (int d : contact_dofs) {
        if (d < 0 || d >= s.a.size()) throw ValidationError("contact dof out of range");
        s.a[d] = 0.0;
    }
    return s;
}

State correction_contact_implicit(const StepContext& ctx, const State& state_pred,
                                  const Eigen::VectorXd& x_solved, double dt, double beta,
                                  double gamma) {
    IntegratorSpec sp;
    sp.kind = IntegratorKind::NewmarkImplicit;
    sp.gamma = gamma;
    sp.beta = beta;
    Integrator integ(sp);
    return integ.correct_contact(ctx, state_pred, x_solved, dt);
}

Eigen::VectorXd prediction_contact_stabilized(const StepContext& ctx, const State& state_k,
                                              double dt, double tol) {
    IntegratorSpec sp;
    sp.kind = IntegratorKind::NewmarkImplicit;
    Integrator integ(sp);
    return integ.predict_stabilized(ctx, state_k, dt, tol);
}

}  // namespace rodimpact
