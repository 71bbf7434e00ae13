#include "rodimpact/contact_conventional.hpp"

#include <cmath>
#include <string>

#include "rodimpact/integrators.hpp"

namespace rodimpact {

namespace {

long step_count(double t0, double t_end, double dt) {
    if (!(dt > 0.0)) throw ValidationError("dt must be positive");
    if (!(t_end > t0))
        throw ValidationError("t_end must lie beyond the rods' current time " +
                              std::to_string(t0));
    const double span = t_end - t0;
    const long n = std::lround(span / dt);
    if (n < 1 || std::abs(static_cast<double>(n) * dt - span) > 1e-9 * span)
        throw ValidationError("dt must divide the time span evenly");
    return n;
}

void require_cfl(const Rod& rod, double dt) {
    const double limit = cfl_time_step(rod.mesh, rod.material);
    if (dt > limit)
        throw ValidationError("dt=" + std::to_string(dt) +
                              " exceeds the stable explicit step " + std::to_string(limit));
}

// Compression-positive interface force lambda maps to a nodal force pushing
// the tip back into its own rod: -normal * lambda.
std::function<Eigen::VectorXd(double)> tip_force(const Rod& rod, double lambda) {
    const int n = rod.n_nodes();
    const int p = rod.contact_node;
    const double f = -rod.contact_normal * lambda;
    return [n, p, f](double) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        v[p] = f;
        return v;
    };
}

StepContext rod_context(const Rod& rod) {
    StepContext ctx;
    ctx.M = &rod.M;
    ctx.K = &rod.K;
    ctx.X = &rod.X;
    return ctx;
}

}  // namespace

void PenaltySpec::validate() const {
    if (!(tau > 0.0))
        throw ValidationError("penalty stiffness tau must be positive, got " +
                              std::to_string(tau));
    if (max_fixed_point_iters < 1)
        throw ValidationError("max_fixed_point_iters must be at least 1");
    if (!(fp_tol > 0.0)) throw ValidationError("fp_tol must be positive");
}

TimeSeries solve_penalty_explicit(std::pair<Rod, Rod> rods, const PenaltySpec& spec, double dt,
                                  double t_end) {
    spec.validate();
    Rod& left = rods.first;
    Rod& right = rods.second;
    const double t0 = left.state.t;
    const long n = step_count(t0, t_end, dt);
    require_cfl(left, dt);
    require_cfl(right, dt);

    Integrator stepper_l(integrator_preset("classic_newmark", false));
    Integrator stepper_r(integrator_preset("classic_newmark", false));
    StepContext cl = rod_context(left);
    StepContext cr = rod_context(right);

    auto spring_force = [&]() { return spec.tau * std::max(0.0, contact_gap(left, right)); };

    TimeSeries out;
    out.append(sample_rods(left, right, spring_force(), 0));
    for (long k = 1; k <= n; ++k) {
        const double lambda = spring_force();  // gap taken at the start of the step
        cl.f_ext = tip_force(left, lambda);
        cr.f_ext = tip_force(right, lambda);
        left.state = stepper_l.step(cl, left.state, dt);
        right.state = stepper_r.step(cr, right.state, dt);
        left.state.t = right.state.t = t0 + static_cast<double>(k) * dt;
        out.append(sample_rods(left, right, spring_force(), 0));
    }
    return out;
}

TimeSeries solve_penalty_implicit(std::pair<Rod, Rod> rods, const PenaltySpec& spec, double dt,
                                  double t_end) {
    spec.validate();
    Rod& left = rods.first;
    Rod& right = rods.second;
    const double t0 = left.state.t;
    const long n = step_count(t0, t_end, dt);

    Integrator stepper_l(integrator_preset("classic_newmark", true));
    Integrator stepper_r(integrator_preset("classic_newmark", true));
    StepContext cl = rod_context(left);
    StepContext cr = rod_context(right);
    const int p1 = left.contact_node;
    const int p2 = right.contact_node;

    double lambda = spec.tau * std::max(0.0, contact_gap(left, right));
    TimeSeries out;
    out.append(sample_rods(left, right, lambda, 0));
    for (long k = 1; k <= n; ++k) {
        const State l0 = left.state;
        const State r0 = right.state;
        double lam = lambda;  // warm start from the previous step's force
        int iters = 0;
        while (true) {
            cl.f_ext = tip_force(left, lam);
            cr.f_ext = tip_force(right, lam);
            State l1 = stepper_l.step(cl, l0, dt);
            State r1 = stepper_r.step(cr, r0, dt);
            ++iters;
            const double gap = l1.x[p1] - r1.x[p2];
            const double lam_new = spec.tau * std::max(0.0, gap);
            if (std::abs(lam_new - lam) <= spec.fp_tol) {
                left.state = std::move(l1);
                right.state = std::move(r1);
                lambda = lam_new;
                break;
            }
            if (iters >= spec.max_fixed_point_iters)
                throw FixedPointDivergence(
                    "contact-force fixed point did not converge within " +
                    std::to_string(spec.max_fixed_point_iters) + " passes at t=" +
                    std::to_string(l0.t + dt));
            lam = lam_new;
        }
        left.state.t = right.state.t = t0 + static_cast<double>(k) * dt;
        out.append(sample_rods(left, right, lambda, iters));
    }
    return out;
}

TimeSeries solve_lagrange_explicit(std::pair<Rod, Rod> rods, double dt, double t_end) {
    Rod& left = rods.first;
    Rod& right = rods.second;
    if (!left.M.is_lumped() || !right.M.is_lumped())
        throw ValidationError("the forward-increment multiplier requires lumped mass");
    const double t0 = left.state.t;
    const long n = step_count(t0, t_end, dt);
    require_cfl(left, dt);
    require_cfl(right, dt);

    Integrator stepper_l(integrator_preset("classic_newmark", false));
    Integrator stepper_r(integrator_preset("classic_newmark", false));
    const double gamma = stepper_l.spec().gamma;
    StepContext cl = rod_context(left);
    StepContext cr = rod_context(right);
    const int p1 = left.contact_node;
    const int p2 = right.contact_node;
    const double m1 = left.M.diag()[p1];
    const double m2 = right.M.diag()[p2];
    const double inv_eff = 1.0 / m1 + 1.0 / m2;

    TimeSeries out;
    out.append(sample_rods(left, right, 0.0, 0));
    for (long k = 1; k <= n; ++k) {
        const State l0 = left.state;
        const State r0 = right.state;
        State l1 = stepper_l.step(cl, l0, dt);
        State r1 = stepper_r.step(cr, r0, dt);

        const double g_pred = l1.x[p1] - r1.x[p2];
        double lambda = 0.0;
        if (g_pred > 0.0) {
            // The impulse that closes the predicted overlap exactly.
            lambda = g_pred / (dt * dt * inv_eff);
            l1.x[p1] -= dt * dt * lambda / m1;
            r1.x[p2] += dt * dt * lambda / m2;
            // Re-complete the update at the corrected positions with the
            // multiplier in the force balance.
            Eigen::VectorXd fl = Eigen::VectorXd::Zero(left.n_nodes());
            Eigen::VectorXd fr = Eigen::VectorXd::Zero(right.n_nodes());
            fl[p1] = -lambda;
            fr[p2] = lambda;
            l1.a = (fl - internal_force(left.K, l1.x, left.X)).cwiseQuotient(left.M.diag());
            r1.a = (fr - internal_force(right.K, r1.x, right.X)).cwiseQuotient(right.M.diag());
            l1.v = l0.v + dt * ((1.0 - gamma) * l0.a + gamma * l1.a);
            r1.v = r0.v + dt * ((1.0 - gamma) * r0.a + gamma * r1.a);
        }
        left.state = std::move(l1);
        right.state = std::move(r1);
        left.state.t = right.state.t = t0 + static_cast<double>(k) * dt;
        out.append(sample_rods(left, right, lambda, 0));
    }
    return out;
}

TimeSeries solve_lagrange_implicit(std::pair<Rod, Rod> rods, double dt, double t_end) {
    Rod& left = rods.first;
    Rod& right = rods.second;
    const double t0 = left.state.t;
    const long n = step_count(t0, t_end, dt);
    const int p1 = left.contact_node;
    const int p2 = right.contact_node;

    const Eigen::MatrixXd A1 = left.M.as_dense() + dt * dt * left.K;
    const Eigen::MatrixXd A2 = right.M.as_dense() + dt * dt * right.K;
    Eigen::LLT<Eigen::MatrixXd> llt1(A1);
    Eigen::LLT<Eigen::MatrixXd> llt2(A2);
    if (llt1.info() != Eigen::Success || llt2.info() != Eigen::Success)
        throw SingularSaddleSystem("backward-Euler system matrix is not positive definite");

    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(left.n_nodes());
    Eigen::VectorXd e2 = Eigen::VectorXd::Zero(right.n_nodes());
    e1[p1] = 1.0;
    e2[p2] = 1.0;
    const Eigen::VectorXd w1 = llt1.solve(e1);
    const Eigen::VectorXd w2 = llt2.solve(e2);
    const double schur = dt * dt * (w1[p1] + w2[p2]);
    if (!(schur > 0.0) || !std::isfinite(schur))
        throw SingularSaddleSystem("zero-gap constraint row is degenerate");

    TimeSeries out;
    out.append(sample_rods(left, right, 0.0, 0));
    for (long k = 1; k <= n; ++k) {
        State& l = left.state;
        State& r = right.state;
        const Eigen::VectorXd rhs1 = -internal_force(left.K, l.x + dt * l.v, left.X);
        const Eigen::VectorXd rhs2 = -internal_force(right.K, r.x + dt * r.v, right.X);
        Eigen::VectorXd a1 = llt1.solve(rhs1);
        Eigen::VectorXd a2 = llt2.solve(rhs2);

        const double g_pred = (l.x[p1] + dt * l.v[p1] + dt * dt * a1[p1]) -
                              (r.x[p2] + dt * r.v[p2] + dt * dt * a2[p2]);
        double lambda = 0.0;
        if (g_pred > 0.0) {
            // A tensile multiplier would require g_pred <= 0, so activation by
            // predicted overlap and release at lambda <= 0 coincide.
            lambda = g_pred / schur;
            a1 -= lambda * w1;
            a2 += lambda * w2;
        }
        l.v += dt * a1;
        l.x += dt * l.v;
        l.a = a1;
        r.v += dt * a2;
        r.x += dt * r.v;
        r.a = a2;
        l.t = r.t = t0 + static_cast<double>(k) * dt;
        out.append(sample_rods(left, right, lambda, 0));
    }
    return out;
}

}  // namespace rodimpact
