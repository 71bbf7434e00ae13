#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rodimpact/fem.hpp"

namespace rodimpact {

enum class IntegratorKind { NewmarkExplicit, NewmarkImplicit, TchamwaWielgosz, ChungLee };

// Chatter-mitigation variants layered on top of the base scheme during contact.
enum class Stabilization { None, NaiveStabilized, ContactImplicit, ContactStabilized };

struct IntegratorSpec {
    IntegratorKind kind = IntegratorKind::NewmarkImplicit;
    double gamma = 0.5;  // velocity weighting
    double beta = 0.25;  // position weighting (implicit Newmark, Chung-Lee)
    double phi = 1.05;   // Tchamwa-Wielgosz dissipation parameter
    Stabilization stabilization = Stabilization::None;

    bool is_implicit() const { return kind == IntegratorKind::NewmarkImplicit; }
    // Throws ValidationError when the parameters are outside the scheme's range.
    void validate() const;
};

// Named presets selectable from configs. `implicit_form` picks between the
// explicit and implicit variants where the preset exists in both forms
// (classic_newmark, dissipative_newmark, naive_stabilized); single-form presets
// reject a mismatching request.
IntegratorSpec integrator_preset(const std::string& name, bool implicit_form);

// Names accepted by integrator_preset, in canonical order.
const std::vector<std::string>& integrator_preset_names();

// A dof whose position/velocity/acceleration are prescribed at the end of the
// step (contact boundary of the Dirichlet subdomain).
struct DirichletBC {
    int dof = 0;
    double x = 0.0;
    double v = 0.0;
    double a = 0.0;
};

// Zero-gap barrier seen by one rod's contact node: gap(x) = normal*(x[dof] -
// position) > 0 means overlap. Used by the contact-stabilized prediction;
// `stiffness` scales its constraint penalization.
struct ContactBarrier {
    int dof = 0;
    double position = 0.0;
    double normal = 1.0;
    double stiffness = 0.0;
};

// Everything a step needs besides the kinematic state. The operators are
// borrowed (the owning rod outlives any step).
struct StepContext {
    const MassMatrix* M = nullptr;
    const Eigen::MatrixXd* K = nullptr;
    const Eigen::VectorXd* X = nullptr;
    // External force at a given time; empty means zero. Contact forces of the
    // conventional methods and Schwarz Neumann tractions enter here.
    std::function<Eigen::VectorXd(double)> f_ext;
    std::vector<DirichletBC> bcs;
    // True while the contact state machine reports active contact; gates the
    // ContactImplicit / ContactStabilized modifications.
    bool contact_phase = false;
    std::optional<ContactBarrier> barrier;

    Eigen::VectorXd external_force(double t, int n) const;
};

inline constexpr double kNewtonTol = 1e-12;
inline constexpr int kNewtonMax = 10;

// One time integrator bound to a parameter set. Stateless in the mathematical
// sense; it only caches matrix factorizations keyed on (operators, dt,
// constrained set) so repeated steps of the same system stay cheap.
class Integrator {
public:
    explicit Integrator(IntegratorSpec spec);

    const IntegratorSpec& spec() const { return spec_; }

    State step(const StepContext& ctx, const State& s, double dt);

    // Newton iterations of the most recent implicit step (2 on a generic
    // linear step, 1 at a fixed point).
    int last_newton_iterations() const { return last_newton_iters_; }

    double newton_tol = kNewtonTol;
    int newton_max = kNewtonMax;

    // Cache-backed variants of the contact-phase helpers; the free functions
    // below forward here through a throwaway Integrator.
    State correct_contact(const StepContext& ctx, const State& state_pred,
                          const Eigen::VectorXd& x_solved, double dt);
    Eigen::VectorXd predict_stabilized(const StepContext& ctx, const State& state_k, double dt,
                                       double tol);

private:
    struct FactorCache {
        bool valid = false;
        const void* M = nullptr;
        const void* K = nullptr;
        double dt = 0.0;
        double beta = 0.0;
        std::vector<int> cons;
        std::vector<int> free;
        Eigen::LLT<Eigen::MatrixXd> llt;
        Eigen::VectorXd lumped_ff;  // diagonal path (lumped mass, no constraints coupling)
        // Rank-one update helpers for the contact-stabilized prediction.
        Eigen::VectorXd smw;
        double smw_ee = 0.0;
        int smw_dof = -1;
    };

    State step_newmark_explicit_(const StepContext& ctx, const State& s, double dt);
    State step_newmark_implicit_(const StepContext& ctx, const State& s, double dt);
    State step_tchamwa_wielgosz_(const StepContext& ctx, const State& s, double dt);
    State step_chung_lee_(const StepContext& ctx, const State& s, double dt);

    // Solves M*delta_a = r for the free dofs (constrained rows removed, their
    // known increments moved to the right-hand side) and returns the full-size
    // embedding with zeros at constrained dofs.
    Eigen::VectorXd solve_mass_increment(const StepContext& ctx, const Eigen::VectorXd& r,
                                         const std::vector<int>& cons,
                                         const Eigen::VectorXd& delta_a_cons);

    static std::vector<int> constrained_dofs(const StepContext& ctx);
    static std::vector<int> free_dofs(int n, const std::vector<int>& cons);

    IntegratorSpec spec_;
    int last_newton_iters_ = 0;
    FactorCache mass_cache_;    // M_ff for acceleration solves
    FactorCache newton_cache_;  // (M/(dt^2 beta) + K)_ff for implicit steps
    FactorCache pred_cache_;    // M_ff plus rank-one helpers for the prediction
};

// Operation-level entry points. The spec'd step operations construct a
// throwaway Integrator; loops should hold an Integrator to keep its caches.
State step_newmark_explicit(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                            double dt);
State step_newmark_implicit(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                            double dt, double newton_tol = kNewtonTol,
                            int newton_max = kNewtonMax);
State step_tchamwa_wielgosz(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                            double dt);
State step_chung_lee(const IntegratorSpec& spec, const StepContext& ctx, const State& s,
                     double dt);

// Zeroes the accelerations of the given contact dofs; positions and velocities
// are untouched. Idempotent.
State apply_naive_stabilization(State s, const std::vector<int>& contact_dofs);

// Contact-phase correction for implicit Newmark: splits the acceleration into
// an internal part (dynamic equilibrium at the solved positions) and a contact
// part (whatever the position constraint added beyond the predictor), then
// rebuilds velocity from that split. `state_pred` carries the predicted
// positions in .x and the start-of-step velocity/acceleration/time.
State correction_contact_implicit(const StepContext& ctx, const State& state_pred,
                                  const Eigen::VectorXd& x_solved, double dt, double beta,
                                  double gamma);

// Contact-phase prediction for implicit Newmark: Newton solve of the
// mass-weighted first-order predictor with a zero-gap penalization at the
// contact node; reduces to x_k + dt*v_k when no barrier is violated.
Eigen::VectorXd prediction_contact_stabilized(const StepContext& ctx, const State& state_k,
                                              double dt, double tol = kNewtonTol);

}  // namespace rodimpact
