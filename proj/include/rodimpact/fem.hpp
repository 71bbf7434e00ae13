#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rodimpact/errors.hpp"

namespace rodimpact {

// Linear-elastic material of a rod with constant cross section.
struct Material {
    double rho;  // mass density (kg/m^3)
    double E;    // elastic modulus (Pa)
    double A;    // cross-sectional area (m^2)

    Material(double rho_, double E_, double A_);

    // Longitudinal wave speed c = sqrt(E/rho) (m/s).
    double wave_speed() const;
};

// 1D mesh of two-node linear elements; element e connects nodes e and e+1.
class Mesh1D {
public:
    explicit Mesh1D(std::vector<double> node_coords);

    // Uniform mesh of n_elements over [x_left, x_left + length].
    static Mesh1D uniform(double x_left, double length, int n_elements);

    int n_nodes() const { return static_cast<int>(coords_.size()); }
    int n_elements() const { return n_nodes() - 1; }
    double node(int i) const { return coords_[static_cast<std::size_t>(i)]; }
    double element_length(int e) const { return coords_[e + 1] - coords_[e]; }
    double min_element_length() const;
    double length() const { return coords_.back() - coords_.front(); }
    const std::vector<double>& node_coords() const { return coords_; }

    // Node coordinates as the reference-position vector X.
    Eigen::VectorXd reference_positions() const;

private:
    std::vector<double> coords_;
};

// Nodal kinematic state at one time stop.
struct State {
    double t = 0.0;
    Eigen::VectorXd x;  // positions (m)
    Eigen::VectorXd v;  // velocities (m/s)
    Eigen::VectorXd a;  // accelerations (m/s^2)
};

// Mass matrix in either lumped (diagonal, stored as a vector) or consistent
// (dense) form.
class MassMatrix {
public:
    static MassMatrix lumped(Eigen::VectorXd diag);
    static MassMatrix consistent(Eigen::MatrixXd dense);

    bool is_lumped() const { return lumped_; }
    int size() const;
    // Sum of all entries; equals the physical mass rho*A*L for both forms.
    double total() const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;  // M * v
    const Eigen::VectorXd& diag() const;                    // lumped form only
    const Eigen::MatrixXd& dense() const;                   // consistent form only
    Eigen::MatrixXd as_dense() const;                       // either form

private:
    MassMatrix() = default;
    bool lumped_ = true;
    Eigen::VectorXd diag_;
    Eigen::MatrixXd dense_;
};

// Element mass (rho*A*h/6)*[[2,1],[1,2]] assembled over the mesh; the lumped
// variant row-sums it to rho*A*h/2 per element node. Total mass is exactly
// rho*A*L either way.
MassMatrix assemble_mass(const Mesh1D& mesh, const Material& mat, bool lumped);

// Element stiffness (E*A/h)*[[1,-1],[-1,1]] assembled over the mesh. Symmetric
// positive-semidefinite; annihilates constant vectors (rigid-body mode).
Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh, const Material& mat);

// Internal force K*(x - X); zero for any rigid-body translation.
Eigen::VectorXd internal_force(const Eigen::MatrixXd& K, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& X);

struct Energies {
    double kinetic = 0.0;    // T = v' M v / 2 (J)
    double potential = 0.0;  // V = u' K u / 2 with u = x - X (J)
    double total() const { return kinetic + potential; }
};

Energies energies(const MassMatrix& M, const Eigen::MatrixXd& K, const State& s,
                  const Eigen::VectorXd& X);

// Largest stable explicit step: min element length / wave speed.
double cfl_time_step(const Mesh1D& mesh, const Material& mat);

}  // namespace rodimpact
