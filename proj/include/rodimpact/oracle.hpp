#pragma once

#include "rodimpact/errors.hpp"

namespace rodimpact {

// Physical description of the two-rod impact benchmark: two identical elastic
// rods of length L approach each other head-on, each travelling at speed v0,
// separated by an initial semi-gap g at time t0. Units are SI throughout.
struct BenchmarkSpec {
    double rho = 1000.0;   // density (kg/m^3)
    double E = 1.0e9;      // Young's modulus (Pa)
    double A = 1.0e-6;     // cross-section area (m^2)
    double L = 0.25;       // rod length (m)
    double g = 0.02;       // initial semi-gap between rod tip and contact plane (m)
    double v0 = 100.0;     // initial approach speed of each rod (m/s)
    double t0 = -200e-6;   // start time (s); may be negative
    double tN = 800e-6;    // end time (s)

    // Throws ValidationError unless rho, E, A, L, v0 > 0, g >= 0 and tN > t0.
    void validate() const;

    bool operator==(const BenchmarkSpec&) const = default;
};

// Closed-form solution of the benchmark. Events: the rods touch at t_imp,
// stress waves traverse each rod and reflect, and the rods separate at t_rel.
// Potential energy peaks (and kinetic energy bottoms out) at t_m. While in
// contact the interface transmits the constant force f_contact.
//
// position/velocity describe the contact point (the right end of the left
// rod); the energies are per rod. kinetic_energy and potential_energy are
// evaluated from their own piecewise forms — neither is derived from the
// other — so their sum closing to total_energy() is a real consistency check.
class OracleSolution {
public:
    explicit OracleSolution(const BenchmarkSpec& spec);

    const BenchmarkSpec& spec() const { return spec_; }
    double t_imp() const { return t_imp_; }
    double t_rel() const { return t_rel_; }
    double t_m() const { return t_m_; }
    double f_contact() const { return f_contact_; }

    double position(double t) const;
    double velocity(double t) const;
    double kinetic_energy(double t) const;
    double potential_energy(double t) const;

    // Conserved mechanical energy of one rod: 0.5*rho*A*L*v0^2.
    double total_energy() const;

private:
    BenchmarkSpec spec_;
    double t_imp_ = 0.0;
    double t_rel_ = 0.0;
    double t_m_ = 0.0;
    double f_contact_ = 0.0;
};

OracleSolution build_oracle(const BenchmarkSpec& spec);

struct PointState {
    double x;  // m
    double v;  // m/s
};

struct EnergyPair {
    double T;  // kinetic, J
    double V;  // potential, J
};

PointState exact_contact_point(const OracleSolution& oracle, double t);
EnergyPair exact_energies(const OracleSolution& oracle, double t);

}  // namespace rodimpact
