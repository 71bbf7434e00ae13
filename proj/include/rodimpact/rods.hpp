#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rodimpact/fem.hpp"
#include "rodimpact/oracle.hpp"

namespace rodimpact {

// One discretized rod of the impact benchmark, ready to advance in time.
struct Rod {
    Mesh1D mesh;
    Material material;
    MassMatrix M;
    Eigen::MatrixXd K;
    Eigen::VectorXd X;      // reference node positions (stress-free)
    State state;            // current kinematic state
    int contact_node;       // node facing the other rod
    double contact_normal;  // outward axis direction at that node: +1 right end, -1 left end

    int n_nodes() const { return mesh.n_nodes(); }
    double contact_position() const { return state.x[contact_node]; }
    double contact_velocity() const { return state.v[contact_node]; }
    Energies current_energies() const { return energies(M, K, state, X); }
};

enum class RodSide { Left, Right };

// The benchmark geometry puts the contact plane at the origin: the left rod
// spans [-L-g, -g] and approaches at +v0, the right rod spans [g, L+g] and
// approaches at -v0. Both start stress-free with zero acceleration at t0.
Rod make_rod(const BenchmarkSpec& spec, RodSide side, int n_elements, bool lumped);
std::pair<Rod, Rod> make_rods(const BenchmarkSpec& spec, int n_elements, bool lumped);

// Signed overlap of the two contact ends: x_R^1 - x_L^2, positive when the
// rods interpenetrate.
double contact_gap(const Rod& left, const Rod& right);

// One record of the coupled two-rod run. Contact force is compression-positive
// and instantaneous at t; iterations counts the coupling iterations spent on
// the step or interval that ends at t (0 where no iteration happened).
struct SeriesSample {
    double t = 0.0;
    double x1 = 0.0, v1 = 0.0;  // left-rod contact node
    double x2 = 0.0, v2 = 0.0;  // right-rod contact node
    double force = 0.0;         // interface force (N)
    double T1 = 0.0, V1 = 0.0;  // left-rod energies (J)
    double T2 = 0.0, V2 = 0.0;  // right-rod energies (J)
    double momentum = 0.0;      // total linear momentum of both rods (kg m/s)
    int iterations = 0;

    double system_energy() const { return T1 + V1 + T2 + V2; }
};

class TimeSeries {
public:
    // Samples must arrive in strictly increasing time order.
    void append(const SeriesSample& sample);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const std::vector<SeriesSample>& samples() const { return samples_; }
    const SeriesSample& front() const { return samples_.front(); }
    const SeriesSample& back() const { return samples_.back(); }

    Eigen::VectorXd times() const;
    // Any scalar field as a column, e.g. column(&SeriesSample::x1).
    Eigen::VectorXd column(double SeriesSample::* field) const;
    Eigen::VectorXd system_energies() const;

    int max_iterations() const;
    // Mean iteration count per controller interval over the whole run;
    // intervals without contact iterate zero times and still count.
    double avg_iterations() const;

private:
    std::vector<SeriesSample> samples_;
};

// Convenience: record both rods' contact kinematics and energies at their
// current shared time.
SeriesSample sample_rods(const Rod& left, const Rod& right, double force, int iterations);

}  // namespace rodimpact
