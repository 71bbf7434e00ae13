#include "rodimpact/rods.hpp"

#include <string>

namespace rodimpact {

Rod make_rod(const BenchmarkSpec& spec, RodSide side, int n_elements, bool lumped) {
    spec.validate();
    if (n_elements < 1)
        throw ValidationError("n_elements must be at least 1, got " +
                              std::to_string(n_elements));

    const double x_left = (side == RodSide::Left) ? -spec.L - spec.g : spec.g;
    Mesh1D mesh = Mesh1D::uniform(x_left, spec.L, n_elements);
    Material mat(spec.rho, spec.E, spec.A);

    Rod rod{mesh,
            mat,
            assemble_mass(mesh, mat, lumped),
            assemble_stiffness(mesh, mat),
            mesh.reference_positions(),
            State{},
            (side == RodSide::Left) ? n_elements : 0,
            (side == RodSide::Left) ? 1.0 : -1.0};

    const double v = (side == RodSide::Left) ? spec.v0 : -spec.v0;
    rod.state.t = spec.t0;
    rod.state.x = rod.X;
    rod.state.v = Eigen::VectorXd::Constant(rod.n_nodes(), v);
    rod.state.a = Eigen::VectorXd::Zero(rod.n_nodes());
    return rod;
}

std::pair<Rod, Rod> make_rods(const BenchmarkSpec& spec, int n_elements, bool lumped) {
    return {make_rod(spec, RodSide::Left, n_elements, lumped),
            make_rod(spec, RodSide::Right, n_elements, lumped)};
}

double contact_gap(const Rod& left, const Rod& right) {
    return left.contact_position() - right.contact_position();
}

void TimeSeries::append(const SeriesSample& sample) {
    if (!samples_.empty() && !(sample.t > samples_.back().t))
        throw ValidationError("samples must be strictly increasing in time");
    samples_.push_back(sample);
}

Eigen::VectorXd TimeSeries::times() const { return column(&SeriesSample::t); }

Eigen::VectorXd TimeSeries::column(double SeriesSample::* field) const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(samples_.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = samples_[static_cast<std::size_t>(i)].*field;
    return out;
}

Eigen::VectorXd TimeSeries::system_energies() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(samples_.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out[i] = samples_[static_cast<std::size_t>(i)].system_energy();
    return out;
}

int TimeSeries::max_iterations() const {
    int m = 0;
    for (const auto& s : samples_) m = std::max(m, s.iterations);
    return m;
}

double TimeSeries::avg_iterations() const {
    // Mean over every controller interval of the run. Intervals without
    // active contact perform no coupling iterations and contribute zero, so
    // the average reflects the cost of the whole simulation, not just the
    // contact phase. The leading sample stamps the initial condition rather
    // than an interval and is excluded from the denominator.
    if (samples_.size() < 2) return 0.0;
    long total = 0;
    for (std::size_t i = 1; i < samples_.size(); ++i) total += samples_[i].iterations;
    return static_cast<double>(total) / static_cast<double>(samples_.size() - 1);
}

SeriesSample sample_rods(const Rod& left, const Rod& right, double force, int iterations) {
    SeriesSample s;
    s.t = left.state.t;
    s.x1 = left.contact_position();
    s.v1 = left.contact_velocity();
    s.x2 = right.contact_position();
    s.v2 = right.contact_velocity();
    s.force = force;
    Energies el = left.current_energies();
    Energies er = right.current_energies();
    s.T1 = el.kinetic;
    s.V1 = el.potential;
    s.T2 = er.kinetic;
    s.V2 = er.potential;
    s.momentum = left.M.apply(left.state.v).sum() + right.M.apply(right.state.v).sum();
    s.iterations = iterations;
    return s;
}

}  // namespace rodimpact
