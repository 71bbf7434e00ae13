#include "rodimpact/oracle.hpp"

#include <cmath>
#include <string>

namespace rodimpact {

void BenchmarkSpec::validate() const {
    auto require_positive = [](double value, const char* name) {
        if (!(value > 0.0))
            throw ValidationError(std::string(name) + " must be positive, got " +
                                  std::to_string(value));
    };
    require_positive(rho, "rho");
    require_positive(E, "E");
    require_positive(A, "A");
    require_positive(L, "L");
    require_positive(v0, "v0");
    if (!(g >= 0.0)) throw ValidationError("g must be non-negative, got " + std::to_string(g));
    if (!(tN > t0)) throw ValidationError("tN must exceed t0");
}

OracleSolution::OracleSolution(const BenchmarkSpec& spec) : spec_(spec) {
    spec_.validate();
    const double wave_transit = spec_.L * std::sqrt(spec_.rho / spec_.E);
    t_imp_ = spec_.t0 + spec_.g / spec_.v0;
    t_rel_ = t_imp_ + 2.0 * wave_transit;
    t_m_ = t_imp_ + wave_transit;
    f_contact_ = spec_.v0 * std::sqrt(spec_.E * spec_.rho) * spec_.A;
}

double OracleSolution::position(double t) const {
    if (t < t_imp_) return -spec_.g + spec_.v0 * (t - spec_.t0);
    if (t <= t_rel_) return 0.0;
    return -spec_.v0 * (t - t_rel_);
}

double OracleSolution::velocity(double t) const {
    if (t < t_imp_) return spec_.v0;
    if (t <= t_rel_) return 0.0;
    return -spec_.v0;
}

double OracleSolution::total_energy() const {
    return 0.5 * spec_.rho * spec_.A * spec_.L * spec_.v0 * spec_.v0;
}

double OracleSolution::kinetic_energy(double t) const {
    const double full = total_energy();
    const double rate = 0.5 * std::sqrt(spec_.rho * spec_.E) * spec_.A * spec_.v0 * spec_.v0;
    if (t < t_imp_) return full;
    if (t <= t_m_) return full - rate * (t - t_imp_);
    if (t <= t_rel_) return rate * (t - t_m_);
    return full;
}

double OracleSolution::potential_energy(double t) const {
    const double full = total_energy();
    const double rate = 0.5 * std::sqrt(spec_.rho * spec_.E) * spec_.A * spec_.v0 * spec_.v0;
    if (t < t_imp_) return 0.0;
    if (t <= t_m_) return rate * (t - t_imp_);
    if (t <= t_rel_) return full - rate * (t - t_m_);
    return 0.0;
}

OracleSolution build_oracle(const BenchmarkSpec& spec) { return OracleSolution(spec); }

PointState exact_contact_point(const OracleSolution& oracle, double t) {
    return {oracle.position(t), oracle.velocity(t)};
}

EnergyPair exact_energies(const OracleSolution& oracle, double t) {
    return {oracle.kinetic_energy(t), oracle.potential_energy(t)};
}

}  // namespace rodimpact
