#include "rodimpact/metrics.hpp"

#include <cmath>
#include <string>

namespace rodimpact {

namespace {

void require_aligned(const Eigen::VectorXd& numeric, const Eigen::VectorXd& reference) {
    if (numeric.size() != reference.size())
        throw ValidationError("series length mismatch: numeric has " +
                              std::to_string(numeric.size()) + " samples, reference has " +
                              std::to_string(reference.size()));
    if (numeric.size() == 0) throw ValidationError("series are empty");
}

}  // namespace

double total_relative_error(const Eigen::VectorXd& numeric, const Eigen::VectorXd& reference) {
    require_aligned(numeric, reference);
    const double ref_norm = reference.norm();
    if (ref_norm == 0.0)
        throw ZeroReferenceNorm("reference series is identically zero; pick a nonzero quantity");
    return 100.0 * (numeric - reference).norm() / ref_norm;
}

ErrorMoments error_moments(const Eigen::VectorXd& numeric, const Eigen::VectorXd& reference) {
    require_aligned(numeric, reference);
    const Eigen::VectorXd e = numeric - reference;
    const double mean = e.mean();
    const double variance = (e.array() - mean).square().mean();
    return {mean, std::sqrt(variance)};
}

double convergence_rate(const std::vector<std::pair<double, double>>& nx_error_pairs) {
    if (nx_error_pairs.size() < 3)
        throw ValidationError("need at least three (N_x, error) pairs, got " +
                              std::to_string(nx_error_pairs.size()));
    const auto n = static_cast<Eigen::Index>(nx_error_pairs.size());
    Eigen::VectorXd x(n), y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& [nx, err] = nx_error_pairs[static_cast<std::size_t>(i)];
        if (!(nx > 0.0))
            throw NonPositiveError("N_x must be positive, got " + std::to_string(nx));
        if (!(err > 0.0))
            throw NonPositiveError("error must be positive, got " + std::to_string(err));
        x[i] = std::log(1.0 / nx);
        y[i] = std::log(err);
    }
    const Eigen::VectorXd dx = x.array() - x.mean();
    const Eigen::VectorXd dy = y.array() - y.mean();
    return dx.dot(dy) / dx.squaredNorm();
}

}  // namespace rodimpact
