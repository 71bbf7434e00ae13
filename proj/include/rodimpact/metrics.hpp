#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rodimpact/errors.hpp"

namespace rodimpact {

// 100 * ||numeric - reference||_2 / ||reference||_2 over series sampled on the
// same time grid. Throws ValidationError on length mismatch and
// ZeroReferenceNorm when the reference series is identically zero.
double total_relative_error(const Eigen::VectorXd& numeric, const Eigen::VectorXd& reference);

struct ErrorMoments {
    double mean;     // signed mean of (numeric - reference)
    double std_dev;  // population standard deviation of (numeric - reference)
};

ErrorMoments error_moments(const Eigen::VectorXd& numeric, const Eigen::VectorXd& reference);

// Least-squares slope of log(error) against log(1/N_x) over (N_x, error)
// pairs: errors shrinking like N_x^-p give slope p. Requires at least three
// pairs (ValidationError) and strictly positive entries (NonPositiveError).
double convergence_rate(const std::vector<std::pair<double, double>>& nx_error_pairs);

}  // namespace rodimpact
