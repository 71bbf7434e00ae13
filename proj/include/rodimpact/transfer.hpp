#pragma once

#include <Eigen/Dense>
#include <vector>

namespace rodimpact {

// Piecewise-linear-in-time record of a field at the local time stops of one
// subdomain within a controller interval.
class TimeHistory {
public:
    TimeHistory() = default;
    TimeHistory(std::vector<double> stops, std::vector<Eigen::VectorXd> values);

    const std::vector<double>& stops() const { return stops_; }
    const std::vector<Eigen::VectorXd>& values() const { return values_; }
    double first() const { return stops_.front(); }
    double last() const { return stops_.back(); }

private:
    std::vector<double> stops_;
    std::vector<Eigen::VectorXd> values_;
};

// Linear interpolation between the nearest stops; exact at stops. Queries may
// overshoot either end by a snap tolerance of 1e-12 of the covered span and
// are clamped; beyond that OutOfInterval is raised.
Eigen::VectorXd interpolate_history(const TimeHistory& history, double t_query);

enum class InterfaceKind { Point, Segment };

// Contact interface discretization: a single point (the 1D benchmark case) or
// a 1D mesh of linear segments on a shared parameterization.
class InterfaceMesh {
public:
    static InterfaceMesh point();
    // Consecutive nodes form the elements; nodes must be strictly increasing.
    static InterfaceMesh segment(std::vector<double> nodes);

    InterfaceKind kind() const { return kind_; }
    int n_nodes() const;
    const std::vector<double>& nodes() const { return nodes_; }
    double span_begin() const;
    double span_end() const;

private:
    InterfaceMesh() = default;
    InterfaceKind kind_ = InterfaceKind::Point;
    std::vector<double> nodes_;
};

// L2-projection operators between a source and a destination interface:
//   W = ∫ N_dst N_dstᵀ,  L = ∫ N_dst N_srcᵀ,  H = ∫ N_src N_srcᵀ,
//   P_dirichlet = W⁻¹L (field transfer; partition of unity),
//   P_neumann   = L·H⁻¹ (load transfer; preserves the nodal sum).
struct TransferOperator {
    InterfaceKind kind = InterfaceKind::Point;
    Eigen::MatrixXd W;
    Eigen::MatrixXd L;
    Eigen::MatrixXd H;
    Eigen::MatrixXd P_dirichlet;
    Eigen::MatrixXd P_neumann;
};

// Assembles the operator pair by exact 2-point Gauss quadrature over the
// merged node partition of the two meshes.
TransferOperator build_operators(const InterfaceMesh& src, const InterfaceMesh& dst);

// Field (kinematic) transfer src -> dst.
Eigen::VectorXd project_dirichlet(const TransferOperator& op, const Eigen::VectorXd& src_values);
// Load transfer src -> dst.
Eigen::VectorXd project_neumann(const TransferOperator& op, const Eigen::VectorXd& src_values);

}  // namespace rodimpact
