#include "rodimpact/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rodimpact/errors.hpp"

namespace rodimpact {

TimeHistory::TimeHistory(std::vector<double> stops, std::vector<Eigen::VectorXd> values)
    : stops_(std::move(stops)), values_(std::move(values)) {
    if (stops_.empty()) throw ValidationError("time history needs at least one stop");
    if (stops_.size() != values_.size())
        throw ValidationError("time history stops/values length mismatch");
    for (std::size_t i = 1; i < stops_.size(); ++i)
        if (!(stops_[i] > stops_[i - 1]))
            throw ValidationError("time history stops must be strictly increasing");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (values_[i].size() != values_[0].size())
            throw ValidationError("time history field arrays must share one size");
}

Eigen::VectorXd interpolate_history(const TimeHistory& history, double t_query) {
    const auto& ts = history.stops();
    const auto& vs = history.values();
    if (ts.size() == 1) {
        if (t_query == ts[0]) return vs[0];
        throw OutOfInterval("query outside a single-stop history");
    }
    const double span = ts.back() - ts.front();
    // Tolerate relative rounding of the span plus a few ulps of the absolute
    // stamps: callers reconstruct query times as t0 + l*dt, which can land an
    // ulp outside stamps accumulated along a different arithmetic path.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double snap =
        1e-12 * span + 8.0 * eps * std::max(std::abs(ts.front()), std::abs(ts.back()));
    double t = t_query;
    if (t < ts.front()) {
        if (ts.front() - t > snap) throw OutOfInterval("query before the history interval");
        t = ts.front();
    }
    if (t > ts.back()) {
        if (t - ts.back() > snap) throw OutOfInterval("query after the history interval");
        t = ts.back();
    }
    // First stop strictly greater than t; its predecessor starts the bracket.
    const auto hi = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t i1 = std::min<std::size_t>(ts.size() - 1, hi - ts.begin());
    const std::size_t i0 = i1 - (i1 > 0 ? 1 : 0);
    if (t == ts[i0]) return vs[i0];
    if (t == ts[i1]) return vs[i1];
    const double w = (t - ts[i0]) / (ts[i1] - ts[i0]);
    return vs[i0] * (1.0 - w) + vs[i1] * w;
}

InterfaceMesh InterfaceMesh::point() {
    InterfaceMesh m;
    m.kind_ = InterfaceKind::Point;
    return m;
}

InterfaceMesh InterfaceMesh::segment(std::vector<double> nodes) {
    if (nodes.size() < 2) throw ValidationError("segment interface needs at least two nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (nodes[i] < nodes[i - 1])
            throw ValidationError("segment interface nodes must be increasing");
        if (nodes[i] == nodes[i - 1])
            throw DegenerateInterface("segment interface element has zero measure");
    }
    InterfaceMesh m;
    m.kind_ = InterfaceKind::Segment;
    m.nodes_ = std::move(nodes);
    return m;
}

int InterfaceMesh::n_nodes() const {
    return kind_ == InterfaceKind::Point ? 1 : static_cast<int>(nodes_.size());
}

double InterfaceMesh::span_begin() const {
    if (kind_ == InterfaceKind::Point) throw ValidationError("point interface has no span");
    return nodes_.front();
}

double InterfaceMesh::span_end() const {
    if (kind_ == InterfaceKind::Point) throw ValidationError("point interface has no span");
    return nodes_.back();
}

namespace {

// Index of the element of `nodes` containing s (s strictly inside the span).
int element_of(const std::vector<double>& nodes, double s) {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), s);
    int e = static_cast<int>(it - nodes.begin()) - 1;
    e = std::clamp(e, 0, static_cast<int>(nodes.size()) - 2);
    return e;
}

// Linear shape values of the mesh at s: only nodes e and e+1 are nonzero.
void shape_at(const std::vector<double>& nodes, double s, int& e, double& n_left,
              double& n_right) {
    e = element_of(nodes, s);
    const double h = nodes[e + 1] - nodes[e];
    const double xi = (s - nodes[e]) / h;
    n_left = 1.0 - xi;
    n_right = xi;
}

Eigen::MatrixXd interface_mass(const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e + 1 < n; ++e) {
        const double h = nodes[e + 1] - nodes[e];
        M(e, e) += h / 3.0;
        M(e, e + 1) += h / 6.0;
        M(e + 1, e) += h / 6.0;
        M(e + 1, e + 1) += h / 3.0;
    }
    return M;
}

}  // namespace

TransferOperator build_operators(const InterfaceMesh& src, const InterfaceMesh& dst) {
    TransferOperator op;
    if (src.kind() == InterfaceKind::Point && dst.kind() == InterfaceKind::Point) {
        op.kind = InterfaceKind::Point;
        op.W = op.L = op.H = Eigen::MatrixXd::Identity(1, 1);
        op.P_dirichlet = op.P_neumann = Eigen::MatrixXd::Identity(1, 1);
        return op;
    }
    if (src.kind() != dst.kind())
        throw ValidationError("interface meshes must both be points or both be segments");

    const auto& sn = src.nodes();
    const auto& dn = dst.nodes();
    const double span = std::max(sn.back() - sn.front(), dn.back() - dn.front());
    if (span <= 0.0) throw DegenerateInterface("zero-measure interface span");
    const double tol = 1e-12 * span;
    if (std::abs(sn.front() - dn.front()) > tol || std::abs(sn.back() - dn.back()) > tol)
        throw ValidationError("paired segment interfaces must cover the same span");

    op.kind = InterfaceKind::Segment;
    op.W = interface_mass(dn);
    op.H = interface_mass(sn);

    // Merge the two node partitions; each merged cell lies inside exactly one
    // element of either mesh, so the quadratic integrand of L is integrated
    // exactly by 2-point Gauss.
    std::vector<double> cuts;
    cuts.reserve(sn.size() + dn.size());
    cuts.insert(cuts.end(), sn.begin(), sn.end());
    cuts.insert(cuts.end(), dn.begin(), dn.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](double a, double b) { return std::abs(a - b) <= tol; }),
               cuts.end());

    op.L = Eigen::MatrixXd::Zero(dst.n_nodes(), src.n_nodes());
    const double gp = 1.0 / std::sqrt(3.0);  // 2-point Gauss abscissae on [-1, 1]
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c];
        const double b = cuts[c + 1];
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (double xi : {-gp, gp}) {
            const double s = mid + half * xi;
            int de, se;
            double dl, dr, sl, sr;
            shape_at(dn, s, de, dl, dr);
            shape_at(sn, s, se, sl, sr);
            const double wq = half;  // unit Gauss weights
            op.L(de, se) += wq * dl * sl;
            op.L(de, se + 1) += wq * dl * sr;
            op.L(de + 1, se) += wq * dr * sl;
            op.L(de + 1, se + 1) += wq * dr * sr;
        }
    }

    op.P_dirichlet = Eigen::LLT<Eigen::MatrixXd>(op.W).solve(op.L);
    op.P_neumann = Eigen::LLT<Eigen::MatrixXd>(op.H).solve(op.L.transpose()).transpose();
    return op;
}

Eigen::VectorXd project_dirichlet(const TransferOperator& op, const Eigen::VectorXd& src_values) {
    if (op.kind == InterfaceKind::Point) {
        if (src_values.size() != 1) throw ValidationError("point transfer expects one value");
        return src_values;  // bit-identical copy on the degenerate path
    }
    if (src_values.size() != op.P_dirichlet.cols())
        throw ValidationError("source value count does not match the transfer operator");
    return op.P_dirichlet * src_values;
}

Eigen::VectorXd project_neumann(const TransferOperator& op, const Eigen::VectorXd& src_values) {
    if (op.kind == InterfaceKind::Point) {
        if (src_values.size() != 1) throw ValidationError("point transfer expects one value");
        return src_values;  // bit-identical copy on the degenerate path
    }
    if (src_values.size() != op.P_neumann.cols())
        throw ValidationError("source value count does not match the transfer operator");
    return op.P_neumann * src_values;
}

}  // namespace rodimpact
