#include "rodimpact/fem.hpp"

#include <cmath>
#include <utility>

namespace rodimpact {

Material::Material(double rho_, double E_, double A_) : rho(rho_), E(E_), A(A_) {
    if (!(rho > 0.0) || !(E > 0.0) || !(A > 0.0)) {
        throw ValidationError("material properties rho, E, A must all be positive");
    }
}

double Material::wave_speed() const { return std::sqrt(E / rho); }

Mesh1D::Mesh1D(std::vector<double> node_coords) : coords_(std::move(node_coords)) {
    if (coords_.size() < 2) {
        throw ValidationError("a mesh needs at least two nodes (one element)");
    }
    for (std::size_t i = 1; i < coords_.size(); ++i) {
        if (!(coords_[i] > coords_[i - 1])) {
            throw ValidationError("node coordinates must be strictly increasing");
        }
    }
}

Mesh1D Mesh1D::uniform(double x_left, double length, int n_elements) {
    if (n_elements < 1) {
        throw ValidationError("a mesh needs at least one element");
    }
    if (!(length > 0.0)) {
        throw ValidationError("mesh length must be positive");
    }
    std::vector<double> coords(static_cast<std::size_t>(n_elements) + 1);
    for (int i = 0; i <= n_elements; ++i) {
        coords[static_cast<std::size_t>(i)] =
            x_left + length * static_cast<double>(i) / static_cast<double>(n_elements);
    }
    return Mesh1D(std::move(coords));
}

double Mesh1D::min_element_length() const {
    double h = element_length(0);
    for (int e = 1; e < n_elements(); ++e) h = std::min(h, element_length(e));
    return h;
}

Eigen::VectorXd Mesh1D::reference_positions() const {
    return Eigen::Map<const Eigen::VectorXd>(coords_.data(),
                                             static_cast<Eigen::Index>(coords_.size()));
}

MassMatrix MassMatrix::lumped(Eigen::VectorXd diag) {
    MassMatrix m;
    m.lumped_ = true;
    m.diag_ = std::move(diag);
    return m;
}

MassMatrix MassMatrix::consistent(Eigen::MatrixXd dense) {
    MassMatrix m;
    m.lumped_ = false;
    m.dense_ = std::move(dense);
    return m;
}

int MassMatrix::size() const {
    return lumped_ ? static_cast<int>(diag_.size()) : static_cast<int>(dense_.rows());
}

double MassMatrix::total() const { return lumped_ ? diag_.sum() : dense_.sum(); }

Eigen::VectorXd MassMatrix::apply(const Eigen::VectorXd& v) const {
    return lumped_ ? (diag_.array() * v.array()).matrix() : Eigen::VectorXd(dense_ * v);
}

const Eigen::VectorXd& MassMatrix::diag() const { return diag_; }

const Eigen::MatrixXd& MassMatrix::dense() const { return dense_; }

Eigen::MatrixXd MassMatrix::as_dense() const {
    return lumped_ ? Eigen::MatrixXd(diag_.asDiagonal()) : dense_;
}

MassMatrix assemble_mass(const Mesh1D& mesh, const Material& mat, bool lumped) {
    const int n = mesh.n_nodes();
    if (lumped) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
        for (int e = 0; e < mesh.n_elements(); ++e) {
            const double half = mat.rho * mat.A * mesh.element_length(e) / 2.0;
            d(e) += half;
            d(e + 1) += half;
        }
        return MassMatrix::lumped(std::move(d));
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double c = mat.rho * mat.A * mesh.element_length(e) / 6.0;
        m(e, e) += 2.0 * c;
        m(e, e + 1) += c;
        m(e + 1, e) += c;
        m(e + 1, e + 1) += 2.0 * c;
    }
    return MassMatrix::consistent(std::move(m));
}

Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh, const Material& mat) {
    const int n = mesh.n_nodes();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const double c = mat.E * mat.A / mesh.element_length(e);
        k(e, e) += c;
        k(e, e + 1) -= c;
        k(e + 1, e) -= c;
        k(e + 1, e + 1) += c;
    }
    return k;
}

Eigen::VectorXd internal_force(const Eigen::MatrixXd& K, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& X) {
    return K * (x - X);
}

Energies energies(const MassMatrix& M, const Eigen::MatrixXd& K, const State& s,
                  const Eigen::VectorXd& X) {
    Energies e;
    e.kinetic = 0.5 * s.v.dot(M.apply(s.v));
    const Eigen::VectorXd u = s.x - X;
    e.potential = 0.5 * u.dot(K * u);
    return e;
}

double cfl_time_step(const Mesh1D& mesh, const Material& mat) {
    return mesh.min_element_length() / mat.wave_speed();
}

}  // namespace rodimpact
