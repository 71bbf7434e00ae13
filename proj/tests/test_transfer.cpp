#include <cmath>
#include <vector>

#include "doctest.h"
#include "rodimpact/errors.hpp"
#include "rodimpact/transfer.hpp"

using namespace rodimpact;

namespace {

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

TimeHistory ramp_history(double t0, double t1, double v0, double v1) {
    return TimeHistory({t0, t1}, {scalar(v0), scalar(v1)});
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("history validation") {
    CHECK_THROWS_AS(TimeHistory({0.0, 0.0}, {scalar(1), scalar(2)}), ValidationError);
    CHECK_THROWS_AS(TimeHistory({0.0, 1.0, 0.5}, {scalar(1), scalar(2), scalar(3)}),
                    ValidationError);
    CHECK_THROWS_AS(TimeHistory({0.0, 1.0}, {scalar(1)}), ValidationError);
    CHECK_NOTHROW(TimeHistory({0.0, 1.0}, {scalar(1), scalar(2)}));
}

TEST_CASE("interpolation is exact at stops and linear between them") {
    TimeHistory h({0.0, 0.5, 1.0}, {scalar(2.0), scalar(-4.0), scalar(10.0)});
    CHECK(interpolate_history(h, 0.0)[0] == 2.0);
    CHECK(interpolate_history(h, 0.5)[0] == -4.0);
    CHECK(interpolate_history(h, 1.0)[0] == 10.0);
    CHECK(interpolate_history(h, 0.25)[0] == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(interpolate_history(h, 0.75)[0] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("midpoint of a 0-to-1 ramp is one half") {
    TimeHistory h = ramp_history(0.0, 1.0, 0.0, 1.0);
    CHECK(interpolate_history(h, 0.5)[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("query at one third of an interval blends the bracketing stops 1/3-2/3") {
    const double interval = 2.5e-7;
    const double v0 = 7.0;
    const double v1 = -2.0;
    TimeHistory h({0.0, 0.5 * interval, 1.0 * interval}, {scalar(v0), scalar(v1), scalar(55.0)});
    const double expected = v0 * (1.0 - 2.0 / 3.0) + v1 * (2.0 / 3.0);
    CHECK(interpolate_history(h, interval / 3.0)[0] ==
          doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("queries beyond the snap tolerance raise OutOfInterval") {
    TimeHistory h = ramp_history(0.0, 1.0, 3.0, 9.0);
    // Within snap (1e-12 of the span): clamped to the end values.
    CHECK(interpolate_history(h, 1.0 + 5e-13)[0] == 9.0);
    CHECK(interpolate_history(h, -5e-13)[0] == 3.0);
    CHECK_THROWS_AS(interpolate_history(h, 1.0 + 5e-12), OutOfInterval);
    CHECK_THROWS_AS(interpolate_history(h, -5e-12), OutOfInterval);
}

TEST_CASE("interpolation carries whole field arrays") {
    Eigen::VectorXd a(3), b(3);
    a << 1.0, 2.0, 3.0;
    b << -1.0, 0.0, 5.0;
    TimeHistory h({0.0, 2.0}, {a, b});
    Eigen::VectorXd mid = interpolate_history(h, 1.0);
    CHECK(mid[0] == doctest::Approx(0.0));
    CHECK(mid[1] == doctest::Approx(1.0));
    CHECK(mid[2] == doctest::Approx(4.0));
}

TEST_CASE("interface mesh validation") {
    CHECK_THROWS_AS(InterfaceMesh::segment({0.0}), ValidationError);
    CHECK_THROWS_AS(InterfaceMesh::segment({0.0, 1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(InterfaceMesh::segment({0.0, 0.0, 1.0}), DegenerateInterface);
    CHECK(InterfaceMesh::point().n_nodes() == 1);
    CHECK(InterfaceMesh::segment({0.0, 0.5, 1.0}).n_nodes() == 3);
}

TEST_CASE("point-point operators are the identity and projections copy bits") {
    TransferOperator op = build_operators(InterfaceMesh::point(), InterfaceMesh::point());
    CHECK(op.P_dirichlet(0, 0) == 1.0);
    CHECK(op.P_neumann(0, 0) == 1.0);
    const double v = 0.1 + 0.2;  // not exactly 0.3; the copy must preserve the bits
    Eigen::VectorXd out_d = project_dirichlet(op, scalar(v));
    Eigen::VectorXd out_n = project_neumann(op, scalar(v));
    CHECK(out_d[0] == v);
    CHECK(out_n[0] == v);
}

TEST_CASE("mismatched interface kinds and spans are rejected") {
    CHECK_THROWS_AS(build_operators(InterfaceMesh::point(), InterfaceMesh::segment({0.0, 1.0})),
                    ValidationError);
    CHECK_THROWS_AS(
        build_operators(InterfaceMesh::segment({0.0, 1.0}), InterfaceMesh::segment({0.0, 1.5})),
        ValidationError);
}

TEST_CASE("hand-assembled matrices for a 1-element to 2-element pair") {
    TransferOperator op = build_operators(InterfaceMesh::segment({0.0, 1.0}),
                                          InterfaceMesh::segment({0.0, 0.5, 1.0}));
    Eigen::MatrixXd W(3, 3), L(3, 2), H(2, 2);
    W << 2, 1, 0, 1, 4, 1, 0, 1, 2;
    W /= 12.0;
    L << 5, 1, 6, 6, 1, 5;
    L /= 24.0;
    H << 2, 1, 1, 2;
    H /= 6.0;
    CHECK((op.W - W).lpNorm<Eigen::Infinity>() <= 1e-15);
    CHECK((op.L - L).lpNorm<Eigen::Infinity>() <= 1e-15);
    CHECK((op.H - H).lpNorm<Eigen::Infinity>() <= 1e-15);
    CHECK((op.W - op.W.transpose()).norm() == 0.0);
    CHECK((op.H - op.H.transpose()).norm() == 0.0);
}

TEST_CASE("identical segment meshes give an identity field transfer") {
    InterfaceMesh m = InterfaceMesh::segment({0.0, 0.2, 0.7, 1.0});
    TransferOperator op = build_operators(m, m);
    CHECK((op.P_dirichlet - Eigen::MatrixXd::Identity(4, 4)).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("field transfer reproduces linear fields exactly on non-matching pairs") {
    InterfaceMesh src = InterfaceMesh::segment({0.0, 0.5, 1.0});
    InterfaceMesh dst = InterfaceMesh::segment({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
    TransferOperator op = build_operators(src, dst);

    Eigen::VectorXd f_src(3);
    f_src << 0.0, 0.5, 1.0;  // samples of f(s) = s
    Eigen::VectorXd f_dst = project_dirichlet(op, f_src);
    for (int i = 0; i < 4; ++i)
        CHECK(f_dst[i] == doctest::Approx(dst.nodes()[i]).epsilon(1e-12));

    // Affine field on a nonuniform pair.
    InterfaceMesh src2 = InterfaceMesh::segment({-1.0, -0.3, 0.4, 2.0});
    InterfaceMesh dst2 = InterfaceMesh::segment({-1.0, 0.1, 2.0});
    TransferOperator op2 = build_operators(src2, dst2);
    Eigen::VectorXd g_src(4);
    for (int i = 0; i < 4; ++i) g_src[i] = 3.0 - 2.0 * src2.nodes()[i];
    Eigen::VectorXd g_dst = project_dirichlet(op2, g_src);
    for (int i = 0; i < 3; ++i)
        CHECK(g_dst[i] == doctest::Approx(3.0 - 2.0 * dst2.nodes()[i]).epsilon(1e-12));
}

TEST_CASE("field transfer satisfies the partition of unity") {
    const std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs = {
        {{0.0, 1.0}, {0.0, 0.5, 1.0}},
        {{0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.4, 1.0}},
        {{-2.0, -0.5, 3.0}, {-2.0, 0.0, 1.0, 2.0, 3.0}},
    };
    for (const auto& [s, d] : pairs) {
        TransferOperator op = build_operators(InterfaceMesh::segment(s), InterfaceMesh::segment(d));
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(op.P_dirichlet.cols());
        Eigen::VectorXd row_sums = op.P_dirichlet * ones;
        CHECK((row_sums - Eigen::VectorXd::Ones(row_sums.size())).lpNorm<Eigen::Infinity>() <=
              1e-12);
    }
}

TEST_CASE("field transfer preserves the integral; load transfer preserves the nodal sum") {
    InterfaceMesh src = InterfaceMesh::segment({0.0, 0.35, 0.6, 1.0});
    InterfaceMesh dst = InterfaceMesh::segment({0.0, 0.5, 1.0});
    TransferOperator op = build_operators(src, dst);

    Eigen::VectorXd T(4);
    T << 2.0, -1.0, 0.5, 3.0;

    // The L2 field projection W⁻¹L conserves the mass-weighted integral
    // 1ᵀW(P_dirichlet T) = 1ᵀH T (total load of the interpolated field).
    const double dst_integral =
        (op.W * project_dirichlet(op, T)).sum();
    const double src_integral = (op.H * T).sum();
    CHECK(dst_integral == doctest::Approx(src_integral).epsilon(1e-12));

    // The load projection L·H⁻¹ conserves the plain nodal sum (total force
    // when the entries are nodal loads).
    CHECK(project_neumann(op, T).sum() == doctest::Approx(T.sum()).epsilon(1e-12));

    // Both hold for a uniform field as well.
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(4, 4.2);
    CHECK((op.W * project_dirichlet(op, uniform)).sum() ==
          doctest::Approx((op.H * uniform).sum()).epsilon(1e-12));
    CHECK(project_neumann(op, uniform).sum() ==
          doctest::Approx(uniform.sum()).epsilon(1e-12));
    CHECK(project_dirichlet(op, Eigen::VectorXd::Zero(4)).norm() == 0.0);
}

TEST_CASE("round trips of the field transfer are non-expansive in the mass norms") {
    InterfaceMesh src = InterfaceMesh::segment({0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    InterfaceMesh dst = InterfaceMesh::segment({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0});
    TransferOperator fwd = build_operators(src, dst);
    TransferOperator bwd = build_operators(dst, src);

    Eigen::VectorXd f(6);
    for (int i = 0; i < 6; ++i) f[i] = std::sin(2.0 * M_PI * src.nodes()[i]);
    auto norm_h = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(fwd.H * v)); };
    auto norm_w = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(fwd.W * v)); };

    Eigen::VectorXd g = project_dirichlet(fwd, f);
    Eigen::VectorXd f1 = project_dirichlet(bwd, g);
    Eigen::VectorXd g1 = project_dirichlet(fwd, f1);
    const double slack = 1.0 + 1e-12;
    CHECK(norm_w(g) <= norm_h(f) * slack);
    CHECK(norm_h(f1) <= norm_w(g) * slack);
    CHECK(norm_w(g1) <= norm_h(f1) * slack);
}

TEST_CASE("projection rejects mismatched value counts") {
    TransferOperator op = build_operators(InterfaceMesh::segment({0.0, 1.0}),
                                          InterfaceMesh::segment({0.0, 0.5, 1.0}));
    CHECK_THROWS_AS(project_dirichlet(op, Eigen::VectorXd::Zero(3)), ValidationError);
    CHECK_THROWS_AS(project_neumann(op, Eigen::VectorXd::Zero(5)), ValidationError);
}

}  // TEST_SUITE
