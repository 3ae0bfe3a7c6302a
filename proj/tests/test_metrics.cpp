#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qdcascade/errors.hpp"
#include "qdcascade/metrics.hpp"
#include "qdcascade/params.hpp"
#include "qdcascade/units.hpp"
#include "random_states.hpp"
#include "support.hpp"

using namespace qdc;

namespace {

using Vec4 = Eigen::Vector4cd;
using Mat4 = Eigen::Matrix4cd;

Mat4 projector(const Vec4& v) { return v.normalized() * v.normalized().adjoint(); }

Vec4 ket(std::complex<double> hh, std::complex<double> hv, std::complex<double> vh, std::complex<double> vv) {
    Vec4 v;
    v << hh, hv, vh, vv;
    return v.normalized();
}

// Bell basis: Phi+, Phi-, Psi+, Psi-.
std::array<Vec4, 4> bell_basis() {
    return {ket(1, 0, 0, 1), ket(1, 0, 0, -1), ket(0, 1, 1, 0), ket(0, 1, -1, 0)};
}

// Independent route: spin-flipped state and the Hermitian R matrix.
double concurrence_oracle(const Mat4& rho) {
    Eigen::Matrix2cd sy;
    sy << 0.0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0.0;
    Mat4 yy;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) yy(2 * a + c, 2 * b + d) = sy(a, b) * sy(c, d);
    const Mat4 tilde = yy * rho.conjugate() * yy;
    Eigen::SelfAdjointEigenSolver<Mat4> es_rho(rho);
    Eigen::Vector4d sq = es_rho.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Mat4 root = es_rho.eigenvectors() * sq.asDiagonal() * es_rho.eigenvectors().adjoint();
    const Mat4 r = root * tilde * root;
    Eigen::SelfAdjointEigenSolver<Mat4> es_r(0.5 * (r + r.adjoint()));
    Eigen::Vector4d l = es_r.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(l.data(), l.data() + 4, std::greater<>());
    return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

// Error projections enumerated explicitly in both bases.
double qber_oracle(const Mat4& rho) {
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<Eigen::Vector2cd, 2> hv = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
    const std::array<Eigen::Vector2cd, 2> da = {Eigen::Vector2cd(s, s), Eigen::Vector2cd(s, -s)};
    double err = 0.0;
    for (const auto* basis : {&hv, &da}) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                if (i == j) continue;
                Vec4 o;
                o << (*basis)[i][0] * (*basis)[j][0], (*basis)[i][0] * (*basis)[j][1],
                    (*basis)[i][1] * (*basis)[j][0], (*basis)[i][1] * (*basis)[j][1];
                err += (o.adjoint() * rho * o)(0, 0).real();
            }
        }
    }
    return 0.5 * err;
}

Mat4 random_two_qubit(std::mt19937& rng, int rank) {
    Mat4 rho = Mat4::Zero();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < rank; ++k) {
        const Eigen::MatrixXcd x = test::random_matrix(4, rng).col(0);
        rho += u(rng) * projector(Vec4(x));
    }
    return rho / rho.trace().real();
}

} // namespace

TEST_CASE("concurrence oracles") {
    const auto bell = bell_basis();
    for (const auto& b : bell) CHECK(concurrence(projector(b)).concurrence == doctest::Approx(1.0).epsilon(1e-10));
    const EntanglementReport mixed = concurrence(Mat4::Identity() / 4.0);
    CHECK(mixed.concurrence == 0.0);
    CHECK(mixed.eigenvalues[0] == doctest::Approx(1.0 / 16.0));
    CHECK_FALSE(mixed.peres_entangled);
    CHECK(concurrence(projector(ket(1, 0, 0, 0))).concurrence == doctest::Approx(0.0).epsilon(1e-12));

    // Werner family: C = max(0, (3p - 1)/2).
    for (double p : {0.2, 1.0 / 3.0, 0.5, 0.8}) {
        const Mat4 w = p * projector(bell[3]) + (1.0 - p) * Mat4::Identity() / 4.0;
        CAPTURE(p);
        CHECK(concurrence(w).concurrence == doctest::Approx(std::max(0.0, (3.0 * p - 1.0) / 2.0)).epsilon(1e-10));
    }
    const Mat4 phi = projector(bell[0]);
    const EntanglementReport r = concurrence(phi);
    CHECK(r.gamma_coherence.real() == doctest::Approx(0.5));
    CHECK(r.peres_entangled);
    CHECK(r.eigenvalues[0] >= r.eigenvalues[1]);
}

TEST_CASE("concurrence agrees with the spin-flip oracle") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const Mat4 rho = random_two_qubit(rng, 1 + trial % 3);
        const double c = concurrence(rho).concurrence;
        CHECK(c >= 0.0);
        CHECK(c <= 1.0 + 1e-12);
        CHECK(std::abs(c - concurrence_oracle(rho)) < 1e-7);
    }
}

TEST_CASE("local unitary invariance") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Mat4 rho = random_two_qubit(rng, 2);
        const Eigen::MatrixXcd ua = test::random_unitary(2, rng), ub = test::random_unitary(2, rng);
        Mat4 u;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) u(2 * a + c, 2 * b + d) = ua(a, b) * ub(c, d);
        const Mat4 rotated = u * rho * u.adjoint();
        CHECK(concurrence(rotated).concurrence == doctest::Approx(concurrence(rho).concurrence).epsilon(1e-8));
    }
}

TEST_CASE("concurrence rejects invalid input") {
    // indefinite diagonal: M = diag(ad, bc, cb, da) with bc < 0
    Mat4 bad = Mat4::Zero();
    bad.diagonal() << 0.8, 0.5, -0.5, 0.2;
    test::WarningCapture w;
    CHECK_THROWS_AS(concurrence(bad), NumericalError);
}

TEST_CASE("qber oracles") {
    const auto bell = bell_basis();
    CHECK(qber(projector(bell[0])) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(qber(Mat4::Identity() / 4.0) == doctest::Approx(0.5));
    CHECK(qber(projector(bell[3])) == doctest::Approx(1.0));

    // Bell-diagonal: H/V errors from Psi+-, D/A errors from Phi- and Psi-.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::array<double, 4> w{};
        double sum = 0.0;
        for (double& x : w) sum += (x = u(rng));
        Mat4 rho = Mat4::Zero();
        for (int k = 0; k < 4; ++k) rho += (w[k] / sum) * projector(bell[k]);
        const double expected = 0.5 * (w[2] + w[3] + w[1] + w[3]) / sum;
        CHECK(qber(rho) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(qber(rho) == doctest::Approx(qber_oracle(rho)).epsilon(1e-12));
        CHECK(concurrence(rho).concurrence ==
              doctest::Approx(std::max(0.0, 2.0 * *std::max_element(w.begin(), w.end()) / sum - 1.0)).epsilon(1e-9));
    }
    for (int trial = 0; trial < 20; ++trial) {
        const Mat4 rho = random_two_qubit(rng, 3);
        const double q = qber(rho);
        CHECK(q >= 0.0);
        CHECK(q <= 1.0);
        CHECK(q == doctest::Approx(qber_oracle(rho)).epsilon(1e-12));
    }
}

TEST_CASE("ac-Stark shifts") {
    PhysicalParams p = default_params();
    p.g = units::ueV_to_rate(70.0);
    p.detuning = units::meV_to_rate(1.1);
    p.delta_fss = units::ueV_to_rate(20.0);
    const StarkReport one = stark_shifts(p, 1.0, 1.0, 0.0);
    CHECK(one.delta_HH * 1e3 == doctest::Approx(2.0 * 0.07 * 0.07 / 1.1 * 1e3).epsilon(1e-9));
    CHECK(one.delta_HH * 1e3 == doctest::Approx(8.9).epsilon(0.01));
    CHECK(one.delta_VV == 0.0);
    CHECK(one.splitting == doctest::Approx(one.delta_HH));

    const StarkReport none = stark_shifts(p, 0.9, 0.0, 0.0);
    CHECK(none.delta_HH == 0.0);
    CHECK(none.delta_VV == 0.0);

    const StarkReport full = stark_shifts(p, 0.8, 0.3, 0.2);
    const StarkReport half = stark_shifts(p, 0.4, 0.3, 0.2);
    CHECK(half.delta_HH == doctest::Approx(full.delta_HH / 4.0));
    CHECK(half.delta_VV == doctest::Approx(full.delta_VV / 4.0));
    CHECK(full.delta_VV == doctest::Approx(2.0 * 0.2 * std::pow(0.8 * 0.07, 2) / (1.1 - 0.02)));
    CHECK(full.delta_HH >= 0.0);
    CHECK(full.delta_VV >= 0.0);

    p.delta_fss = p.detuning;
    CHECK_THROWS_AS(stark_shifts(p, 1.0, 1.0, 1.0), ArgumentError);
    p.detuning = 0.0;
    p.delta_fss = 0.0;
    CHECK_THROWS_AS(stark_shifts(p, 1.0, 1.0, 1.0), ArgumentError);
}
