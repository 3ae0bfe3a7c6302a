#include <doctest.h>

#include <random>

#include "qdcascade/errors.hpp"
#include "qdcascade/hilbert.hpp"
#include "qdcascade/superop.hpp"
#include "random_states.hpp"

using namespace qdc;

namespace {

double max_abs(const QuantumOp& m) { return m.cwiseAbs().maxCoeff(); }

QuantumOp commutator(const QuantumOp& a, const QuantumOp& b) { return a * b - b * a; }

} // namespace

TEST_CASE("layout indexing") {
    const HilbertLayout l(2);
    CHECK(l.total_dim() == 36);
    CHECK(HilbertLayout(3).total_dim() == 64);
    for (int i = 0; i < l.total_dim(); ++i) {
        const auto lab = l.labels(i);
        CHECK(l.index(lab.qd, lab.n_H, lab.n_V) == i);
    }
    CHECK(l.index(QdLevel::G, 0, 0) == 0);
    CHECK(l.index(QdLevel::H, 1, 2) == (1 * 3 + 1) * 3 + 2);
    CHECK_THROWS(HilbertLayout(0));
    CHECK_THROWS(l.index(QdLevel::B, 3, 0));
}

TEST_CASE("truncated bosonic operators") {
    const QuantumOp a = annihilation(3);
    const QuantumOp n = dagger(a) * a;
    for (int k = 0; k <= 3; ++k) CHECK(n(k, k).real() == doctest::Approx(k));
    const QuantumOp c = commutator(a, dagger(a));
    // [a, a^dag] = 1 except on the truncation edge
    for (int k = 0; k < 3; ++k) CHECK(c(k, k).real() == doctest::Approx(1.0));
    CHECK(c(3, 3).real() == doctest::Approx(-3.0));
}

TEST_CASE("dot transition operators") {
    const HilbertLayout l(2);
    const ElementaryOps ops = build_elementary_ops(l);
    const int b = l.index(QdLevel::B, 0, 0), h = l.index(QdLevel::H, 0, 0), g = l.index(QdLevel::G, 0, 0);
    CHECK(ops.sigma_H1(h, b) == Complex(1.0));
    CHECK(ops.sigma_H2(g, h) == Complex(1.0));
    CHECK(max_abs(ops.sigma_H2 * ops.sigma_H1 - ops.sigma_V2 * ops.sigma_V1) == 0.0);
    CHECK(max_abs(ops.sigma_H1 * ops.sigma_H1) == 0.0);
    QuantumOp sum = QuantumOp::Zero(36, 36);
    for (const auto& p : ops.projector) sum += p;
    CHECK(max_abs(sum - ops.identity) == 0.0);
    // different subsystems commute
    CHECK(max_abs(commutator(ops.a_H, ops.a_V)) == 0.0);
    CHECK(max_abs(commutator(ops.a_H, ops.sigma_H1)) == 0.0);
    CHECK(max_abs(commutator(ops.a_V, ops.sigma_V2)) == 0.0);
    CHECK(max_abs(ops.a(Pol::V) - ops.a_V) == 0.0);
}

TEST_CASE("kron and embedding") {
    const QuantumOp x = (QuantumOp(2, 2) << 0, 1, 1, 0).finished();
    const QuantumOp z = (QuantumOp(2, 2) << 1, 0, 0, -1).finished();
    const QuantumOp k = kron(x, z);
    CHECK(k(0, 2) == Complex(1.0));
    CHECK(k(1, 3) == Complex(-1.0));
    const HilbertLayout l(1);
    CHECK(embed_mode(l, Pol::H, annihilation(1)).rows() == l.total_dim());
    CHECK_THROWS_AS(expectation(QuantumOp::Identity(3, 3), QuantumOp::Identity(4, 4)), ArgumentError);
}

TEST_CASE("superoperator algebra") {
    std::mt19937 rng(7);
    const int d = 6;
    const QuantumOp a = test::random_matrix(d, rng), b = test::random_matrix(d, rng), h0 = test::random_matrix(d, rng);
    const QuantumOp h = h0 + h0.adjoint();
    const QuantumOp rho = test::random_density(d, rng);

    const QuantumOp la = SuperOp::lindblad(a).apply(rho);
    CHECK(max_abs(la - (2.0 * a * rho * a.adjoint() - a.adjoint() * a * rho - rho * a.adjoint() * a)) < 1e-12);
    CHECK(std::abs(la.trace()) < 1e-12);
    CHECK(max_abs(la - la.adjoint()) < 1e-12);

    const QuantumOp lab = SuperOp::lindblad(a, b).apply(rho);
    const QuantumOp lba = SuperOp::lindblad(b, a).apply(rho);
    CHECK(max_abs(lab - (2.0 * a * rho * b.adjoint() - a.adjoint() * b * rho - rho * a.adjoint() * b)) < 1e-12);
    // (L[a,b] rho)^dag = L[b,a] rho for Hermitian rho; the pair is trace free
    CHECK(max_abs(lab.adjoint() - lba) < 1e-12);
    CHECK(std::abs((lab + lba).trace()) < 1e-12);

    const QuantumOp hh = SuperOp::hamiltonian(h).apply(rho);
    CHECK(max_abs(hh - Complex(0, -1) * (h * rho - rho * h)) < 1e-12);

    const SuperOp s = SuperOp::lindblad(a, b) + Complex(0.3, 0.2) * SuperOp::commutator(h0);
    const QuantumOp x = test::random_matrix(d, rng);
    CHECK(max_abs(s.hc().apply(x) - s.apply(x.adjoint()).adjoint()) < 1e-12);
    const QuantumOp diff = (s - s).apply(x);
    CHECK(max_abs(diff) < 1e-12);
}

TEST_CASE("sparse compilation matches direct application") {
    std::mt19937 rng(11);
    const int d = 5;
    const SuperOp s = SuperOp::lindblad(test::random_matrix(d, rng), test::random_matrix(d, rng)) +
                      SuperOp::hamiltonian(test::random_matrix(d, rng)) +
                      Complex(0.0, 2.0) * SuperOp::commutator(test::random_matrix(d, rng));
    const QuantumOp x = test::random_matrix(d, rng);
    const SparseSuperOp m = s.to_sparse(d);
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
    const Eigen::VectorXcd w = m * v;
    const QuantumOp y = Eigen::Map<const QuantumOp>(w.data(), d, d);
    CHECK(max_abs(y - s.apply(x)) < 1e-11);
}
