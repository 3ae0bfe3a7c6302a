#include "qdcascade/hilbert.hpp"

#include <cmath>

#include "qdcascade/errors.hpp"

namespace qdc {

HilbertLayout::HilbertLayout(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw ArgumentError("photon truncation n_max must be >= 1");
}

int HilbertLayout::index(QdLevel qd, int n_H, int n_V) const {
    if (n_H < 0 || n_H > n_max_ || n_V < 0 || n_V > n_max_) throw ArgumentError("photon number out of range");
    return (static_cast<int>(qd) * fock_dim() + n_H) * fock_dim() + n_V;
}

HilbertLayout::Labels HilbertLayout::labels(int index) const {
    if (index < 0 || index >= total_dim()) throw ArgumentError("flat index out of range");
    const int f = fock_dim();
    return {static_cast<QdLevel>(index / (f * f)), (index / f) % f, index % f};
}

QuantumOp dagger(const QuantumOp& op) { return op.adjoint(); }

QuantumOp kron(const QuantumOp& a, const QuantumOp& b) {
    QuantumOp out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

QuantumOp embed_qd(const HilbertLayout& layout, const QuantumOp& qd_op) {
    if (qd_op.rows() != kQdDim || qd_op.cols() != kQdDim) throw ArgumentError("dot operator must be 4x4");
    const int f = layout.fock_dim();
    return kron(qd_op, QuantumOp::Identity(f * f, f * f));
}

QuantumOp embed_mode(const HilbertLayout& layout, Pol mode, const QuantumOp& fock_op) {
    const int f = layout.fock_dim();
    if (fock_op.rows() != f || fock_op.cols() != f) throw ArgumentError("Fock operator has wrong dimension");
    const QuantumOp id_f = QuantumOp::Identity(f, f);
    const QuantumOp modes = mode == Pol::H ? kron(fock_op, id_f) : kron(id_f, fock_op);
    return kron(QuantumOp::Identity(kQdDim, kQdDim), modes);
}

QuantumOp annihilation(int n_max) {
    QuantumOp a = QuantumOp::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n < n_max; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    return a;
}

QuantumOp qd_transition(QdLevel to, QdLevel from) {
    QuantumOp m = QuantumOp::Zero(kQdDim, kQdDim);
    m(static_cast<int>(to), static_cast<int>(from)) = 1.0;
    return m;
}

ElementaryOps build_elementary_ops(const HilbertLayout& layout) {
    ElementaryOps ops;
    const int d = layout.total_dim();
    ops.identity = QuantumOp::Identity(d, d);
    const QuantumOp a = annihilation(layout.n_max());
    ops.a_H = embed_mode(layout, Pol::H, a);
    ops.a_V = embed_mode(layout, Pol::V, a);
    ops.sigma_H1 = embed_qd(layout, qd_transition(QdLevel::H, QdLevel::B));
    ops.sigma_H2 = embed_qd(layout, qd_transition(QdLevel::G, QdLevel::H));
    ops.sigma_V1 = embed_qd(layout, qd_transition(QdLevel::V, QdLevel::B));
    ops.sigma_V2 = embed_qd(layout, qd_transition(QdLevel::G, QdLevel::V));
    for (int s = 0; s < kQdDim; ++s) {
        ops.projector[s] = embed_qd(layout, qd_transition(static_cast<QdLevel>(s), static_cast<QdLevel>(s)));
    }
    return ops;
}

Complex expectation(const QuantumOp& op, const QuantumOp& rho) {
    if (op.rows() != rho.rows() || op.cols() != rho.cols() || rho.rows() != rho.cols()) {
        throw ArgumentError("operator and density matrix dimensions differ");
    }
    // Tr(A rho) = sum_ij A_ij rho_ji
    return (op.array() * rho.transpose().array()).sum();
}

} // namespace qdc
