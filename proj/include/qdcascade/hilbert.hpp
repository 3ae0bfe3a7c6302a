#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace qdc {

using Complex = std::complex<double>;
using QuantumOp = Eigen::MatrixXcd;

// Dot levels in basis order.
enum class QdLevel : int { G = 0, H = 1, V = 2, B = 3 };
enum class Pol : int { H = 0, V = 1 };

inline constexpr int kQdDim = 4;

// (dot) x Fock_H(n_max) x Fock_V(n_max), flattened row-major as (qd, n_H, n_V):
// index = (qd * (n_max+1) + n_H) * (n_max+1) + n_V.
class HilbertLayout {
public:
    explicit HilbertLayout(int n_max);

    int n_max() const { return n_max_; }
    int fock_dim() const { return n_max_ + 1; }
    int total_dim() const { return kQdDim * fock_dim() * fock_dim(); }

    int index(QdLevel qd, int n_H, int n_V) const;
    struct Labels {
        QdLevel qd;
        int n_H;
        int n_V;
    };
    Labels labels(int index) const;

private:
    int n_max_;
};

QuantumOp dagger(const QuantumOp& op);
QuantumOp kron(const QuantumOp& a, const QuantumOp& b);

// Embeds single-subsystem matrices with identities on the other factors.
QuantumOp embed_qd(const HilbertLayout& layout, const QuantumOp& qd_op);
QuantumOp embed_mode(const HilbertLayout& layout, Pol mode, const QuantumOp& fock_op);

// Truncated annihilation operator sum_n sqrt(n+1) |n><n+1| on n_max+1 levels.
QuantumOp annihilation(int n_max);

// |to><from| on the dot.
QuantumOp qd_transition(QdLevel to, QdLevel from);

struct ElementaryOps {
    QuantumOp identity;
    QuantumOp a_H, a_V;
    QuantumOp sigma_H1; // |H><B|
    QuantumOp sigma_H2; // |G><H|
    QuantumOp sigma_V1; // |V><B|
    QuantumOp sigma_V2; // |G><V|
    std::array<QuantumOp, kQdDim> projector; // indexed by QdLevel

    const QuantumOp& a(Pol p) const { return p == Pol::H ? a_H : a_V; }
    const QuantumOp& proj(QdLevel s) const { return projector[static_cast<int>(s)]; }
};

ElementaryOps build_elementary_ops(const HilbertLayout& layout);

// Tr(op * rho). Throws ArgumentError on dimension mismatch.
Complex expectation(const QuantumOp& op, const QuantumOp& rho);

} // namespace qdc
