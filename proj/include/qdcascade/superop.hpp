#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "qdcascade/hilbert.hpp"

namespace qdc {

using SparseSuperOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// rho -> coeff * left * rho * right
struct Sandwich {
    Complex coeff;
    QuantumOp left;
    QuantumOp right;
};

// Linear map on density matrices kept as a sum of sandwiches, so it can be
// applied directly to a matrix or compiled to a sparse matrix on vec(rho).
class SuperOp {
public:
    SuperOp() = default;

    // L(a) rho = 2 a rho a^dag - a^dag a rho - rho a^dag a
    static SuperOp lindblad(const QuantumOp& a);
    // L(a, b) rho = 2 a rho b^dag - a^dag b rho - rho a^dag b
    static SuperOp lindblad(const QuantumOp& a, const QuantumOp& b);
    // -i [h, rho]
    static SuperOp hamiltonian(const QuantumOp& h);
    // o rho - rho o
    static SuperOp commutator(const QuantumOp& o);

    // The map rho -> (S rho^dag)^dag; S + S.hc() preserves Hermiticity.
    SuperOp hc() const;

    SuperOp& operator+=(const SuperOp& other);
    friend SuperOp operator+(SuperOp a, const SuperOp& b) { return a += b; }
    friend SuperOp operator-(SuperOp a, const SuperOp& b) { return a += Complex(-1.0) * b; }
    friend SuperOp operator*(Complex c, SuperOp s);

    QuantumOp apply(const QuantumOp& rho) const;

    // Matrix acting on column-major vec(rho): vec(L rho R) = (R^T kron L) vec(rho).
    SparseSuperOp to_sparse(int dim) const;

    const std::vector<Sandwich>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<Sandwich> terms_;
};

} // namespace qdc
