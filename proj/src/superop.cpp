#include "qdcascade/superop.hpp"

#include "qdcascade/errors.hpp"

namespace qdc {

namespace {

constexpr double kDropTol = 1e-15;

struct Entry {
    int row;
    int col;
    Complex value;
};

std::vector<Entry> nonzeros(const QuantumOp& m) {
    std::vector<Entry> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > kDropTol) out.push_back({static_cast<int>(i), static_cast<int>(j), m(i, j)});
        }
    }
    return out;
}

} // namespace

SuperOp SuperOp::lindblad(const QuantumOp& a) { return lindblad(a, a); }

SuperOp SuperOp::lindblad(const QuantumOp& a, const QuantumOp& b) {
    const auto d = a.rows();
    const QuantumOp id = QuantumOp::Identity(d, d);
    const QuantumOp adb = a.adjoint() * b;
    SuperOp s;
    s.terms_.push_back({2.0, a, b.adjoint()});
    s.terms_.push_back({-1.0, adb, id});
    s.terms_.push_back({-1.0, id, adb});
    return s;
}

SuperOp SuperOp::hamiltonian(const QuantumOp& h) { return Complex(0.0, -1.0) * commutator(h); }

SuperOp SuperOp::commutator(const QuantumOp& o) {
    const QuantumOp id = QuantumOp::Identity(o.rows(), o.cols());
    SuperOp s;
    s.terms_.push_back({1.0, o, id});
    s.terms_.push_back({-1.0, id, o});
    return s;
}

SuperOp SuperOp::hc() const {
    SuperOp s;
    s.terms_.reserve(terms_.size());
    for (const auto& t : terms_) s.terms_.push_back({std::conj(t.coeff), t.right.adjoint(), t.left.adjoint()});
    return s;
}

SuperOp& SuperOp::operator+=(const SuperOp& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

SuperOp operator*(Complex c, SuperOp s) {
    for (auto& t : s.terms_) t.coeff *= c;
    return s;
}

QuantumOp SuperOp::apply(const QuantumOp& rho) const {
    QuantumOp out = QuantumOp::Zero(rho.rows(), rho.cols());
    for (const auto& t : terms_) out.noalias() += t.coeff * (t.left * rho * t.right);
    return out;
}

SparseSuperOp SuperOp::to_sparse(int dim) const {
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (const auto& t : terms_) {
        if (t.left.rows() != dim || t.right.rows() != dim) throw ArgumentError("superoperator dimension mismatch");
        const auto left = nonzeros(t.left);
        const auto right = nonzeros(t.right);
        for (const auto& r : right) {
            // (R^T)(r.col, r.row) = R(r.row, r.col)
            for (const auto& l : left) {
                triplets.emplace_back(r.col * dim + l.row, r.row * dim + l.col, t.coeff * r.value * l.value);
            }
        }
    }
    SparseSuperOp m(dim * dim, dim * dim);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > kDropTol; });
    return m;
}

} // namespace qdc
