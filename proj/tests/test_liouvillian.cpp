#include <doctest.h>

#include <random>

#include "qdcascade/errors.hpp"
#include "qdcascade/liouvillian.hpp"
#include "qdcascade/params.hpp"
#include "qdcascade/phonon_kernel.hpp"
#include "qdcascade/units.hpp"
#include "random_states.hpp"
#include "support.hpp"

using namespace qdc;
using namespace qdc::model;

namespace {

double max_abs(const QuantumOp& m) { return m.cwiseAbs().maxCoeff(); }

const LiouvillianTerm& find_term(const MasterEquation& me, const std::string& prefix) {
    for (const auto& t : me.terms()) {
        if (t.label.rfind(prefix, 0) == 0) return t;
    }
    throw std::runtime_error("no term " + prefix);
}

} // namespace

TEST_CASE("Gaussian pulse with switch-off") {
    const PhysicalParams p = default_params();
    const PulseShape s = PulseShape::from_params(p);
    CHECK(s(p.t_0) == doctest::Approx(p.omega_H0));
    CHECK(s(p.t_0 + p.t_p) == doctest::Approx(p.omega_H0 * std::exp(-1.0)));
    CHECK(s(p.t_gate) == 0.0);
    CHECK(s(p.t_gate + 5.0) == 0.0);
}

TEST_CASE("polaron Hamiltonian") {
    const PhysicalParams p = default_params();
    const HilbertLayout l(p.n_max);
    const ElementaryOps ops = build_elementary_ops(l);
    const QuantumOp h = build_hamiltonian(p, 0.9, p.t_0, ops);
    CHECK(max_abs(h - h.adjoint()) == 0.0);
    const int ih = l.index(QdLevel::H, 0, 0), iv = l.index(QdLevel::V, 0, 0), ib = l.index(QdLevel::B, 0, 0);
    const int ig = l.index(QdLevel::G, 0, 0);
    CHECK(h(ih, ih).real() == doctest::Approx(p.detuning));
    CHECK(h(iv, iv).real() == doctest::Approx(p.detuning - p.delta_fss));
    CHECK(h(ib, ib).real() == 0.0);
    // drive <B> Omega / 2 on G <-> H and H <-> B
    CHECK(h(ig, ih).real() == doctest::Approx(0.45 * p.omega_H0));
    CHECK(h(ih, ib).real() == doctest::Approx(0.45 * p.omega_H0));
    // cavity <B> g: |B,0,0> -> |H,1,0>
    CHECK(h(l.index(QdLevel::H, 1, 0), ib).real() == doctest::Approx(0.9 * p.g));
    CHECK(h(l.index(QdLevel::V, 1, 0), ib).real() == 0.0);
    CHECK(h(l.index(QdLevel::V, 0, 1), ib).real() == doctest::Approx(0.9 * p.g));
}

TEST_CASE("model toggles require phonons") {
    ModelConfig c;
    c.phonons_enabled = false;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    PhysicalParams p = default_params();
    p.phonons_enabled = false;
    CHECK_NOTHROW(ModelConfig::from_params(p).validate());
    const ElementaryOps ops = build_elementary_ops(HilbertLayout(2));
    const auto terms = build_liouvillian_terms(p, nullptr, ModelConfig::from_params(p), ops);
    CHECK(terms.size() == 11);
    for (const auto& t : terms) CHECK_FALSE(t.phonon);
    p.phonons_enabled = true;
    CHECK_THROWS_AS(build_liouvillian_terms(p, nullptr, ModelConfig::from_params(p), ops), ConfigError);
}

TEST_CASE("generator preserves trace and Hermiticity") {
    std::mt19937 rng(3);
    for (double t_k : {4.0, 20.0}) {
        for (int n_max : {2, 3}) {
            PhysicalParams p = default_params();
            p.temperature = t_k;
            p.n_max = n_max;
            const auto kernel = phonon::build_kernel(p);
            const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
            const QuantumOp rho = test::random_density(me.dim(), rng);
            for (double t : {0.0, p.t_0 - 3.0, p.t_0, p.t_gate + 10.0}) {
                const QuantumOp d = me.rhs(rho, t);
                CAPTURE(t_k);
                CAPTURE(t);
                CHECK(std::abs(d.trace()) < 1e-10);
                CHECK(max_abs(d - d.adjoint()) < 1e-10);

                const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
                Eigen::VectorXcd dv;
                me.apply(t, v, dv);
                const QuantumOp ds = Eigen::Map<const QuantumOp>(dv.data(), me.dim(), me.dim());
                CHECK(max_abs(ds - d) < 1e-12 * std::max(1.0, max_abs(d)));
            }
        }
    }
}

TEST_CASE("generator is static after the switch-off") {
    const PhysicalParams p = default_params();
    const auto kernel = phonon::build_kernel(p);
    const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
    std::mt19937 rng(5);
    const QuantumOp rho = test::random_density(me.dim(), rng);
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
    Eigen::VectorXcd a, b;
    me.apply(me.static_after() + 1.0, v, a);
    b = me.static_generator() * v;
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-14);
    me.apply(p.t_0, v, a);
    CHECK((a - b).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("pump-assisted coefficients track the pulse exactly") {
    const PhysicalParams p = default_params();
    const auto kernel = phonon::build_kernel(p);
    const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
    const auto& plus_omega = find_term(me, "Gamma+_Omega");
    const auto& plus_h = find_term(me, "Gamma+_H");
    const auto& minus_omega = find_term(me, "Gamma-_Omega");
    const auto& minus_h = find_term(me, "Gamma-_H");
    for (double t : {5.0, 18.0, p.t_0, 30.0}) {
        const double omega = me.pulse()(t);
        const double expected = (omega / (2.0 * p.g)) * (omega / (2.0 * p.g));
        CHECK(test::rel_diff(me.coefficient(plus_omega, t) / me.coefficient(plus_h, t), expected) < 1e-14);
        CHECK(test::rel_diff(me.coefficient(minus_omega, t) / me.coefficient(minus_h, t), expected) < 1e-14);
    }
    CHECK(me.coefficient(plus_omega, p.t_gate + 1.0) == 0.0);
    const auto table = coefficient_table(me, p.t_0);
    CHECK(table.size() == me.terms().size());
}

TEST_CASE("phonon terms vanish without coupling") {
    PhysicalParams p = default_params();
    p.alpha_p = 0.0;
    const auto kernel = phonon::build_kernel(p);
    CHECK(kernel.b_avg == 1.0);
    const MasterEquation with = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
    PhysicalParams off = p;
    off.phonons_enabled = false;
    const MasterEquation without = MasterEquation::build(off, nullptr, ModelConfig::from_params(off));
    std::mt19937 rng(9);
    const QuantumOp rho = test::random_density(with.dim(), rng);
    CHECK(max_abs(with.rhs(rho, p.t_0) - without.rhs(rho, p.t_0)) < 1e-14);
}
