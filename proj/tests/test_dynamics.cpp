#include <doctest.h>

#include <cmath>

#include "qdcascade/dynamics.hpp"
#include "qdcascade/errors.hpp"
#include "qdcascade/integrator.hpp"
#include "qdcascade/liouvillian.hpp"
#include "qdcascade/params.hpp"
#include "qdcascade/phonon_kernel.hpp"
#include "qdcascade/units.hpp"
#include "support.hpp"

using namespace qdc;
using namespace qdc::model;

namespace {

PhysicalParams silent_params() {
    PhysicalParams p = default_params();
    p.phonons_enabled = false;
    p.g = p.kappa = p.gamma_B = p.gamma_E = p.gamma_B_deph = p.gamma_E_deph = p.omega_H0 = 0.0;
    return p;
}

MasterEquation plain_model(const PhysicalParams& p) {
    return MasterEquation::build(p, nullptr, ModelConfig::from_params(p));
}

double pop(const DensityState& s, const ElementaryOps& ops, QdLevel q) { return expectation(ops.proj(q), s).real(); }

} // namespace

TEST_CASE("integrator reproduces an oscillator and lands on the endpoint") {
    DormandPrince dp;
    Eigen::VectorXcd y(2);
    y << 1.0, Complex(0.0, 1.0);
    const double w = 2.3;
    dp.integrate([w](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = Complex(0.0, w) * x; }, 0.0,
                 10.0, y);
    CHECK(std::abs(y[0] - std::polar(1.0, w * 10.0)) < 1e-7);
    CHECK(dp.stats().accepted > 0);
    CHECK_THROWS_AS(dp.integrate([](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = x; }, 1.0, 0.0, y),
                    ArgumentError);
}

TEST_CASE("integrator reports step underflow") {
    IntegratorOptions o;
    o.min_step = 1e-2;
    o.initial_step = 0.5;
    DormandPrince dp(o);
    Eigen::VectorXcd y = Eigen::VectorXcd::Ones(1);
    try {
        dp.integrate([](double, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) { dx = -1e5 * x; }, 0.0, 1.0, y);
        FAIL("expected step underflow");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
}

TEST_CASE("no couplings: the state is stationary") {
    const PhysicalParams p = silent_params();
    const MasterEquation me = plain_model(p);
    DensityState rho0 = pure_state(me.layout(), QdLevel::G, 0, 0);
    const int b = me.layout().index(QdLevel::B, 1, 0);
    rho0.matrix *= 0.5;
    rho0.matrix(b, b) = 0.5;
    const Trajectory tr = evolve(me, rho0, 100.0);
    for (const auto& s : tr.states) CHECK((s.matrix - rho0.matrix).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cavity decay of one photon") {
    PhysicalParams p = silent_params();
    p.kappa = units::ueV_to_rate(65.0);
    const MasterEquation me = plain_model(p);
    const ElementaryOps ops = build_elementary_ops(me.layout());
    const QuantumOp n_H = ops.a_H.adjoint() * ops.a_H;
    const DensityState rho0 = pure_state(me.layout(), QdLevel::G, 1, 0);
    const double horizon = 3.0 / p.kappa;
    const Trajectory tr = evolve(me, rho0, {0.0, horizon / 3.0, 2.0 * horizon / 3.0, horizon});
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double expected = std::exp(-p.kappa * tr.times[i]);
        CHECK(test::rel_diff(expectation(n_H, tr.states[i]).real(), expected) < 1e-6);
    }
}

TEST_CASE("driven two-level reduction follows the Rabi formula") {
    // Only G <-> H is driven, at constant Omega and detuning Delta.
    const HilbertLayout layout(1);
    const ElementaryOps ops = build_elementary_ops(layout);
    const double omega = 0.9, delta = 0.4;
    std::vector<LiouvillianTerm> terms;
    terms.push_back({"static", SuperOp::hamiltonian(delta * ops.proj(QdLevel::H)), CoeffKind::Constant, 1.0, true});
    const QuantumOp drive = 0.5 * (ops.sigma_H2 + ops.sigma_H2.adjoint());
    terms.push_back({"drive", SuperOp::hamiltonian(drive), CoeffKind::Drive, 1.0, true});
    const PulseShape constant{omega, 1e9, 0.0};
    const MasterEquation me(layout, std::move(terms), constant, std::nullopt, 1.0);

    const DensityState rho0 = pure_state(layout, QdLevel::G, 0, 0);
    std::vector<double> times;
    for (int i = 0; i <= 80; ++i) times.push_back(0.25 * i);
    const Trajectory tr = evolve(me, rho0, times);
    const double w = std::sqrt(omega * omega + delta * delta);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double s = std::sin(0.5 * w * times[i]);
        const double expected = omega * omega / (w * w) * s * s;
        CHECK(std::abs(pop(tr.states[i], ops, QdLevel::H) - expected) < 1e-4);
    }
}

TEST_CASE("propagation: identity, semigroup and trace") {
    const PhysicalParams p = default_params();
    const auto kernel = phonon::build_kernel(p);
    const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
    const Trajectory tr = evolve(me, pure_state(me.layout(), QdLevel::G, 0, 0), p.t_gate + 2.0);
    const DensityState& s = tr.states.back();
    CHECK(s.time == doctest::Approx(p.t_gate + 2.0));

    const DensityState same = propagate_from(me, s, 0.0);
    CHECK((same.matrix - s.matrix).cwiseAbs().maxCoeff() == 0.0);

    const DensityState one = propagate_from(me, s, 30.0);
    const DensityState two = propagate_from(me, propagate_from(me, s, 12.5), 17.5);
    CHECK(one.time == doctest::Approx(two.time));
    CHECK((one.matrix - two.matrix).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(one.trace() - s.trace()) < 1e-10);
    CHECK_THROWS_AS(propagate_from(me, s, -1.0), ArgumentError);
}

TEST_CASE("full trajectory bookkeeping") {
    const PhysicalParams p = default_params();
    const auto kernel = phonon::build_kernel(p);
    const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
    const DensityState rho0 = pure_state(me.layout(), QdLevel::G, 0, 0);
    test::WarningCapture w; // positivity warnings are expected during the pulse
    const Trajectory tr = evolve(me, rho0, p.horizon());
    REQUIRE(tr.times.size() == tr.states.size());
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(p.horizon()));
    CHECK((tr.states.front().matrix - rho0.matrix).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
    CHECK(tr.diagnostics.max_trace_drift < 1e-7);
    for (const auto& s : tr.states) CHECK(s.hermiticity_error() < 1e-10);
    CHECK(tr.index_at_or_before(p.t_gate + 0.5) == tr.index_at_or_before(p.t_gate));
    CHECK_THROWS_AS(tr.index_at_or_before(p.horizon() + 1.0), RangeError);
    CHECK_THROWS_AS(evolve(me, rho0, std::vector<double>{0.0, 2.0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(evolve(me, rho0, std::vector<double>{1.0, 2.0}), ArgumentError);
}

TEST_CASE("tolerance refinement changes populations negligibly") {
    const PhysicalParams p = default_params();
    const auto kernel = phonon::build_kernel(p);
    const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
    const DensityState rho0 = pure_state(me.layout(), QdLevel::G, 0, 0);
    const std::vector<double> times = {0.0, p.t_0, p.t_gate, p.t_gate + 100.0};
    test::WarningCapture w;
    EvolveOptions fine;
    fine.rel_tol = 0.5e-8;
    fine.abs_tol = 0.5e-10;
    const Trajectory a = evolve(me, rho0, times);
    const Trajectory b = evolve(me, rho0, times, fine);
    const double diff = (a.states.back().matrix - b.states.back().matrix).cwiseAbs().maxCoeff();
    CHECK(diff < 1e-7);
}

TEST_CASE("photon truncation convergence") {
    PhysicalParams p = default_params();
    test::WarningCapture w;
    std::vector<std::vector<double>> pops;
    const std::vector<double> times = {0.0, p.t_0, p.t_gate, p.t_gate + 50.0, p.t_gate + 150.0};
    for (int n_max : {2, 3, 4}) {
        p.n_max = n_max;
        const auto kernel = phonon::build_kernel(p);
        const MasterEquation me = MasterEquation::build(p, &kernel, ModelConfig::from_params(p));
        const ElementaryOps ops = build_elementary_ops(me.layout());
        const Trajectory tr = evolve(me, pure_state(me.layout(), QdLevel::G, 0, 0), times);
        std::vector<double> v;
        for (const auto& s : tr.states) {
            for (QdLevel q : {QdLevel::G, QdLevel::H, QdLevel::V, QdLevel::B}) v.push_back(pop(s, ops, q));
        }
        pops.push_back(v);
    }
    double d23 = 0.0, d34 = 0.0;
    for (std::size_t i = 0; i < pops[0].size(); ++i) {
        d23 = std::max(d23, std::abs(pops[0][i] - pops[1][i]));
        d34 = std::max(d34, std::abs(pops[1][i] - pops[2][i]));
    }
    MESSAGE("population change n_max 2->3: " << d23 << ", 3->4: " << d34);
    // geometric convergence in the truncation
    CHECK(d23 < 5e-3);
    CHECK(d34 < 0.1 * d23);
    CHECK(d34 < 1e-3);
}
