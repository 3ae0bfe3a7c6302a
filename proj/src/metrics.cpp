#include "qdcascade/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qdcascade/errors.hpp"
#include "qdcascade/units.hpp"

namespace qdc {

namespace {

constexpr double kClip = 1e-9;
constexpr double kFail = 1e-6;

} // namespace

EntanglementReport concurrence(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd a = Eigen::Matrix4cd::Zero();
    a(0, 3) = -1.0;
    a(1, 2) = 1.0;
    a(2, 1) = 1.0;
    a(3, 0) = -1.0;
    const Eigen::Matrix4cd m = rho * a * rho.conjugate() * a;

    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed on concurrence matrix");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    std::array<double, 4> ev{};
    double max_imag = 0.0;
    for (int i = 0; i < 4; ++i) {
        ev[i] = es.eigenvalues()[i].real();
        max_imag = std::max(max_imag, std::abs(es.eigenvalues()[i].imag()));
    }
    if (max_imag > kClip * scale) {
        std::ostringstream msg;
        msg << "concurrence eigenvalues carry imaginary parts up to " << max_imag;
        warn(msg.str());
    }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    for (double& e : ev) {
        if (e < -kFail * scale) {
            std::ostringstream msg;
            msg << "concurrence matrix eigenvalue " << e << " is negative; input is not a valid density matrix";
            throw NumericalError(msg.str());
        }
        e = std::max(e, 0.0);
    }

    EntanglementReport r;
    r.eigenvalues = ev;
    r.concurrence = std::max(0.0, std::sqrt(ev[0]) - std::sqrt(ev[1]) - std::sqrt(ev[2]) - std::sqrt(ev[3]));
    r.gamma_coherence = rho(0, 3);
    r.peres_entangled = std::abs(r.gamma_coherence) > kClip;
    return r;
}

double qber(const Eigen::Matrix4cd& rho) {
    const double s = 1.0 / std::sqrt(2.0);
    const Eigen::Vector2cd h(1.0, 0.0), v(0.0, 1.0);
    const Eigen::Vector2cd d = s * (h + v), an = s * (h - v);
    const auto pair = [](const Eigen::Vector2cd& x, const Eigen::Vector2cd& y) {
        Eigen::Vector4cd o;
        o << x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1];
        return o;
    };
    const auto proj = [&](const Eigen::Vector4cd& o) { return o.dot(rho * o).real(); };
    return 0.5 * (proj(pair(h, v)) + proj(pair(v, h)) + proj(pair(d, an)) + proj(pair(an, d)));
}

StarkReport stark_shifts(const PhysicalParams& p, double b_avg, double n_H, double n_V) {
    const double dh = p.delta_H();
    const double dv = p.delta_V();
    if (std::abs(dh) < 1e-12 || std::abs(dv) < 1e-12) {
        throw ArgumentError("ac-Stark shift is singular for vanishing detuning delta_H or delta_V");
    }
    const double bg2 = (b_avg * p.g) * (b_avg * p.g);
    StarkReport r;
    r.delta_HH = units::rate_to_meV(2.0 * n_H * bg2 / dh);
    r.delta_VV = units::rate_to_meV(2.0 * n_V * bg2 / dv);
    r.splitting = std::abs(r.delta_HH - r.delta_VV);
    return r;
}

} // namespace qdc
