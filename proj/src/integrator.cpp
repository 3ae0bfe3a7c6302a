#include "qdcascade/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdcascade/errors.hpp"

namespace qdc {

namespace {

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
constexpr double kBeta = 0.04; // PI stabilization
constexpr double kAlpha = 0.2 - 0.75 * kBeta;

} // namespace

void DormandPrince::integrate(const Rhs& f, double t0, double t1, Vector& y) {
    if (t1 < t0) throw ArgumentError("integration interval must be forward in time");
    if (t1 == t0) return;
    const auto n = y.size();
    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y_new(n);

    if (h_ <= 0.0) h_ = opts_.initial_step;
    double t = t0;
    f(t, y, k1);
    ++stats_.evaluations;

    while (t < t1) {
        double h = std::min({h_, opts_.max_step, t1 - t});
        const bool last = (t + h >= t1);
        if (last) h = t1 - t;

        tmp = y + h * a21 * k1;
        f(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, tmp, k6);
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, y_new, k7);
        stats_.evaluations += 6;

        tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double scale = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            const double r = std::abs(tmp[i]) / scale;
            sum += r * r;
        }
        const double err = std::sqrt(sum / static_cast<double>(n));

        if (err <= 1.0) {
            double factor = kMaxFactor;
            if (err > 0.0) {
                factor = kSafety * std::pow(err, -kAlpha) * std::pow(err_prev_, kBeta);
                factor = std::clamp(factor, kMinFactor, kMaxFactor);
            }
            err_prev_ = std::max(err, 1e-4);
            t = last ? t1 : t + h;
            y.swap(y_new);
            k1.swap(k7);
            ++stats_.accepted;
            stats_.last_step = h;
            // A step truncated to land on t1 must not shrink the carried-over step.
            if (!last || h * factor > h_) h_ = h * factor;
        } else {
            ++stats_.rejected;
            const double factor = std::max(kMinFactor, kSafety * std::pow(err, -kAlpha));
            h_ = h * factor;
            if (h_ < opts_.min_step) {
                std::ostringstream msg;
                msg << "step size underflow at t = " << t << " ps (step " << h_ << " ps); problem may be stiff";
                throw NumericalError(msg.str());
            }
        }
    }
}

} // namespace qdc
