#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qdc {

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double initial_step = 0.01;
    double max_step = 1.0;
    double min_step = 1e-12;
};

struct IntegratorStats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
    double last_step = 0.0;
};

// Embedded Dormand-Prince 5(4) with PI step-size control for linear and
// nonlinear complex systems y' = f(t, y). Each accepted step satisfies the
// scaled RMS error bound sqrt(mean(|err_i| / (atol + rtol max|y_i|))^2) <= 1.
class DormandPrince {
public:
    using Vector = Eigen::VectorXcd;
    using Rhs = std::function<void(double, const Vector&, Vector&)>;

    explicit DormandPrince(IntegratorOptions opts = {}) : opts_(opts) {}

    // Advances y from t0 to exactly t1 (t1 >= t0). The suggested step is carried
    // across calls. Throws NumericalError when the step underflows.
    void integrate(const Rhs& f, double t0, double t1, Vector& y);

    const IntegratorStats& stats() const { return stats_; }
    const IntegratorOptions& options() const { return opts_; }

private:
    IntegratorOptions opts_;
    IntegratorStats stats_;
    double h_ = 0.0;
    double err_prev_ = 1e-4;
};

} // namespace qdc
