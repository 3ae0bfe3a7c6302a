#include "qdcascade/liouvillian.hpp"

#include <cmath>

#include "qdcascade/errors.hpp"

namespace qdc::model {

namespace {

constexpr int kGroups = 5;

int group_index(CoeffKind k) { return static_cast<int>(k); }

LiouvillianTerm dissipator(std::string label, double rate, SuperOp s, CoeffKind kind = CoeffKind::Constant,
                           bool phonon = false) {
    LiouvillianTerm t;
    t.label = std::move(label);
    t.superop = std::move(s);
    t.kind = kind;
    t.rate = rate;
    t.phonon = phonon;
    return t;
}

// S + H.c. for a bracketed group of terms.
SuperOp with_hc(const SuperOp& s) { return s + s.hc(); }

} // namespace

double PulseShape::operator()(double t) const {
    if (t >= t_off) return 0.0;
    const double x = (t - t_0) / t_p;
    return omega_H0 * std::exp(-x * x);
}

PulseShape PulseShape::from_params(const PhysicalParams& p) { return {p.omega_H0, p.t_p, p.t_0, p.t_gate}; }

ModelConfig ModelConfig::from_params(const PhysicalParams& p) {
    ModelConfig c;
    c.phonons_enabled = p.phonons_enabled;
    c.include_lamb_shifts = p.phonons_enabled;
    c.include_cross_coupling = p.phonons_enabled;
    c.include_tp_terms = p.phonons_enabled;
    return c;
}

void ModelConfig::validate() const {
    if (!phonons_enabled && (include_lamb_shifts || include_cross_coupling || include_tp_terms)) {
        throw ConfigError("phonon term toggles are set while phonons are disabled");
    }
}

HamiltonianParts hamiltonian_parts(const PhysicalParams& p, double b_avg, const ElementaryOps& ops) {
    const QuantumOp& P_H = ops.proj(QdLevel::H);
    const QuantumOp& P_V = ops.proj(QdLevel::V);

    const QuantumOp cavity = dagger(ops.a_H) * (ops.sigma_H2 + ops.sigma_H1) +
                             dagger(ops.a_V) * (ops.sigma_V2 + ops.sigma_V1);
    HamiltonianParts parts;
    parts.static_part = p.detuning * P_H + p.delta_V() * P_V + b_avg * p.g * (cavity + dagger(cavity));
    const QuantumOp drive = ops.sigma_H2 + ops.sigma_H1;
    parts.drive_per_omega = 0.5 * b_avg * (drive + dagger(drive));
    return parts;
}

QuantumOp build_hamiltonian(const PhysicalParams& p, double b_avg, double t, const ElementaryOps& ops) {
    const auto parts = hamiltonian_parts(p, b_avg, ops);
    return parts.static_part + PulseShape::from_params(p)(t) * parts.drive_per_omega;
}

std::vector<LiouvillianTerm> build_liouvillian_terms(const PhysicalParams& p, const phonon::PhononKernel* kernel,
                                                     const ModelConfig& cfg, const ElementaryOps& ops) {
    cfg.validate();
    if (cfg.phonons_enabled && kernel == nullptr) throw ConfigError("phonons enabled but no phonon kernel supplied");
    const double b_avg = cfg.phonons_enabled ? kernel->b_avg : 1.0;

    std::vector<LiouvillianTerm> terms;
    const auto parts = hamiltonian_parts(p, b_avg, ops);
    {
        LiouvillianTerm h{"H'_S static", SuperOp::hamiltonian(parts.static_part), CoeffKind::Constant, 1.0, true};
        terms.push_back(std::move(h));
        LiouvillianTerm d{"H'_S drive", SuperOp::hamiltonian(parts.drive_per_omega), CoeffKind::Drive, 1.0, true};
        terms.push_back(std::move(d));
    }

    const auto& aH = ops.a_H;
    const auto& aV = ops.a_V;
    const auto& sH1 = ops.sigma_H1;
    const auto& sH2 = ops.sigma_H2;
    const auto& sV1 = ops.sigma_V1;
    const auto& sV2 = ops.sigma_V2;
    const auto L = [](const QuantumOp& a) { return SuperOp::lindblad(a); };
    const auto L2 = [](const QuantumOp& a, const QuantumOp& b) { return SuperOp::lindblad(a, b); };

    // Cavity loss, radiative decay, pure dephasing.
    terms.push_back(dissipator("kappa/2 L(a_H)", 0.5 * p.kappa, L(aH)));
    terms.push_back(dissipator("kappa/2 L(a_V)", 0.5 * p.kappa, L(aV)));
    terms.push_back(dissipator("gamma_B/2 L(s_H1)", 0.5 * p.gamma_B, L(sH1)));
    terms.push_back(dissipator("gamma_B/2 L(s_V1)", 0.5 * p.gamma_B, L(sV1)));
    terms.push_back(dissipator("gamma_E/2 L(s_H2)", 0.5 * p.gamma_E, L(sH2)));
    terms.push_back(dissipator("gamma_E/2 L(s_V2)", 0.5 * p.gamma_E, L(sV2)));
    terms.push_back(dissipator("gamma'_B/2 L(|B><B|)", 0.5 * p.gamma_B_deph, L(ops.proj(QdLevel::B))));
    terms.push_back(dissipator("gamma'_E/2 L(|H><H|)", 0.5 * p.gamma_E_deph, L(ops.proj(QdLevel::H))));
    terms.push_back(dissipator("gamma'_E/2 L(|V><V|)", 0.5 * p.gamma_E_deph, L(ops.proj(QdLevel::V))));

    if (!cfg.phonons_enabled) return terms;

    const auto& r = kernel->rates;
    const auto ph = [&](std::string label, double rate, SuperOp s, CoeffKind kind = CoeffKind::Constant) {
        terms.push_back(dissipator(std::move(label), rate, std::move(s), kind, true));
    };
    const QuantumOp aHd = dagger(aH), aVd = dagger(aV);
    const QuantumOp sH1d = dagger(sH1), sH2d = dagger(sH2), sV1d = dagger(sV1), sV2d = dagger(sV2);

    // One-photon cavity-assisted processes.
    ph("Gamma+_H {L(a_H s_H1^+) + L(a_H^+ s_H2)}", r.gamma_plus_H, L(aH * sH1d) + L(aHd * sH2));
    ph("Gamma+_V {L(a_V s_V1^+) + L(a_V^+ s_V2)}", r.gamma_plus_V, L(aV * sV1d) + L(aVd * sV2));
    ph("Gamma-_H {L(a_H s_H2^+) + L(a_H^+ s_H1)}", r.gamma_minus_H, L(aH * sH2d) + L(aHd * sH1));
    ph("Gamma-_V {L(a_V s_V2^+) + L(a_V^+ s_V1)}", r.gamma_minus_V, L(aV * sV2d) + L(aVd * sV1));

    // Pulse-assisted processes, coefficient (Omega_H(t)/2)^2 K.
    ph("Gamma-_Omega {L(s_H2^+) + L(s_H1)}", 0.25 * r.k_minus_omega, L(sH2d) + L(sH1), CoeffKind::PulseSq);
    ph("Gamma+_Omega {L(s_H1^+) + L(s_H2)}", 0.25 * r.k_plus_omega, L(sH1d) + L(sH2), CoeffKind::PulseSq);
    if (cfg.include_tp_terms) {
        ph("Gamma^TP_Omega {L(s_H1, s_H2^+) + L(s_H2^+, s_H1)}", 0.25 * r.k_tp_omega, L2(sH1, sH2d) + L2(sH2d, sH1),
           CoeffKind::PulseSq);
    }

    // Rabi-dependent term; completed with its Hermitian conjugate.
    ph("Gamma^I_B {L(s_H1, s_H1^+ s_H1) - L(s_H2^+, s_H2 s_H2^+)} + H.c.", 1.0,
       with_hc(L2(sH1, sH1d * sH1) - L2(sH2d, sH2 * sH2d)), CoeffKind::RabiI);

    // Cavity-mediated H/V cross coupling with a symmetric rate.
    if (cfg.include_cross_coupling) {
        const double gamma_x = std::sqrt(r.gamma_plus_H * r.gamma_plus_V);
        const QuantumOp c_H1 = aH * sH1d, c_V1 = aV * sV1d;
        const QuantumOp c_H2 = aHd * sH2, c_V2 = aVd * sV2;
        ph("Gamma+_x cross coupling H<->V", gamma_x,
           L2(c_H1, c_V1) + L2(c_H2, c_V2) + L2(c_V1, c_H1) + L2(c_V2, c_H2));
        if (cfg.include_lamb_shifts) {
            const double delta_x = 0.5 * (r.delta_plus_H + r.delta_plus_V);
            const QuantumOp O_v = aHd * sH1 * aV * sV1d + aH * sH2d * aVd * sV2;
            const QuantumOp O_h = aVd * sV1 * aH * sH1d + aV * sV2d * aHd * sH2;
            ph("-i Delta+_x [cross, rho]", delta_x, Complex(0.0, -1.0) * SuperOp::commutator(O_v + O_h));
        }
    }

    // Bracketed group, each completed with its Hermitian conjugate.
    if (cfg.include_tp_terms) {
        ph("Gamma^TP_H L(a_H s_H2^+, a_H^+ s_H1) + H.c.", r.gamma_tp_H, with_hc(L2(aH * sH2d, aHd * sH1)));
        ph("Gamma^TP_V L(a_V s_V2^+, a_V^+ s_V1) + H.c.", r.gamma_tp_V, with_hc(L2(aV * sV2d, aVd * sV1)));
    }
    ph("Gamma^R_B {L(s_H1) + L(s_H2) - L(s_H2^+, s_H1)} + H.c.", 0.5,
       with_hc(L(sH1) + L(sH2) - L2(sH2d, sH1)), CoeffKind::RabiR);

    if (cfg.include_lamb_shifts) {
        const Complex I(0.0, 1.0);
        ph("i Delta^p_Omega [s_H2 s_H1, rho] + H.c.", 0.25 * r.k_delta_p_omega,
           with_hc(I * SuperOp::commutator(sH2 * sH1)), CoeffKind::PulseSq);
        ph("i Delta-_Omega {[s_H2^+ s_H2, rho] + [s_H1 s_H1^+, rho]} + H.c.", 0.25 * r.k_delta_minus_omega,
           with_hc(I * (SuperOp::commutator(sH2d * sH2) + SuperOp::commutator(sH1 * sH1d))), CoeffKind::PulseSq);

        struct ModeOps {
            const char* name;
            const QuantumOp& a;
            const QuantumOp& s1;
            const QuantumOp& s2;
            double delta_minus;
            double delta_minus_p;
        };
        const ModeOps modes[] = {{"H", aH, sH1, sH2, r.delta_minus_H, r.delta_minus_pH},
                                 {"V", aV, sV1, sV2, r.delta_minus_V, r.delta_minus_pV}};
        for (const auto& m : modes) {
            const QuantumOp ad = dagger(m.a);
            const QuantumOp s1d = dagger(m.s1), s2d = dagger(m.s2);
            ph(std::string("i Delta-_") + m.name + " {[a^+ s2 a s2^+, rho] + [a s1^+ a^+ s1, rho]} + H.c.",
               m.delta_minus,
               with_hc(I * (SuperOp::commutator(ad * m.s2 * m.a * s2d) + SuperOp::commutator(m.a * s1d * ad * m.s1))));
            ph(std::string("i Delta-_p") + m.name + " [a^+ s2 a^+ s1, rho] + H.c.", m.delta_minus_p,
               with_hc(I * SuperOp::commutator(ad * m.s2 * ad * m.s1)));
        }
    }
    return terms;
}

MasterEquation::MasterEquation(const HilbertLayout& layout, std::vector<LiouvillianTerm> terms, PulseShape pulse,
                               std::optional<phonon::RabiTable> rabi, double b_avg)
    : layout_(layout),
      dim_(layout.total_dim()),
      terms_(std::move(terms)),
      pulse_(pulse),
      rabi_(std::move(rabi)),
      b_avg_(b_avg),
      groups_(kGroups),
      group_used_(kGroups, false) {
    const int n = dim_ * dim_;
    for (auto& g : groups_) g.resize(n, n);
    for (const auto& t : terms_) {
        if (t.rate == 0.0 || t.superop.empty()) continue;
        const int gi = group_index(t.kind);
        if ((t.kind == CoeffKind::RabiR || t.kind == CoeffKind::RabiI) && !rabi_) {
            throw ConfigError("Rabi-dependent term '" + t.label + "' without a Rabi table");
        }
        groups_[gi] += Complex(t.rate) * t.superop.to_sparse(dim_);
        group_used_[gi] = true;
    }
    for (auto& g : groups_) g.makeCompressed();
}

MasterEquation MasterEquation::build(const PhysicalParams& p, const phonon::PhononKernel* kernel,
                                     const ModelConfig& cfg) {
    const HilbertLayout layout(p.n_max);
    const auto ops = build_elementary_ops(layout);
    auto terms = build_liouvillian_terms(p, kernel, cfg, ops);
    std::optional<phonon::RabiTable> rabi;
    double b_avg = 1.0;
    if (cfg.phonons_enabled) {
        rabi = kernel->rabi;
        b_avg = kernel->b_avg;
    }
    return MasterEquation(layout, std::move(terms), PulseShape::from_params(p), std::move(rabi), b_avg);
}

double MasterEquation::coefficient(const LiouvillianTerm& term, double t) const {
    const double omega = pulse_(t);
    switch (term.kind) {
    case CoeffKind::Constant:
        return term.rate;
    case CoeffKind::Drive:
        return term.rate * omega;
    case CoeffKind::PulseSq:
        return term.rate * omega * omega;
    case CoeffKind::RabiR:
    case CoeffKind::RabiI: {
        if (omega == 0.0 || !rabi_) return 0.0;
        const auto k = rabi_->kernels(b_avg_ * omega);
        return term.rate * omega * omega * (term.kind == CoeffKind::RabiR ? k.k_R : k.k_I);
    }
    }
    return 0.0;
}

QuantumOp MasterEquation::rhs(const QuantumOp& rho, double t) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) throw ArgumentError("density matrix has wrong dimension");
    QuantumOp out = QuantumOp::Zero(dim_, dim_);
    for (const auto& term : terms_) {
        const double c = coefficient(term, t);
        if (c != 0.0) out += c * term.superop.apply(rho);
    }
    return out;
}

void MasterEquation::apply(double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& dx) const {
    dx.noalias() = groups_[0] * x;
    const double omega = pulse_(t);
    if (omega == 0.0) return;
    const double w2 = omega * omega;
    if (group_used_[group_index(CoeffKind::Drive)]) dx.noalias() += omega * (groups_[1] * x);
    if (group_used_[group_index(CoeffKind::PulseSq)]) dx.noalias() += w2 * (groups_[2] * x);
    if (rabi_ && (group_used_[3] || group_used_[4])) {
        const auto k = rabi_->kernels(b_avg_ * omega);
        if (group_used_[3]) dx.noalias() += (w2 * k.k_R) * (groups_[3] * x);
        if (group_used_[4]) dx.noalias() += (w2 * k.k_I) * (groups_[4] * x);
    }
}

std::vector<TermCoefficient> coefficient_table(const MasterEquation& me, double t) {
    std::vector<TermCoefficient> out;
    for (const auto& term : me.terms()) out.push_back({term.label, me.coefficient(term, t)});
    return out;
}

} // namespace qdc::model
