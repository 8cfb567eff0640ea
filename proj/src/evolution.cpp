#include "mehlerlab/evolution.hpp"

#include <cmath>

namespace mehler {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

EvolutionFamily EvolutionFamily::scalar_contraction(double omega) {
    if (!(omega > 0.0)) throw StructuralError("ScalarContraction: omega must be > 0");
    return EvolutionFamily{ScalarContraction{omega}};
}

EvolutionFamily EvolutionFamily::diagonal_semigroup(DiagOp eigs) {
    if (eigs.dim() < 1) throw StructuralError("DiagonalSemigroup: empty eigenvalue list");
    for (double e : eigs.diag)
        if (!(e > 0.0)) throw StructuralError("DiagonalSemigroup: all eigenvalues must be > 0");
    return EvolutionFamily{DiagonalSemigroup{std::move(eigs)}};
}

EvolutionFamily EvolutionFamily::periodic_scalar(double omega0, double amp, double period) {
    if (!(omega0 > 0.0)) throw StructuralError("PeriodicScalar: omega0 must be > 0");
    if (!(amp >= 0.0 && amp < 1.0)) throw StructuralError("PeriodicScalar: amp must lie in [0,1)");
    if (!(period > 0.0)) throw StructuralError("PeriodicScalar: period must be > 0");
    return EvolutionFamily{PeriodicScalar{omega0, amp, period}};
}

EvolutionFamily EvolutionFamily::dirichlet_laplacian(int dim) {
    DiagOp eigs = DiagOp::zero(dim);
    const double pi2 = 9.869604401089358618834490999876;
    for (int i = 0; i < dim; ++i) eigs[i] = pi2 * double(i + 1) * double(i + 1);
    return diagonal_semigroup(std::move(eigs));
}

double log_decay(const EvolutionFamily& U, double s, double t, int mode) {
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ScalarContraction>) {
                return fam.omega * (t - s);
            } else if constexpr (std::is_same_v<T, DiagonalSemigroup>) {
                if (mode < 0 || mode >= fam.eigs.dim())
                    throw StructuralError("log_decay: mode out of range");
                return fam.eigs[mode] * (t - s);
            } else {
                // Closed-form antiderivative of omega0 (1 + amp sin(2 pi r / T)).
                const double w = kTwoPi / fam.period;
                return fam.omega0 *
                       ((t - s) + fam.amp / w * (std::cos(w * s) - std::cos(w * t)));
            }
        },
        U.kind);
}

Vec evolve(const EvolutionFamily& U, double s, double t, const Vec& x) {
    if (!(s <= t)) throw std::domain_error("evolve: requires s <= t");
    Vec r = x;
    for (int i = 0; i < x.dim(); ++i) r[i] *= std::exp(-log_decay(U, s, t, i));
    return r;
}

DiagOp propagator_diag(const EvolutionFamily& U, double s, double t, int dim) {
    if (!(s <= t)) throw std::domain_error("propagator_diag: requires s <= t");
    DiagOp d = DiagOp::zero(dim);
    for (int i = 0; i < dim; ++i) d[i] = std::exp(-log_decay(U, s, t, i));
    return d;
}

ContractionCertificate contraction_certificate(const EvolutionFamily& U) {
    return std::visit(
        [](const auto& fam) -> ContractionCertificate {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ScalarContraction>) {
                return {1.0, fam.omega};
            } else if constexpr (std::is_same_v<T, DiagonalSemigroup>) {
                double wmin = fam.eigs[0];
                for (double e : fam.eigs.diag) wmin = std::min(wmin, e);
                return {1.0, wmin};
            } else {
                // Crude envelope: the oscillating part of the exponent is
                // bounded by omega0 amp T / pi, the mean decay by
                // omega0 (1 - amp).
                const double pi = 3.1415926535897932384626433832795;
                return {std::exp(fam.omega0 * fam.amp * fam.period / pi),
                        fam.omega0 * (1.0 - fam.amp)};
            }
        },
        U.kind);
}

Sigma Sigma::constant(DiagOp base) { return Sigma{ConstantDiag{std::move(base)}}; }

Sigma Sigma::periodic_scalar_mod(DiagOp base, double amp, double period) {
    if (!(amp >= 0.0 && amp < 1.0)) throw StructuralError("PeriodicScalarMod: amp must lie in [0,1)");
    if (!(period > 0.0)) throw StructuralError("PeriodicScalarMod: period must be > 0");
    return Sigma{PeriodicScalarMod{std::move(base), amp, period}};
}

DiagOp sigma_eval(const Sigma& sigma, double r) {
    return std::visit(
        [&](const auto& s) -> DiagOp {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantDiag>) {
                return s.base;
            } else {
                const double factor = 1.0 + s.amp * std::cos(kTwoPi * r / s.period);
                DiagOp d = s.base;
                for (double& v : d.diag) v *= factor;
                return d;
            }
        },
        sigma.kind);
}

double sigma_sup_norm(const Sigma& sigma) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantDiag>)
                return s.base.max_abs();
            else
                return s.base.max_abs() * (1.0 + s.amp);
        },
        sigma.kind);
}

double declared_period(const EvolutionFamily& U, const Sigma& sigma) {
    const auto* per = std::get_if<PeriodicScalar>(&U.kind);
    if (per == nullptr)
        throw UndefinedForKindError("declared_period: evolution family carries no period");
    if (const auto* mod = std::get_if<PeriodicScalarMod>(&sigma.kind)) {
        if (mod->period != per->period)
            throw UndefinedForKindError("declared_period: sigma period differs from U period");
    }
    return per->period;
}

}  // namespace mehler
