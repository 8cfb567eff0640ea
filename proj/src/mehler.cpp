#include "mehlerlab/mehler.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mehlerlab/quadrature.hpp"

namespace mehler {

void QuadConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions < 1 || !(horizon_slack > 0.0))
        throw StructuralError("QuadConfig: all entries must be positive");
}

MehlerModel::MehlerModel(TruncatedSpace space_, EvolutionFamily family_, Sigma sigma_,
                         LevySymbol symbol_, QuadConfig quad_)
    : space(std::move(space_)),
      family(std::move(family_)),
      sigma(std::move(sigma_)),
      symbol(std::move(symbol_)),
      quad(quad_) {
    quad.validate();
    if (const auto* d = std::get_if<DiagonalSemigroup>(&family.kind))
        if (d->eigs.dim() != space.dim)
            throw StructuralError("MehlerModel: evolution family dimension mismatch");
    auto check_dim = [&](const DiagOp& op, const char* what) {
        if (op.dim() != space.dim)
            throw StructuralError(std::string("MehlerModel: ") + what + " dimension mismatch");
    };
    std::visit([&](const auto& s) { check_dim(s.base, "sigma"); }, sigma.kind);
    std::function<void(const LevySymbol&)> check_symbol = [&](const LevySymbol& sym) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, GaussianForm>) {
                    check_dim(s.covariance, "symbol covariance");
                } else if constexpr (std::is_same_v<T, StableNorm>) {
                    check_dim(s.shape, "symbol shape");
                } else if constexpr (std::is_same_v<T, StableMixing>) {
                    for (const auto& wa : s.atoms)
                        if (wa.atom.dim() != space.dim)
                            throw StructuralError("MehlerModel: mixing atom dimension mismatch");
                } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                    for (const auto& ja : s.atoms)
                        if (ja.jump.dim() != space.dim)
                            throw StructuralError("MehlerModel: jump atom dimension mismatch");
                } else {
                    for (const auto& term : s.terms) check_symbol(term);
                }
            },
            sym.kind);
    };
    check_symbol(symbol);
}

namespace {

// Envelope lambda(b) <= K ||b||^p per symbol component, with p = 2 for the
// Gaussian and compound-Poisson parts (1 - cos x <= x^2/2) and p = alpha for
// the stable parts. Drives the -infinity horizon choice.
struct TailEnvelope {
    double K;
    double p;
};

void collect_envelopes(const LevySymbol& symbol, std::vector<TailEnvelope>& out) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianForm>) {
                out.push_back({0.5 * s.covariance.max_abs(), 2.0});
            } else if constexpr (std::is_same_v<T, StableNorm>) {
                out.push_back({std::pow(s.shape.max_abs(), 0.5 * s.alpha), s.alpha});
            } else if constexpr (std::is_same_v<T, StableMixing>) {
                double K = 0.0;
                for (const auto& wa : s.atoms) K += wa.weight * std::pow(norm(wa.atom), s.alpha);
                out.push_back({K, s.alpha});
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                double K = 0.0;
                for (const auto& ja : s.atoms) {
                    double n2 = inner(ja.jump, ja.jump);
                    K += 0.5 * ja.mass * n2;
                }
                out.push_back({K, 2.0});
            } else {
                for (const auto& term : s.terms) collect_envelopes(term, out);
            }
        },
        symbol.kind);
}

double integrand_at(const MehlerModel& m, double t, const Vec& a, double r) {
    return symbol_eval(m.symbol, apply_diag(sigma_eval(m.sigma, r), evolve(m.family, r, t, a)));
}

}  // namespace

double horizon(const MehlerModel& m, double a_norm) {
    const ContractionCertificate cert = contraction_certificate(m.family);
    const double B = cert.c * sigma_sup_norm(m.sigma) * a_norm;
    std::vector<TailEnvelope> parts;
    collect_envelopes(m.symbol, parts);
    // Remaining integral beyond depth u:  Int_u^inf K (B e^{-omega v})^p dv
    //                                   = K B^p e^{-p omega u} / (p omega).
    double T = 1.0;
    for (const auto& part : parts) {
        const double pw = part.p * cert.omega;
        const double coeff = part.K * std::pow(B, part.p) / pw;
        if (coeff <= 0.0) continue;
        // parts.size() safety factor so the per-part budgets sum to abs_tol
        const double budget = m.quad.abs_tol / double(parts.size());
        T = std::max(T, std::log(coeff / budget) / pw);
    }
    return T * m.quad.horizon_slack;
}

ExponentResult exponent(const MehlerModel& m, double s, double t, const Vec& a) {
    if (a.dim() != m.space.dim) throw StructuralError("exponent: probe dimension mismatch");
    if (s != kMinusInfinity && !(s <= t)) throw std::domain_error("exponent: requires s <= t");
    const double lower = (s == kMinusInfinity) ? t - horizon(m, std::max(norm(a), 1.0)) : s;
    if (lower == t) return {0.0, 0.0};
    QuadResult q = integrate_adaptive([&](double r) { return integrand_at(m, t, a, r); }, lower, t,
                                      m.quad.rel_tol, m.quad.abs_tol, m.quad.max_subdivisions);
    return {q.value, q.error_estimate};
}

CFValue mu_cf(const MehlerModel& m, double s, double t, const Vec& a) {
    ExponentResult e = exponent(m, s, t, a);
    return CFValue{std::complex<double>(std::exp(-e.value), 0.0), e.value, e.error_estimate};
}

CFValue transition_cf(const MehlerModel& m, double s, double t, const Vec& x, const Vec& a) {
    if (s == kMinusInfinity) throw std::domain_error("transition_cf: s must be finite");
    CFValue base = mu_cf(m, s, t, a);
    const double phase = inner(a, evolve(m.family, s, t, x));
    base.value *= std::complex<double>(std::cos(phase), std::sin(phase));
    return base;
}

DiagOp gaussian_covariance(const MehlerModel& m, double s, double t) {
    DiagOp R = DiagOp::zero(m.space.dim);
    if (!gaussian_part(m.symbol, m.space.dim, &R))
        throw UndefinedForKindError("gaussian_covariance: symbol has no Gaussian component");
    if (s != kMinusInfinity && !(s <= t))
        throw std::domain_error("gaussian_covariance: requires s <= t");
    const double lower = (s == kMinusInfinity) ? t - horizon(m, 1.0) : s;
    DiagOp out = DiagOp::zero(m.space.dim);
    if (lower == t) return out;
    for (int i = 0; i < m.space.dim; ++i) {
        if (R[i] == 0.0) continue;
        auto mode = [&](double r) {
            const double u = std::exp(-log_decay(m.family, r, t, i));
            const double sig = sigma_eval(m.sigma, r)[i];
            return u * sig * R[i] * sig * u;
        };
        out[i] = integrate_adaptive(mode, lower, t, m.quad.rel_tol, m.quad.abs_tol,
                                    m.quad.max_subdivisions)
                     .value;
    }
    return out;
}

double ck_residual(const MehlerModel& m, double s, double r, double t, const Vec& a) {
    if (s != kMinusInfinity && !(s <= r)) throw std::domain_error("ck_residual: requires s <= r");
    if (!(r <= t)) throw std::domain_error("ck_residual: requires r <= t");
    const CFValue whole = mu_cf(m, s, t, a);
    const CFValue first = mu_cf(m, s, r, evolve(m.family, r, t, a));
    const CFValue second = mu_cf(m, r, t, a);
    return std::abs(whole.value - first.value * second.value);
}

double positive_definite_check(const std::function<std::complex<double>(const Vec&)>& phi,
                               const ProbeSet& probes) {
    const int n = probes.size();
    if (n < 2) throw StructuralError("positive_definite_check: need at least 2 probes");
    Eigen::MatrixXcd gram(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            gram(j, k) = phi(sub(probes.probes[j], probes.probes[k]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace mehler
