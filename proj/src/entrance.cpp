#include "mehlerlab/entrance.hpp"

#include <cmath>

namespace mehler {

KappaPath KappaPath::zero(EvolutionFamily family) {
    return KappaPath{std::move(family), ZeroPath{}};
}

KappaPath KappaPath::from_initial(EvolutionFamily family, Vec x0) {
    return KappaPath{std::move(family), FromInitialPath{std::move(x0)}};
}

KappaPath KappaPath::perturbed(EvolutionFamily family, Vec x0, Vec offset) {
    if (x0.dim() != offset.dim()) throw StructuralError("KappaPath: offset dimension mismatch");
    return KappaPath{std::move(family), PerturbedPath{std::move(x0), std::move(offset)}};
}

namespace {

Vec flow_from_anchor(const EvolutionFamily& family, const Vec& x0, double t) {
    Vec r = x0;
    for (int i = 0; i < x0.dim(); ++i) {
        // Signed exponent: negative log_decay means backward growth.
        const double expo = -log_decay(family, 0.0, t, i);
        if (expo > 700.0)
            throw NumericalError("kappa_eval: backward extension overflows (mode " +
                                     std::to_string(i) + ")",
                                 expo, 0.0);
        r[i] *= std::exp(expo);
    }
    return r;
}

}  // namespace

Vec kappa_eval(const KappaPath& path, double t, int dim) {
    return std::visit(
        [&](const auto& k) -> Vec {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ZeroPath>) {
                return Vec::zero(dim);
            } else if constexpr (std::is_same_v<T, FromInitialPath>) {
                return flow_from_anchor(path.family, k.x0, t);
            } else {
                return add(flow_from_anchor(path.family, k.x0, t), k.offset);
            }
        },
        path.kind);
}

EntranceLaw::EntranceLaw(MehlerModel model, std::vector<WeightedPath> components)
    : model_(std::move(model)), components_(std::move(components)) {
    if (components_.empty()) throw StructuralError("EntranceLaw: no components");
    double total = 0.0;
    for (const auto& wp : components_) {
        if (!(wp.weight > 0.0)) throw StructuralError("EntranceLaw: weights must be > 0");
        total += wp.weight;
        std::visit(
            [&](const auto& k) {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, FromInitialPath>) {
                    if (k.x0.dim() != model_.space.dim)
                        throw StructuralError("EntranceLaw: path dimension mismatch");
                } else if constexpr (std::is_same_v<T, PerturbedPath>) {
                    if (k.x0.dim() != model_.space.dim)
                        throw StructuralError("EntranceLaw: path dimension mismatch");
                }
            },
            wp.path.kind);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw StructuralError("EntranceLaw: mixture weights must sum to 1");
}

EntranceLaw EntranceLaw::extremal(MehlerModel model, KappaPath path) {
    std::vector<WeightedPath> c;
    c.push_back({1.0, std::move(path)});
    return EntranceLaw(std::move(model), std::move(c));
}

EntranceLaw EntranceLaw::mixture(MehlerModel model, std::vector<WeightedPath> components) {
    return EntranceLaw(std::move(model), std::move(components));
}

namespace {

std::complex<double> phase_sum(const EntranceLaw& law, double t, const Vec& a) {
    std::complex<double> s = 0.0;
    for (const auto& wp : law.components()) {
        const double phase = inner(a, kappa_eval(wp.path, t, law.model().space.dim));
        s += wp.weight * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return s;
}

}  // namespace

CFValue entrance_cf(const EntranceLaw& law, double t, const Vec& a) {
    CFValue base = mu_cf(law.model(), kMinusInfinity, t, a);
    base.value *= phase_sum(law, t, a);
    return base;
}

double flow_residual(const EntranceLaw& law, double s, double t, const ProbeSet& probes) {
    if (!(s <= t)) throw std::domain_error("flow_residual: requires s <= t");
    double worst = 0.0;
    for (const Vec& a : probes.probes) {
        const CFValue lhs = entrance_cf(law, t, a);
        const CFValue pulled = entrance_cf(law, s, evolve(law.model().family, s, t, a));
        const CFValue step = mu_cf(law.model(), s, t, a);
        worst = std::max(worst, std::abs(lhs.value - pulled.value * step.value));
    }
    return worst;
}

Vec mean_projection(const EntranceLaw& law, double t) {
    const int dim = law.model().space.dim;
    const double h = 1e-5;
    Vec mean = Vec::zero(dim);
    auto central = [&](int i, double step) {
        const CFValue plus = entrance_cf(law, t, Vec::basis(dim, i, step));
        const CFValue minus = entrance_cf(law, t, Vec::basis(dim, i, -step));
        return (plus.value.imag() - minus.value.imag()) / (2.0 * step);
    };
    for (int i = 0; i < dim; ++i) {
        const double coarse = central(i, h);
        const double fine = central(i, 0.5 * h);
        mean[i] = (4.0 * fine - coarse) / 3.0;
    }
    return mean;
}

double periodic_residual(const EntranceLaw& law, double t, int n, const ProbeSet& probes) {
    if (n < 0) throw std::domain_error("periodic_residual: n must be >= 0");
    const MehlerModel& m = law.model();
    const double period = declared_period(m.family, m.sigma);
    double worst = 0.0;
    for (const Vec& a : probes.probes) {
        std::complex<double> pulled = 0.0;
        for (const auto& wp : law.components()) {
            const Vec kappa_t = kappa_eval(wp.path, t, m.space.dim);
            const double phase = inner(a, evolve(m.family, t - n * period, t, kappa_t));
            pulled += wp.weight * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        const double base = mu_cf(m, kMinusInfinity, t, a).value.real();
        worst = std::max(worst, std::abs(pulled - 1.0) * base);
    }
    return worst;
}

}  // namespace mehler
