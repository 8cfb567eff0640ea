#pragma once

#include <variant>
#include <vector>

#include "mehlerlab/mehler.hpp"

namespace mehler {

struct ZeroPath {
    bool operator==(const ZeroPath&) const = default;
};

/// kappa_t = U_{0,t} x0 for t >= 0, extended backward by the closed-form
/// inverse of the diagonal exponential for t < 0. For diagonal semigroups
/// these span the backward-extended eigenmode flows; whether that exhausts
/// all flows of the family is not established.
struct FromInitialPath {
    Vec x0;
    bool operator==(const FromInitialPath&) const = default;
};

/// Negative-control fixture: the flow from x0 plus a constant offset, which
/// deliberately violates U_{s,t} kappa_s = kappa_t.
struct PerturbedPath {
    Vec x0;
    Vec offset;
    bool operator==(const PerturbedPath&) const = default;
};

/// A path in (or, for the perturbed fixture, near) K(U). Carries its
/// evolution family so the flow relation is self-contained.
struct KappaPath {
    EvolutionFamily family;
    std::variant<ZeroPath, FromInitialPath, PerturbedPath> kind;

    static KappaPath zero(EvolutionFamily family);
    static KappaPath from_initial(EvolutionFamily family, Vec x0);
    static KappaPath perturbed(EvolutionFamily family, Vec x0, Vec offset);

    bool operator==(const KappaPath&) const = default;
};

/// Path value at time t. Growth exponents are capped at 700 before
/// exponentiation (backward extensions of fast modes genuinely blow up);
/// beyond the cap a NumericalError is thrown.
Vec kappa_eval(const KappaPath& path, double t, int dim);

struct WeightedPath {
    double weight;
    KappaPath path;
};

/// Extremal entrance law nu^kappa (one component) or a finite mixture over
/// extremals. CF at t: sum_k p_k e^{i<a, kappa_k(t)>} mu_cf(-inf, t, a).
class EntranceLaw {
public:
    static EntranceLaw extremal(MehlerModel model, KappaPath path);
    static EntranceLaw mixture(MehlerModel model, std::vector<WeightedPath> components);

    const MehlerModel& model() const { return model_; }
    const std::vector<WeightedPath>& components() const { return components_; }
    bool is_extremal() const { return components_.size() == 1; }

private:
    EntranceLaw(MehlerModel model, std::vector<WeightedPath> components);
    MehlerModel model_;
    std::vector<WeightedPath> components_;
};

CFValue entrance_cf(const EntranceLaw& law, double t, const Vec& a);

/// max over probes of |nu_t^(a) - nu_s^(U*_{s,t} a) mu_cf(s,t,a)|: the
/// entrance-law flow identity, exact for laws built on K(U) paths.
double flow_residual(const EntranceLaw& law, double s, double t, const ProbeSet& probes);

/// Mean of nu_t recovered from the CF by central differences (h = 1e-5) with
/// one Richardson step. For Extremal(kappa) this is kappa_t; for mixtures the
/// weighted path average.
Vec mean_projection(const EntranceLaw& law, double t);

/// Uniqueness mechanism for T-periodic models: the pulled-back mixture phase
///   max_a |sum_k p_k e^{i<a, U_{t-nT,t} kappa_k(t)>} - 1| mu_cf(-inf,t,a)
/// which decays like the certified contraction rate. Requires a model with a
/// declared period.
double periodic_residual(const EntranceLaw& law, double t, int n, const ProbeSet& probes);

}  // namespace mehler
