#include "mehlerlab/presets.hpp"

#include <random>

namespace mehler {

namespace {

MehlerModel scalar_model(int dim, LevySymbol symbol, const std::string& label) {
    return MehlerModel(TruncatedSpace(dim, label), EvolutionFamily::scalar_contraction(1.0),
                       Sigma::constant(DiagOp::identity(dim)), std::move(symbol));
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"gaussian-scalar", "stable-scalar",  "cp-scalar",      "gaussian-laplacian",
            "periodic-stable", "stable-mixing",  "corrupted-kappa"};
}

Preset make_preset(const std::string& name) {
    if (name == "gaussian-scalar") {
        return Preset{name, scalar_model(4, LevySymbol::gaussian(DiagOp::identity(4)), name), {},
                      "scalar contraction with unit Gaussian noise"};
    }
    if (name == "stable-scalar") {
        return Preset{name, scalar_model(4, LevySymbol::stable_norm(1.5, DiagOp::identity(4)), name),
                      {}, "scalar contraction with isotropic 1.5-stable noise"};
    }
    if (name == "cp-scalar") {
        std::vector<JumpAtom> atoms;
        atoms.push_back({0.8, Vec({1.0, 0.5, 0.0, -0.25})});
        atoms.push_back({1.2, Vec({0.0, -1.0, 2.0, 0.5})});
        return Preset{name, scalar_model(4, LevySymbol::compound_poisson(std::move(atoms)), name),
                      {}, "scalar contraction with symmetrized compound-Poisson jumps"};
    }
    if (name == "gaussian-laplacian") {
        const int dim = 6;
        MehlerModel model(TruncatedSpace(dim, name), EvolutionFamily::dirichlet_laplacian(dim),
                          Sigma::constant(DiagOp::identity(dim)),
                          LevySymbol::gaussian(DiagOp::identity(dim)));
        return Preset{name, std::move(model), {}, "Dirichlet Laplacian semigroup, Gaussian noise"};
    }
    if (name == "periodic-stable") {
        const int dim = 3;
        MehlerModel model(TruncatedSpace(dim, name),
                          EvolutionFamily::periodic_scalar(1.0, 0.5, 1.0),
                          Sigma::periodic_scalar_mod(DiagOp::identity(dim), 0.25, 1.0),
                          LevySymbol::stable_norm(1.5, DiagOp::identity(dim)));
        return Preset{name, std::move(model), {}, "1-periodic family and sigma, stable noise"};
    }
    if (name == "stable-mixing") {
        const int dim = 4;
        std::vector<WeightedAtom> atoms;
        atoms.push_back({1.0, Vec::basis(dim, 0)});
        atoms.push_back({0.5, Vec({0.0, 1.0, -1.0, 0.5})});
        MehlerModel model(TruncatedSpace(dim, name), EvolutionFamily::scalar_contraction(1.0),
                          Sigma::constant(DiagOp::identity(dim)),
                          LevySymbol::stable_mixing(1.5, std::move(atoms)));
        return Preset{name, std::move(model), {}, "finite stable mixing measure"};
    }
    if (name == "corrupted-kappa") {
        Preset base = make_preset("gaussian-scalar");
        const int dim = base.model.space.dim;
        KappaPath bad = KappaPath::perturbed(base.model.family, Vec::basis(dim, 0, 0.5),
                                             Vec::basis(dim, 0, 0.1));
        EntranceLaw law = EntranceLaw::extremal(base.model, std::move(bad));
        return Preset{name, base.model, std::move(law),
                      "gaussian-scalar with a kappa path perturbed off K(U) by 0.1"};
    }
    throw StructuralError("unknown preset '" + name + "'");
}

namespace {

Vec random_anchor(int dim, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v;
}

}  // namespace

EntranceLaw default_extremal_law(const MehlerModel& model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return EntranceLaw::extremal(
        model, KappaPath::from_initial(model.family, random_anchor(model.space.dim, rng, 0.5)));
}

EntranceLaw default_mixture_law(const MehlerModel& model, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<WeightedPath> comps;
    const double weights[3] = {0.5, 0.3, 0.2};
    for (double w : weights)
        comps.push_back(
            {w, KappaPath::from_initial(model.family, random_anchor(model.space.dim, rng, 0.5))});
    return EntranceLaw::mixture(model, std::move(comps));
}

}  // namespace mehler
