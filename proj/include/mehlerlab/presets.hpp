#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mehlerlab/entrance.hpp"
#include "mehlerlab/mehler.hpp"

namespace mehler {

/// Built-in model fixtures exercised by the verification suites:
///   gaussian-scalar     dim 4, U = e^{-(t-s)} I, sigma = I, Gaussian R = I
///   stable-scalar       dim 4, same U/sigma, ||a||^1.5
///   cp-scalar           dim 4, same U/sigma, symmetrized two-atom jumps
///   gaussian-laplacian  dim 6, Dirichlet Laplacian semigroup, Gaussian R = I
///   periodic-stable     dim 3, 1-periodic family/sigma, ||a||^1.5
///   stable-mixing       dim 4, finite mixing measure (tail-moment fixture)
///   corrupted-kappa     gaussian-scalar model + flow-violating law
struct Preset {
    std::string name;
    MehlerModel model;
    std::optional<EntranceLaw> law;
    std::string description;
};

std::vector<std::string> preset_names();
Preset make_preset(const std::string& name);

/// Default entrance law used by law-level checks when the preset carries
/// none: a 3-component mixture of K(U) flows.
EntranceLaw default_mixture_law(const MehlerModel& model, std::uint64_t seed);
EntranceLaw default_extremal_law(const MehlerModel& model, std::uint64_t seed);

}  // namespace mehler
