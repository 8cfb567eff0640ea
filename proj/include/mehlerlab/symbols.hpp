#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "mehlerlab/space.hpp"

namespace mehler {

/// lambda(a) = 1/2 <a, R a>.
struct GaussianForm {
    DiagOp covariance;
    bool operator==(const GaussianForm&) const = default;
};

/// lambda(a) = ||S^{1/2} a||^alpha, alpha in (1,2): the isotropic stable
/// symbol. Its mixing measure is Gaussian, so it is kept in closed form
/// rather than as a finite atom list.
struct StableNorm {
    double alpha;
    DiagOp shape;
    bool operator==(const StableNorm&) const = default;
};

struct WeightedAtom {
    double weight;
    Vec atom;
    bool operator==(const WeightedAtom&) const = default;
};

/// lambda(a) = sum_k w_k |<a, x_k>|^alpha with a finite mixing measure
/// theta = sum_k w_k delta_{x_k}, alpha in (1,2).
struct StableMixing {
    double alpha;
    std::vector<WeightedAtom> atoms;
    bool operator==(const StableMixing&) const = default;
};

struct JumpAtom {
    double mass;
    Vec jump;
    bool operator==(const JumpAtom&) const = default;
};

/// Symmetrized compound-Poisson symbol. The Levy measure places mass m_j/2 on
/// each of +-v_j, so lambda(a) = sum_j m_j (1 - cos <a, v_j>) and the total
/// mass is sum_j m_j.
struct CompoundPoisson {
    std::vector<JumpAtom> atoms;
    bool operator==(const CompoundPoisson&) const = default;
};

struct LevySymbol;

struct SymbolSum {
    std::vector<LevySymbol> terms;
    bool operator==(const SymbolSum&) const = default;
};

struct LevySymbol {
    std::variant<GaussianForm, StableNorm, StableMixing, CompoundPoisson, SymbolSum> kind;

    static LevySymbol gaussian(DiagOp covariance);
    static LevySymbol stable_norm(double alpha, DiagOp shape);
    static LevySymbol stable_mixing(double alpha, std::vector<WeightedAtom> atoms);
    static LevySymbol compound_poisson(std::vector<JumpAtom> atoms);
    static LevySymbol sum(std::vector<LevySymbol> terms);

    bool operator==(const LevySymbol&) const = default;
};

double symbol_eval(const LevySymbol& symbol, const Vec& a);

/// Finite-sample negative-definiteness probe: draws n vectors a_i and complex
/// coefficients c_i with sum c_i = 0, and returns the maximum over `trials`
/// seeded trials of Re sum_{i,j} phi(a_i - a_j) c_i conj(c_j). Negative
/// definite phi keeps this <= 0 up to roundoff.
double negative_definite_violation(const std::function<double(const Vec&)>& phi, int dim, int n,
                                   int trials, std::uint64_t seed);
double negative_definite_check(const LevySymbol& symbol, int dim, int n, std::uint64_t seed);

/// c_alpha = Int_0^inf (1 - cos u) u^{-1-alpha} du, computed once per alpha by
/// adaptive quadrature plus an integrated-by-parts tail, cached thread-safely.
double stable_constant(double alpha);

/// Int_{||x||>1} ||x|| M(dx) for symbols with an explicit Levy measure:
/// StableMixing -> c_alpha^{-1} (alpha-1)^{-1} sum_k w_k ||x_k||^alpha,
/// CompoundPoisson -> sum_j m_j ||v_j|| [||v_j|| > 1], and sums thereof.
/// Other kinds throw UndefinedForKindError.
double levy_tail_moment(const LevySymbol& symbol);

/// Ray measure c_alpha^{-1} Int Int 1_B(t x) t^{-1-alpha} dt theta(dx).
struct StableRayMeasure {
    double alpha;
    std::vector<WeightedAtom> mixing_atoms;
};
/// Symmetrized finite atom list, mass m_j/2 on each of +-v_j.
struct FiniteAtomMeasure {
    std::vector<JumpAtom> atoms;
};
/// Isotropic stable Levy measure of ||S^{1/2} a||^alpha (Gaussian mixing).
struct IsotropicStableMeasure {
    double alpha;
    DiagOp shape;
};
using LevyMeasurePart = std::variant<StableRayMeasure, FiniteAtomMeasure, IsotropicStableMeasure>;

/// Levy-Khinchin data (b, R, M) of a symbol. Under the symmetric hypothesis
/// b = 0 and M is symmetric; M is described symbolically, one part per
/// non-Gaussian component (empty = no jump part).
struct LevyTriple {
    Vec drift;
    DiagOp covariance;
    std::vector<LevyMeasurePart> jump_parts;
};

LevyTriple to_triple(const LevySymbol& symbol, int dim);

/// True if the symbol has a Gaussian component; gathers its covariance.
bool gaussian_part(const LevySymbol& symbol, int dim, DiagOp* out);
/// Collects compound-Poisson atoms across Sum nesting (empty if none).
std::vector<JumpAtom> compound_poisson_part(const LevySymbol& symbol);
/// Finds the StableNorm component, if any (at most one supported).
bool stable_norm_part(const LevySymbol& symbol, StableNorm* out);
bool has_stable_mixing_part(const LevySymbol& symbol);

}  // namespace mehler
