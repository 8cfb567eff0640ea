#pragma once

#include <variant>

#include "mehlerlab/space.hpp"

namespace mehler {

/// U_{s,t} = e^{-omega (t-s)} I.
struct ScalarContraction {
    double omega;
    bool operator==(const ScalarContraction&) const = default;
};

/// U_{s,t} = diag(e^{-eig_i (t-s)}), all eig_i > 0. The Dirichlet Laplacian
/// preset uses eig_i = pi^2 i^2.
struct DiagonalSemigroup {
    DiagOp eigs;
    bool operator==(const DiagonalSemigroup&) const = default;
};

/// U_{s,t} = e^{-Int_s^t w(r) dr} I with w(r) = omega0 (1 + amp sin(2 pi r / T)).
/// The integral is evaluated in closed form, so the cocycle identity holds to
/// machine precision.
struct PeriodicScalar {
    double omega0;
    double amp;
    double period;
    bool operator==(const PeriodicScalar&) const = default;
};

struct EvolutionFamily {
    std::variant<ScalarContraction, DiagonalSemigroup, PeriodicScalar> kind;

    static EvolutionFamily scalar_contraction(double omega);
    static EvolutionFamily diagonal_semigroup(DiagOp eigs);
    static EvolutionFamily periodic_scalar(double omega0, double amp, double period);
    /// Dirichlet Laplacian on (0,1): eig_i = pi^2 i^2, i = 1..dim.
    static EvolutionFamily dirichlet_laplacian(int dim);

    bool operator==(const EvolutionFamily&) const = default;
};

struct ContractionCertificate {
    double c;
    double omega;
};

/// Signed log-decay exponent of mode i over [s,t]: U factor = e^{-value}.
/// Defined for every (s,t); the backward kappa extension uses s > t.
double log_decay(const EvolutionFamily& U, double s, double t, int mode);

/// U_{s,t} x. Requires s <= t. Families are diagonal, so U* = U and the same
/// call serves the adjoint.
Vec evolve(const EvolutionFamily& U, double s, double t, const Vec& x);

/// Diagonal of U_{s,t} (s <= t).
DiagOp propagator_diag(const EvolutionFamily& U, double s, double t, int dim);

/// Tightest closed-form (c, omega) with ||U_{s,t}|| <= c e^{-omega (t-s)}.
ContractionCertificate contraction_certificate(const EvolutionFamily& U);

/// sigma(r) = base, constant in r.
struct ConstantDiag {
    DiagOp base;
    bool operator==(const ConstantDiag&) const = default;
};

/// sigma(r) = (1 + amp cos(2 pi r / T)) base.
struct PeriodicScalarMod {
    DiagOp base;
    double amp;
    double period;
    bool operator==(const PeriodicScalarMod&) const = default;
};

struct Sigma {
    std::variant<ConstantDiag, PeriodicScalarMod> kind;

    static Sigma constant(DiagOp base);
    static Sigma periodic_scalar_mod(DiagOp base, double amp, double period);

    bool operator==(const Sigma&) const = default;
};

DiagOp sigma_eval(const Sigma& sigma, double r);

/// sup_r ||sigma(r)|| in operator norm.
double sigma_sup_norm(const Sigma& sigma);

/// Declared period of the pair (U, sigma), or throws UndefinedForKindError.
/// Only PeriodicScalar families carry a distinguished period; sigma must be
/// constant or modulated with the same period.
double declared_period(const EvolutionFamily& U, const Sigma& sigma);

}  // namespace mehler
