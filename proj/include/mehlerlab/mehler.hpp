#pragma once

#include <complex>
#include <functional>
#include <limits>

#include "mehlerlab/evolution.hpp"
#include "mehlerlab/space.hpp"
#include "mehlerlab/symbols.hpp"

namespace mehler {

constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();

struct QuadConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 2000;
    double horizon_slack = 2.0;

    void validate() const;
    bool operator==(const QuadConfig&) const = default;
};

/// Everything needed to evaluate the convolution family mu_{s,t} and the
/// transition kernels pi_{s,t}: evolution family, diffusion coefficient,
/// Levy symbol, and the quadrature budget. Immutable once built.
struct MehlerModel {
    TruncatedSpace space;
    EvolutionFamily family;
    Sigma sigma;
    LevySymbol symbol;
    QuadConfig quad;

    MehlerModel(TruncatedSpace space_, EvolutionFamily family_, Sigma sigma_, LevySymbol symbol_,
                QuadConfig quad_ = {});
};

/// A characteristic-function evaluation together with the real exponent it
/// came from and the quadrature error estimate on that exponent.
struct CFValue {
    std::complex<double> value;
    double exponent = 0.0;
    double quad_error_estimate = 0.0;
};

struct ExponentResult {
    double value;
    double error_estimate;
};

/// Truncation depth T_* for integrals over (-inf, t]: chosen so the analytic
/// envelope of the neglected tail (per symbol kind, from the certified
/// contraction bound) is below quad.abs_tol, then multiplied by
/// quad.horizon_slack. a_norm is the probe norm the envelope is evaluated at.
double horizon(const MehlerModel& m, double a_norm);

/// Int_s^t lambda(sigma*(r) U*_{r,t} a) dr by adaptive quadrature; s may be
/// -infinity (horizon-truncated).
ExponentResult exponent(const MehlerModel& m, double s, double t, const Vec& a);

/// CF of mu_{s,t}: exp(-exponent). Real and in (0,1] under the symmetric
/// hypothesis; the imaginary part is exactly zero.
CFValue mu_cf(const MehlerModel& m, double s, double t, const Vec& a);

/// CF of pi_{s,t}(x, .): e^{i<a, U_{s,t} x>} mu_cf(s,t,a).
CFValue transition_cf(const MehlerModel& m, double s, double t, const Vec& x, const Vec& a);

/// R_{s,t} = Int_s^t U_{r,t} sigma(r) R sigma*(r) U*_{r,t} dr, computed per
/// diagonal mode. Requires a Gaussian component.
DiagOp gaussian_covariance(const MehlerModel& m, double s, double t);

/// Chapman-Kolmogorov defect |mu_cf(s,t,a) - mu_cf(s,r,U*_{r,t}a) mu_cf(r,t,a)|.
double ck_residual(const MehlerModel& m, double s, double r, double t, const Vec& a);

/// Minimum eigenvalue of the Hermitian Gram matrix G_{jk} = phi(a_j - a_k)
/// over the probe set; Bochner-positive phi keeps it >= -tolerance.
double positive_definite_check(const std::function<std::complex<double>(const Vec&)>& phi,
                               const ProbeSet& probes);

}  // namespace mehler
