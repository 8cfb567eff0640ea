#pragma once

#include <functional>

#include "mehlerlab/errors.hpp"

namespace mehler {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 1;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over the finite interval
/// [a, b]. The worst panel (largest error estimate) is bisected until the
/// accumulated estimate satisfies
///     total_err <= max(abs_tol, rel_tol * |total_value|)
/// or the panel budget is exhausted, in which case a NumericalError carrying
/// the partial estimate is thrown. Integrands with isolated kinks (|.|^alpha
/// at zero crossings) are handled by the subdivision; endpoints are never
/// evaluated.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, int max_subdivisions);

}  // namespace mehler
