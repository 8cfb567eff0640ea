#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mehlerlab/errors.hpp"

namespace mehler {

/// Finite orthonormal coordinate system: the span of the first `dim` basis
/// vectors of a separable Hilbert space. All vectors and operators taking
/// part in one computation share one TruncatedSpace.
struct TruncatedSpace {
    int dim = 1;
    std::string label;

    TruncatedSpace(int dim_, std::string label_ = {}) : dim(dim_), label(std::move(label_)) {
        if (dim < 1) throw StructuralError("TruncatedSpace: dim must be >= 1");
    }
};

/// Coordinate vector w.r.t. the orthonormal basis {e_i}.
struct Vec {
    std::vector<double> coords;

    Vec() = default;
    explicit Vec(std::vector<double> c) : coords(std::move(c)) {}
    static Vec zero(int dim) { return Vec(std::vector<double>(dim, 0.0)); }
    static Vec basis(int dim, int i, double scale = 1.0);

    int dim() const { return static_cast<int>(coords.size()); }
    double operator[](int i) const { return coords[i]; }
    double& operator[](int i) { return coords[i]; }

    bool operator==(const Vec&) const = default;
};

/// Operator diagonal in the fixed basis. Doubles as covariance (entries >= 0)
/// and as the eigenvalue list of a generator.
struct DiagOp {
    std::vector<double> diag;

    DiagOp() = default;
    explicit DiagOp(std::vector<double> d) : diag(std::move(d)) {}
    static DiagOp identity(int dim) { return DiagOp(std::vector<double>(dim, 1.0)); }
    static DiagOp zero(int dim) { return DiagOp(std::vector<double>(dim, 0.0)); }

    int dim() const { return static_cast<int>(diag.size()); }
    double operator[](int i) const { return diag[i]; }
    double& operator[](int i) { return diag[i]; }
    double max_abs() const;

    bool operator==(const DiagOp&) const = default;
};

double inner(const Vec& x, const Vec& y);
double norm(const Vec& x);
Vec apply_diag(const DiagOp& op, const Vec& x);

Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scale(double c, const Vec& x);
DiagOp compose(const DiagOp& a, const DiagOp& b);

/// Deterministic finite surrogate for "for all a in H": the zero vector, all
/// signed unit basis vectors, and n_random >= 16 pseudorandom vectors whose
/// norms ladder across [0.1, 10].
struct ProbeSet {
    std::vector<Vec> probes;
    std::uint64_t seed = 0;

    static ProbeSet generate(const TruncatedSpace& space, std::uint64_t seed, int n_random = 16);
    int size() const { return static_cast<int>(probes.size()); }
};

}  // namespace mehler
