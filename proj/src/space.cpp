#include "mehlerlab/space.hpp"

#include <cmath>
#include <random>

namespace mehler {

namespace {

void require_same_dim(int a, int b, const char* op) {
    if (a != b)
        throw StructuralError(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                              " vs " + std::to_string(b) + ")");
}

}  // namespace

Vec Vec::basis(int dim, int i, double s) {
    if (i < 0 || i >= dim) throw StructuralError("Vec::basis: index out of range");
    Vec v = zero(dim);
    v[i] = s;
    return v;
}

double DiagOp::max_abs() const {
    double m = 0.0;
    for (double d : diag) m = std::max(m, std::abs(d));
    return m;
}

double inner(const Vec& x, const Vec& y) {
    require_same_dim(x.dim(), y.dim(), "inner");
    double s = 0.0;
    for (int i = 0; i < x.dim(); ++i) s += x[i] * y[i];
    return s;
}

double norm(const Vec& x) { return std::sqrt(inner(x, x)); }

Vec apply_diag(const DiagOp& op, const Vec& x) {
    require_same_dim(op.dim(), x.dim(), "apply_diag");
    Vec r = x;
    for (int i = 0; i < x.dim(); ++i) r[i] = op[i] * x[i];
    return r;
}

Vec add(const Vec& x, const Vec& y) {
    require_same_dim(x.dim(), y.dim(), "add");
    Vec r = x;
    for (int i = 0; i < x.dim(); ++i) r[i] += y[i];
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    require_same_dim(x.dim(), y.dim(), "sub");
    Vec r = x;
    for (int i = 0; i < x.dim(); ++i) r[i] -= y[i];
    return r;
}

Vec scale(double c, const Vec& x) {
    Vec r = x;
    for (double& v : r.coords) v *= c;
    return r;
}

DiagOp compose(const DiagOp& a, const DiagOp& b) {
    require_same_dim(a.dim(), b.dim(), "compose");
    DiagOp r = a;
    for (int i = 0; i < a.dim(); ++i) r[i] *= b[i];
    return r;
}

ProbeSet ProbeSet::generate(const TruncatedSpace& space, std::uint64_t seed, int n_random) {
    if (n_random < 16) throw StructuralError("ProbeSet: need at least 16 random probes");
    ProbeSet ps;
    ps.seed = seed;
    ps.probes.push_back(Vec::zero(space.dim));
    for (int i = 0; i < space.dim; ++i) {
        ps.probes.push_back(Vec::basis(space.dim, i, +1.0));
        ps.probes.push_back(Vec::basis(space.dim, i, -1.0));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < n_random; ++k) {
        Vec dir = Vec::zero(space.dim);
        double n2 = 0.0;
        do {
            for (int i = 0; i < space.dim; ++i) dir[i] = gauss(rng);
            n2 = inner(dir, dir);
        } while (n2 == 0.0);
        // Exact norm ladder from 0.1 to 10 so the span is guaranteed.
        double target = 0.1 * std::pow(100.0, double(k) / double(n_random - 1));
        ps.probes.push_back(scale(target / std::sqrt(n2), dir));
    }
    return ps;
}

}  // namespace mehler
