#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mehlerlab/entrance.hpp"
#include "mehlerlab/mehler.hpp"

namespace mehler {

/// Deterministic random stream: (seed, stream_id) fully determines the output
/// sequence. All distributions are generated from explicitly constructed
/// 53-bit uniforms, so batches are bit-identical across runs and platforms.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    /// Uniform on (0,1), never exactly 0 or 1.
    double uniform();
    double normal();
    double exponential();
    /// Exact Poisson by Knuth's product method (recursively split for large
    /// mean so the e^{-lambda} threshold stays representable).
    std::uint64_t poisson(double mean);
    /// One-sided stable S with Laplace transform E e^{-u S} = e^{-u^rho},
    /// rho in (0,1), by the Chambers-Mallows-Stuck / Kanter representation
    /// S = (A(theta)/E)^{(1-rho)/rho}.
    double one_sided_stable(double rho);

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// N draws (rows) of dim coordinates at a common time t, stored flat.
struct SampleBatch {
    int dim = 0;
    double t = 0.0;
    std::vector<double> data;  // n() * dim, row-major
    std::string provenance;

    int n() const { return dim == 0 ? 0 : static_cast<int>(data.size()) / dim; }
    double at(int row, int i) const { return data[static_cast<std::size_t>(row) * dim + i]; }
};

struct CFEstimate {
    std::complex<double> value;
    double stderr_bound;
};

/// Reference probe norm at which the sampler's -infinity horizon is fixed, so
/// sampler and CF truncate consistently.
constexpr double kSamplerHorizonNorm = 16.0;

/// Exact draws from the Gaussian part: centered normal with covariance
/// gaussian_covariance(m, s, t).
SampleBatch sample_gaussian(const MehlerModel& m, double s, double t, int n_draws, RngStream& rng);

/// Exact draws from the compound-Poisson part of the stochastic convolution:
/// Poisson number of jumps, uniform jump times, symmetrized marks, each
/// transported by U_{r,t} sigma(r).
SampleBatch sample_compound_poisson(const MehlerModel& m, double s, double t, int n_draws,
                                    RngStream& rng);

/// Euler-grid draws from the StableNorm part: per cell an isotropic
/// alpha-stable increment scale Delta^{1/alpha}, realized as sqrt(2 S) Z with
/// S an (alpha/2)-subordinator, so each cell's CF is e^{-Delta ||a||^alpha}
/// exactly; the grid bias is O(1/grid_steps).
SampleBatch sample_stable(const MehlerModel& m, double s, double t, int n_draws, int grid_steps,
                          RngStream& rng);

/// Draws from mu_{s,t} (s may be -infinity): dispatches on the symbol kind
/// and sums independent parts for Sum symbols. StableMixing has no sampler.
SampleBatch sample_mu(const MehlerModel& m, double s, double t, int n_draws, int grid_steps,
                      RngStream& rng);

/// Draws from the entrance law at time t: base draws from mu_{-inf,t} shifted
/// by kappa_t, mixture components picked with their weights per draw.
SampleBatch sample_entrance(const EntranceLaw& law, double t, int n_draws, RngStream& rng,
                            int grid_steps = 256);

/// (1/N) sum_j e^{i<a, x_j>} with the conservative stderr envelope.
CFEstimate empirical_cf(const SampleBatch& batch, const Vec& a);

Vec batch_mean(const SampleBatch& batch);

}  // namespace mehler
