#include "mehlerlab/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace mehler {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
}

double RngStream::uniform() {
    // 53 explicit mantissa bits, offset half an ulp into (0,1).
    return (double(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * kPi * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

double RngStream::exponential() { return -std::log(uniform()); }

std::uint64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0)) throw StructuralError("poisson: mean must be >= 0");
    std::uint64_t total = 0;
    while (mean > 500.0) {
        // Split so exp(-mean) stays far from the underflow threshold.
        std::uint64_t part = poisson(500.0);
        total += part;
        mean -= 500.0;
    }
    const double threshold = std::exp(-mean);
    double p = 1.0;
    std::uint64_t k = 0;
    do {
        ++k;
        p *= uniform();
    } while (p > threshold);
    return total + k - 1;
}

double RngStream::one_sided_stable(double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw StructuralError("one_sided_stable: rho must be in (0,1)");
    // Kanter: S = (A(theta)/E)^{(1-rho)/rho} with
    // A(u) = sin(rho u)^{rho/(1-rho)} sin((1-rho) u) / sin(u)^{1/(1-rho)},
    // evaluated in log space (the direct powers under/overflow as rho -> 1).
    const double theta = kPi * uniform();
    const double e = exponential();
    const double log_s = std::log(std::sin(rho * theta)) +
                         (1.0 - rho) / rho * std::log(std::sin((1.0 - rho) * theta)) -
                         std::log(std::sin(theta)) / rho -
                         (1.0 - rho) / rho * std::log(e);
    return std::exp(log_s);
}

namespace {

double resolve_lower(const MehlerModel& m, double s, double t) {
    if (s == kMinusInfinity) return t - horizon(m, kSamplerHorizonNorm);
    if (!(s <= t)) throw std::domain_error("sampler: requires s <= t");
    return s;
}

}  // namespace

SampleBatch sample_gaussian(const MehlerModel& m, double s, double t, int n_draws,
                            RngStream& rng) {
    if (n_draws < 1) throw StructuralError("sample_gaussian: need n_draws >= 1");
    const DiagOp cov = gaussian_covariance(m, s, t);  // throws if no Gaussian part
    const int dim = m.space.dim;
    std::vector<double> sd(dim);
    for (int i = 0; i < dim; ++i) sd[i] = std::sqrt(cov[i]);
    SampleBatch batch;
    batch.dim = dim;
    batch.t = t;
    batch.provenance = "gaussian";
    batch.data.resize(std::size_t(n_draws) * dim);
    for (int j = 0; j < n_draws; ++j)
        for (int i = 0; i < dim; ++i)
            batch.data[std::size_t(j) * dim + i] = sd[i] * rng.normal();
    return batch;
}

SampleBatch sample_compound_poisson(const MehlerModel& m, double s, double t, int n_draws,
                                    RngStream& rng) {
    if (n_draws < 1) throw StructuralError("sample_compound_poisson: need n_draws >= 1");
    const std::vector<JumpAtom> atoms = compound_poisson_part(m.symbol);
    if (atoms.empty())
        throw UndefinedForKindError("sample_compound_poisson: no compound-Poisson component");
    const double lower = resolve_lower(m, s, t);
    const int dim = m.space.dim;
    double total_mass = 0.0;
    std::vector<double> cumulative;
    for (const auto& ja : atoms) {
        total_mass += ja.mass;
        cumulative.push_back(total_mass);
    }
    SampleBatch batch;
    batch.dim = dim;
    batch.t = t;
    batch.provenance = "compound-poisson";
    batch.data.assign(std::size_t(n_draws) * dim, 0.0);
    const double window = t - lower;
    for (int j = 0; j < n_draws; ++j) {
        const std::uint64_t jumps = rng.poisson(total_mass * window);
        double* row = batch.data.data() + std::size_t(j) * dim;
        for (std::uint64_t k = 0; k < jumps; ++k) {
            const double r = lower + window * rng.uniform();
            const double pick = total_mass * rng.uniform();
            std::size_t idx =
                std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin();
            if (idx >= atoms.size()) idx = atoms.size() - 1;
            const double sign = (rng.uniform() < 0.5) ? 1.0 : -1.0;
            const Vec mark = scale(sign, atoms[idx].jump);
            const Vec moved = evolve(m.family, r, t, apply_diag(sigma_eval(m.sigma, r), mark));
            for (int i = 0; i < dim; ++i) row[i] += moved[i];
        }
    }
    return batch;
}

SampleBatch sample_stable(const MehlerModel& m, double s, double t, int n_draws, int grid_steps,
                          RngStream& rng) {
    if (n_draws < 1) throw StructuralError("sample_stable: need n_draws >= 1");
    if (grid_steps < 4) throw StructuralError("sample_stable: grid_steps must be >= 4");
    StableNorm part{1.5, DiagOp::zero(1)};
    if (!stable_norm_part(m.symbol, &part))
        throw UndefinedForKindError("sample_stable: no StableNorm component");
    const double lower = resolve_lower(m, s, t);
    const int dim = m.space.dim;
    const double delta = (t - lower) / grid_steps;
    const double rho = 0.5 * part.alpha;
    const double increment_scale = std::pow(delta, 1.0 / part.alpha);

    // Per-cell transport coefficients U_{r_k,t} sigma(r_k) S^{1/2} evaluated
    // at the left endpoints (Euler).
    std::vector<double> coeff(std::size_t(grid_steps) * dim);
    for (int k = 0; k < grid_steps; ++k) {
        const double r = lower + k * delta;
        const DiagOp sig = sigma_eval(m.sigma, r);
        for (int i = 0; i < dim; ++i) {
            const double u = std::exp(-log_decay(m.family, r, t, i));
            coeff[std::size_t(k) * dim + i] = u * sig[i] * std::sqrt(part.shape[i]);
        }
    }

    SampleBatch batch;
    batch.dim = dim;
    batch.t = t;
    batch.provenance = "stable";
    batch.data.assign(std::size_t(n_draws) * dim, 0.0);
    for (int j = 0; j < n_draws; ++j) {
        double* row = batch.data.data() + std::size_t(j) * dim;
        for (int k = 0; k < grid_steps; ++k) {
            const double sub = rng.one_sided_stable(rho);
            const double amp = increment_scale * std::sqrt(2.0 * sub);
            const double* ck = coeff.data() + std::size_t(k) * dim;
            for (int i = 0; i < dim; ++i) row[i] += ck[i] * amp * rng.normal();
        }
    }
    return batch;
}

SampleBatch sample_mu(const MehlerModel& m, double s, double t, int n_draws, int grid_steps,
                      RngStream& rng) {
    if (has_stable_mixing_part(m.symbol))
        throw UndefinedForKindError("sample_mu: StableMixing has no sampler");
    const int dim = m.space.dim;
    SampleBatch batch;
    batch.dim = dim;
    batch.t = t;
    batch.provenance = "mu";
    batch.data.assign(std::size_t(n_draws) * dim, 0.0);
    bool any = false;
    auto accumulate = [&](const SampleBatch& part) {
        for (std::size_t idx = 0; idx < batch.data.size(); ++idx) batch.data[idx] += part.data[idx];
        any = true;
    };
    if (gaussian_part(m.symbol, dim, nullptr)) accumulate(sample_gaussian(m, s, t, n_draws, rng));
    if (!compound_poisson_part(m.symbol).empty())
        accumulate(sample_compound_poisson(m, s, t, n_draws, rng));
    if (stable_norm_part(m.symbol, nullptr))
        accumulate(sample_stable(m, s, t, n_draws, grid_steps, rng));
    if (!any) throw UndefinedForKindError("sample_mu: symbol has no samplable component");
    return batch;
}

SampleBatch sample_entrance(const EntranceLaw& law, double t, int n_draws, RngStream& rng,
                            int grid_steps) {
    SampleBatch batch = sample_mu(law.model(), kMinusInfinity, t, n_draws, grid_steps, rng);
    batch.provenance = "entrance";
    const int dim = batch.dim;
    const auto& comps = law.components();
    if (comps.size() == 1) {
        const Vec shift = kappa_eval(comps[0].path, t, dim);
        bool zero = true;
        for (int i = 0; i < dim; ++i) zero = zero && shift[i] == 0.0;
        if (!zero)
            for (int j = 0; j < n_draws; ++j)
                for (int i = 0; i < dim; ++i) batch.data[std::size_t(j) * dim + i] += shift[i];
        return batch;
    }
    std::vector<Vec> shifts;
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& wp : comps) {
        shifts.push_back(kappa_eval(wp.path, t, dim));
        total += wp.weight;
        cumulative.push_back(total);
    }
    for (int j = 0; j < n_draws; ++j) {
        const double pick = total * rng.uniform();
        std::size_t idx =
            std::lower_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin();
        if (idx >= shifts.size()) idx = shifts.size() - 1;
        for (int i = 0; i < dim; ++i) batch.data[std::size_t(j) * dim + i] += shifts[idx][i];
    }
    return batch;
}

CFEstimate empirical_cf(const SampleBatch& batch, const Vec& a) {
    const int n = batch.n();
    if (n < 1) throw StructuralError("empirical_cf: empty batch");
    if (a.dim() != batch.dim) throw StructuralError("empirical_cf: probe dimension mismatch");
    double re = 0.0, im = 0.0;
    for (int j = 0; j < n; ++j) {
        double phase = 0.0;
        for (int i = 0; i < batch.dim; ++i) phase += a[i] * batch.at(j, i);
        re += std::cos(phase);
        im += std::sin(phase);
    }
    const std::complex<double> value(re / n, im / n);
    const double mod2 = std::norm(value);
    const double envelope = std::sqrt(std::max(0.0, 1.0 - mod2) / n);
    return CFEstimate{value, std::max(envelope, 1.0 / std::sqrt(double(n)))};
}

Vec batch_mean(const SampleBatch& batch) {
    Vec mean = Vec::zero(batch.dim);
    const int n = batch.n();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < batch.dim; ++i) mean[i] += batch.at(j, i);
    for (int i = 0; i < batch.dim; ++i) mean[i] /= n;
    return mean;
}

}  // namespace mehler
