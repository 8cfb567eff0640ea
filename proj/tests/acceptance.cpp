// Acceptance suite: one pass/fail line per criterion, run at desk scale
// (dim <= 16, N <= 1e5). Every tolerance is pinned in code.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "mehlerlab/cli.hpp"
#include "mehlerlab/config.hpp"
#include "mehlerlab/report_io.hpp"

using namespace mehler;
namespace fs = std::filesystem;

namespace {

void criterion_line(int number, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %02d %s  %s (%s)\n", number, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

const std::vector<std::string> kModelPresets = {"gaussian-scalar", "stable-scalar", "cp-scalar",
                                                "gaussian-laplacian", "periodic-stable"};

ProbeSet preset_probes(const MehlerModel& m, std::uint64_t seed) {
    return ProbeSet::generate(m.space, seed, std::max(16, 31 - 2 * m.space.dim));
}

Vec random_vec(int dim, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> gauss(0.0, scale);
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = gauss(rng);
    return v;
}

// Independent quadrature for c_alpha (distinct algorithm from the library's
// adaptive Gauss-Kronrod path): integration by parts to (1/alpha)
// Int_0^inf sin(u) u^{-alpha} du, alternating series over half-periods with
// composite Simpson panels and Euler averaging.
double stable_constant_independent(double alpha) {
    auto simpson = [](const std::function<double(double)>& f, double a, double b) {
        const int n = 128;
        const double h = (b - a) / n;
        double acc = f(a) + f(b);
        for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
        return acc * h / 3.0;
    };
    auto sin_remainder = [](double u) {
        if (u < 1.0) {
            const double u2 = u * u;
            return -u2 * u2 * u2 * u / 5040.0 *
                   (1.0 - u2 / 72.0 * (1.0 - u2 / 110.0 * (1.0 - u2 / 156.0)));
        }
        return std::sin(u) - u * (1.0 - u * u / 6.0 * (1.0 - u * u / 20.0));
    };
    const double pi = 3.1415926535897932384626433832795;
    double sum = std::pow(pi, 2.0 - alpha) / (2.0 - alpha) -
                 std::pow(pi, 4.0 - alpha) / (6.0 * (4.0 - alpha)) +
                 std::pow(pi, 6.0 - alpha) / (120.0 * (6.0 - alpha)) +
                 simpson([&](double u) { return u == 0.0 ? 0.0 : sin_remainder(u) * std::pow(u, -alpha); },
                         0.0, pi);
    const int terms = 400;
    std::vector<double> partial(terms);
    partial[0] = sum;
    for (int k = 1; k < terms; ++k) {
        sum += simpson([&](double u) { return std::sin(u) * std::pow(u, -alpha); }, k * pi,
                       (k + 1) * pi);
        partial[k] = sum;
    }
    std::vector<double> tail(partial.end() - 24, partial.end());
    for (int round = 0; round < 8; ++round)
        for (std::size_t i = 0; i + 1 < tail.size(); ++i) tail[i] = 0.5 * (tail[i] + tail[i + 1]);
    return tail[0] / alpha;
}

}  // namespace

TEST_CASE("criterion 1: closed-form oracle agreement on gaussian-scalar") {
    const MehlerModel m = make_preset("gaussian-scalar").model;
    const ProbeSet probes = preset_probes(m, 8101);
    double worst = 0.0;
    for (double t : {-0.8, 0.0, 1.7}) {
        for (const Vec& a : probes.probes) {
            const double n2 = inner(a, a);
            if (n2 == 0.0) continue;
            const double got = exponent(m, kMinusInfinity, t, a).value;
            worst = std::max(worst, std::abs(got - 0.25 * n2) / (0.25 * n2));
        }
        const DiagOp cov = gaussian_covariance(m, kMinusInfinity, t);
        for (int i = 0; i < m.space.dim; ++i)
            worst = std::max(worst, std::abs(cov[i] - 0.5) / 0.5);
    }
    const bool pass = worst <= 1e-9;
    criterion_line(1, pass, "closed-form oracle agreement (exponent, covariance)",
                   "max rel err " + format_double(worst));
    CHECK(pass);
}

TEST_CASE("criterion 2: Chapman-Kolmogorov on all five presets") {
    double worst = 0.0;
    std::string worst_preset;
    for (const std::string& name : kModelPresets) {
        const MehlerModel m = make_preset(name).model;
        std::mt19937_64 rng(8201);
        std::uniform_real_distribution<double> uni(-2.0, 3.0);
        for (int trial = 0; trial < 100; ++trial) {
            double s = uni(rng), r = uni(rng), t = uni(rng);
            if (s > r) std::swap(s, r);
            if (r > t) std::swap(r, t);
            if (s > r) std::swap(s, r);
            const Vec a = random_vec(m.space.dim, rng, 1.0);
            const double res = ck_residual(m, s, r, t, a);
            if (res > worst) {
                worst = res;
                worst_preset = name;
            }
        }
    }
    const bool pass = worst <= 1e-8;
    criterion_line(2, pass, "Chapman-Kolmogorov residual, 100 tuples x 5 presets",
                   "max " + format_double(worst) + " at " + worst_preset);
    CHECK(pass);
}

TEST_CASE("criterion 3: entrance-law flow for extremal and 3-component mixture laws") {
    double worst = 0.0;
    for (const std::string& name : kModelPresets) {
        const MehlerModel m = make_preset(name).model;
        const ProbeSet probes = ProbeSet::generate(m.space, 8301, 16);
        const EntranceLaw extremal = default_extremal_law(m, 8302);
        const EntranceLaw mixture = default_mixture_law(m, 8303);
        REQUIRE(mixture.components().size() == 3);
        std::mt19937_64 rng(8304);
        const double lo = safe_law_time(m.family);
        std::uniform_real_distribution<double> uni(lo, 3.0);
        for (int trial = 0; trial < 50; ++trial) {
            double s = uni(rng), t = uni(rng);
            if (s > t) std::swap(s, t);
            worst = std::max(worst, flow_residual(extremal, s, t, probes));
            worst = std::max(worst, flow_residual(mixture, s, t, probes));
        }
    }
    const bool pass = worst <= 1e-8;
    criterion_line(3, pass, "entrance-law flow identity, 50 (s,t) pairs x 5 presets",
                   "max " + format_double(worst));
    CHECK(pass);
}

TEST_CASE("criterion 4: mean projection recovers kappa; CF metric separates laws") {
    double worst_mean = 0.0;
    std::mt19937_64 rng(8401);
    const MehlerModel m = make_preset("gaussian-scalar").model;
    const MehlerModel ms = make_preset("stable-scalar").model;
    for (int trial = 0; trial < 20; ++trial) {
        const MehlerModel& model = (trial % 2 == 0) ? m : ms;
        const Vec x0 = random_vec(model.space.dim, rng, 0.8);
        std::uniform_real_distribution<double> uni(-1.0, 2.0);
        const double t = uni(rng);
        const KappaPath path = KappaPath::from_initial(model.family, x0);
        const EntranceLaw law = EntranceLaw::extremal(model, path);
        const Vec projected = mean_projection(law, t);
        const Vec expected = kappa_eval(path, t, model.space.dim);
        for (int i = 0; i < model.space.dim; ++i)
            worst_mean = std::max(worst_mean, std::abs(projected[i] - expected[i]));
    }
    const bool mean_pass = worst_mean <= 1e-7;

    const ProbeSet probes = preset_probes(m, 8402);
    std::vector<EntranceLaw> laws;
    laws.push_back(EntranceLaw::extremal(m, KappaPath::zero(m.family)));
    for (int k = 0; k < 4; ++k)
        laws.push_back(
            EntranceLaw::extremal(m, KappaPath::from_initial(m.family, random_vec(4, rng, 0.7))));
    double min_gap = 1e300;
    for (std::size_t i = 0; i < laws.size(); ++i)
        for (std::size_t j = i + 1; j < laws.size(); ++j) {
            double gap = 0.0;
            for (double t : {-0.5, 0.0, 1.0})
                for (const Vec& a : probes.probes)
                    gap = std::max(gap, std::abs(entrance_cf(laws[i], t, a).value -
                                                 entrance_cf(laws[j], t, a).value));
            min_gap = std::min(min_gap, gap);
        }
    const bool gap_pass = min_gap > 1e-6;
    criterion_line(4, mean_pass && gap_pass, "bijection/mean consistency",
                   "max mean err " + format_double(worst_mean) + ", min CF gap " +
                       format_double(min_gap));
    CHECK(mean_pass);
    CHECK(gap_pass);
}

TEST_CASE("criterion 5: symmetry of mu_{-inf,t}") {
    double worst_im = 0.0;
    for (const std::string& name : kModelPresets) {
        const MehlerModel m = make_preset(name).model;
        const ProbeSet probes = preset_probes(m, 8501);
        for (const Vec& a : probes.probes)
            worst_im = std::max(worst_im,
                                std::abs(mu_cf(m, kMinusInfinity, 0.45, a).value.imag()));
    }
    const bool im_pass = worst_im == 0.0;

    double worst_ratio = 0.0;
    const int n = 100000;
    for (const std::string& name : {std::string("gaussian-scalar"), std::string("gaussian-laplacian")}) {
        const MehlerModel m = make_preset(name).model;
        RngStream rng(8502, 0);
        const SampleBatch batch = sample_gaussian(m, kMinusInfinity, 0.45, n, rng);
        const DiagOp cov = gaussian_covariance(m, kMinusInfinity, 0.45);
        double trace = 0.0;
        for (double v : cov.diag) trace += v;
        const double bound = 4.0 * std::sqrt(trace / n);
        worst_ratio = std::max(worst_ratio, norm(batch_mean(batch)) / bound);
    }
    const bool mean_pass = worst_ratio <= 1.0;
    criterion_line(5, im_pass && mean_pass, "symmetry: Im CF exactly 0, sampler mean centered",
                   "max |Im| " + format_double(worst_im) + ", mean/bound " +
                       format_double(worst_ratio));
    CHECK(im_pass);
    CHECK(mean_pass);
}

TEST_CASE("criterion 6: sampler-vs-CF cross-validation at N = 1e5") {
    const int n = 100000;
    bool all_pass = true;
    std::string detail;
    // Gaussian and compound-Poisson samplers are exact; stable models get the
    // Euler-grid allowance. Every samplable preset takes part.
    const struct {
        const char* preset;
        bool stable;
    } cases[5] = {{"gaussian-scalar", false},
                  {"cp-scalar", false},
                  {"stable-scalar", true},
                  {"gaussian-laplacian", false},
                  {"periodic-stable", true}};
    for (const auto& c : cases) {
        const MehlerModel m = make_preset(c.preset).model;
        const ProbeSet probes = preset_probes(m, 8601);
        REQUIRE(probes.size() == 32);
        RngStream rng(8602, 0);
        const SampleBatch batch = sample_mu(m, kMinusInfinity, 0.3, n, 256, rng);
        const double allowance = c.stable ? kStableGridBiasC / 256.0 : 0.0;
        int hits = 0;
        for (const Vec& a : probes.probes) {
            const CFEstimate emp = empirical_cf(batch, a);
            const CFValue theory = mu_cf(m, kMinusInfinity, 0.3, a);
            if (std::abs(emp.value - theory.value) <= 3.0 * emp.stderr_bound + allowance) ++hits;
        }
        const double fraction = double(hits) / probes.size();
        all_pass = all_pass && fraction >= 0.95;
        detail += std::string(c.preset) + " " + std::to_string(hits) + "/32 ";
    }
    criterion_line(6, all_pass, "sampler vs quadrature CF, 3 stderr on >= 95% of 32 probes",
                   detail);
    CHECK(all_pass);
}

TEST_CASE("criterion 7: T-periodic uniqueness mechanism") {
    const Preset preset = make_preset("periodic-stable");
    const MehlerModel& m = preset.model;
    const ProbeSet probes = preset_probes(m, 8701);
    const EntranceLaw mixture = default_mixture_law(m, 8702);
    std::vector<double> residuals;
    for (int nn = 1; nn <= 11; ++nn)
        residuals.push_back(periodic_residual(mixture, 0.4, nn, probes));
    const double bound = std::exp(-1.0 * (1.0 - 0.5) * 1.0) * 1.01;
    double worst_ratio = 0.0;
    for (int nn = 1; nn <= 10; ++nn)
        worst_ratio = std::max(worst_ratio, residuals[nn] / residuals[nn - 1]);
    const bool ratio_pass = worst_ratio <= bound;

    const EntranceLaw zero_law = EntranceLaw::extremal(m, KappaPath::zero(m.family));
    double zero_res = 0.0;
    for (int nn : {1, 4, 9}) zero_res = std::max(zero_res, periodic_residual(zero_law, 0.4, nn, probes));
    const bool zero_pass = zero_res == 0.0;
    criterion_line(7, ratio_pass && zero_pass, "periodic pullback decays at the certified rate",
                   "max ratio " + format_double(worst_ratio) + " vs bound " +
                       format_double(bound) + ", zero-law residual " + format_double(zero_res));
    CHECK(ratio_pass);
    CHECK(zero_pass);
}

TEST_CASE("criterion 8: hypothesis certificates") {
    // Stable-mixing tail moment against the closed form with an
    // independently computed c_alpha.
    const MehlerModel mix = make_preset("stable-mixing").model;
    const double value = levy_tail_moment(mix.symbol);
    const auto* mixing = std::get_if<StableMixing>(&mix.symbol.kind);
    REQUIRE(mixing != nullptr);
    double atom_sum = 0.0;
    for (const auto& wa : mixing->atoms) atom_sum += wa.weight * std::pow(norm(wa.atom), mixing->alpha);
    const double oracle =
        atom_sum / (stable_constant_independent(mixing->alpha) * (mixing->alpha - 1.0));
    const double tail_err = std::abs(value - oracle);
    const bool tail_pass = tail_err <= 1e-6;

    // Dirichlet preset: sum of inverse eigenvalues approaches 1/6.
    const MehlerModel lap = make_preset("gaussian-laplacian").model;
    const auto* diag = std::get_if<DiagonalSemigroup>(&lap.family.kind);
    REQUIRE(diag != nullptr);
    double trace = 0.0;
    for (double eig : diag->eigs.diag) trace += 1.0 / eig;
    const double pi_sq = 9.869604401089358618834490999876;
    const double trace_err = std::abs(trace - 1.0 / 6.0);
    const double trace_bound = 1.0 / (pi_sq * lap.space.dim);
    const bool trace_pass = trace_err <= trace_bound;

    criterion_line(8, tail_pass && trace_pass, "hypothesis certificates",
                   "tail err " + format_double(tail_err) + ", trace err " +
                       format_double(trace_err) + " <= " + format_double(trace_bound));
    CHECK(tail_pass);
    CHECK(trace_pass);
}

TEST_CASE("criterion 9: definiteness checks and negative controls") {
    double worst_nd = 0.0;
    double worst_pd = 0.0;
    std::vector<std::string> all_presets = kModelPresets;
    all_presets.push_back("stable-mixing");
    for (const std::string& name : all_presets) {
        const MehlerModel m = make_preset(name).model;
        worst_nd =
            std::max(worst_nd, negative_definite_check(m.symbol, m.space.dim, 8, 8901));
        const ProbeSet probes = ProbeSet::generate(m.space, 8902, 16);
        const double eig = positive_definite_check(
            [&](const Vec& a) { return mu_cf(m, kMinusInfinity, 0.2, a).value; }, probes);
        worst_pd = std::max(worst_pd, -eig);
    }
    const bool nd_pass = worst_nd <= 1e-10;
    const bool pd_pass = worst_pd <= 1e-9;

    // Negative controls must be detected.
    auto cube = [](const Vec& a) { return std::pow(norm(a), 3.0); };
    const bool cube_detected = negative_definite_violation(cube, 4, 8, 50, 8903) > 0.0;
    ProbeSet scaled = ProbeSet::generate(TruncatedSpace(4, "pd"), 8904, 16);
    for (Vec& p : scaled.probes) p = scale(0.6, p);
    const double fixture_eig = positive_definite_check(
        [](const Vec& a) {
            return std::complex<double>(std::exp(-5.0 * std::pow(norm(a), 3.0)), 0.0);
        },
        scaled);
    const bool fixture_detected = fixture_eig < -1e-6;
    criterion_line(9, nd_pass && pd_pass && cube_detected && fixture_detected,
                   "definiteness of symbols and CFs, negative controls detected",
                   "max ND violation " + format_double(worst_nd) + ", min Gram eig -" +
                       format_double(worst_pd));
    CHECK(nd_pass);
    CHECK(pd_pass);
    CHECK(cube_detected);
    CHECK(fixture_detected);
}

TEST_CASE("criterion 10: verify is deterministic (bit-identical report.csv)") {
    const fs::path dir = fs::temp_directory_path() / "mehlerlab_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    Config config = config_from_preset("cp-scalar");
    config.experiment.mc = McConfigC{50000, 128, 4242};
    for (const char* run_dir : {"run1", "run2"}) {
        Config c = config;
        c.output.directory = (dir / run_dir).string();
        std::ofstream out(dir / (std::string(run_dir) + ".json"));
        out << serialize_config(c);
    }
    std::ostringstream sink;
    const int code1 =
        run_cli({"verify", "--config", (dir / "run1.json").string()}, sink, sink);
    const int code2 =
        run_cli({"verify", "--config", (dir / "run2.json").string()}, sink, sink);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string csv1 = slurp(dir / "run1" / "report.csv");
    const std::string csv2 = slurp(dir / "run2" / "report.csv");
    const bool pass = code1 == 0 && code2 == 0 && !csv1.empty() && csv1 == csv2;
    criterion_line(10, pass, "two verify runs produce bit-identical report.csv",
                   "exit codes " + std::to_string(code1) + "/" + std::to_string(code2) + ", " +
                       std::to_string(csv1.size()) + " bytes");
    CHECK(pass);
}
