#include "mehlerlab/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace mehler {

const double kStableGridBiasC = 32.0;

std::string check_name(CheckKind kind) {
    switch (kind) {
        case CheckKind::Ck: return "ck";
        case CheckKind::Flow: return "flow";
        case CheckKind::Mean: return "mean";
        case CheckKind::Symmetry: return "symmetry";
        case CheckKind::Periodic: return "periodic";
        case CheckKind::SamplerVsCf: return "sampler-vs-cf";
        case CheckKind::Definiteness: return "definiteness";
        case CheckKind::TailMoment: return "tail-moment";
        case CheckKind::HypothesisCertificates: return "hypothesis-certificates";
    }
    throw StructuralError("check_name: unknown kind");
}

CheckKind check_from_name(const std::string& name) {
    for (CheckKind k :
         {CheckKind::Ck, CheckKind::Flow, CheckKind::Mean, CheckKind::Symmetry,
          CheckKind::Periodic, CheckKind::SamplerVsCf, CheckKind::Definiteness,
          CheckKind::TailMoment, CheckKind::HypothesisCertificates})
        if (check_name(k) == name) return k;
    throw StructuralError("unknown check '" + name + "'");
}

bool Report::all_pass() const {
    for (const auto& row : rows)
        if (!row.pass) return false;
    return true;
}

double stable_constant_gamma(double alpha) {
    const double pi = 3.1415926535897932384626433832795;
    return std::tgamma(2.0 - alpha) * std::abs(std::cos(0.5 * pi * alpha)) /
           (alpha * (alpha - 1.0));
}

double safe_backward_time(const EvolutionFamily& family) {
    if (const auto* diag = std::get_if<DiagonalSemigroup>(&family.kind)) {
        double max_eig = diag->eigs.max_abs();
        return std::max(-2.0, -0.75 * 700.0 / max_eig);
    }
    return -2.0;
}

double safe_law_time(const EvolutionFamily& family) {
    return std::holds_alternative<DiagonalSemigroup>(family.kind) ? 0.0 : -2.0;
}

std::vector<TimeTriple> default_times(const MehlerModel& model, int count, std::uint64_t seed) {
    const double lo = safe_backward_time(model.family);
    const double hi = 3.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    std::vector<TimeTriple> times;
    times.reserve(count);
    for (int k = 0; k < count; ++k) {
        double a = uni(rng), b = uni(rng), c = uni(rng);
        if (a > b) std::swap(a, b);
        if (b > c) std::swap(b, c);
        if (a > b) std::swap(a, b);
        times.push_back({a, b, c});
    }
    return times;
}

namespace {

struct RowBuilder {
    CheckRow row;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit RowBuilder(std::string name) { row.check = std::move(name); }
    CheckRow finish(double residual, double tolerance) {
        row.residual = residual;
        row.tolerance = tolerance;
        row.pass = residual <= tolerance;
        row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               start)
                          .count();
        return row;
    }
};

const EntranceLaw& law_for(const Experiment& e) {
    if (!e.law.has_value())
        throw StructuralError("experiment '" + e.name + "': check requires an entrance law");
    return *e.law;
}

void run_ck(const Experiment& e, double tol, std::vector<CheckRow>& out) {
    for (const TimeTriple& tt : e.times) {
        RowBuilder rb("ck");
        rb.row.param_s = tt.s;
        rb.row.param_r = tt.r;
        rb.row.param_t = tt.t;
        double worst = 0.0;
        int worst_probe = 0;
        for (int p = 0; p < e.probes.size(); ++p) {
            double res = ck_residual(e.model, tt.s, tt.r, tt.t, e.probes.probes[p]);
            if (res > worst) {
                worst = res;
                worst_probe = p;
            }
        }
        rb.row.probe_id = worst_probe;
        out.push_back(rb.finish(worst, tol));
    }
}

void run_flow(const Experiment& e, double tol, std::vector<CheckRow>& out) {
    const EntranceLaw& law = law_for(e);
    const double floor = safe_law_time(e.model.family);
    for (const TimeTriple& tt : e.times) {
        RowBuilder rb("flow");
        const double s = std::max(tt.s, floor);
        const double t = std::max(tt.t, floor);
        rb.row.param_s = s;
        rb.row.param_t = t;
        out.push_back(rb.finish(flow_residual(law, s, t, e.probes), tol));
    }
}

void run_mean(const Experiment& e, double tol, std::vector<CheckRow>& out) {
    const EntranceLaw& law = law_for(e);
    const double floor = safe_law_time(e.model.family);
    for (const TimeTriple& raw : e.times) {
        TimeTriple tt = raw;
        tt.t = std::max(tt.t, floor);
        RowBuilder rb("mean");
        rb.row.param_t = tt.t;
        const Vec projected = mean_projection(law, tt.t);
        Vec expected = Vec::zero(law.model().space.dim);
        for (const auto& wp : law.components())
            expected = add(expected,
                           scale(wp.weight, kappa_eval(wp.path, tt.t, law.model().space.dim)));
        double worst = 0.0;
        for (int i = 0; i < projected.dim(); ++i)
            worst = std::max(worst, std::abs(projected[i] - expected[i]));
        out.push_back(rb.finish(worst, tol));
    }
}

void run_symmetry(const Experiment& e, double tol, std::vector<CheckRow>& out) {
    RowBuilder rb("symmetry");
    double worst = 0.0;
    int worst_probe = 0;
    double t0 = e.times.empty() ? 0.0 : e.times.front().t;
    rb.row.param_t = t0;
    for (int p = 0; p < e.probes.size(); ++p) {
        const Vec& a = e.probes.probes[p];
        const double im = (e.symmetry_target == SymmetryTarget::Base)
                              ? mu_cf(e.model, kMinusInfinity, t0, a).value.imag()
                              : entrance_cf(law_for(e), t0, a).value.imag();
        if (std::abs(im) > worst) {
            worst = std::abs(im);
            worst_probe = p;
        }
    }
    rb.row.probe_id = worst_probe;
    out.push_back(rb.finish(worst, tol));
}

void run_periodic(const Experiment& e, double tol_override, bool has_override,
                  std::vector<CheckRow>& out) {
    const EntranceLaw& law = law_for(e);
    const auto* per = std::get_if<PeriodicScalar>(&e.model.family.kind);
    const double t0 = e.times.empty() ? 0.0 : e.times.front().t;
    // declared_period throws for non-periodic models; surfaced by the caller.
    declared_period(e.model.family, e.model.sigma);
    const double bound =
        std::exp(-per->omega0 * (1.0 - per->amp) * per->period) * 1.01;
    std::vector<double> residuals;
    for (int n = 1; n <= 11; ++n) residuals.push_back(periodic_residual(law, t0, n, e.probes));
    for (int n = 1; n <= 10; ++n) {
        RowBuilder rb("periodic");
        rb.row.param_t = t0;
        rb.row.param_r = double(n);
        const double prev = residuals[n - 1];
        const double next = residuals[n];
        double ratio = 0.0;
        if (prev > 0.0) ratio = next / prev;
        rb.row.note = "residual(n)=" + std::to_string(prev);
        out.push_back(rb.finish(ratio, has_override ? tol_override : bound));
    }
}

void run_sampler_vs_cf(const Experiment& e, double tol, std::vector<CheckRow>& out,
                       std::vector<CfRow>& cf_rows) {
    RowBuilder rb("sampler-vs-cf");
    const double t0 = e.times.empty() ? 0.0 : e.times.front().t;
    rb.row.param_t = t0;
    RngStream rng(e.mc.seed, 0);
    const SampleBatch batch =
        sample_mu(e.model, kMinusInfinity, t0, e.mc.n_draws, e.mc.grid_steps, rng);
    const bool stable = stable_norm_part(e.model.symbol, nullptr);
    const double grid_allowance = stable ? kStableGridBiasC / e.mc.grid_steps : 0.0;
    int failing = 0;
    double worst_gap = 0.0;
    int worst_probe = 0;
    for (int p = 0; p < e.probes.size(); ++p) {
        const Vec& a = e.probes.probes[p];
        const CFValue theory = mu_cf(e.model, kMinusInfinity, t0, a);
        const CFEstimate emp = empirical_cf(batch, a);
        const double gap = std::abs(emp.value - theory.value);
        cf_rows.push_back({p, t0, theory.value.real(), theory.value.imag(), emp.value.real(),
                           emp.value.imag(), emp.stderr_bound});
        if (gap > 3.0 * emp.stderr_bound + grid_allowance) ++failing;
        if (gap > worst_gap) {
            worst_gap = gap;
            worst_probe = p;
        }
    }
    rb.row.probe_id = worst_probe;
    rb.row.note = "worst gap " + std::to_string(worst_gap) + ", N=" + std::to_string(e.mc.n_draws);
    out.push_back(rb.finish(double(failing) / e.probes.size(), tol));
}

void run_definiteness(const Experiment& e, std::optional<double> tol_override,
                      std::vector<CheckRow>& out) {
    {
        RowBuilder rb("definiteness-nd");
        const double viol =
            negative_definite_check(e.model.symbol, e.model.space.dim, 8, e.mc.seed + 17);
        out.push_back(rb.finish(std::max(viol, 0.0), tol_override.value_or(1e-10)));
    }
    {
        RowBuilder rb("definiteness-pd");
        const double t0 = e.times.empty() ? 0.0 : e.times.front().t;
        rb.row.param_t = t0;
        const double min_eig = positive_definite_check(
            [&](const Vec& a) { return mu_cf(e.model, kMinusInfinity, t0, a).value; }, e.probes);
        rb.row.note = "min Gram eigenvalue " + std::to_string(min_eig);
        out.push_back(rb.finish(std::max(-min_eig, 0.0), tol_override.value_or(1e-9)));
    }
}

// Tail moment over the parts with a finite-atom Levy measure; Gaussian and
// isotropic-stable parts contribute nothing here. `use_gamma` switches the
// stable constant between the quadrature path and the Gamma identity.
double eligible_tail_moment(const LevySymbol& symbol, bool use_gamma) {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, StableMixing>) {
                double acc = 0.0;
                for (const auto& wa : k.atoms) acc += wa.weight * std::pow(norm(wa.atom), k.alpha);
                const double c =
                    use_gamma ? stable_constant_gamma(k.alpha) : stable_constant(k.alpha);
                return acc / (c * (k.alpha - 1.0));
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                double acc = 0.0;
                for (const auto& ja : k.atoms)
                    if (norm(ja.jump) > 1.0) acc += ja.mass * norm(ja.jump);
                return acc;
            } else if constexpr (std::is_same_v<T, SymbolSum>) {
                double acc = 0.0;
                for (const auto& term : k.terms) acc += eligible_tail_moment(term, use_gamma);
                return acc;
            } else {
                return 0.0;
            }
        },
        symbol.kind);
}

void run_tail_moment(const Experiment& e, double tol, std::vector<CheckRow>& out) {
    RowBuilder rb("tail-moment");
    const LevySymbol& sym = e.model.symbol;
    const bool has_atoms = !compound_poisson_part(sym).empty() || has_stable_mixing_part(sym);
    if (!has_atoms) {
        DiagOp r = DiagOp::zero(e.model.space.dim);
        if (gaussian_part(sym, e.model.space.dim, &r) && !stable_norm_part(sym, nullptr))
            rb.row.note = "vacuous (M=0)";
        else
            rb.row.note = "finite (isotropic stable part, no finite-atom Levy measure)";
        out.push_back(rb.finish(0.0, tol));
        return;
    }
    // Quadrature-based value against the Gamma-identity recomputation.
    const double value = eligible_tail_moment(sym, false);
    const double oracle = eligible_tail_moment(sym, true);
    rb.row.note = "tail moment " + std::to_string(value);
    out.push_back(rb.finish(std::abs(value - oracle), tol));
}

void run_certificates(const Experiment& e, std::vector<CheckRow>& out) {
    for (CheckRow row : hypothesis_certificates(e.model)) out.push_back(std::move(row));
}

}  // namespace

std::vector<CheckRow> hypothesis_certificates(const MehlerModel& m) {
    std::vector<CheckRow> rows;
    {
        RowBuilder rb("cert-U1");
        const ContractionCertificate cert = contraction_certificate(m.family);
        rb.row.note =
            "c=" + std::to_string(cert.c) + ", omega=" + std::to_string(cert.omega);
        const bool ok = std::isfinite(cert.c) && cert.c > 0.0 && std::isfinite(cert.omega) &&
                        cert.omega > 0.0;
        rows.push_back(rb.finish(ok ? 0.0 : 1.0, 0.0));
    }
    {
        RowBuilder rb("cert-H2-sigma");
        const double sup = sigma_sup_norm(m.sigma);
        rb.row.note = "sup||sigma||=" + std::to_string(sup);
        rows.push_back(rb.finish(std::isfinite(sup) ? 0.0 : 1.0, 0.0));
    }
    {
        RowBuilder rb("cert-H3H5-symbol");
        std::mt19937_64 rng(411);
        std::normal_distribution<double> gauss(0.0, 1.0);
        double worst = std::abs(symbol_eval(m.symbol, Vec::zero(m.space.dim)));
        for (int k = 0; k < 64; ++k) {
            Vec a = Vec::zero(m.space.dim);
            for (int i = 0; i < m.space.dim; ++i) a[i] = gauss(rng);
            const double plus = symbol_eval(m.symbol, a);
            const double minus = symbol_eval(m.symbol, scale(-1.0, a));
            worst = std::max(worst, std::abs(plus - minus));
            worst = std::max(worst, std::max(0.0, -plus));
        }
        rb.row.note = "lambda(0)=0, symmetry and nonnegativity spot checks";
        rows.push_back(rb.finish(worst, 1e-12));
    }
    {
        RowBuilder rb("cert-lambda2-tail");
        const bool has_atoms =
            !compound_poisson_part(m.symbol).empty() || has_stable_mixing_part(m.symbol);
        if (has_atoms) {
            // Sum symbols may mix eligible and ineligible parts; report the
            // eligible total.
            const double value = eligible_tail_moment(m.symbol, false);
            rb.row.note = "tail moment " + std::to_string(value);
            rows.push_back(rb.finish(std::isfinite(value) ? 0.0 : 1.0, 0.0));
        } else if (stable_norm_part(m.symbol, nullptr)) {
            rb.row.note = "finite (isotropic stable, alpha in (1,2))";
            rows.push_back(rb.finish(0.0, 0.0));
        } else {
            rb.row.note = "vacuous (M=0)";
            rows.push_back(rb.finish(0.0, 0.0));
        }
    }
    return rows;
}

Report run_experiment(const Experiment& e) {
    Report report;
    report.experiment = e.name;
    report.seed = e.mc.seed;
    for (const CheckSpec& spec : e.checks) {
        std::vector<CheckRow> rows;
        try {
            switch (spec.kind) {
                case CheckKind::Ck: run_ck(e, spec.tolerance.value_or(1e-8), rows); break;
                case CheckKind::Flow: run_flow(e, spec.tolerance.value_or(1e-8), rows); break;
                case CheckKind::Mean: run_mean(e, spec.tolerance.value_or(1e-7), rows); break;
                case CheckKind::Symmetry:
                    run_symmetry(e, spec.tolerance.value_or(0.0), rows);
                    break;
                case CheckKind::Periodic:
                    run_periodic(e, spec.tolerance.value_or(0.0), spec.tolerance.has_value(), rows);
                    break;
                case CheckKind::SamplerVsCf:
                    run_sampler_vs_cf(e, spec.tolerance.value_or(0.05), rows, report.cf_rows);
                    break;
                case CheckKind::Definiteness: run_definiteness(e, spec.tolerance, rows); break;
                case CheckKind::TailMoment:
                    run_tail_moment(e, spec.tolerance.value_or(1e-6), rows);
                    break;
                case CheckKind::HypothesisCertificates: run_certificates(e, rows); break;
            }
        } catch (const std::exception& ex) {
            CheckRow row;
            row.check = check_name(spec.kind);
            row.residual = std::numeric_limits<double>::quiet_NaN();
            row.tolerance = spec.tolerance.value_or(0.0);
            row.pass = false;
            row.note = std::string("error: ") + ex.what();
            rows.push_back(std::move(row));
        }
        for (CheckRow& row : rows) report.rows.push_back(std::move(row));
    }
    return report;
}

std::vector<CheckSpec> default_checks(const MehlerModel& model) {
    const bool periodic = std::holds_alternative<PeriodicScalar>(model.family.kind);
    const bool samplable = !has_stable_mixing_part(model.symbol);
    std::vector<CheckSpec> checks;
    checks.push_back({CheckKind::Ck, {}});
    checks.push_back({CheckKind::Flow, {}});
    checks.push_back({CheckKind::Mean, {}});
    checks.push_back({CheckKind::Symmetry, {}});
    if (periodic) checks.push_back({CheckKind::Periodic, {}});
    if (samplable) checks.push_back({CheckKind::SamplerVsCf, {}});
    checks.push_back({CheckKind::Definiteness, {}});
    checks.push_back({CheckKind::TailMoment, {}});
    checks.push_back({CheckKind::HypothesisCertificates, {}});
    return checks;
}

Experiment make_default_experiment(const Preset& preset, std::uint64_t seed) {
    Experiment e{preset.name,
                 preset.model,
                 preset.law,
                 default_checks(preset.model),
                 default_times(preset.model, 20, seed + 3),
                 ProbeSet::generate(preset.model.space, seed + 1,
                                    std::max(16, 31 - 2 * preset.model.space.dim)),
                 McConfig{100000, 256, seed},
                 SymmetryTarget::Base};
    if (!e.law.has_value()) e.law = default_mixture_law(preset.model, seed + 2);
    return e;
}

}  // namespace mehler
