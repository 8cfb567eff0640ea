#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mehlerlab/presets.hpp"
#include "mehlerlab/sampler.hpp"

namespace mehler {

enum class CheckKind {
    Ck,
    Flow,
    Mean,
    Symmetry,
    Periodic,
    SamplerVsCf,
    Definiteness,
    TailMoment,
    HypothesisCertificates,
};

std::string check_name(CheckKind kind);
CheckKind check_from_name(const std::string& name);

struct CheckSpec {
    CheckKind kind;
    std::optional<double> tolerance;  // overrides the built-in default
};

struct TimeTriple {
    double s, r, t;
};

struct McConfig {
    int n_draws = 100000;
    int grid_steps = 256;
    std::uint64_t seed = 20240901;
};

/// Whether the symmetry check probes the base family mu_{-inf,t} (the normal
/// case) or the experiment's law CF (negative control: a shifted law has a
/// nonzero imaginary part).
enum class SymmetryTarget { Base, Law };

struct Experiment {
    std::string name;
    MehlerModel model;
    std::optional<EntranceLaw> law;
    std::vector<CheckSpec> checks;
    std::vector<TimeTriple> times;
    ProbeSet probes;
    McConfig mc;
    SymmetryTarget symmetry_target = SymmetryTarget::Base;
};

struct CheckRow {
    std::string check;
    std::optional<double> param_s, param_r, param_t;
    std::optional<int> probe_id;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
    double wall_ms = 0.0;
};

struct CfRow {
    int probe_id;
    double t;
    double re_theory, im_theory;
    double re_emp, im_emp;
    double stderr_bound;
};

struct Report {
    std::string experiment;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<CheckRow> rows;
    std::vector<CfRow> cf_rows;

    bool all_pass() const;
};

/// Allowance constant for the Euler grid bias of the stable sampler: the
/// sampler-vs-CF gap budget is 3 stderr + kStableGridBiasC / grid_steps.
/// Fitted on grid-refinement studies of the stable presets.
extern const double kStableGridBiasC;

/// Runs every requested check, records residual/tolerance/verdict per row,
/// and never aborts on a failing check. Deterministic given the experiment's
/// seeds.
Report run_experiment(const Experiment& e);

/// Executable rendering of the checkable sufficient conditions: the (U.1)
/// certificate, sup||sigma|| (H2), lambda(0)=0 / symmetry / nonnegativity
/// spot checks (H3/H5), and the (lambda.2) tail moment.
std::vector<CheckRow> hypothesis_certificates(const MehlerModel& m);

/// Closed-form Gamma identity for the stable constant, used as a cross-check
/// of the quadrature value: Gamma(2-alpha) |cos(pi alpha / 2)| / (alpha (alpha-1)).
double stable_constant_gamma(double alpha);

/// Earliest safe backward time for kappa anchors of this family (keeps the
/// largest mode exponent within the overflow guard).
double safe_backward_time(const EvolutionFamily& family);

/// Earliest time at which kappa-bearing checks (flow, mean) are evaluated:
/// backward extensions grow like e^{lambda_max |t|}, and once CF phases pass
/// ~1e8 double-precision trigonometry can no longer resolve the identities.
/// Scalar families allow -2; diagonal semigroups are pinned at 0.
double safe_law_time(const EvolutionFamily& family);

std::vector<TimeTriple> default_times(const MehlerModel& model, int count, std::uint64_t seed);

/// Every check applicable to the model: periodic only for models with a
/// declared period, sampler-vs-cf only for samplable symbols.
std::vector<CheckSpec> default_checks(const MehlerModel& model);

/// Experiment with every check applicable to the preset, seeded
/// deterministically from `seed`.
Experiment make_default_experiment(const Preset& preset, std::uint64_t seed);

}  // namespace mehler
