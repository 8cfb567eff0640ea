#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mehlerlab/verify.hpp"

namespace mehler {

using PathSpec = std::variant<ZeroPath, FromInitialPath, PerturbedPath>;

struct WeightedPathSpec {
    double weight;
    PathSpec path;
    bool operator==(const WeightedPathSpec&) const = default;
};

struct LawConfig {
    std::vector<WeightedPathSpec> components;  // one component = extremal law
    bool operator==(const LawConfig&) const = default;
};

struct ProbesConfig {
    int count = 23;  // pseudorandom probes on top of zero + signed basis
    std::uint64_t seed = 12021;
    bool operator==(const ProbesConfig&) const = default;
};

struct CheckSpecConfig {
    std::string check;
    std::optional<double> tolerance;
    bool operator==(const CheckSpecConfig&) const = default;
};

struct TimeTripleConfig {
    double s, r, t;  // s may be -infinity
    bool operator==(const TimeTripleConfig&) const = default;
};

struct McConfigC {
    int n_draws = 100000;
    int grid_steps = 256;
    std::uint64_t seed = 20240901;
    bool operator==(const McConfigC&) const = default;
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::vector<CheckSpecConfig> checks;     // empty -> every applicable check
    std::vector<TimeTripleConfig> times;     // empty -> 20 seeded triples
    McConfigC mc;
    std::optional<LawConfig> law;            // empty -> seeded 3-component mixture
    std::string symmetry_target = "base";    // or "law"
    bool operator==(const ExperimentConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
    bool operator==(const OutputConfig&) const = default;
};

/// Typed mirror of the JSON config file; nested sections follow the model's
/// type tree. Vectors are spelled either as coordinate lists or as basis
/// shorthands ("e2", "-e1", "0.5*e3").
struct Config {
    int dim = 4;
    std::string label;
    EvolutionFamily evolution = EvolutionFamily::scalar_contraction(1.0);
    Sigma sigma = Sigma::constant(DiagOp::identity(4));
    LevySymbol symbol = LevySymbol::gaussian(DiagOp::identity(4));
    QuadConfig quad;
    ProbesConfig probes;
    ExperimentConfig experiment;
    OutputConfig output;

    bool operator==(const Config&) const = default;
};

Config parse_config(const std::string& json_text);
Config load_config_file(const std::string& path);
/// Scientific notation, 17 significant digits, fixed key order: the
/// serialization round-trips bit-exactly through parse_config.
std::string serialize_config(const Config& config);

Config config_from_preset(const std::string& preset_name);

MehlerModel build_model(const Config& config);
EntranceLaw build_law(const MehlerModel& model, const LawConfig& law);
Experiment build_experiment(const Config& config);

/// Vector literal: "e3", "-e2", "0.5*e1" or "1,0,2.5".
Vec parse_vec_spec(const std::string& text, int dim);
/// Law literal: "zero", a vector spec (extremal from that anchor), or
/// "w1@spec1;w2@spec2;..." for mixtures.
LawConfig parse_law_spec(const std::string& text, int dim);

std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace mehler
