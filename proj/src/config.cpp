#include "mehlerlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mehler {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    if (v == kMinusInfinity) return "\"-inf\"";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_array(std::string& out, const std::vector<double>& vals) {
    out.push_back('[');
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out.push_back(',');
        out += fmt17(vals[i]);
    }
    out.push_back(']');
}

void write_symbol(std::string& out, const LevySymbol& symbol) {
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GaussianForm>) {
                out += "{\"kind\":\"gaussian\",\"covariance\":";
                write_array(out, s.covariance.diag);
                out.push_back('}');
            } else if constexpr (std::is_same_v<T, StableNorm>) {
                out += "{\"kind\":\"stable-norm\",\"alpha\":" + fmt17(s.alpha) + ",\"shape\":";
                write_array(out, s.shape.diag);
                out.push_back('}');
            } else if constexpr (std::is_same_v<T, StableMixing>) {
                out += "{\"kind\":\"stable-mixing\",\"alpha\":" + fmt17(s.alpha) + ",\"atoms\":[";
                for (std::size_t k = 0; k < s.atoms.size(); ++k) {
                    if (k) out.push_back(',');
                    out += "{\"weight\":" + fmt17(s.atoms[k].weight) + ",\"atom\":";
                    write_array(out, s.atoms[k].atom.coords);
                    out.push_back('}');
                }
                out += "]}";
            } else if constexpr (std::is_same_v<T, CompoundPoisson>) {
                out += "{\"kind\":\"compound-poisson\",\"atoms\":[";
                for (std::size_t k = 0; k < s.atoms.size(); ++k) {
                    if (k) out.push_back(',');
                    out += "{\"mass\":" + fmt17(s.atoms[k].mass) + ",\"jump\":";
                    write_array(out, s.atoms[k].jump.coords);
                    out.push_back('}');
                }
                out += "]}";
            } else {
                out += "{\"kind\":\"sum\",\"terms\":[";
                for (std::size_t k = 0; k < s.terms.size(); ++k) {
                    if (k) out.push_back(',');
                    write_symbol(out, s.terms[k]);
                }
                out += "]}";
            }
        },
        symbol.kind);
}

void write_path(std::string& out, const PathSpec& path) {
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ZeroPath>) {
                out += "{\"kind\":\"zero\"}";
            } else if constexpr (std::is_same_v<T, FromInitialPath>) {
                out += "{\"kind\":\"from-initial\",\"x0\":";
                write_array(out, p.x0.coords);
                out.push_back('}');
            } else {
                out += "{\"kind\":\"perturbed\",\"x0\":";
                write_array(out, p.x0.coords);
                out += ",\"offset\":";
                write_array(out, p.offset.coords);
                out.push_back('}');
            }
        },
        path);
}

// ---- parsing ---------------------------------------------------------------

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw StructuralError("config field '" + path + "': " + msg);
}

const json& member(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (v.is_string() && v.get<std::string>() == "-inf") return kMinusInfinity;
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

std::uint64_t uinteger(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !v.is_number_integer()) fail(path, "expected an integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0) fail(path, "must be >= 0");
    return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path));
    return out;
}

Vec vec_field(const json& v, int dim, const std::string& path) {
    if (v.is_string()) return parse_vec_spec(v.get<std::string>(), dim);
    Vec vec{number_array(v, path)};
    if (vec.dim() != dim) fail(path, "expected " + std::to_string(dim) + " coordinates");
    return vec;
}

LevySymbol parse_symbol(const json& v, int dim, const std::string& path) {
    const std::string kind = text(member(v, "kind", path), path + ".kind");
    if (kind == "gaussian")
        return LevySymbol::gaussian(
            DiagOp{number_array(member(v, "covariance", path), path + ".covariance")});
    if (kind == "stable-norm")
        return LevySymbol::stable_norm(number(member(v, "alpha", path), path + ".alpha"),
                                       DiagOp{number_array(member(v, "shape", path), path + ".shape")});
    if (kind == "stable-mixing") {
        const json& atoms = member(v, "atoms", path);
        if (!atoms.is_array()) fail(path + ".atoms", "expected an array");
        std::vector<WeightedAtom> list;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            const std::string ap = path + ".atoms[" + std::to_string(k) + "]";
            list.push_back({number(member(atoms[k], "weight", ap), ap + ".weight"),
                            vec_field(member(atoms[k], "atom", ap), dim, ap + ".atom")});
        }
        return LevySymbol::stable_mixing(number(member(v, "alpha", path), path + ".alpha"),
                                         std::move(list));
    }
    if (kind == "compound-poisson") {
        const json& atoms = member(v, "atoms", path);
        if (!atoms.is_array()) fail(path + ".atoms", "expected an array");
        std::vector<JumpAtom> list;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            const std::string ap = path + ".atoms[" + std::to_string(k) + "]";
            list.push_back({number(member(atoms[k], "mass", ap), ap + ".mass"),
                            vec_field(member(atoms[k], "jump", ap), dim, ap + ".jump")});
        }
        return LevySymbol::compound_poisson(std::move(list));
    }
    if (kind == "sum") {
        const json& terms = member(v, "terms", path);
        if (!terms.is_array()) fail(path + ".terms", "expected an array");
        std::vector<LevySymbol> list;
        for (std::size_t k = 0; k < terms.size(); ++k)
            list.push_back(parse_symbol(terms[k], dim, path + ".terms[" + std::to_string(k) + "]"));
        return LevySymbol::sum(std::move(list));
    }
    fail(path + ".kind", "unknown symbol kind '" + kind + "'");
}

PathSpec parse_path(const json& v, int dim, const std::string& path) {
    const std::string kind = text(member(v, "kind", path), path + ".kind");
    if (kind == "zero") return ZeroPath{};
    if (kind == "from-initial")
        return FromInitialPath{vec_field(member(v, "x0", path), dim, path + ".x0")};
    if (kind == "perturbed")
        return PerturbedPath{vec_field(member(v, "x0", path), dim, path + ".x0"),
                             vec_field(member(v, "offset", path), dim, path + ".offset")};
    fail(path + ".kind", "unknown path kind '" + kind + "'");
}

}  // namespace

Vec parse_vec_spec(const std::string& spec, int dim) {
    if (spec.empty()) throw StructuralError("vector spec: empty");
    // "e3", "-e3", "0.5*e3"
    auto parse_basis = [&](const std::string& s, double sign) -> std::optional<Vec> {
        if (s.size() < 2 || s[0] != 'e') return std::nullopt;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        const int k = std::stoi(s.substr(1));
        if (k < 1 || k > dim)
            throw StructuralError("vector spec: basis index e" + std::to_string(k) +
                                  " out of range for dim " + std::to_string(dim));
        return Vec::basis(dim, k - 1, sign);
    };
    if (auto v = parse_basis(spec, 1.0)) return *v;
    if (spec[0] == '-') {
        if (auto v = parse_basis(spec.substr(1), -1.0)) return *v;
    }
    const auto star = spec.find('*');
    if (star != std::string::npos) {
        const double c = std::stod(spec.substr(0, star));
        if (auto v = parse_basis(spec.substr(star + 1), c)) return *v;
        throw StructuralError("vector spec: expected '<scale>*e<K>' in '" + spec + "'");
    }
    // comma-separated coordinates
    std::vector<double> coords;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            coords.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw StructuralError("vector spec: cannot parse coordinate '" + item + "'");
        }
    }
    if (static_cast<int>(coords.size()) != dim)
        throw StructuralError("vector spec: expected " + std::to_string(dim) +
                              " coordinates, got " + std::to_string(coords.size()));
    return Vec{std::move(coords)};
}

LawConfig parse_law_spec(const std::string& spec, int dim) {
    if (spec == "zero") return LawConfig{{{1.0, ZeroPath{}}}};
    if (spec.find('@') == std::string::npos)
        return LawConfig{{{1.0, FromInitialPath{parse_vec_spec(spec, dim)}}}};
    LawConfig law;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto at = item.find('@');
        if (at == std::string::npos)
            throw StructuralError("law spec: expected 'weight@vector' in '" + item + "'");
        const double w = std::stod(item.substr(0, at));
        const std::string vs = item.substr(at + 1);
        if (vs == "zero")
            law.components.push_back({w, ZeroPath{}});
        else
            law.components.push_back({w, FromInitialPath{parse_vec_spec(vs, dim)}});
    }
    return law;
}

std::string serialize_config(const Config& c) {
    std::string out;
    out += "{\n  \"space\": {\"dim\": " + std::to_string(c.dim) + ", \"label\": " +
           quote(c.label) + "},\n";
    out += "  \"evolution\": ";
    std::visit(
        [&](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, ScalarContraction>) {
                out += "{\"kind\":\"scalar-contraction\",\"omega\":" + fmt17(fam.omega) + "}";
            } else if constexpr (std::is_same_v<T, DiagonalSemigroup>) {
                out += "{\"kind\":\"diagonal-semigroup\",\"eigs\":";
                write_array(out, fam.eigs.diag);
                out.push_back('}');
            } else {
                out += "{\"kind\":\"periodic-scalar\",\"omega0\":" + fmt17(fam.omega0) +
                       ",\"amp\":" + fmt17(fam.amp) + ",\"period\":" + fmt17(fam.period) + "}";
            }
        },
        c.evolution.kind);
    out += ",\n  \"sigma\": ";
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ConstantDiag>) {
                out += "{\"kind\":\"constant\",\"diag\":";
                write_array(out, s.base.diag);
                out.push_back('}');
            } else {
                out += "{\"kind\":\"periodic-scalar-mod\",\"base\":";
                write_array(out, s.base.diag);
                out += ",\"amp\":" + fmt17(s.amp) + ",\"period\":" + fmt17(s.period) + "}";
            }
        },
        c.sigma.kind);
    out += ",\n  \"symbol\": ";
    write_symbol(out, c.symbol);
    out += ",\n  \"quad\": {\"rel_tol\":" + fmt17(c.quad.rel_tol) +
           ",\"abs_tol\":" + fmt17(c.quad.abs_tol) +
           ",\"max_subdivisions\":" + std::to_string(c.quad.max_subdivisions) +
           ",\"horizon_slack\":" + fmt17(c.quad.horizon_slack) + "}";
    out += ",\n  \"probes\": {\"count\":" + std::to_string(c.probes.count) +
           ",\"seed\":" + std::to_string(c.probes.seed) + "}";
    out += ",\n  \"experiment\": {\"name\":" + quote(c.experiment.name) + ",\"checks\":[";
    for (std::size_t i = 0; i < c.experiment.checks.size(); ++i) {
        if (i) out.push_back(',');
        const auto& ck = c.experiment.checks[i];
        out += "{\"check\":" + quote(ck.check);
        if (ck.tolerance.has_value()) out += ",\"tolerance\":" + fmt17(*ck.tolerance);
        out.push_back('}');
    }
    out += "],\"times\":[";
    for (std::size_t i = 0; i < c.experiment.times.size(); ++i) {
        if (i) out.push_back(',');
        const auto& tt = c.experiment.times[i];
        out += "[" + fmt17(tt.s) + "," + fmt17(tt.r) + "," + fmt17(tt.t) + "]";
    }
    out += "],\"mc\":{\"n\":" + std::to_string(c.experiment.mc.n_draws) +
           ",\"grid_steps\":" + std::to_string(c.experiment.mc.grid_steps) +
           ",\"seed\":" + std::to_string(c.experiment.mc.seed) + "}";
    if (c.experiment.law.has_value()) {
        out += ",\"law\":{\"components\":[";
        for (std::size_t i = 0; i < c.experiment.law->components.size(); ++i) {
            if (i) out.push_back(',');
            out += "{\"weight\":" + fmt17(c.experiment.law->components[i].weight) + ",\"path\":";
            write_path(out, c.experiment.law->components[i].path);
            out.push_back('}');
        }
        out += "]}";
    }
    out += ",\"symmetry_target\":" + quote(c.experiment.symmetry_target) + "}";
    out += ",\n  \"output\": {\"directory\":" + quote(c.output.directory) +
           ",\"csv\":" + (c.output.csv ? std::string("true") : std::string("false")) +
           ",\"json\":" + (c.output.json ? std::string("true") : std::string("false")) + "}\n}\n";
    return out;
}

Config parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw StructuralError(std::string("config parse error: ") + ex.what());
    }
    Config c;
    const json& space = member(root, "space", "config");
    c.dim = integer(member(space, "dim", "space"), "space.dim");
    if (c.dim < 1) fail("space.dim", "must be >= 1");
    if (space.contains("label")) c.label = text(space["label"], "space.label");

    const json& evo = member(root, "evolution", "config");
    const std::string ekind = text(member(evo, "kind", "evolution"), "evolution.kind");
    if (ekind == "scalar-contraction") {
        c.evolution = EvolutionFamily::scalar_contraction(
            number(member(evo, "omega", "evolution"), "evolution.omega"));
    } else if (ekind == "diagonal-semigroup") {
        c.evolution = EvolutionFamily::diagonal_semigroup(
            DiagOp{number_array(member(evo, "eigs", "evolution"), "evolution.eigs")});
    } else if (ekind == "periodic-scalar") {
        c.evolution = EvolutionFamily::periodic_scalar(
            number(member(evo, "omega0", "evolution"), "evolution.omega0"),
            number(member(evo, "amp", "evolution"), "evolution.amp"),
            number(member(evo, "period", "evolution"), "evolution.period"));
    } else {
        fail("evolution.kind", "unknown kind '" + ekind + "'");
    }

    const json& sig = member(root, "sigma", "config");
    const std::string skind = text(member(sig, "kind", "sigma"), "sigma.kind");
    if (skind == "constant") {
        c.sigma = Sigma::constant(DiagOp{number_array(member(sig, "diag", "sigma"), "sigma.diag")});
    } else if (skind == "periodic-scalar-mod") {
        c.sigma = Sigma::periodic_scalar_mod(
            DiagOp{number_array(member(sig, "base", "sigma"), "sigma.base")},
            number(member(sig, "amp", "sigma"), "sigma.amp"),
            number(member(sig, "period", "sigma"), "sigma.period"));
    } else {
        fail("sigma.kind", "unknown kind '" + skind + "'");
    }

    c.symbol = parse_symbol(member(root, "symbol", "config"), c.dim, "symbol");

    if (root.contains("quad")) {
        const json& q = root["quad"];
        if (q.contains("rel_tol")) c.quad.rel_tol = number(q["rel_tol"], "quad.rel_tol");
        if (q.contains("abs_tol")) c.quad.abs_tol = number(q["abs_tol"], "quad.abs_tol");
        if (q.contains("max_subdivisions"))
            c.quad.max_subdivisions = integer(q["max_subdivisions"], "quad.max_subdivisions");
        if (q.contains("horizon_slack"))
            c.quad.horizon_slack = number(q["horizon_slack"], "quad.horizon_slack");
        c.quad.validate();
    }
    if (root.contains("probes")) {
        const json& p = root["probes"];
        if (p.contains("count")) c.probes.count = integer(p["count"], "probes.count");
        if (p.contains("seed")) c.probes.seed = uinteger(p["seed"], "probes.seed");
        if (c.probes.count < 16) fail("probes.count", "need at least 16 random probes");
    }
    if (root.contains("experiment")) {
        const json& e = root["experiment"];
        if (e.contains("name")) c.experiment.name = text(e["name"], "experiment.name");
        if (e.contains("checks")) {
            const json& checks = e["checks"];
            if (!checks.is_array()) fail("experiment.checks", "expected an array");
            for (std::size_t i = 0; i < checks.size(); ++i) {
                const std::string cp = "experiment.checks[" + std::to_string(i) + "]";
                CheckSpecConfig spec;
                if (checks[i].is_string()) {
                    spec.check = checks[i].get<std::string>();
                } else {
                    spec.check = text(member(checks[i], "check", cp), cp + ".check");
                    if (checks[i].contains("tolerance"))
                        spec.tolerance = number(checks[i]["tolerance"], cp + ".tolerance");
                }
                check_from_name(spec.check);  // validates the name
                c.experiment.checks.push_back(std::move(spec));
            }
        }
        if (e.contains("times")) {
            const json& times = e["times"];
            if (!times.is_array()) fail("experiment.times", "expected an array of [s,r,t]");
            for (std::size_t i = 0; i < times.size(); ++i) {
                const std::string tp = "experiment.times[" + std::to_string(i) + "]";
                if (!times[i].is_array() || times[i].size() != 3) fail(tp, "expected [s,r,t]");
                c.experiment.times.push_back({number(times[i][0], tp), number(times[i][1], tp),
                                              number(times[i][2], tp)});
            }
        }
        if (e.contains("mc")) {
            const json& mc = e["mc"];
            if (mc.contains("n")) c.experiment.mc.n_draws = integer(mc["n"], "experiment.mc.n");
            if (mc.contains("grid_steps"))
                c.experiment.mc.grid_steps = integer(mc["grid_steps"], "experiment.mc.grid_steps");
            if (mc.contains("seed"))
                c.experiment.mc.seed = uinteger(mc["seed"], "experiment.mc.seed");
        }
        if (e.contains("law")) {
            const json& law = e["law"];
            LawConfig lc;
            const json& comps = member(law, "components", "experiment.law");
            if (!comps.is_array()) fail("experiment.law.components", "expected an array");
            for (std::size_t i = 0; i < comps.size(); ++i) {
                const std::string lp = "experiment.law.components[" + std::to_string(i) + "]";
                lc.components.push_back(
                    {number(member(comps[i], "weight", lp), lp + ".weight"),
                     parse_path(member(comps[i], "path", lp), c.dim, lp + ".path")});
            }
            c.experiment.law = std::move(lc);
        }
        if (e.contains("symmetry_target")) {
            c.experiment.symmetry_target = text(e["symmetry_target"], "experiment.symmetry_target");
            if (c.experiment.symmetry_target != "base" && c.experiment.symmetry_target != "law")
                fail("experiment.symmetry_target", "expected 'base' or 'law'");
        }
    }
    if (root.contains("output")) {
        const json& o = root["output"];
        if (o.contains("directory")) c.output.directory = text(o["directory"], "output.directory");
        if (o.contains("csv")) c.output.csv = o["csv"].get<bool>();
        if (o.contains("json")) c.output.json = o["json"].get<bool>();
    }
    build_model(c);  // surface structural problems (dimension mismatches) now
    return c;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Config config_from_preset(const std::string& preset_name) {
    const Preset preset = make_preset(preset_name);
    Config c;
    c.dim = preset.model.space.dim;
    c.label = preset.model.space.label;
    c.evolution = preset.model.family;
    c.sigma = preset.model.sigma;
    c.symbol = preset.model.symbol;
    c.quad = preset.model.quad;
    c.experiment.name = preset.name;
    if (preset.law.has_value()) {
        LawConfig lc;
        for (const auto& wp : preset.law->components()) {
            PathSpec spec = std::visit([](const auto& k) -> PathSpec { return k; }, wp.path.kind);
            lc.components.push_back({wp.weight, std::move(spec)});
        }
        c.experiment.law = std::move(lc);
    }
    return c;
}

MehlerModel build_model(const Config& c) {
    return MehlerModel(TruncatedSpace(c.dim, c.label), c.evolution, c.sigma, c.symbol, c.quad);
}

EntranceLaw build_law(const MehlerModel& model, const LawConfig& law) {
    std::vector<WeightedPath> comps;
    for (const auto& wps : law.components) {
        KappaPath path = std::visit(
            [&](const auto& p) -> KappaPath {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, ZeroPath>)
                    return KappaPath::zero(model.family);
                else if constexpr (std::is_same_v<T, FromInitialPath>)
                    return KappaPath::from_initial(model.family, p.x0);
                else
                    return KappaPath::perturbed(model.family, p.x0, p.offset);
            },
            wps.path);
        comps.push_back({wps.weight, std::move(path)});
    }
    if (comps.size() == 1 && comps[0].weight == 1.0)
        return EntranceLaw::extremal(model, std::move(comps[0].path));
    return EntranceLaw::mixture(model, std::move(comps));
}

Experiment build_experiment(const Config& c) {
    MehlerModel model = build_model(c);
    Experiment e{c.experiment.name,
                 model,
                 {},
                 {},
                 {},
                 ProbeSet::generate(model.space, c.probes.seed, c.probes.count),
                 McConfig{c.experiment.mc.n_draws, c.experiment.mc.grid_steps, c.experiment.mc.seed},
                 c.experiment.symmetry_target == "law" ? SymmetryTarget::Law
                                                       : SymmetryTarget::Base};
    if (c.experiment.law.has_value())
        e.law = build_law(model, *c.experiment.law);
    else
        e.law = default_mixture_law(model, c.experiment.mc.seed + 2);
    if (c.experiment.checks.empty()) {
        e.checks = default_checks(model);
    } else {
        for (const auto& spec : c.experiment.checks)
            e.checks.push_back({check_from_name(spec.check), spec.tolerance});
    }
    if (c.experiment.times.empty()) {
        e.times = default_times(model, 20, c.experiment.mc.seed + 3);
    } else {
        for (const auto& tt : c.experiment.times) e.times.push_back({tt.s, tt.r, tt.t});
    }
    return e;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace mehler
