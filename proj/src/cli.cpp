#include "mehlerlab/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "mehlerlab/config.hpp"
#include "mehlerlab/report_io.hpp"

namespace mehler {

namespace {

struct CliOptions {
    std::string preset;
    std::string config_path;
    std::string what;  // eval target
    std::string s_text = "-inf";
    double t = 0.0;
    std::string a_spec = "e1";
    std::string law_spec;
    std::string csv_path;
    int n_draws = 0;
    int grid_steps = 0;
    std::uint64_t stream_id = 0;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
};

Config resolve_config(const CliOptions& opt) {
    if (!opt.preset.empty() && !opt.config_path.empty())
        throw StructuralError("pass either --preset or --config, not both");
    if (!opt.preset.empty()) return config_from_preset(opt.preset);
    if (!opt.config_path.empty()) return load_config_file(opt.config_path);
    throw StructuralError("one of --preset or --config is required");
}

double parse_time(const std::string& text) {
    if (text == "-inf") return kMinusInfinity;
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        throw StructuralError("cannot parse time '" + text + "'");
    }
}

std::string output_directory(const Config& config, const CliOptions& opt) {
    if (const char* env = std::getenv("MEHLERLAB_OUT"); env != nullptr && *env != '\0') return env;
    if (!opt.out_dir.empty()) return opt.out_dir;
    return config.output.directory;
}

std::string cf_line(const CFValue& cf) {
    std::string im = cf.value.imag() == 0.0 ? std::string("0")
                                            : format_double(cf.value.imag());
    return format_double(cf.value.real()) + " + " + im + "i  err=" + format_double(
               cf.quad_error_estimate);
}

std::string join_coords(const Vec& v) {
    std::string out;
    for (int i = 0; i < v.dim(); ++i) {
        if (i) out += ", ";
        out += format_double(v[i]);
    }
    return out;
}

// Optional cf-row output for eval: the theory columns of the cf.csv schema.
void append_cf_row(const std::string& path, double t, const CFValue& cf) {
    if (path.empty()) return;
    const bool fresh = !std::filesystem::exists(path);
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::app);
    if (!out) throw StructuralError("cannot write CSV file '" + path + "'");
    if (fresh) out << "probe_id,t,re_theory,im_theory,re_emp,im_emp,stderr\n";
    out << "0," << format_double(t) << ',' << format_double(cf.value.real()) << ','
        << format_double(cf.value.imag()) << ",,,\n";
}

int cmd_eval(const CliOptions& opt, std::ostream& out) {
    const Config config = resolve_config(opt);
    const MehlerModel model = build_model(config);
    const double s = parse_time(opt.s_text);
    const double t = opt.t;
    if (opt.what == "cf" || opt.what == "exponent") {
        const Vec a = parse_vec_spec(opt.a_spec, model.space.dim);
        if (opt.what == "cf") {
            const CFValue cf = mu_cf(model, s, t, a);
            out << cf_line(cf) << "\n";
            append_cf_row(opt.csv_path, t, cf);
        } else {
            const ExponentResult e = exponent(model, s, t, a);
            out << format_double(e.value) << "  err=" << format_double(e.error_estimate) << "\n";
        }
        return 0;
    }
    if (opt.what == "covariance") {
        const DiagOp cov = gaussian_covariance(model, s, t);
        out << join_coords(Vec{cov.diag}) << "\n";
        return 0;
    }
    if (opt.what == "kappa" || opt.what == "entrance-cf") {
        const LawConfig law_cfg = opt.law_spec.empty()
                                      ? LawConfig{{{1.0, ZeroPath{}}}}
                                      : parse_law_spec(opt.law_spec, model.space.dim);
        const EntranceLaw law = build_law(model, law_cfg);
        if (opt.what == "kappa") {
            Vec mean = Vec::zero(model.space.dim);
            for (const auto& wp : law.components())
                mean = add(mean, scale(wp.weight, kappa_eval(wp.path, t, model.space.dim)));
            out << join_coords(mean) << "\n";
            return 0;
        }
        const Vec a = parse_vec_spec(opt.a_spec, model.space.dim);
        const CFValue cf = entrance_cf(law, t, a);
        out << cf_line(cf) << "\n";
        append_cf_row(opt.csv_path, t, cf);
        return 0;
    }
    throw StructuralError("unknown eval target '" + opt.what +
                          "' (expected cf|exponent|covariance|kappa|entrance-cf)");
}

int cmd_verify(const CliOptions& opt, std::ostream& out) {
    Config config = resolve_config(opt);
    if (opt.have_seed) config.experiment.mc.seed = opt.seed;
    const std::string serialized = serialize_config(config);
    Experiment experiment = build_experiment(config);
    Report report = run_experiment(experiment);
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(serialized)));
    report.config_hash = hash;

    const std::string dir = output_directory(config, opt);
    if (config.output.csv) {
        write_file(dir + "/report.csv", report_csv(report));
        if (!report.cf_rows.empty()) write_file(dir + "/cf.csv", cf_csv(report));
    }
    if (config.output.json) write_file(dir + "/report.json", report_json(report));

    // Summary: one line per check name with the worst residual.
    std::map<std::string, std::pair<double, bool>> summary;
    std::map<std::string, double> tols;
    for (const CheckRow& row : report.rows) {
        auto [it, fresh] = summary.try_emplace(row.check, row.residual, row.pass);
        if (!fresh) {
            it->second.first = std::max(it->second.first, row.residual);
            it->second.second = it->second.second && row.pass;
        }
        tols[row.check] = row.tolerance;
    }
    for (const auto& [name, agg] : summary)
        out << (agg.second ? "PASS " : "FAIL ") << name
            << "  max_residual=" << format_double(agg.first)
            << "  tolerance=" << format_double(tols[name]) << "\n";
    out << (report.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << "  ("
        << report.rows.size() << " rows, hash " << report.config_hash << ")\n";
    return report.all_pass() ? 0 : 1;
}

int cmd_sample(const CliOptions& opt, std::ostream& out) {
    const Config config = resolve_config(opt);
    const MehlerModel model = build_model(config);
    if (opt.n_draws < 1) throw StructuralError("sample: --n must be >= 1");
    const LawConfig law_cfg = opt.law_spec.empty()
                                  ? LawConfig{{{1.0, ZeroPath{}}}}
                                  : parse_law_spec(opt.law_spec, model.space.dim);
    const EntranceLaw law = build_law(model, law_cfg);
    const int grid = opt.grid_steps > 0 ? opt.grid_steps : config.experiment.mc.grid_steps;
    const std::uint64_t seed = opt.have_seed ? opt.seed : config.experiment.mc.seed;
    RngStream rng(seed, opt.stream_id);
    const SampleBatch batch = sample_entrance(law, opt.t, opt.n_draws, rng, grid);
    const std::string dir = output_directory(config, opt);
    write_file(dir + "/samples.csv", samples_csv(batch));
    out << "wrote " << batch.n() << " draws of dim " << batch.dim << " to " << dir
        << "/samples.csv\n";
    return 0;
}

int cmd_presets(std::ostream& out) {
    for (const std::string& name : preset_names()) {
        const Preset preset = make_preset(name);
        out << name << "  (dim " << preset.model.space.dim << "): " << preset.description << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"finite-truncation laboratory for Mehler semigroup entrance laws"};
    app.require_subcommand(1);
    CliOptions opt;

    auto add_source = [&](CLI::App* cmd) {
        cmd->add_option("--preset", opt.preset, "built-in model preset");
        cmd->add_option("--config", opt.config_path, "JSON config file");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate one quantity");
    eval->add_option("what", opt.what, "cf|exponent|covariance|kappa|entrance-cf")->required();
    add_source(eval);
    eval->add_option("--s", opt.s_text, "start time or -inf (default -inf)");
    eval->add_option("--t", opt.t, "end time (default 0)");
    eval->add_option("--a", opt.a_spec, "probe vector (e1, -e2, 0.5*e1, or coords)");
    eval->add_option("--law", opt.law_spec, "law spec: zero, vector, or w1@v1;w2@v2");
    eval->add_option("--csv", opt.csv_path, "append the value as a cf.csv row to this file");

    CLI::App* verify = app.add_subcommand("verify", "run the experiment checks");
    add_source(verify);
    verify->add_option("--out", opt.out_dir, "output directory");
    auto* seed_opt = verify->add_option("--seed", opt.seed, "override the experiment seed");

    CLI::App* sample = app.add_subcommand("sample", "draw from an entrance law");
    add_source(sample);
    sample->add_option("--law", opt.law_spec, "law spec (default zero)");
    sample->add_option("--t", opt.t, "evaluation time")->required();
    sample->add_option("--n", opt.n_draws, "number of draws")->required();
    sample->add_option("--grid", opt.grid_steps, "stable Euler grid steps");
    sample->add_option("--stream", opt.stream_id, "RNG stream id");
    auto* seed_opt2 = sample->add_option("--seed", opt.seed, "RNG seed");
    sample->add_option("--out", opt.out_dir, "output directory");

    CLI::App* presets = app.add_subcommand("presets", "list built-in fixtures");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& ex) {
        if (ex.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << ex.what() << "\n";
        return 2;
    }
    opt.have_seed = seed_opt->count() > 0 || seed_opt2->count() > 0;

    try {
        if (eval->parsed()) return cmd_eval(opt, out);
        if (verify->parsed()) return cmd_verify(opt, out);
        if (sample->parsed()) return cmd_sample(opt, out);
        if (presets->parsed()) return cmd_presets(out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const NumericalError& ex) {
        err << "numerical error: " << ex.what()
            << " (partial=" << format_double(ex.partial_estimate) << ")\n";
        return 3;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 2;
    }
}

}  // namespace mehler
