#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mehlerlab/cli.hpp"
#include "mehlerlab/config.hpp"

using namespace mehler;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

double first_number(const std::string& line) { return std::stod(line); }

fs::path scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("mehlerlab_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small deterministic config so verify runs fast in tests.
std::string small_config(const std::string& outdir, std::uint64_t seed) {
    Config c = config_from_preset("gaussian-scalar");
    c.experiment.mc = McConfigC{20000, 64, seed};
    c.experiment.times = {{-1.0, 0.0, 1.0}, {-0.5, 0.3, 2.0}, {0.0, 0.7, 1.4}};
    c.output.directory = outdir;
    return serialize_config(c);
}

}  // namespace

TEST_CASE("presets subcommand lists the fixtures") {
    const CliResult r = run({"presets"});
    CHECK(r.exit_code == 0);
    for (const char* name : {"gaussian-scalar", "stable-scalar", "cp-scalar",
                             "gaussian-laplacian", "periodic-stable", "corrupted-kappa"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("eval cf: stationary Gaussian value") {
    const CliResult r =
        run({"eval", "cf", "--preset", "gaussian-scalar", "--s", "-inf", "--t", "0", "--a", "e1"});
    REQUIRE(r.exit_code == 0);
    CHECK(std::abs(first_number(r.out) - std::exp(-0.25)) <= 1e-9);
    CHECK(r.out.find(" + 0i") != std::string::npos);  // exactly real
}

TEST_CASE("eval cf: empty window is exactly one") {
    const CliResult r =
        run({"eval", "cf", "--preset", "gaussian-scalar", "--s", "0", "--t", "0", "--a", "e1"});
    REQUIRE(r.exit_code == 0);
    CHECK(first_number(r.out) == 1.0);
}

TEST_CASE("eval exponent and the optional CSV row") {
    const CliResult r = run({"eval", "exponent", "--preset", "stable-scalar", "--s", "-inf", "--t",
                             "0", "--a", "e3"});
    REQUIRE(r.exit_code == 0);
    CHECK(std::abs(first_number(r.out) - 2.0 / 3.0) <= 1e-9);

    const fs::path dir = scratch_dir("evalcsv");
    const fs::path csv = dir / "cf.csv";
    for (int k = 0; k < 2; ++k)
        REQUIRE(run({"eval", "cf", "--preset", "gaussian-scalar", "--s", "-inf", "--t", "0",
                     "--a", "e1", "--csv", csv.string()})
                    .exit_code == 0);
    const std::string content = slurp(csv);
    CHECK(content.rfind("probe_id,t,re_theory,im_theory,re_emp,im_emp,stderr\n", 0) == 0);
    int lines = 0;
    for (char ch : content)
        if (ch == '\n') ++lines;
    CHECK(lines == 3);  // header + two appended rows
}

TEST_CASE("eval kappa: contraction flow from e1") {
    const CliResult r =
        run({"eval", "kappa", "--preset", "gaussian-scalar", "--t", "1", "--law", "e1"});
    REQUIRE(r.exit_code == 0);
    std::stringstream ss(r.out);
    std::string item;
    std::getline(ss, item, ',');
    CHECK(std::abs(std::stod(item) - std::exp(-1.0)) <= 1e-15);
    std::getline(ss, item, ',');
    CHECK(std::stod(item) == 0.0);
}

TEST_CASE("eval covariance and entrance-cf") {
    const CliResult cov =
        run({"eval", "covariance", "--preset", "gaussian-scalar", "--s", "-inf", "--t", "0"});
    REQUIRE(cov.exit_code == 0);
    std::stringstream ss(cov.out);
    std::string item;
    while (std::getline(ss, item, ',')) CHECK(std::abs(std::stod(item) - 0.5) <= 1e-9);

    const CliResult zero_law = run({"eval", "entrance-cf", "--preset", "gaussian-scalar", "--t",
                                    "0", "--a", "e1", "--law", "zero"});
    const CliResult plain =
        run({"eval", "cf", "--preset", "gaussian-scalar", "--s", "-inf", "--t", "0", "--a", "e1"});
    CHECK(zero_law.out == plain.out);
}

TEST_CASE("eval rejects bad inputs with exit code 2") {
    CHECK(run({"eval", "cf"}).exit_code == 2);  // no model source
    CHECK(run({"eval", "cf", "--preset", "no-such-preset"}).exit_code == 2);
    CHECK(run({"eval", "cf", "--preset", "gaussian-scalar", "--s", "2", "--t", "1"}).exit_code ==
          2);
    CHECK(run({"eval", "banana", "--preset", "gaussian-scalar"}).exit_code == 2);
    CHECK(run({"eval", "covariance", "--preset", "stable-scalar", "--s", "0", "--t", "1"})
              .exit_code == 2);
}

TEST_CASE("sample rejects a non-positive draw count") {
    CHECK(run({"sample", "--preset", "gaussian-scalar", "--law", "zero", "--t", "0", "--n", "0"})
              .exit_code == 2);
}

TEST_CASE("numerical failures exit with code 3") {
    const fs::path dir = scratch_dir("numerr");
    Config c = config_from_preset("cp-scalar");
    c.quad = QuadConfig{1e-15, 1e-300, 1, 2.0};  // impossible budget
    const fs::path cfg = dir / "config.json";
    {
        std::ofstream out(cfg);
        out << serialize_config(c);
    }
    const CliResult r =
        run({"eval", "cf", "--config", cfg.string(), "--s", "-2", "--t", "2", "--a", "e1"});
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("numerical error") != std::string::npos);
}

TEST_CASE("verify: gaussian preset passes, corrupted preset fails on the flow row") {
    const fs::path dir = scratch_dir("verify");
    {
        std::ofstream out(dir / "good.json");
        out << small_config((dir / "good_out").string(), 9001);
    }
    const CliResult good = run({"verify", "--config", (dir / "good.json").string()});
    CHECK(good.exit_code == 0);
    CHECK(good.out.find("ALL CHECKS PASSED") != std::string::npos);
    CHECK(fs::exists(dir / "good_out" / "report.csv"));
    CHECK(fs::exists(dir / "good_out" / "report.json"));
    CHECK(fs::exists(dir / "good_out" / "cf.csv"));

    Config bad = config_from_preset("corrupted-kappa");
    bad.experiment.mc = McConfigC{20000, 64, 9002};
    bad.experiment.times = {{-1.0, 0.0, 1.0}, {-0.5, 0.3, 2.0}};
    bad.output.directory = (dir / "bad_out").string();
    {
        std::ofstream out(dir / "bad.json");
        out << serialize_config(bad);
    }
    const CliResult failed = run({"verify", "--config", (dir / "bad.json").string()});
    CHECK(failed.exit_code == 1);
    const std::string csv = slurp(dir / "bad_out" / "report.csv");
    CHECK(csv.find("flow") != std::string::npos);
    CHECK(csv.find("FAIL") != std::string::npos);
    // Only flow rows fail.
    std::stringstream lines(csv);
    std::string line;
    while (std::getline(lines, line))
        if (line.find("FAIL") != std::string::npos) CHECK(line.rfind("flow,", 0) == 0);
}

TEST_CASE("verify: malformed config exits 2 and writes nothing") {
    const fs::path dir = scratch_dir("malformed");
    {
        std::ofstream out(dir / "broken.json");
        out << "{\"space\": {\"dim\": }";
    }
    const CliResult r = run({"verify", "--config", (dir / "broken.json").string(), "--out",
                             (dir / "out").string()});
    CHECK(r.exit_code == 2);
    CHECK_FALSE(fs::exists(dir / "out" / "report.csv"));
}

TEST_CASE("verify output is bit-stable across runs") {
    const fs::path dir = scratch_dir("bitstable");
    {
        std::ofstream out(dir / "a.json");
        out << small_config((dir / "out_a").string(), 7777);
    }
    {
        std::ofstream out(dir / "b.json");
        out << small_config((dir / "out_b").string(), 7777);
    }
    REQUIRE(run({"verify", "--config", (dir / "a.json").string()}).exit_code == 0);
    REQUIRE(run({"verify", "--config", (dir / "b.json").string()}).exit_code == 0);
    CHECK(slurp(dir / "out_a" / "report.csv") == slurp(dir / "out_b" / "report.csv"));
    CHECK(slurp(dir / "out_a" / "cf.csv") == slurp(dir / "out_b" / "cf.csv"));
}

TEST_CASE("sample writes a deterministic CSV with the documented schema") {
    const fs::path dir = scratch_dir("samples");
    const std::vector<std::string> args = {
        "sample", "--preset", "gaussian-scalar", "--law",  "0.5@e1;0.5@-e1", "--t",
        "0.5",    "--n",      "8",               "--seed", "424",            "--out",
        (dir / "s1").string()};
    REQUIRE(run(args).exit_code == 0);
    std::vector<std::string> args2 = args;
    args2.back() = (dir / "s2").string();
    REQUIRE(run(args2).exit_code == 0);

    const std::string csv = slurp(dir / "s1" / "samples.csv");
    CHECK(csv.rfind("draw_id,x_1,x_2,x_3,x_4\n", 0) == 0);
    int lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 9);  // header + 8 draws
    CHECK(csv == slurp(dir / "s2" / "samples.csv"));
}

TEST_CASE("MEHLERLAB_OUT overrides the output directory") {
    const fs::path dir = scratch_dir("envout");
    setenv("MEHLERLAB_OUT", (dir / "env_dir").string().c_str(), 1);
    const CliResult r = run({"sample", "--preset", "gaussian-scalar", "--law", "zero", "--t", "0",
                             "--n", "3", "--seed", "1", "--out", (dir / "ignored").string()});
    unsetenv("MEHLERLAB_OUT");
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(dir / "env_dir" / "samples.csv"));
    CHECK_FALSE(fs::exists(dir / "ignored" / "samples.csv"));
}

TEST_CASE("zero law samples through the CLI are pure base draws") {
    const fs::path dir = scratch_dir("zerodraws");
    REQUIRE(run({"sample", "--preset", "gaussian-scalar", "--law", "zero", "--t", "0", "--n", "4",
                 "--seed", "77", "--out", dir.string()})
                .exit_code == 0);
    const std::string csv = slurp(dir / "samples.csv");
    // Matches the library path with the same seed/stream.
    RngStream rng(77, 0);
    const MehlerModel m = build_model(config_from_preset("gaussian-scalar"));
    const EntranceLaw law = build_law(m, LawConfig{{{1.0, ZeroPath{}}}});
    const SampleBatch batch = sample_entrance(law, 0.0, 4, rng, 256);
    std::stringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    for (int j = 0; j < 4; ++j) {
        REQUIRE(std::getline(lines, line));
        std::stringstream fields(line);
        std::string field;
        std::getline(fields, field, ',');
        CHECK(std::stoi(field) == j);
        for (int i = 0; i < 4; ++i) {
            REQUIRE(std::getline(fields, field, ','));
            CHECK(std::stod(field) == batch.at(j, i));
        }
    }
}
