#include "mehlerlab/report_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace mehler {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

std::string opt_double(const std::optional<double>& v) {
    return v.has_value() ? format_double(*v) : std::string();
}

}  // namespace

std::string report_csv(const Report& report) {
    std::string out = "check,param_s,param_r,param_t,probe_id,residual,tolerance,verdict\n";
    for (const CheckRow& row : report.rows) {
        out += row.check + ',' + opt_double(row.param_s) + ',' + opt_double(row.param_r) + ',' +
               opt_double(row.param_t) + ',' +
               (row.probe_id.has_value() ? std::to_string(*row.probe_id) : std::string()) + ',' +
               format_double(row.residual) + ',' + format_double(row.tolerance) + ',' +
               (row.pass ? "pass" : "FAIL") + '\n';
    }
    return out;
}

std::string cf_csv(const Report& report) {
    std::string out = "probe_id,t,re_theory,im_theory,re_emp,im_emp,stderr\n";
    for (const CfRow& row : report.cf_rows) {
        out += std::to_string(row.probe_id) + ',' + format_double(row.t) + ',' +
               format_double(row.re_theory) + ',' + format_double(row.im_theory) + ',' +
               format_double(row.re_emp) + ',' + format_double(row.im_emp) + ',' +
               format_double(row.stderr_bound) + '\n';
    }
    return out;
}

std::string samples_csv(const SampleBatch& batch) {
    std::string out = "draw_id";
    for (int i = 1; i <= batch.dim; ++i) out += ",x_" + std::to_string(i);
    out += '\n';
    for (int j = 0; j < batch.n(); ++j) {
        out += std::to_string(j);
        for (int i = 0; i < batch.dim; ++i) out += ',' + format_double(batch.at(j, i));
        out += '\n';
    }
    return out;
}

std::string report_json(const Report& report) {
    nlohmann::json root;
    root["experiment"] = report.experiment;
    root["environment"] = {{"seed", report.seed}, {"config_hash", report.config_hash}};
    root["all_pass"] = report.all_pass();
    nlohmann::json rows = nlohmann::json::array();
    for (const CheckRow& row : report.rows) {
        nlohmann::json r;
        r["check"] = row.check;
        if (row.param_s.has_value()) r["s"] = *row.param_s;
        if (row.param_r.has_value()) r["r"] = *row.param_r;
        if (row.param_t.has_value()) r["t"] = *row.param_t;
        if (row.probe_id.has_value()) r["probe_id"] = *row.probe_id;
        r["residual"] = row.residual;
        r["tolerance"] = row.tolerance;
        r["verdict"] = row.pass ? "pass" : "fail";
        if (!row.note.empty()) r["note"] = row.note;
        r["wall_ms"] = row.wall_ms;
        rows.push_back(std::move(r));
    }
    root["checks"] = std::move(rows);
    return root.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw StructuralError("cannot write file '" + path + "'");
    out << content;
}

}  // namespace mehler
