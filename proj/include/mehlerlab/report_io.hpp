#pragma once

#include <string>

#include "mehlerlab/sampler.hpp"
#include "mehlerlab/verify.hpp"

namespace mehler {

/// 17 significant digits, scientific notation: the project-wide float format
/// for CSV/stdout so regression output is bit-stable.
std::string format_double(double v);

/// check,param_s,param_r,param_t,probe_id,residual,tolerance,verdict
std::string report_csv(const Report& report);
/// probe_id,t,re_theory,im_theory,re_emp,im_emp,stderr
std::string cf_csv(const Report& report);
/// draw_id,x_1..x_dim
std::string samples_csv(const SampleBatch& batch);
std::string report_json(const Report& report);

void write_file(const std::string& path, const std::string& content);

}  // namespace mehler
