#include "randpart/emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace randpart {

namespace {

using ordered_json = nlohmann::ordered_json;

// Round-trips the emitted decimal string so JSON carries the very numbers the
// CSV prints, not the unrounded doubles.
ordered_json json_number(double value) {
  if (std::isnan(value)) return nullptr;
  return std::strtod(format_sig12(value).c_str(), nullptr);
}

ordered_json json_row(const EstimateResult& result) {
  ordered_json row;
  row["kind"] = kind_name(result.config.kind);
  row["n"] = result.config.n;
  row["t"] = result.config.t;
  row["trials"] = result.trials;
  row["seed"] = result.config.master_seed;
  row["success"] = result.success_count;
  row["estimate"] = json_number(result.point_estimate);
  row["stderr"] = json_number(result.std_error);
  row["ci_lo"] = json_number(result.ci_lo);
  row["ci_hi"] = json_number(result.ci_hi);
  row["elapsed_ms"] = json_number(result.elapsed_ms);
  if (!result.extras.empty()) {
    ordered_json extras;
    for (const auto& [name, value] : result.extras) extras[name] = json_number(value);
    row["extras"] = std::move(extras);
  }
  if (!result.per_trial.empty()) row["per_trial"] = result.per_trial;
  return row;
}

}  // namespace

std::string format_sig12(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::string csv_header() {
  return "kind,n,t,trials,seed,success,estimate,stderr,ci_lo,ci_hi,elapsed_ms";
}

std::string emit_csv(const std::vector<EstimateResult>& results) {
  std::string out = csv_header();
  out.push_back('\n');
  for (const EstimateResult& result : results) {
    out += kind_name(result.config.kind);
    out.push_back(',');
    out += std::to_string(result.config.n);
    out.push_back(',');
    out += std::to_string(result.config.t);
    out.push_back(',');
    out += std::to_string(result.trials);
    out.push_back(',');
    out += std::to_string(result.config.master_seed);
    out.push_back(',');
    out += std::to_string(result.success_count);
    out.push_back(',');
    out += format_sig12(result.point_estimate);
    out.push_back(',');
    out += format_sig12(result.std_error);
    out.push_back(',');
    out += format_sig12(result.ci_lo);
    out.push_back(',');
    out += format_sig12(result.ci_hi);
    out.push_back(',');
    out += format_sig12(result.elapsed_ms);
    out.push_back('\n');
  }
  return out;
}

std::string emit_json(const std::vector<EstimateResult>& results) {
  if (results.size() == 1) return json_row(results.front()).dump(2) + "\n";
  ordered_json rows = ordered_json::array();
  for (const EstimateResult& result : results) rows.push_back(json_row(result));
  return rows.dump(2) + "\n";
}

void zero_elapsed(std::vector<EstimateResult>& results) {
  for (EstimateResult& result : results) result.elapsed_ms = 0.0;
}

}  // namespace randpart
