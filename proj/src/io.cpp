#include "mlqkd/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace mlqkd {

using nlohmann::json;

json sim_result_json(const SimConfig& config, const SimResult& result) {
  json j;
  j["config"] = {{"M", config.params.M},
                 {"L", config.params.L},
                 {"double_even", config.params.double_even},
                 {"mu", config.mu},
                 {"eta", config.channel.eta},
                 {"eps", config.channel.eps},
                 {"pulses", config.pulses},
                 {"seed", config.seed}};
  j["counts"] = {{"pulses", result.pulses},
                 {"detected", result.detected},
                 {"conclusive", result.conclusive},
                 {"conclusive_errors", result.conclusive_errors}};
  if (config.params.double_even) {
    j["counts"]["mirror_conclusive"] = result.mirror_conclusive;
    j["counts"]["mirror_errors"] = result.mirror_errors;
  }
  j["frequencies"] = {{"eta_d_hat", result.eta_d_hat},
                      {"r_con_hat", result.r_con_hat},
                      {"r_bit_hat", result.r_bit_hat}};
  j["std_errors"] = {{"eta_d", result.eta_d_se},
                     {"r_con", result.r_con_se},
                     {"r_bit", result.r_bit_se}};
  j["seed"] = result.seed;
  return j;
}

json key_rate_json(const KeyRateResult& rate) {
  json j;
  j["e_bit"] = rate.e_bit;
  j["e_ph"] = rate.e_ph;
  j["bracket"] = rate.bracket;
  j["gain"] = rate.gain;
  j["mode"] = rate.mode == RateMode::kFinite ? "finite" : "asymptotic";
  if (rate.gamma) j["gamma"] = *rate.gamma;
  if (rate.K) j["K"] = *rate.K;
  return j;
}

json finite_rate_json(const ProtocolParams& params, const ChannelModel& channel,
                      const FiniteRateResult& result) {
  json j;
  j["config"] = {{"M", params.M},
                 {"L", params.L},
                 {"double_even", params.double_even},
                 {"mu", result.mu},
                 {"eta", channel.eta},
                 {"eps", channel.eps}};
  j["stats"] = {{"eta_d", result.stats.eta_d},
                {"X", result.stats.X},
                {"r_con", result.stats.r_con},
                {"r_bit", result.stats.r_bit}};
  j["phi_prime"] = result.phi_prime;
  j["r_ph_bar"] = result.bound.r_ph_bar;
  j["rate"] = key_rate_json(result.rate);
  return j;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string quoted = "\"";
  for (char c : value) {
    if (c == '"') quoted += "\"\"";
    else quoted += c;
  }
  quoted += "\"";
  return quoted;
}

void write_csv_comment(std::ostream& out, const std::string& invocation) {
  out << "# mlqkd " << kVersion << " | " << invocation << "\n";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_field(fields[i]);
  }
  out << "\n";
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

}  // namespace mlqkd
