#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlqkd/keyrate.hpp"
#include "mlqkd/montecarlo.hpp"

namespace mlqkd {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json sim_result_json(const SimConfig& config, const SimResult& result);
nlohmann::json key_rate_json(const KeyRateResult& rate);
nlohmann::json finite_rate_json(const ProtocolParams& params,
                                const ChannelModel& channel,
                                const FiniteRateResult& result);

/// RFC-4180 field quoting: fields with commas, quotes or newlines are wrapped
/// in double quotes with inner quotes doubled.
std::string csv_field(const std::string& value);

void write_csv_comment(std::ostream& out, const std::string& invocation);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

std::string format_double(double value);

}  // namespace mlqkd
