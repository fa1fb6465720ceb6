#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qsdi/experiments.hpp"

namespace qsdi {

const char* to_string(ChannelKind kind);
const char* to_string(Side side);
const char* to_string(Binning binning);
const char* to_string(BoundMethod method);

ChannelKind channel_kind_from_string(const std::string& name);
Side side_from_string(const std::string& name);
Binning binning_from_string(const std::string& name);
BoundMethod bound_method_from_string(const std::string& name);

/// Fixed "%.12g" rendering for CSV cells; negative zero prints as "0" so
/// repeated runs stay byte-identical.
std::string fmt_double(double v);

nlohmann::json to_json(const KeyRateReport& report);
nlohmann::json to_json(const Annotation& ann);
nlohmann::json to_json(const SweepRow& row);
nlohmann::json to_json(const SweepResult& sweep);
nlohmann::json to_json(const PurifyRound& round);
nlohmann::json to_json(const std::vector<PurifyRound>& trace);
nlohmann::json to_json(const ContourGrid& grid);
nlohmann::json to_json(const ThresholdRow& row);
nlohmann::json to_json(const std::vector<ThresholdRow>& table);
nlohmann::json to_json(const Scenario& sc);

Scenario scenario_from_json(const nlohmann::json& j);

inline constexpr const char* sweep_csv_header =
    "noise_kind,param,eta_b,theta,s2,h_ab,h_ae_bound,key_rate,concurrence,secure";
inline constexpr const char* contour_csv_header =
    "noise_kind,lc_km,l_km,round,fidelity,success_prob,yield,key_rate,"
    "effective_rate,diverged";
inline constexpr const char* purify_csv_header =
    "round,fidelity,success_prob,yield,key_rate,effective_rate";

std::string to_csv(const SweepRow& row);
/// Rows under the fixed header; annotations follow as '#' comment lines.
std::string to_csv(const SweepResult& sweep);
std::string to_csv(const std::vector<PurifyRound>& trace);
std::string to_csv(const ContourGrid& grid);
std::string to_csv(const std::vector<ThresholdRow>& table);

}  // namespace qsdi
