#include "qsdi/serialize.hpp"

#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

namespace qsdi {

namespace {

using nlohmann::json;

[[noreturn]] void bad_name(const char* what, const std::string& name) {
  throw std::invalid_argument(std::string("unknown ") + what + ": " + name);
}

/// Scenario/channel JSON objects reject unknown keys so typos surface as
/// usage errors instead of silently applying defaults.
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* context) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument(std::string("unknown key in ") + context +
                                  ": " + item.key());
  }
}

}  // namespace

const char* to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::dephasing: return "dephasing";
    case ChannelKind::depolarizing: return "depolarizing";
    case ChannelKind::amplitude_damping: return "amplitude_damping";
    case ChannelKind::identity: return "identity";
    case ChannelKind::composite: return "composite";
  }
  throw std::invalid_argument("unrepresentable channel kind");
}

const char* to_string(Side side) {
  return side == Side::traveling ? "traveling" : "stationary";
}

const char* to_string(Binning binning) {
  return binning == Binning::assign_zero ? "assign_zero" : "discard";
}

const char* to_string(BoundMethod) { return "steering_analytic"; }

ChannelKind channel_kind_from_string(const std::string& name) {
  if (name == "dephasing") return ChannelKind::dephasing;
  if (name == "depolarizing") return ChannelKind::depolarizing;
  if (name == "amplitude_damping") return ChannelKind::amplitude_damping;
  if (name == "identity") return ChannelKind::identity;
  bad_name("channel kind", name);
}

Side side_from_string(const std::string& name) {
  if (name == "traveling") return Side::traveling;
  if (name == "stationary") return Side::stationary;
  bad_name("side", name);
}

Binning binning_from_string(const std::string& name) {
  if (name == "assign_zero") return Binning::assign_zero;
  if (name == "discard") return Binning::discard;
  bad_name("binning", name);
}

BoundMethod bound_method_from_string(const std::string& name) {
  if (name == "steering_analytic") return BoundMethod::steering_analytic;
  bad_name("bound method", name);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  if (std::strcmp(buf, "-0") == 0) return "0";
  return buf;
}

json to_json(const KeyRateReport& r) {
  return json{{"s2", r.s2},
              {"h_ab", r.h_ab},
              {"h_ae_bound", r.h_ae_bound},
              {"key_rate", r.key_rate},
              {"key_rate_clamped", r.key_rate_clamped},
              {"concurrence", r.concurrence},
              {"eta_b", r.eta_b},
              {"binning", to_string(r.binning)},
              {"bound_method", to_string(r.method)},
              {"secure", r.secure}};
}

json to_json(const Annotation& a) {
  return json{{"label", a.label},
              {"axis", a.axis},
              {"interpolated", a.interpolated},
              {"refined", a.refined}};
}

json to_json(const SweepRow& row) {
  json j = to_json(row.report);
  j["noise_kind"] = to_string(row.noise_kind);
  j["param"] = row.param;
  j["eta_b"] = row.eta_b;
  j["theta"] = row.theta;
  return j;
}

json to_json(const SweepResult& sweep) {
  json rows = json::array();
  for (const SweepRow& row : sweep.rows) rows.push_back(to_json(row));
  json annotations = json::array();
  for (const Annotation& a : sweep.annotations) annotations.push_back(to_json(a));
  return json{{"axis", sweep.axis}, {"rows", rows}, {"annotations", annotations}};
}

json to_json(const PurifyRound& r) {
  return json{{"round", r.round},
              {"fidelity", r.fidelity},
              {"success_prob", r.success_prob},
              {"yield", r.yield},
              {"key_rate", r.key_rate},
              {"effective_rate", r.effective_rate}};
}

json to_json(const std::vector<PurifyRound>& trace) {
  json rounds = json::array();
  for (const PurifyRound& r : trace) rounds.push_back(to_json(r));
  return rounds;
}

json to_json(const ContourGrid& grid) {
  json cells = json::array();
  for (const ContourCell& c : grid.cells)
    cells.push_back(json{{"l_km", c.l_km},
                         {"round", c.round},
                         {"fidelity", c.fidelity},
                         {"success_prob", c.success_prob},
                         {"yield", c.yield},
                         {"key_rate", c.key_rate},
                         {"effective_rate", c.effective_rate},
                         {"diverged", c.diverged}});
  return json{{"noise_kind", to_string(grid.kind)},
              {"lc_km", grid.lc_km},
              {"eta_b", grid.eta_b},
              {"cells", cells}};
}

json to_json(const ThresholdRow& row) {
  return json{{"noise_kind", to_string(row.kind)},
              {"lc_km", row.lc_km},
              {"param_at_30km", row.param_at_30km},
              {"fidelity_at_30km", row.fidelity_at_30km},
              {"steering_threshold", row.steering_threshold},
              {"key_rate_threshold", row.key_rate_threshold},
              {"esd", row.esd},
              {"residual_concurrence", row.residual_concurrence}};
}

json to_json(const std::vector<ThresholdRow>& table) {
  json rows = json::array();
  for (const ThresholdRow& row : table) rows.push_back(to_json(row));
  return rows;
}

json to_json(const Scenario& sc) {
  json channels = json::array();
  for (const ChannelSpec& spec : sc.channels) {
    json c{{"kind", to_string(spec.kind)}, {"side", to_string(spec.side)}};
    if (spec.param) c["param"] = *spec.param;
    if (spec.distance) {
      c["length_km"] = spec.distance->length_km;
      c["lc_km"] = spec.distance->coherence_km;
    }
    channels.push_back(c);
  }
  return json{{"theta", sc.theta},
              {"eta_b", sc.security.eta_b},
              {"binning", to_string(sc.security.binning)},
              {"bound_method", to_string(sc.security.method)},
              {"channels", channels}};
}

Scenario scenario_from_json(const json& j) {
  check_keys(j, {"theta", "eta_b", "binning", "bound_method", "channels"},
             "scenario");
  Scenario sc;
  sc.theta = j.value("theta", sc.theta);
  sc.security.eta_b = j.value("eta_b", sc.security.eta_b);
  if (j.contains("binning"))
    sc.security.binning = binning_from_string(j.at("binning").get<std::string>());
  if (j.contains("bound_method"))
    sc.security.method =
        bound_method_from_string(j.at("bound_method").get<std::string>());
  for (const json& c : j.value("channels", json::array())) {
    check_keys(c, {"kind", "param", "length_km", "lc_km", "side"}, "channel");
    ChannelSpec spec;
    spec.kind = channel_kind_from_string(c.at("kind").get<std::string>());
    if (c.contains("side"))
      spec.side = side_from_string(c.at("side").get<std::string>());
    if (c.contains("param")) spec.param = c.at("param").get<double>();
    if (c.contains("length_km")) {
      DistanceModel d;
      d.length_km = c.at("length_km").get<double>();
      d.coherence_km = c.contains("lc_km") ? c.at("lc_km").get<double>()
                                           : default_coherence_km(spec.kind);
      spec.distance = d;
    }
    spec.resolved_param();  // validates the param/distance choice early
    sc.channels.push_back(spec);
  }
  return sc;
}

std::string to_csv(const SweepRow& row) {
  std::ostringstream out;
  out << to_string(row.noise_kind) << ',' << fmt_double(row.param) << ','
      << fmt_double(row.eta_b) << ',' << fmt_double(row.theta) << ','
      << fmt_double(row.report.s2) << ',' << fmt_double(row.report.h_ab) << ','
      << fmt_double(row.report.h_ae_bound) << ','
      << fmt_double(row.report.key_rate) << ','
      << fmt_double(row.report.concurrence) << ','
      << (row.report.secure ? "true" : "false");
  return out.str();
}

std::string to_csv(const SweepResult& sweep) {
  std::ostringstream out;
  out << sweep_csv_header << '\n';
  for (const SweepRow& row : sweep.rows) out << to_csv(row) << '\n';
  for (const Annotation& a : sweep.annotations)
    out << "# " << a.label << " axis=" << a.axis
        << " interpolated=" << fmt_double(a.interpolated)
        << " refined=" << fmt_double(a.refined) << '\n';
  return out.str();
}

std::string to_csv(const std::vector<PurifyRound>& trace) {
  std::ostringstream out;
  out << purify_csv_header << '\n';
  for (const PurifyRound& r : trace)
    out << r.round << ',' << fmt_double(r.fidelity) << ','
        << fmt_double(r.success_prob) << ',' << fmt_double(r.yield) << ','
        << fmt_double(r.key_rate) << ',' << fmt_double(r.effective_rate)
        << '\n';
  return out.str();
}

std::string to_csv(const ContourGrid& grid) {
  std::ostringstream out;
  out << contour_csv_header << '\n';
  for (const ContourCell& c : grid.cells)
    out << to_string(grid.kind) << ',' << fmt_double(grid.lc_km) << ','
        << fmt_double(c.l_km) << ',' << c.round << ',' << fmt_double(c.fidelity)
        << ',' << fmt_double(c.success_prob) << ',' << fmt_double(c.yield)
        << ',' << fmt_double(c.key_rate) << ',' << fmt_double(c.effective_rate)
        << ',' << (c.diverged ? "true" : "false") << '\n';
  return out.str();
}

std::string to_csv(const std::vector<ThresholdRow>& table) {
  std::ostringstream out;
  out << "noise_kind,lc_km,param_at_30km,fidelity_at_30km,steering_threshold,"
         "key_rate_threshold,esd,residual_concurrence\n";
  for (const ThresholdRow& row : table)
    out << to_string(row.kind) << ',' << fmt_double(row.lc_km) << ','
        << fmt_double(row.param_at_30km) << ','
        << fmt_double(row.fidelity_at_30km) << ','
        << fmt_double(row.steering_threshold) << ','
        << fmt_double(row.key_rate_threshold) << ',' << fmt_double(row.esd)
        << ',' << fmt_double(row.residual_concurrence) << '\n';
  return out.str();
}

}  // namespace qsdi
