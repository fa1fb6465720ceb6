#include "qsdi/cli.hpp"

#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qsdi/errors.hpp"
#include "qsdi/experiments.hpp"
#include "qsdi/serialize.hpp"
#include "qsdi/validate.hpp"

namespace qsdi {

namespace {

using nlohmann::json;

struct NoiseFlags {
  std::string noise;
  double param = 0;
  double length_km = 0;
  double lc_km = 0;
  std::string side = "traveling";
  std::string scenario_path;

  CLI::Option* noise_opt = nullptr;
  CLI::Option* param_opt = nullptr;
  CLI::Option* length_opt = nullptr;
  CLI::Option* lc_opt = nullptr;
  CLI::Option* side_opt = nullptr;
  CLI::Option* scenario_opt = nullptr;
};

struct SecurityFlags {
  double theta = std::numbers::pi / 4;
  double eta = 1.0;
  std::string binning = "assign_zero";

  CLI::Option* theta_opt = nullptr;
  CLI::Option* eta_opt = nullptr;
  CLI::Option* binning_opt = nullptr;
};

struct OutputFlags {
  std::string format;
  std::string out_path;
};

bool given(const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; }

void add_noise_flags(CLI::App* cmd, NoiseFlags& f) {
  f.noise_opt = cmd->add_option(
      "--noise", f.noise,
      "Channel kind: dephasing | depolarizing | amplitude_damping | identity");
  f.param_opt = cmd->add_option("--param", f.param,
                                "Noise strength (dimensionless)");
  f.length_opt =
      cmd->add_option("--length-km", f.length_km, "Fiber length in km");
  f.lc_opt = cmd->add_option("--lc-km", f.lc_km,
                             "Coherence length in km (default per kind)");
  f.side_opt = cmd->add_option("--side", f.side, "Noisy qubit")
                   ->check(CLI::IsMember({"traveling", "stationary"}));
  f.scenario_opt = cmd->add_option("--scenario", f.scenario_path,
                                   "Scenario JSON file (composite channels)")
                       ->check(CLI::ExistingFile);
  f.param_opt->needs(f.noise_opt)->excludes(f.length_opt);
  f.length_opt->needs(f.noise_opt);
  f.lc_opt->needs(f.length_opt);
  f.scenario_opt->excludes(f.noise_opt)
      ->excludes(f.param_opt)
      ->excludes(f.length_opt)
      ->excludes(f.lc_opt)
      ->excludes(f.side_opt);
}

void add_security_flags(CLI::App* cmd, SecurityFlags& s, bool with_theta = true,
                        bool with_eta = true) {
  if (with_theta)
    s.theta_opt =
        cmd->add_option("--theta", s.theta, "Source angle in radians");
  if (with_eta)
    s.eta_opt =
        cmd->add_option("--eta", s.eta, "Bob's detection efficiency in [0,1]");
  s.binning_opt = cmd->add_option("--binning", s.binning, "No-click treatment")
                      ->check(CLI::IsMember({"assign_zero", "discard"}));
}

void add_output_flags(CLI::App* cmd, OutputFlags& o, const char* def) {
  o.format = def;
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out_path, "Write output to a file");
}

Scenario build_scenario(const NoiseFlags& f, const SecurityFlags& s) {
  Scenario sc;
  const bool from_file = given(f.scenario_opt);
  if (from_file) {
    std::ifstream in(f.scenario_path);
    if (!in)
      throw std::invalid_argument("cannot read scenario file: " +
                                  f.scenario_path);
    sc = scenario_from_json(json::parse(in));
  } else if (given(f.noise_opt)) {
    ChannelSpec spec;
    spec.kind = channel_kind_from_string(f.noise);
    spec.side = side_from_string(f.side);
    if (given(f.param_opt)) spec.param = f.param;
    if (given(f.length_opt))
      spec.distance = DistanceModel{
          f.length_km,
          given(f.lc_opt) ? f.lc_km : default_coherence_km(spec.kind)};
    if (!spec.param && !spec.distance) spec.param = 0.0;
    sc.channels.push_back(spec);
  }
  if (!from_file || given(s.theta_opt)) sc.theta = s.theta;
  if (!from_file || given(s.eta_opt)) sc.security.eta_b = s.eta;
  if (!from_file || given(s.binning_opt))
    sc.security.binning = binning_from_string(s.binning);
  return sc;
}

void emit(const std::string& text, const OutputFlags& o, std::ostream& out) {
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path);
  if (!f)
    throw std::invalid_argument("cannot open output file: " + o.out_path);
  f << text;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

/// Single-row CSV for the scalar subcommands.
std::string scalar_csv(const json& j) {
  std::ostringstream header, row;
  bool first = true;
  for (const auto& item : j.items()) {
    header << (first ? "" : ",") << item.key();
    const json& v = item.value();
    row << (first ? "" : ",");
    if (v.is_number())
      row << fmt_double(v.get<double>());
    else if (v.is_boolean())
      row << (v.get<bool>() ? "true" : "false");
    else
      row << v.get<std::string>();
    first = false;
  }
  return header.str() + "\n" + row.str() + "\n";
}

int domain_failure(std::ostream& err, const char* type,
                   const std::string& message) {
  err << render(json{{"error", {{"type", type}, {"message", message}}}});
  return 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Noise analysis for one-sided device-independent QKD"};
  app.name("qsdi");
  app.require_subcommand(1);

  auto* keyrate = app.add_subcommand(
      "keyrate", "Key rate, steering parameter, and concurrence for one scenario");
  NoiseFlags kr_noise;
  SecurityFlags kr_sec;
  OutputFlags kr_out;
  add_noise_flags(keyrate, kr_noise);
  add_security_flags(keyrate, kr_sec);
  add_output_flags(keyrate, kr_out, "json");

  auto* threshold =
      app.add_subcommand("threshold", "Critical efficiency or noise searches");
  threshold->require_subcommand(1);
  auto* th_eta = threshold->add_subcommand(
      "eta", "Minimum detection efficiency with a positive key rate");
  NoiseFlags te_noise;
  SecurityFlags te_sec;
  OutputFlags te_out;
  add_noise_flags(th_eta, te_noise);
  add_security_flags(th_eta, te_sec, true, false);
  add_output_flags(th_eta, te_out, "json");

  auto* th_noise = threshold->add_subcommand(
      "noise", "Critical noise strengths for one channel kind");
  std::string tn_kind;
  bool tn_steering_only = false;
  SecurityFlags tn_sec;
  OutputFlags tn_out;
  th_noise->add_option("--noise", tn_kind, "Channel kind to search")
      ->required();
  th_noise->add_flag("--steering-only", tn_steering_only,
                     "Report only the steering threshold");
  add_security_flags(th_noise, tn_sec);
  add_output_flags(th_noise, tn_out, "json");

  auto* esd = app.add_subcommand(
      "esd", "Noise strength where entanglement dies outright");
  std::string esd_kind;
  SecurityFlags esd_sec;
  OutputFlags esd_out;
  esd->add_option("kind", esd_kind, "Channel kind")->required();
  add_security_flags(esd, esd_sec, true, false);
  add_output_flags(esd, esd_out, "json");

  auto* purify = app.add_subcommand(
      "purify", "Purification trace: fidelity, yield, and rates per round");
  NoiseFlags pu_noise;
  SecurityFlags pu_sec;
  OutputFlags pu_out;
  int pu_rounds = 4;
  bool pu_no_twirl = false, pu_no_align = false;
  add_noise_flags(purify, pu_noise);
  add_security_flags(purify, pu_sec);
  purify->add_option("--rounds", pu_rounds, "Purification rounds");
  purify->add_flag("--no-twirl", pu_no_twirl, "Skip the per-round twirl");
  purify->add_flag("--no-align", pu_no_align,
                   "Skip the per-round error-basis alignment");
  add_output_flags(purify, pu_out, "csv");

  auto* sweep = app.add_subcommand("sweep", "Grid sweeps with zero crossings");
  sweep->require_subcommand(1);
  auto* sw_eta = sweep->add_subcommand("eta", "Sweep Bob's efficiency");
  NoiseFlags se_noise;
  SecurityFlags se_sec;
  OutputFlags se_out;
  int se_points = 100;
  double se_min = 0.4, se_max = 1.0;
  add_noise_flags(sw_eta, se_noise);
  add_security_flags(sw_eta, se_sec, true, false);
  sw_eta->add_option("--points", se_points, "Grid points");
  sw_eta->add_option("--min", se_min, "Lower efficiency bound");
  sw_eta->add_option("--max", se_max, "Upper efficiency bound");
  add_output_flags(sw_eta, se_out, "csv");

  auto* sw_noise = sweep->add_subcommand("noise", "Sweep one noise strength");
  std::string sn_kind;
  std::string sn_side = "traveling";
  SecurityFlags sn_sec;
  OutputFlags sn_out;
  double sn_step = 0.01;
  sw_noise->add_option("--noise", sn_kind, "Channel kind to sweep")
      ->required();
  sw_noise->add_option("--step", sn_step, "Grid step");
  sw_noise->add_option("--side", sn_side, "Noisy qubit")
      ->check(CLI::IsMember({"traveling", "stationary"}));
  add_security_flags(sw_noise, sn_sec);
  add_output_flags(sw_noise, sn_out, "csv");

  auto* sw_theta = sweep->add_subcommand("theta", "Sweep the source angle");
  NoiseFlags st_noise;
  SecurityFlags st_sec;
  OutputFlags st_out;
  int st_points = 100;
  add_noise_flags(sw_theta, st_noise);
  add_security_flags(sw_theta, st_sec, false, true);
  sw_theta->add_option("--points", st_points, "Grid points");
  add_output_flags(sw_theta, st_out, "csv");

  auto* contour = app.add_subcommand(
      "contour", "Key rate over the (fiber length, purification round) grid");
  std::string co_kind;
  SecurityFlags co_sec;
  OutputFlags co_out;
  double co_lc = 0, co_max_l = 60, co_step = 1;
  int co_rounds = 10;
  contour->add_option("--noise", co_kind, "Channel kind")->required();
  CLI::Option* co_lc_opt =
      contour->add_option("--lc-km", co_lc, "Coherence length in km");
  contour->add_option("--max-length-km", co_max_l, "Largest fiber length");
  contour->add_option("--step-km", co_step, "Length step");
  contour->add_option("--rounds", co_rounds, "Purification rounds");
  add_security_flags(contour, co_sec);
  add_output_flags(contour, co_out, "csv");

  auto* table = app.add_subcommand(
      "table", "Threshold summary for all channel kinds");
  SecurityFlags ta_sec;
  OutputFlags ta_out;
  add_security_flags(table, ta_sec);
  add_output_flags(table, ta_out, "csv");

  auto* validate =
      app.add_subcommand("validate", "Run the internal consistency suite");
  OutputFlags va_out;
  add_output_flags(validate, va_out, "csv");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));

    if (keyrate->parsed()) {
      Scenario sc = build_scenario(kr_noise, kr_sec);
      SweepRow row{sc.primary_kind(), sc.primary_param(), sc.security.eta_b,
                   sc.theta, evaluate_key_rate(sc.state(), sc.security)};
      emit(kr_out.format == "json"
               ? render(to_json(row))
               : std::string(sweep_csv_header) + "\n" + to_csv(row) + "\n",
           kr_out, out);
    } else if (th_eta->parsed()) {
      Scenario sc = build_scenario(te_noise, te_sec);
      double eta_min = minimum_efficiency(sc.state(), sc.security);
      json j{{"noise_kind", to_string(sc.primary_kind())},
             {"param", sc.primary_param()},
             {"theta", sc.theta},
             {"binning", to_string(sc.security.binning)},
             {"eta_min", eta_min}};
      emit(te_out.format == "json" ? render(j) : scalar_csv(j), te_out, out);
    } else if (th_noise->parsed()) {
      ChannelKind kind = channel_kind_from_string(tn_kind);
      KeyRateOptions opts;
      opts.eta_b = tn_sec.eta;
      opts.binning = binning_from_string(tn_sec.binning);
      NoiseThresholds t = critical_noise(kind, tn_sec.theta, opts);
      json j{{"noise_kind", to_string(kind)},
             {"theta", tn_sec.theta},
             {"eta_b", opts.eta_b},
             {"binning", to_string(opts.binning)},
             {"steering", t.steering}};
      if (!tn_steering_only) j["key_rate"] = t.key_rate;
      emit(tn_out.format == "json" ? render(j) : scalar_csv(j), tn_out, out);
    } else if (esd->parsed()) {
      ChannelKind kind = channel_kind_from_string(esd_kind);
      json j{{"noise_kind", to_string(kind)},
             {"theta", esd_sec.theta},
             {"esd", esd_threshold(kind, esd_sec.theta)}};
      emit(esd_out.format == "json" ? render(j) : scalar_csv(j), esd_out, out);
    } else if (purify->parsed()) {
      Scenario sc = build_scenario(pu_noise, pu_sec);
      PurifyOptions opts;
      opts.rounds = pu_rounds;
      opts.twirl_each_round = !pu_no_twirl;
      opts.align_each_round = !pu_no_align;
      opts.security = sc.security;
      std::vector<PurifyRound> trace = purify_iterate(sc.state(), opts);
      emit(pu_out.format == "json" ? render(to_json(trace)) : to_csv(trace),
           pu_out, out);
    } else if (sw_eta->parsed()) {
      Scenario sc = build_scenario(se_noise, se_sec);
      SweepResult res = sweep_efficiency(sc, se_points, se_min, se_max);
      emit(se_out.format == "json" ? render(to_json(res)) : to_csv(res),
           se_out, out);
    } else if (sw_noise->parsed()) {
      Scenario base;
      base.theta = sn_sec.theta;
      base.security.eta_b = sn_sec.eta;
      base.security.binning = binning_from_string(sn_sec.binning);
      SweepResult res =
          sweep_noise(channel_kind_from_string(sn_kind), base, sn_step,
                      side_from_string(sn_side));
      emit(sn_out.format == "json" ? render(to_json(res)) : to_csv(res),
           sn_out, out);
    } else if (sw_theta->parsed()) {
      Scenario sc = build_scenario(st_noise, st_sec);
      SweepResult res = sweep_theta(sc, st_points);
      emit(st_out.format == "json" ? render(to_json(res)) : to_csv(res),
           st_out, out);
    } else if (contour->parsed()) {
      ChannelKind kind = channel_kind_from_string(co_kind);
      KeyRateOptions opts;
      opts.eta_b = co_sec.eta;
      opts.binning = binning_from_string(co_sec.binning);
      double lc = given(co_lc_opt) ? co_lc : default_coherence_km(kind);
      ContourGrid grid = contour_grid(kind, lc, opts, co_max_l, co_step,
                                      co_rounds, co_sec.theta);
      emit(co_out.format == "json" ? render(to_json(grid)) : to_csv(grid),
           co_out, out);
    } else if (table->parsed()) {
      KeyRateOptions opts;
      opts.eta_b = ta_sec.eta;
      opts.binning = binning_from_string(ta_sec.binning);
      std::vector<ThresholdRow> rows = threshold_table(opts, ta_sec.theta);
      emit(ta_out.format == "json" ? render(to_json(rows)) : to_csv(rows),
           ta_out, out);
    } else if (validate->parsed()) {
      std::vector<ValidationCheck> checks = run_validation();
      std::string text;
      if (va_out.format == "json") {
        json arr = json::array();
        for (const ValidationCheck& c : checks)
          arr.push_back(json{{"name", c.name},
                             {"error", c.error},
                             {"tolerance", c.tolerance},
                             {"passed", c.passed}});
        text = render(arr);
      } else {
        std::ostringstream s;
        s << "name,error,tolerance,passed\n";
        for (const ValidationCheck& c : checks)
          s << c.name << ',' << fmt_double(c.error) << ','
            << fmt_double(c.tolerance) << ',' << (c.passed ? "true" : "false")
            << '\n';
        text = s.str();
      }
      emit(text, va_out, out);
      return all_passed(checks) ? 0 : 1;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const NeverSecure& e) {
    return domain_failure(err, "never_secure", e.what());
  } catch (const ZeroSuccessProbability& e) {
    return domain_failure(err, "zero_success_probability", e.what());
  } catch (const NotBellDiagonal& e) {
    return domain_failure(err, "not_bell_diagonal", e.what());
  } catch (const nlohmann::json::exception& e) {
    err << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    return domain_failure(err, "internal", e.what());
  }
}

}  // namespace qsdi
