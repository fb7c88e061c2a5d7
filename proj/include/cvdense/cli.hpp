// Copyright 2026 The cvdense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file cli.hpp
 * @brief The `cvdense` command-line front end.
 *
 * Settings are a flat set of `section.key` values. They start from built-in
 * defaults, are overlaid by an INI file (`--config`), and then by
 * `--set section.key=value` overrides and command-specific flags. Unknown
 * keys are rejected. Every command emits structured records as CSV (one
 * `# cvdense <command> v1` comment line, a header row, data rows) or as
 * JSON lines.
 *
 * Exit codes: 0 success, 1 physics/domain error, 2 usage or config error.
 */
#pragma once

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvdense/capacity.hpp"
#include "cvdense/errors.hpp"
#include "cvdense/gaussian.hpp"
#include "cvdense/protocol.hpp"
#include "cvdense/traces.hpp"

namespace cvdense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kSchemaVersion = "v1";

/// Bad configuration or command line; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, jsonl };

struct RunSpec {
  std::string command;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::string output = "-";
  Format format = Format::csv;
};

/// Every accepted key with its default value.
inline const std::map<std::string, std::string>& default_settings() {
  static const std::map<std::string, std::string> defaults = {
      {"experiment.r", "0"},
      {"experiment.alpha_re", "0"},
      {"experiment.alpha_im", "0"},
      {"experiment.pt_transmittance", "0.01"},
      {"experiment.detector_efficiency", "0.999"},
      {"experiment.ideal_displacement", "true"},
      {"experiment.r_plus", "none"},
      {"experiment.r_second", "none"},
      {"capacity.r", "2dB"},
      {"capacity.channels",
       "coherent_1q,coherent_2q,dense_coding_optimal,dense_coding,squeezed_homodyne,holevo_limit"},
      {"capacity.n_min", "0"},
      {"capacity.n_max", "5"},
      {"capacity.n_steps", "101"},
      {"crossing.a", "dense_coding"},
      {"crossing.b", "squeezed_homodyne"},
      {"crossing.lo", "0.5"},
      {"crossing.hi", "3"},
      {"crossing.tol", "1e-6"},
      {"convert.db", "none"},
      {"convert.r", "none"},
      {"trace.mode", "time"},
      {"trace.channel", "x"},
      {"trace.kind", "squeezed_locked"},
      {"trace.center_hz", "1.1e6"},
      {"trace.span_hz", "preset"},
      {"trace.rbw_hz", "30e3"},
      {"trace.vbw_hz", "300"},
      {"trace.averages", "10"},
      {"trace.sweep_s", "preset"},
      {"trace.lo_scan", "preset"},
      {"trace.seed", "1"},
      {"trace.points", "501"},
      {"trace.oversample", "16"},
      {"trace.am", "preset"},
      {"trace.pm", "preset"},
  };
  return defaults;
}

/// Resolved `section.key -> value` map.
class Settings {
 public:
  Settings() : values_(default_settings()) {}

  void set(const std::string& key, const std::string& value, const std::string& origin) {
    if (!values_.contains(key)) {
      throw ConfigError("unknown key '" + key + "' (from " + origin + ")");
    }
    values_[key] = trim(value);
  }

  /// `section.key=value`.
  void apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + assignment + "' is not of the form section.key=value");
    }
    set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "--set");
  }

  void load_ini(std::istream& in, const std::string& origin) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    for (const auto& [section, body] : tree) {
      if (!body.data().empty()) {
        throw ConfigError(origin + ": key '" + section + "' is outside any section");
      }
      for (const auto& [key, value] : body) set(section + "." + key, value.data(), origin);
    }
  }

  void load_ini_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    load_ini(in, path);
  }

  const std::string& raw(const std::string& key) const { return values_.at(key); }

  bool is_none(const std::string& key) const { return raw(key) == "none"; }
  bool is_preset(const std::string& key) const { return raw(key) == "preset"; }

  double number(const std::string& key) const { return parse_number(raw(key), key); }

  long long integer(const std::string& key) const {
    const std::string& s = raw(key);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("key '" + key + "': expected an integer, got '" + s + "'");
    }
    return v;
  }

  bool boolean(const std::string& key) const {
    const std::string& s = raw(key);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + s + "'");
  }

  /// A squeezing parameter given as plain r or as "<x>dB".
  double squeezing(const std::string& key) const { return parse_squeezing(raw(key), key); }

  static double parse_number(const std::string& s, const std::string& key) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw ConfigError("key '" + key + "': expected a number, got '" + s + "'");
    }
    return v;
  }

  static double parse_squeezing(const std::string& s, const std::string& key) {
    double r = 0.0;
    if (s.size() > 2 && (s.ends_with("dB") || s.ends_with("db"))) {
      const double db = parse_number(trim(s.substr(0, s.size() - 2)), key);
      if (db < 0.0) throw ConfigError("key '" + key + "': squeezing must be >= 0 dB");
      r = db_to_r(db);
    } else {
      r = parse_number(s, key);
    }
    if (r < 0.0) throw ConfigError("key '" + key + "': squeezing parameter must be >= 0");
    return r;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }

 private:
  std::map<std::string, std::string> values_;
};

inline Settings resolve_settings(const RunSpec& spec) {
  Settings s;
  if (spec.config_path) s.load_ini_file(*spec.config_path);
  for (const auto& o : spec.overrides) s.apply_override(o);
  return s;
}

inline ExperimentConfig build_experiment(const Settings& s) {
  ExperimentConfig c;
  c.r = s.squeezing("experiment.r");
  c.alpha = {s.number("experiment.alpha_re"), s.number("experiment.alpha_im")};
  c.pt_transmittance = s.number("experiment.pt_transmittance");
  c.detector_efficiency = s.number("experiment.detector_efficiency");
  c.ideal_displacement = s.boolean("experiment.ideal_displacement");
  if (!s.is_none("experiment.r_plus")) c.antisqueeze_r_plus = s.squeezing("experiment.r_plus");
  if (!s.is_none("experiment.r_second")) c.r_second = s.squeezing("experiment.r_second");
  // Out-of-range values are usage errors; physics violations keep their type.
  try {
    c.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
  return c;
}

/// "name", "name:<r>" or "name:<x>dB"; r-dependent channels without an
/// explicit value take `default_r`.
inline ChannelModel parse_channel(const std::string& text, double default_r) {
  static const std::map<std::string, ChannelKind> names = {
      {"dense_coding", ChannelKind::dense_coding},
      {"dc", ChannelKind::dense_coding},
      {"dense_coding_optimal", ChannelKind::dense_coding_optimal},
      {"dc_opt", ChannelKind::dense_coding_optimal},
      {"coherent_1q", ChannelKind::coherent_1q},
      {"coherent_2q", ChannelKind::coherent_2q},
      {"squeezed_homodyne", ChannelKind::squeezed_homodyne},
      {"sq_hom", ChannelKind::squeezed_homodyne},
      {"holevo_limit", ChannelKind::holevo_limit},
      {"holevo", ChannelKind::holevo_limit},
  };
  const std::string t = Settings::trim(text);
  const auto colon = t.find(':');
  const std::string name = t.substr(0, colon);
  const auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown channel '" + name + "'");
  ChannelModel m{it->second, 0.0};
  if (colon != std::string::npos) {
    if (!m.has_r()) throw ConfigError("channel '" + name + "' takes no squeezing parameter");
    m.r = Settings::parse_squeezing(t.substr(colon + 1), "channel " + name);
  } else if (m.has_r()) {
    m.r = default_r;
  }
  return m;
}

inline std::vector<ChannelModel> parse_channel_list(const std::string& list, double default_r) {
  std::vector<ChannelModel> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!Settings::trim(item).empty()) out.push_back(parse_channel(item, default_r));
  }
  if (out.empty()) throw ConfigError("key 'capacity.channels': no channels given");
  return out;
}

inline std::optional<ToneSignal> parse_tone(const Settings& s, const std::string& key,
                                            std::optional<ToneSignal> preset) {
  if (s.is_preset(key)) return preset;
  if (s.is_none(key)) return std::nullopt;
  const std::string& v = s.raw(key);
  const auto colon = v.find(':');
  if (colon == std::string::npos) {
    throw ConfigError("key '" + key + "': expected <freq_hz>:<depth> or none, got '" + v + "'");
  }
  return ToneSignal{Settings::parse_number(Settings::trim(v.substr(0, colon)), key),
                    Settings::parse_number(Settings::trim(v.substr(colon + 1)), key)};
}

inline bool spectrum_mode(const Settings& s) {
  const std::string& mode = s.raw("trace.mode");
  if (mode == "time") return false;
  if (mode == "spectrum") return true;
  throw ConfigError("key 'trace.mode': expected time or spectrum, got '" + mode + "'");
}

inline TraceConfig build_trace(const Settings& s) {
  TraceConfig tc = spectrum_mode(s) ? TraceConfig::spectrum() : TraceConfig::zero_span();
  const TraceConfig preset = tc;
  tc.center_hz = s.number("trace.center_hz");
  if (!s.is_preset("trace.span_hz")) tc.span_hz = s.number("trace.span_hz");
  tc.rbw_hz = s.number("trace.rbw_hz");
  tc.vbw_hz = s.number("trace.vbw_hz");
  tc.averages = static_cast<int>(s.integer("trace.averages"));
  if (!s.is_preset("trace.sweep_s")) tc.sweep_s = s.number("trace.sweep_s");
  if (!s.is_preset("trace.lo_scan")) tc.lo_scan = s.boolean("trace.lo_scan");
  const long long seed = s.integer("trace.seed");
  if (seed < 0) throw ConfigError("key 'trace.seed': must be >= 0");
  tc.seed = static_cast<std::uint64_t>(seed);
  const long long points = s.integer("trace.points");
  if (points < 2) throw ConfigError("key 'trace.points': must be >= 2");
  tc.points = static_cast<std::size_t>(points);
  tc.oversample = s.number("trace.oversample");
  tc.am_signal = parse_tone(s, "trace.am", preset.am_signal);
  tc.pm_signal = parse_tone(s, "trace.pm", preset.pm_signal);
  try {
    tc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("trace: ") + e.what());
  }
  if (spectrum_mode(s) != (tc.span_hz > 0.0)) {
    throw ConfigError("key 'trace.span_hz': time mode needs span 0, spectrum mode needs span > 0");
  }
  return tc;
}

inline TraceKind parse_kind(const std::string& s) {
  for (TraceKind k : {TraceKind::shot_noise, TraceKind::epr_noise, TraceKind::squeezed_locked,
                      TraceKind::squeezed_scanned}) {
    if (trace_kind_name(k) == s) return k;
  }
  throw ConfigError("key 'trace.kind': unknown trace kind '" + s + "'");
}

/// Writes ordered JSON objects as CSV rows or JSON lines.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, Format format, std::string command)
      : out_(out), format_(format), command_(std::move(command)) {}

  void write(const nlohmann::ordered_json& record) {
    if (format_ == Format::jsonl) {
      out_ << record.dump() << '\n';
      return;
    }
    if (header_.empty()) {
      out_ << "# cvdense " << command_ << ' ' << kSchemaVersion << '\n';
      for (const auto& [key, _] : record.items()) header_.push_back(key);
      write_csv_row(header_);
    }
    std::vector<std::string> cells;
    for (const auto& key : header_) cells.push_back(cell(record.at(key)));
    write_csv_row(cells);
  }

  static std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  }

 private:
  static std::string cell(const nlohmann::ordered_json& v) {
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "";
    return v.dump();
  }

  void write_csv_row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") != std::string::npos) {
        out_ << '"';
        for (char ch : c) {
          if (ch == '"') out_ << '"';
          out_ << ch;
        }
        out_ << '"';
      } else {
        out_ << c;
      }
    }
    out_ << '\n';
  }

  std::ostream& out_;
  Format format_;
  std::string command_;
  std::vector<std::string> header_;
};

inline nlohmann::ordered_json simulate_record(const ExperimentConfig& config) {
  const DecodedResult d = run_experiment(config);
  const DecodedResult ideal = run_experiment(ExperimentConfig::ideal(config.r, config.alpha));
  const double alpha2 = std::norm(config.alpha);
  nlohmann::ordered_json rec;
  rec["r"] = config.r;
  rec["squeezing_db"] = r_to_db(config.r);
  rec["alpha_re"] = config.alpha.real();
  rec["alpha_im"] = config.alpha.imag();
  rec["x_mean"] = d.x_channel.mean;
  rec["x_variance"] = d.x_channel.variance;
  rec["x_rel_db"] = d.x_channel.rel_db;
  rec["p_mean"] = d.p_channel.mean;
  rec["p_variance"] = d.p_channel.variance;
  rec["p_rel_db"] = d.p_channel.rel_db;
  rec["x_variance_ideal"] = ideal.x_channel.variance;
  rec["p_variance_ideal"] = ideal.p_channel.variance;
  rec["epr_variance"] = d.epr_variance;
  rec["epr_rel_db"] = shot_noise_db(d.epr_variance);
  rec["separability_cross_cov"] = d.separability_cross_cov;
  rec["signal_photons"] = alpha2;
  rec["squeezing_photons"] = squeezing_photons(config.r);
  rec["n_bar"] = d.signal_beam_photons;
  rec["excess_photons"] =
      config.antisqueeze_r_plus ? excess_photons(config.r, *config.antisqueeze_r_plus) : 0.0;
  return rec;
}

inline int cmd_simulate(const Settings& s, RecordWriter& w) {
  w.write(simulate_record(build_experiment(s)));
  return kExitOk;
}

inline std::vector<double> photon_grid(const Settings& s) {
  const double lo = s.number("capacity.n_min");
  const double hi = s.number("capacity.n_max");
  const long long steps = s.integer("capacity.n_steps");
  if (lo < 0.0) throw ConfigError("key 'capacity.n_min': must be >= 0");
  if (hi < lo) throw ConfigError("key 'capacity.n_max': must be >= capacity.n_min");
  if (steps < 1) throw ConfigError("key 'capacity.n_steps': must be >= 1");
  std::vector<double> grid;
  for (long long i = 0; i < steps; ++i) {
    grid.push_back(steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
  }
  return grid;
}

inline int cmd_capacity_curve(const Settings& s, RecordWriter& w, std::ostream& err) {
  const double r = s.squeezing("capacity.r");
  const auto channels = parse_channel_list(s.raw("capacity.channels"), r);
  const auto grid = photon_grid(s);
  std::vector<std::vector<std::optional<CapacityPoint>>> curves;
  for (const auto& m : channels) curves.push_back(capacity_curve(m, grid));
  std::size_t infeasible = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    nlohmann::ordered_json rec;
    rec["n_bar"] = grid[i];
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const auto& p = curves[c][i];
      if (p) {
        rec[channel_label(channels[c])] = p->info_nats;
      } else {
        rec[channel_label(channels[c])] = "infeasible";
        ++infeasible;
      }
    }
    w.write(rec);
  }
  if (infeasible) {
    err << "note: " << infeasible
        << " grid cells marked infeasible (n_bar < sinh^2 r, no photons left for the signal)\n";
  }
  return kExitOk;
}

inline int cmd_crossing(const Settings& s, RecordWriter& w) {
  const double r = s.squeezing("capacity.r");
  const ChannelModel a = parse_channel(s.raw("crossing.a"), r);
  const ChannelModel b = parse_channel(s.raw("crossing.b"), r);
  const double lo = s.number("crossing.lo");
  const double hi = s.number("crossing.hi");
  const double tol = s.number("crossing.tol");
  if (lo < 0.0 || hi <= lo) throw ConfigError("keys 'crossing.lo'/'crossing.hi': need 0 <= lo < hi");
  if (!(tol > 0.0)) throw ConfigError("key 'crossing.tol': must be > 0");
  const double n = crossing(a, b, lo, hi, tol);
  nlohmann::ordered_json rec;
  rec["a"] = channel_label(a);
  rec["b"] = channel_label(b);
  rec["n_bar"] = n;
  rec["info_nats"] = a.information(n);
  rec["info_bits"] = nats_to_bits(a.information(n));
  const bool optimal = a.kind == ChannelKind::dense_coding_optimal ||
                       b.kind == ChannelKind::dense_coding_optimal;
  rec["optimal_r"] = optimal ? nlohmann::ordered_json(optimal_squeezing_r(n)) : nullptr;
  rec["optimal_squeezing_db"] =
      optimal ? nlohmann::ordered_json(r_to_db(optimal_squeezing_r(n))) : nullptr;
  w.write(rec);
  return kExitOk;
}

inline int cmd_convert(const Settings& s, RecordWriter& w) {
  const bool has_db = !s.is_none("convert.db");
  const bool has_r = !s.is_none("convert.r");
  if (has_db == has_r) throw ConfigError("convert: give exactly one of --db or --r");
  double r = 0.0;
  if (has_db) {
    const double db = s.number("convert.db");
    if (db < 0.0) throw ConfigError("key 'convert.db': must be >= 0");
    r = db_to_r(db);
  } else {
    r = s.number("convert.r");
    if (r < 0.0) throw ConfigError("key 'convert.r': must be >= 0");
  }
  nlohmann::ordered_json rec;
  rec["db"] = r_to_db(r);
  rec["r"] = r;
  rec["squeezed_variance"] = 0.5 * std::exp(-2.0 * r);
  rec["squeezing_photons"] = squeezing_photons(r);
  w.write(rec);
  return kExitOk;
}

inline std::vector<Channel> parse_channels(const Settings& s) {
  const std::string& c = s.raw("trace.channel");
  if (c == "x") return {Channel::x};
  if (c == "p") return {Channel::p};
  if (c == "both") return {Channel::x, Channel::p};
  throw ConfigError("key 'trace.channel': expected x, p or both, got '" + c + "'");
}

inline int cmd_traces(const Settings& s, RecordWriter& w, std::ostream& err) {
  const ExperimentConfig exp = build_experiment(s);
  const TraceConfig tc = build_trace(s);
  const auto channels = parse_channels(s);
  if (tc.span_hz > 0.0) {
    const TraceKind kind = parse_kind(s.raw("trace.kind"));
    const SpectrumPair pair = spectrum_trace(exp, tc, kind);
    for (const auto& msg : pair.warnings) err << "warning: " << msg << '\n';
    for (std::size_t j = 0; j < tc.points; ++j) {
      nlohmann::ordered_json rec;
      rec["frequency_hz"] = pair.x.axis[j];
      rec["x_" + std::string(trace_kind_name(kind)) + "_db"] = pair.x.power_db[j];
      rec["p_" + std::string(trace_kind_name(kind)) + "_db"] = pair.p.power_db[j];
      w.write(rec);
    }
    return kExitOk;
  }
  std::vector<Trace> traces;
  for (Channel c : channels) {
    for (TraceKind k : {TraceKind::shot_noise, TraceKind::epr_noise, TraceKind::squeezed_locked,
                        TraceKind::squeezed_scanned}) {
      traces.push_back(time_trace(exp, tc, k, c));
    }
  }
  for (std::size_t j = 0; j < tc.points; ++j) {
    nlohmann::ordered_json rec;
    rec["time_s"] = traces.front().axis[j];
    for (const Trace& t : traces) {
      std::string name = std::string(trace_kind_name(t.kind)) + "_db";
      if (channels.size() > 1) name = (t.channel == Channel::x ? "x_" : "p_") + name;
      rec[name] = t.power_db[j];
    }
    w.write(rec);
  }
  return kExitOk;
}

inline int dispatch(const RunSpec& spec, const Settings& s, std::ostream& out, std::ostream& err) {
  RecordWriter w(out, spec.format, spec.command);
  if (spec.command == "simulate") return cmd_simulate(s, w);
  if (spec.command == "capacity-curve") return cmd_capacity_curve(s, w, err);
  if (spec.command == "crossing") return cmd_crossing(s, w);
  if (spec.command == "traces") return cmd_traces(s, w, err);
  if (spec.command == "convert") return cmd_convert(s, w);
  throw ConfigError("unknown command '" + spec.command + "'");
}

/// Runs a parsed RunSpec, mapping failures onto the exit-code contract.
inline int execute(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    const Settings settings = resolve_settings(spec);
    if (spec.output == "-") return dispatch(spec, settings, out, err);
    std::ostringstream buffer;
    const int code = dispatch(spec, settings, buffer, err);
    std::ofstream file(spec.output);
    if (!file) throw ConfigError("cannot open output file '" + spec.output + "'");
    file << buffer.str();
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

/// Full command-line entry point.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Continuous-variable dense coding: simulation, capacities and analyzer traces",
               "cvdense"};
  app.require_subcommand(1);
  RunSpec spec;
  std::string format = "csv";
  std::vector<std::string> extra;  // flag-derived overrides

  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", spec.config_path, "INI config file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", spec.overrides, "Override: section.key=value")->take_all();
    sub->add_option("-o,--output", spec.output, "Output path, - for stdout");
    sub->add_option("-f,--format", format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
  };
  auto flag = [&](CLI::App* sub, const std::string& name, const std::string& key,
                  const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&extra, key](const std::string& v) { extra.push_back(key + "=" + v); }, help);
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Run the dense-coding pipeline once");
  common(simulate);
  flag(simulate, "--r", "experiment.r", "Squeezing parameter (or <x>dB)");

  CLI::App* curve = app.add_subcommand("capacity-curve", "Mutual information versus n_bar");
  common(curve);
  flag(curve, "--channels", "capacity.channels", "Comma-separated channel list");
  flag(curve, "--r", "capacity.r", "Default squeezing for r-dependent channels");
  flag(curve, "--n-min", "capacity.n_min", "Grid start");
  flag(curve, "--n-max", "capacity.n_max", "Grid end");
  flag(curve, "--n-steps", "capacity.n_steps", "Grid points");

  CLI::App* cross = app.add_subcommand("crossing", "Photon number where two capacities meet");
  common(cross);
  flag(cross, "--a", "crossing.a", "First channel");
  flag(cross, "--b", "crossing.b", "Second channel");
  flag(cross, "--lo", "crossing.lo", "Bracket start");
  flag(cross, "--hi", "crossing.hi", "Bracket end");
  flag(cross, "--r", "capacity.r", "Default squeezing for r-dependent channels");

  CLI::App* traces = app.add_subcommand("traces", "Emulated spectrum-analyzer traces");
  common(traces);
  flag(traces, "--mode", "trace.mode", "time or spectrum");
  flag(traces, "--channel", "trace.channel", "x, p or both");
  flag(traces, "--seed", "trace.seed", "RNG seed");

  CLI::App* convert = app.add_subcommand("convert", "Squeezing dB <-> r");
  common(convert);
  flag(convert, "--db", "convert.db", "Squeezing in dB");
  flag(convert, "--r", "convert.r", "Squeezing parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  for (CLI::App* sub : app.get_subcommands()) spec.command = sub->get_name();
  spec.format = format == "jsonl" ? Format::jsonl : Format::csv;
  spec.overrides.insert(spec.overrides.end(), extra.begin(), extra.end());
  return execute(spec, out, err);
}

}  // namespace cvdense::cli
