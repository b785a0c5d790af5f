#pragma once

// Config files are JSON documents (// and /* */ comments allowed) whose keys
// mirror ProtocolConfig. All rates are in units of g0, all times in 1/g0.
// Unknown keys are rejected.

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "config.hpp"

namespace qzdswap {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Protocol parameters plus the output locations a config file may name.
struct ConfigFile {
  ProtocolConfig protocol;
  std::string trajectory_csv;
  std::string pulses_csv;
  std::string sweep_csv;
};

namespace detail {

inline Complex parse_amplitude(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("input amplitudes must be numbers or [re, im] pairs");
}

}  // namespace detail

inline ConfigFile parse_config(const std::string& text, const std::string& origin = "<string>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");

  static const std::set<std::string> known{
      "epsilon", "g",     "t_f",       "n_max",           "dt",
      "sample_every", "chi", "kappa", "gamma", "branching",
      "input_amplitudes", "signs", "step3_amplitude", "trajectory_csv", "pulses_csv",
      "sweep_csv"};
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw ConfigError(origin + ": unknown key '" + item.key() + "'");
  }

  ConfigFile file;
  ProtocolConfig& c = file.protocol;
  try {
    c.epsilon = doc.value("epsilon", c.epsilon);
    c.g = doc.value("g", c.g);
    c.t_f = doc.value("t_f", c.t_f);
    c.n_max = doc.value("n_max", c.n_max);
    // dt defaults to t_f / 4000 of whatever t_f the file sets.
    c.dt = doc.value("dt", c.t_f / 4000.0);
    c.sample_every = doc.value("sample_every", c.sample_every);
    c.chi = doc.value("chi", c.chi);
    c.noise.kappa = doc.value("kappa", c.noise.kappa);
    c.noise.gamma = doc.value("gamma", c.noise.gamma);
    if (doc.contains("branching")) {
      c.noise.branching = branching_from_string(doc["branching"].get<std::string>());
    }
    if (doc.contains("step3_amplitude")) {
      c.step3_amplitude = step3_amplitude_from_string(doc["step3_amplitude"].get<std::string>());
    }
    if (doc.contains("input_amplitudes")) {
      const auto& a = doc["input_amplitudes"];
      if (!a.is_array() || a.size() != 4) throw ConfigError("input_amplitudes needs 4 entries");
      for (std::size_t i = 0; i < 4; ++i) c.input_amplitudes[i] = detail::parse_amplitude(a[i]);
    }
    if (doc.contains("signs")) {
      const auto& s = doc["signs"];
      if (!s.is_array() || s.size() != 3) throw ConfigError("signs needs 3 [initial, target] pairs");
      for (std::size_t i = 0; i < 3; ++i) {
        if (!s[i].is_array() || s[i].size() != 2) throw ConfigError("signs entries are pairs");
        c.signs[i] = {s[i][0].get<double>(), s[i][1].get<double>()};
      }
    }
    file.trajectory_csv = doc.value("trajectory_csv", std::string{});
    file.pulses_csv = doc.value("pulses_csv", std::string{});
    file.sweep_csv = doc.value("sweep_csv", std::string{});
    c.validate();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return file;
}

inline ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

/// Fully resolved protocol parameters as a single-line JSON object.
inline std::string config_summary(const ProtocolConfig& c) {
  nlohmann::ordered_json j;
  j["epsilon"] = c.epsilon;
  j["g"] = c.g;
  j["t_f"] = c.t_f;
  j["n_max"] = c.n_max;
  j["dt"] = c.dt;
  j["sample_every"] = c.sample_every;
  j["chi"] = c.chi;
  j["kappa"] = c.noise.kappa;
  j["gamma"] = c.noise.gamma;
  j["branching"] = to_string(c.noise.branching);
  j["step3_amplitude"] = to_string(c.step3_amplitude);
  auto amps = nlohmann::ordered_json::array();
  for (const Complex& a : c.input_amplitudes) amps.push_back({a.real(), a.imag()});
  j["input_amplitudes"] = amps;
  auto signs = nlohmann::ordered_json::array();
  for (const auto& s : c.signs) signs.push_back({s.initial, s.target});
  j["signs"] = signs;
  j["units"] = "rates in g0, times in 1/g0";
  return j.dump();
}

}  // namespace qzdswap
