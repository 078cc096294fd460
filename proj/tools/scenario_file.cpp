/******************************************************************************
 * Copyright 2026 The psmrac Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "scenario_file.hpp"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "psmrac/error.hpp"

namespace psmrac::cli {

namespace {

using nlohmann::json;

void allow_keys(const json& obj, const std::string& where, const std::set<std::string>& keys) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

const json& require(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  return v.get<double>();
}

long integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return v.get<long>();
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where));
  return out;
}

double number_or(const json& obj, const std::string& where, const std::string& key, double def) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : def;
}

StateSpace parse_plant_section(const json& p, const std::string& base_dir) {
  allow_keys(p, "plant", {"preset", "file"});
  if (p.contains("preset") == p.contains("file")) {
    throw ConfigError("plant: give exactly one of 'preset' or 'file'");
  }
  if (p.contains("preset")) {
    const std::string name = text(p.at("preset"), "plant.preset");
    if (name != "gtm") throw ConfigError("plant.preset: unknown preset '" + name + "'");
    return gtm_model();
  }
  std::filesystem::path file = text(p.at("file"), "plant.file");
  if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
  return read_plant_file(file.string());
}

PartialStateSelector parse_selector(const json& s, int n) {
  allow_keys(s, "selector", {"states", "rows"});
  if (s.contains("states") == s.contains("rows")) {
    throw ConfigError("selector: give exactly one of 'states' or 'rows'");
  }
  if (s.contains("states")) {
    std::vector<int> idx;
    for (double v : numbers(s.at("states"), "selector.states")) {
      if (v != static_cast<int>(v) || v < 1 || v > n) {
        throw ConfigError("selector.states: state numbers must be integers in 1..n");
      }
      idx.push_back(static_cast<int>(v) - 1);
    }
    if (idx.empty()) throw ConfigError("selector.states: empty");
    return PartialStateSelector::from_states(n, idx);
  }
  const json& rows = s.at("rows");
  if (!rows.is_array() || rows.empty()) throw ConfigError("selector.rows: expected rows");
  Eigen::MatrixXd c0(static_cast<Eigen::Index>(rows.size()), n);
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto r = numbers(rows[i], "selector.rows");
    if (static_cast<int>(r.size()) != n) throw ConfigError("selector.rows: each row needs n entries");
    for (int j = 0; j < n; ++j) c0(static_cast<Eigen::Index>(i), j) = r[static_cast<size_t>(j)];
  }
  return {c0};
}

InteractorBundle parse_interactor(const json& x, const StateSpace& plant) {
  allow_keys(x, "interactor", {"pole", "degrees"});
  const double a = number(require(x, "interactor", "pole"), "interactor.pole");
  if (!x.contains("degrees") || (x.at("degrees").is_string() && x.at("degrees") == "auto")) {
    return find_diagonal_interactor(transfer_matrix(plant), a);
  }
  std::vector<int> deg;
  for (double v : numbers(x.at("degrees"), "interactor.degrees")) {
    if (v != static_cast<int>(v)) throw ConfigError("interactor.degrees: expected integers");
    deg.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(deg.size()) != plant.m()) {
    throw ConfigError("interactor.degrees: need one degree per output");
  }
  return InteractorBundle::diagonal(a, deg);
}

std::vector<double> per_channel(const json& v, const std::string& where, int m) {
  if (v.is_number()) return std::vector<double>(static_cast<size_t>(m), v.get<double>());
  auto out = numbers(v, where);
  if (static_cast<int>(out.size()) != m) throw ConfigError(where + ": need M entries");
  return out;
}

ReferenceSignal parse_reference(const json& r, int m) {
  allow_keys(r, "reference", {"channels"});
  const json& ch = require(r, "reference", "channels");
  if (!ch.is_array() || static_cast<int>(ch.size()) != m) {
    throw ConfigError("reference.channels: need one entry per output");
  }
  ReferenceSignal ref;
  for (size_t i = 0; i < ch.size(); ++i) {
    const std::string w = "reference.channels[" + std::to_string(i) + "]";
    allow_keys(ch[i], w, {"offset_rad", "tones"});
    ref.offsets.push_back(number_or(ch[i], w, "offset_rad", 0.0));
    std::vector<ReferenceSignal::Tone> tones;
    if (ch[i].contains("tones")) {
      const json& ts = ch[i].at("tones");
      if (!ts.is_array()) throw ConfigError(w + ".tones: expected an array");
      for (const auto& t : ts) {
        allow_keys(t, w + ".tones[]", {"amplitude_rad", "amplitude_deg", "frequency_rad_s",
                                       "phase_rad"});
        ReferenceSignal::Tone tone;
        if (t.contains("amplitude_rad") == t.contains("amplitude_deg")) {
          throw ConfigError(w + ".tones[]: give exactly one of amplitude_rad, amplitude_deg");
        }
        tone.amplitude = t.contains("amplitude_rad")
                             ? number(t.at("amplitude_rad"), w + ".amplitude_rad")
                             : number(t.at("amplitude_deg"), w + ".amplitude_deg") *
                                   std::numbers::pi / 180.0;
        tone.frequency = number(require(t, w + ".tones[]", "frequency_rad_s"),
                                w + ".frequency_rad_s");
        tone.phase = number_or(t, w, "phase_rad", 0.0);
        tones.push_back(tone);
      }
    }
    ref.tones.push_back(tones);
  }
  return ref;
}

}  // namespace

ScenarioFile parse_scenario(const std::string& doc_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(doc_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  allow_keys(doc, "scenario",
             {"name", "plant", "selector", "interactor", "filters", "gains", "reference",
              "initial_state", "theta_init", "theta_perturbation", "seed", "psi0_factor",
              "t_end_s", "dt_s", "decimation", "divergence_threshold", "output"});
  ScenarioFile out;
  Scenario& sc = out.scenario;
  sc.name = doc.contains("name") ? text(doc.at("name"), "name") : "scenario";
  sc.plant = parse_plant_section(require(doc, "scenario", "plant"), base_dir);
  const int n = sc.plant.n();
  const int m = sc.plant.m();
  sc.sel = parse_selector(require(doc, "scenario", "selector"), n);
  sc.xi = parse_interactor(require(doc, "scenario", "interactor"), sc.plant);

  double lambda_pole = 3.0, f_pole = 5.0;
  if (doc.contains("filters")) {
    const json& f = doc.at("filters");
    allow_keys(f, "filters", {"lambda_pole", "f_pole"});
    lambda_pole = number_or(f, "filters", "lambda_pole", lambda_pole);
    f_pole = number_or(f, "filters", "f_pole", f_pole);
  }
  if (!(lambda_pole > 0.0) || !(f_pole > 0.0)) {
    throw ConfigError("filters: pole locations must be > 0 (roots at -pole)");
  }
  sc.fspec = default_filter_spec(n, sc.sel.n0(), sc.xi.d_m, lambda_pole, f_pole);

  std::vector<double> gamma(static_cast<size_t>(m), 1.0);
  double g_psi = 5.0, g_theta = 5.0;
  if (doc.contains("gains")) {
    const json& g = doc.at("gains");
    allow_keys(g, "gains", {"gamma", "Gamma", "Gamma_theta"});
    if (g.contains("gamma")) gamma = per_channel(g.at("gamma"), "gains.gamma", m);
    g_psi = number_or(g, "gains", "Gamma", g_psi);
    g_theta = number_or(g, "gains", "Gamma_theta", g_theta);
  }
  const HighFrequencyGain hfg = high_freq_gain(transfer_matrix(sc.plant), sc.xi);
  const LDSDecomposition lds = lds_decompose(hfg, gamma);
  sc.gains = AdaptationGains::uniform(m, g_psi, g_theta, lds.D_s);

  sc.reference = parse_reference(require(doc, "scenario", "reference"), m);
  sc.x0 = Eigen::VectorXd::Zero(n);
  if (doc.contains("initial_state")) {
    const auto x0 = numbers(doc.at("initial_state"), "initial_state");
    if (static_cast<int>(x0.size()) != n) throw ConfigError("initial_state: need n entries");
    for (int i = 0; i < n; ++i) sc.x0(i) = x0[static_cast<size_t>(i)];
  }
  if (doc.contains("theta_init")) {
    const std::string t = text(doc.at("theta_init"), "theta_init");
    if (t == "zero") {
      sc.theta_init = ThetaInit::kZero;
    } else if (t == "truth") {
      sc.theta_init = ThetaInit::kTruth;
    } else if (t == "truth_perturbed") {
      sc.theta_init = ThetaInit::kTruthPerturbed;
    } else {
      throw ConfigError("theta_init: expected zero, truth or truth_perturbed");
    }
  }
  sc.theta_perturbation = number_or(doc, "scenario", "theta_perturbation", sc.theta_perturbation);
  if (doc.contains("seed")) sc.seed = static_cast<std::uint64_t>(integer(doc.at("seed"), "seed"));
  sc.psi0_factor = number_or(doc, "scenario", "psi0_factor", sc.psi0_factor);
  sc.t_end = number_or(doc, "scenario", "t_end_s", sc.t_end);
  sc.dt = number_or(doc, "scenario", "dt_s", sc.dt);
  if (doc.contains("decimation")) {
    sc.decimation = static_cast<int>(integer(doc.at("decimation"), "decimation"));
  }
  sc.divergence_threshold =
      number_or(doc, "scenario", "divergence_threshold", sc.divergence_threshold);
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    allow_keys(o, "output", {"dir", "params"});
    if (o.contains("dir")) out.output_dir = text(o.at("dir"), "output.dir");
    if (o.contains("params")) out.params_path = text(o.at("params"), "output.params");
  }
  sc.validate();
  return out;
}

ScenarioFile read_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_scenario(ss.str(), dir.empty() ? "." : dir);
}

ScenarioFile preset_scenario(int index) {
  ScenarioFile f;
  f.scenario = case_preset(index);
  return f;
}

}  // namespace psmrac::cli
