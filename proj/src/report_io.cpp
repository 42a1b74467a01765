#include "mring/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include <fmt/core.h>

#include "mring/error.hpp"

namespace mring {
namespace {

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  std::string s = fmt::format("{:.17g}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void dump_into(std::string& out, const Json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, item, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump_into(out, item, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
  }
}

Json complex_json(cplx c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

const Json& require(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(fmt::format("config: missing key '{}'", key));
  return doc.at(key);
}

int integer_field(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number_integer()) throw ConfigError(fmt::format("config: '{}' must be an integer", key));
  const auto value = v.get<long long>();
  if (value < 1 || value > 100000) {
    throw ConfigError(fmt::format("config: '{}' = {} out of range, expected >= 1", key, value));
  }
  return static_cast<int>(value);
}

double number_field(const Json& doc, const char* key) {
  const Json& v = require(doc, key);
  if (!v.is_number()) throw ConfigError(fmt::format("config: '{}' must be a number", key));
  const double value = v.get<double>();
  if (!std::isfinite(value)) throw ConfigError(fmt::format("config: '{}' must be finite", key));
  return value;
}

}  // namespace

std::string mode_name(MismatchMode mode) { return mode == MismatchMode::Raw ? "raw" : "phase_aligned"; }

MismatchMode parse_mode(std::string_view text) {
  if (text == "raw") return MismatchMode::Raw;
  if (text == "phase_aligned") return MismatchMode::PhaseAligned;
  throw ConfigError(fmt::format("config: 'mode' must be \"raw\" or \"phase_aligned\", got \"{}\"", text));
}

ExperimentConfig parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(fmt::format("config: not valid JSON ({})", e.what()));
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    static const std::vector<std::string> known{"n1", "n2", "theta_over_pi", "alpha_over_pi", "steps", "mode"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(fmt::format("config: unknown key '{}'", key));
    }
  }

  ExperimentConfig cfg;
  cfg.n1 = integer_field(doc, "n1");
  cfg.n2 = integer_field(doc, "n2");
  cfg.theta_over_pi = number_field(doc, "theta_over_pi");
  if (!(cfg.theta_over_pi > 0.0 && cfg.theta_over_pi < 0.5)) {
    throw ConfigError(fmt::format("config: 'theta_over_pi' = {} out of range (0, 0.5)", cfg.theta_over_pi));
  }
  cfg.alpha_over_pi = number_field(doc, "alpha_over_pi");
  if (doc.contains("steps")) {
    const Json& v = doc.at("steps");
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw ConfigError("config: 'steps' must be a non-negative integer");
    }
    cfg.steps = v.get<long>();
  }
  if (doc.contains("mode")) {
    const Json& v = doc.at("mode");
    if (!v.is_string()) throw ConfigError("config: 'mode' must be a string");
    cfg.mode = parse_mode(v.get<std::string>());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("config: cannot read '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

Json config_to_json(const ExperimentConfig& config) {
  Json j{{"n1", config.n1},
         {"n2", config.n2},
         {"theta_over_pi", config.theta_over_pi},
         {"alpha_over_pi", config.alpha_over_pi}};
  if (config.steps) j["steps"] = *config.steps;
  if (config.mode) j["mode"] = mode_name(*config.mode);
  return j;
}

Json to_json(const RunManifest& manifest) {
  return Json{{"command", manifest.command},
              {"parameters", manifest.parameters},
              {"tool_version", manifest.tool_version},
              {"duration_seconds", manifest.duration_seconds},
              {"outputs", manifest.outputs}};
}

Json to_json(const TransferReport& r) {
  return Json{{"M", r.M},
              {"theta_over_pi", r.theta / kPi},
              {"alpha_over_pi", r.alpha / kPi},
              {"period_T", r.period_T},
              {"steps_applied", r.steps_applied},
              {"mismatch_raw", r.mismatch_raw},
              {"mismatch_aligned", r.mismatch_aligned},
              {"per_site_mismatch", r.per_site_mismatch},
              {"c_plus", complex_json(r.c_plus)},
              {"c_minus", complex_json(r.c_minus)},
              {"residual_R2", r.residual_R2}};
}

Json to_json(const SequenceResult& r) {
  return Json{{"sequence", format_gates(r.sequence)},
              {"start_label", label_name(r.start_label)},
              {"target_label", label_name(r.target_label)},
              {"total_steps", r.total_steps},
              {"steps_per_c1", r.steps_per_c1},
              {"total_mismatch", r.total_mismatch},
              {"mismatch_raw", r.mismatch_raw},
              {"extra_phase_over_pi", r.extra_phase / kPi},
              {"final_probabilities", r.final_state.probabilities()}};
}

Json to_json(const QuasiEnergySpectrum& spectrum) {
  Json energies = Json::array();
  for (double e : spectrum.quasi_energies) energies.push_back(e / kPi);
  return Json{{"quasi_energies_over_pi", energies}};
}

Json to_json(const std::vector<BoundStateSolution>& solutions) {
  Json arr = Json::array();
  for (const auto& s : solutions) {
    Json u = Json::array();
    for (const cplx& c : s.u) u.push_back(complex_json(c));
    arr.push_back(Json{{"energy_over_pi", s.energy / kPi},
                       {"branch", s.branch == Branch::NearZero ? "near-0" : "near-pi"},
                       {"sign", s.sign},
                       {"mu", complex_json(s.mu)},
                       {"evanescent", s.evanescent()},
                       {"bloch_phase_over_pi", s.bloch_phase / kPi},
                       {"u", u}});
  }
  return arr;
}

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump_into(out, value, indent, 0);
  out += '\n';
  return out;
}

std::string profile_csv(const std::vector<double>& prob_a, const std::vector<double>& prob_b) {
  if (prob_a.size() != prob_b.size()) throw DimensionError("profile columns differ in length");
  std::string out = "site,prob_a,prob_b\n";
  if (prob_a.empty()) return out;
  for (std::size_t n = 0; n <= prob_a.size(); ++n) {
    const std::size_t k = n % prob_a.size();
    out += fmt::format("{},{},{}\n", n, format_double(prob_a[k]), format_double(prob_b[k]));
  }
  return out;
}

std::string mismatch_csv(const std::vector<double>& per_site) {
  std::string out = "site,mismatch\n";
  for (std::size_t n = 0; n < per_site.size(); ++n) out += fmt::format("{},{}\n", n, format_double(per_site[n]));
  return out;
}

void write_text_file(const std::string& path, std::string_view body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path));
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path));
}

const std::vector<Table1Row>& table1_rows() {
  static const std::vector<Table1Row> rows{{4, 0.05}, {4, 0.025}, {5, 0.05},
                                           {5, 0.025}, {6, 0.05}, {6, 0.025}};
  return rows;
}

Json table1_body(double theta_over_pi) {
  std::vector<std::future<TransferReport>> jobs;
  for (const Table1Row& row : table1_rows()) {
    const RingConfig cfg(row.m, row.m, theta_over_pi * kPi, row.alpha_over_pi * kPi);
    jobs.push_back(std::async(std::launch::async, [cfg] { return half_period_transfer(cfg); }));
  }
  auto sequence_job = std::async(std::launch::async, [theta_over_pi] {
    const RingConfig cfg(4, 4, theta_over_pi * kPi, 0.05 * kPi);
    return run_gate_sequence(parse_gates(kTable1Sequence), cfg, MajoranaLabel::Zero);
  });

  Json rows = Json::array();
  for (auto& job : jobs) rows.push_back(to_json(job.get()));
  Json body;
  body["theta_over_pi"] = theta_over_pi;
  body["rows"] = std::move(rows);
  body["sequence"] = to_json(sequence_job.get());
  return body;
}

}  // namespace mring
