// mring: command-line front end for the two-domain quantum-walk ring.
//
// Exit codes: 0 success, 2 configuration error, 3 out-of-regime input,
// 4 solver failure, 1 anything else (I/O).

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mring/error.hpp"
#include "mring/report_io.hpp"

namespace {

using mring::Json;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void emit(const std::string& out_path, const mring::RunManifest& manifest, const Json& body) {
  Json doc;
  doc["manifest"] = mring::to_json(manifest);
  for (const auto& [key, value] : body.items()) doc[key] = value;
  const std::string text = mring::dump_json(doc);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    mring::write_text_file(out_path, text);
  }
}

std::vector<std::string> outputs_of(std::initializer_list<std::string> paths) {
  std::vector<std::string> out;
  for (const auto& p : paths) {
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum walk on a ring with two topological boundaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  auto* spectrum = app.add_subcommand("spectrum", "Quasi-energies (numeric) or bound-state solutions (analytic)");
  spectrum->add_option("--config", config_path, "JSON config")->required();
  bool numeric = false;
  bool analytic = false;
  auto* numeric_flag = spectrum->add_flag("--numeric", numeric, "Dense diagonalization (default)");
  spectrum->add_flag("--analytic", analytic, "Boundary-matrix root finding")->excludes(numeric_flag);
  spectrum->add_option("--out", out_path, "Output JSON (stdout if omitted)");

  auto* profile = app.add_subcommand("profile", "Probability profile of the doublet at E = 0 or pi");
  profile->add_option("--config", config_path, "JSON config")->required();
  std::string energy = "0";
  profile->add_option("--energy", energy, "0 or pi")->check(CLI::IsMember({"0", "pi"}));
  profile->add_option("--out", out_path, "Output CSV")->required();

  auto* transfer = app.add_subcommand("transfer", "Half-period Majorana transfer");
  transfer->add_option("--config", config_path, "JSON config")->required();
  transfer->add_option("--out", out_path, "Output JSON report")->required();
  std::string per_site_path;
  transfer->add_option("--per-site", per_site_path, "Per-site mismatch CSV");

  auto* table1 = app.add_subcommand("table1", "All transfer rows and the ten-gate sequence");
  double theta_over_pi = 0.25;
  table1->add_option("--theta-over-pi", theta_over_pi, "Coin angle in units of pi");
  table1->add_option("--out", out_path, "Output JSON")->required();

  auto* period = app.add_subcommand("period", "Measure the oscillation period from fidelity revivals");
  period->add_option("--config", config_path, "JSON config")->required();
  long horizon = 2000;
  period->add_option("--horizon", horizon, "Maximum number of steps");
  period->add_option("--out", out_path, "Output JSON (stdout if omitted)");

  auto* sequence = app.add_subcommand("sequence", "Apply a C0/C1 gate string");
  sequence->add_option("--config", config_path, "JSON config")->required();
  std::string gates;
  sequence->add_option("--gates", gates, "Gate string, 0 = C0, 1 = C1, applied left to right")->required();
  std::string start = "0";
  sequence->add_option("--start", start, "Initial Majorana label")->check(CLI::IsMember({"0", "1"}));
  sequence->add_option("--out", out_path, "Output JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Timer timer;
  mring::RunManifest manifest;
  try {
    if (*spectrum) {
      const auto cfg = mring::load_config(config_path);
      manifest.command = "spectrum";
      manifest.parameters = mring::config_to_json(cfg);
      manifest.parameters["method"] = analytic ? "analytic" : "numeric";
      Json body;
      if (analytic) {
        body["solutions"] = mring::to_json(mring::solve_bound_energies(cfg.ring()));
      } else {
        body["spectrum"] = mring::to_json(mring::diagonalize_ring(cfg.ring()));
      }
      manifest.outputs = outputs_of({out_path});
      manifest.duration_seconds = timer.seconds();
      emit(out_path, manifest, body);
    } else if (*profile) {
      const auto cfg = mring::load_config(config_path);
      const mring::RingConfig ring = cfg.ring();
      const auto spec = mring::diagonalize_ring(ring);
      const double target = energy == "pi" ? mring::kPi : 0.0;
      std::vector<double> a;
      std::vector<double> b;
      if (ring.alpha() == 0.0 && ring.symmetric()) {
        const auto pair = mring::extract_majorana_pair(
            spec, energy == "pi" ? mring::MajoranaTarget::Pi : mring::MajoranaTarget::Zero, ring);
        a = pair.at_origin.probabilities();
        b = pair.at_interior.probabilities();
      } else {
        const auto idx = spec.nearest(target, 2);
        a = spec.eigenvectors[idx[0]].probabilities();
        b = spec.eigenvectors[idx[1]].probabilities();
      }
      mring::write_text_file(out_path, mring::profile_csv(a, b));
    } else if (*transfer) {
      const auto cfg = mring::load_config(config_path);
      const auto report = mring::half_period_transfer(cfg.ring());
      manifest.command = "transfer";
      manifest.parameters = mring::config_to_json(cfg);
      manifest.outputs = outputs_of({out_path, per_site_path});
      if (!per_site_path.empty()) {
        mring::write_text_file(per_site_path, mring::mismatch_csv(report.per_site_mismatch));
      }
      manifest.duration_seconds = timer.seconds();
      emit(out_path, manifest, mring::to_json(report));
    } else if (*table1) {
      if (!(theta_over_pi > 0.0 && theta_over_pi < 0.5)) {
        throw mring::ConfigError("--theta-over-pi must lie in (0, 0.5)");
      }
      const Json body = mring::table1_body(theta_over_pi);
      manifest.command = "table1";
      manifest.parameters = Json{{"theta_over_pi", theta_over_pi}};
      manifest.outputs = outputs_of({out_path});
      manifest.duration_seconds = timer.seconds();
      emit(out_path, manifest, body);
    } else if (*period) {
      const auto cfg = mring::load_config(config_path);
      const mring::RingConfig ring = cfg.ring();
      const auto measured = mring::measure_period(ring, horizon);
      manifest.command = "period";
      manifest.parameters = mring::config_to_json(cfg);
      manifest.parameters["horizon"] = horizon;
      manifest.outputs = outputs_of({out_path});
      Json body{{"measured_period", measured.period},
                {"predicted_period_T", mring::oscillation_period(ring.half(), ring.theta(), ring.alpha())}};
      manifest.duration_seconds = timer.seconds();
      emit(out_path, manifest, body);
    } else if (*sequence) {
      const auto cfg = mring::load_config(config_path);
      const auto result = mring::run_gate_sequence(
          mring::parse_gates(gates), cfg.ring(), start == "1" ? mring::MajoranaLabel::One : mring::MajoranaLabel::Zero);
      manifest.command = "sequence";
      manifest.parameters = mring::config_to_json(cfg);
      manifest.parameters["gates"] = gates;
      manifest.parameters["start"] = start;
      manifest.outputs = outputs_of({out_path});
      manifest.duration_seconds = timer.seconds();
      emit(out_path, manifest, mring::to_json(result));
    }
  } catch (const mring::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const mring::RegimeError& e) {
    std::cerr << "out of regime: " << e.what() << '\n';
    return 3;
  } catch (const mring::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
