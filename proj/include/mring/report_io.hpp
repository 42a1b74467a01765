#pragma once

// Configuration parsing and report serialization for the command-line tool.
// Angles are exchanged as multiples of pi; floating point is written with 17
// significant digits so that every value round-trips exactly.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mring/oscillation.hpp"
#include "mring/spectral_analytic.hpp"
#include "mring/spectral_numeric.hpp"

namespace mring {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "1.0.0";

struct ExperimentConfig {
  int n1 = 0;
  int n2 = 0;
  double theta_over_pi = 0.0;
  double alpha_over_pi = 0.0;
  std::optional<long> steps;
  std::optional<MismatchMode> mode;

  RingConfig ring() const { return RingConfig(n1, n2, theta_over_pi * kPi, alpha_over_pi * kPi); }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses a JSON object with n1, n2, theta_over_pi, alpha_over_pi and optional
/// steps, mode ("raw" | "phase_aligned"). Errors name the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
Json config_to_json(const ExperimentConfig& config);

std::string mode_name(MismatchMode mode);
MismatchMode parse_mode(std::string_view text);

struct RunManifest {
  std::string command;
  Json parameters;
  std::string tool_version{kToolVersion};
  double duration_seconds = 0.0;
  std::vector<std::string> outputs;
};

Json to_json(const RunManifest& manifest);
Json to_json(const TransferReport& report);
Json to_json(const SequenceResult& result);
Json to_json(const QuasiEnergySpectrum& spectrum);
Json to_json(const std::vector<BoundStateSolution>& solutions);

/// Serializes with floats as %.17g and keys in insertion order; ends with a newline.
/// A negative indent gives compact output.
std::string dump_json(const Json& value, int indent = 2);

/// `site,prob_a,prob_b`, sites 0..N with the n = 0 row repeated at n = N.
std::string profile_csv(const std::vector<double>& prob_a, const std::vector<double>& prob_b);
/// `site,mismatch`, sites 0..N-1.
std::string mismatch_csv(const std::vector<double>& per_site);

/// Throws IoError if the file cannot be written.
void write_text_file(const std::string& path, std::string_view body);

/// The six half-period transfer rows plus the ten-gate sequence on (M=4, alpha=0.05 pi).
/// Rows are computed concurrently and merged in row order.
Json table1_body(double theta_over_pi);

struct Table1Row {
  int m;
  double alpha_over_pi;
};
const std::vector<Table1Row>& table1_rows();
inline constexpr std::string_view kTable1Sequence = "1011011011";

}  // namespace mring
