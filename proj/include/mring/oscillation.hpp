#pragma once

// Time-domain experiments: field-induced transfer of a boundary mode between
// the two domain walls, mismatch metrics, revival timing, and gate sequences.

#include <string>
#include <string_view>
#include <vector>

#include "mring/spectral_numeric.hpp"
#include "mring/walker.hpp"

namespace mring {

WalkerState evolve(const WalkerState& state, long steps, const CoinField& field);

enum class MismatchMode { Raw, PhaseAligned };

struct Mismatch {
  double total;
  std::vector<double> per_site;
};

/// raw: sum_n |a(n) - b(n)|^2 over both components.
/// phase_aligned: same after the global phase of `a` minimizing it (= 2 - 2|<a|b>|).
Mismatch mismatch(const WalkerState& a, const WalkerState& b, MismatchMode mode);

/// Probability carried near the domain wall at n = 0 and near the wall at n = n1.
struct BoundaryWeights {
  double origin;
  double interior;
};
BoundaryWeights boundary_weights(const WalkerState& state, const RingConfig& config);

/// round(T / 2) for the two-level period of a symmetric ring.
long half_period_steps(const RingConfig& config);

struct TransferReport {
  int M;
  double theta;
  double alpha;
  double period_T;
  long steps_applied;
  double mismatch_raw;
  double mismatch_aligned;
  std::vector<double> per_site_mismatch;  // phase-aligned profile
  cplx c_plus;
  cplx c_minus;
  double residual_R2;
};

/// Starts from the n = 0 Majorana of the field-free ring, evolves round(T/2)
/// steps with the field on, and compares with the n = M Majorana.
TransferReport half_period_transfer(const RingConfig& config);

struct PeriodMeasurement {
  double period;
  std::vector<double> fidelity;  // |<psi(0)|psi(t)>|^2, t = 0..horizon
};

/// First revival of the initial-state fidelity: the centre of the first
/// excursion back above 1/2 after it has dropped below 1/2, with crossing
/// times interpolated between steps.  Throws SolverError if the fidelity has
/// not dropped, recovered and dropped again within `horizon` steps.
PeriodMeasurement measure_period(const RingConfig& config, long horizon);

enum class GateOp { C0, C1 };
enum class MajoranaLabel { Zero, One };

/// "0" -> C0, "1" -> C1, applied left to right.
std::vector<GateOp> parse_gates(std::string_view text);
std::string format_gates(const std::vector<GateOp>& gates);
std::string label_name(MajoranaLabel label);

struct SequenceResult {
  std::vector<GateOp> sequence;
  WalkerState final_state;
  MajoranaLabel start_label;
  MajoranaLabel target_label;
  long total_steps;
  long steps_per_c1;
  double total_mismatch;  // phase-aligned
  double mismatch_raw;
  double extra_phase;  // arg <target|final>
};

SequenceResult run_gate_sequence(const std::vector<GateOp>& sequence, const RingConfig& config,
                                 MajoranaLabel start);

}  // namespace mring
