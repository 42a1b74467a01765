#include "mring/oscillation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "mring/error.hpp"
#include "mring/spectral_analytic.hpp"

namespace mring {

WalkerState evolve(const WalkerState& state, long steps, const CoinField& field) {
  if (steps < 0) throw ConfigError("step count must be non-negative");
  WalkerState current = state;
  for (long t = 0; t < steps; ++t) current = apply_step(current, field);
  return current;
}

Mismatch mismatch(const WalkerState& a, const WalkerState& b, MismatchMode mode) {
  if (a.sites() != b.sites()) throw DimensionError("mismatch of states with different sizes");
  cplx phase{1.0, 0.0};
  if (mode == MismatchMode::PhaseAligned) {
    const cplx ov = overlap(a, b);
    if (std::abs(ov) > 0.0) phase = ov / std::abs(ov);
  }
  Mismatch m{0.0, std::vector<double>(a.sites())};
  for (std::size_t n = 0; n < a.sites(); ++n) {
    const double d = std::norm(phase * a.left(n) - b.left(n)) + std::norm(phase * a.right(n) - b.right(n));
    m.per_site[n] = d;
    m.total += d;
  }
  return m;
}

BoundaryWeights boundary_weights(const WalkerState& state, const RingConfig& config) {
  if (state.sites() != static_cast<std::size_t>(config.size())) {
    throw DimensionError("state does not belong to this ring");
  }
  const double n = config.size();
  const double wall = config.n1() - 0.5;  // between sites n1-1 and n1
  BoundaryWeights w{0.0, 0.0};
  for (std::size_t site = 0; site < state.sites(); ++site) {
    const double x = static_cast<double>(site);
    // the origin wall sits between sites N-1 and 0
    const double d_origin = std::min(x + 0.5, n - x - 0.5);
    const double d_wall = std::min(std::abs(x - wall), n - std::abs(x - wall));
    const double p = state.site_probability(site);
    if (d_origin < d_wall) {
      w.origin += p;
    } else if (d_wall < d_origin) {
      w.interior += p;
    } else {
      w.origin += 0.5 * p;
      w.interior += 0.5 * p;
    }
  }
  return w;
}

long half_period_steps(const RingConfig& config) {
  const double period = oscillation_period(config.half(), config.theta(), config.alpha());
  return std::lround(0.5 * period);
}

namespace {

MajoranaPair field_free_majoranas(const RingConfig& config) {
  const RingConfig off = config.with_alpha(0.0);
  return extract_majorana_pair(diagonalize_ring(off), MajoranaTarget::Zero, off);
}

}  // namespace

TransferReport half_period_transfer(const RingConfig& config) {
  if (!config.symmetric()) throw RegimeError("half-period transfer needs a symmetric ring");
  const int m = config.half();
  const double period = oscillation_period(m, config.theta(), config.alpha());
  const long steps = std::lround(0.5 * period);

  const MajoranaPair pair = field_free_majoranas(config);
  const WalkerState evolved = evolve(pair.at_origin, steps, ring_coin_field(config));
  const Mismatch raw = mismatch(evolved, pair.at_interior, MismatchMode::Raw);
  const Mismatch aligned = mismatch(evolved, pair.at_interior, MismatchMode::PhaseAligned);
  const TwoLevelModel model = two_level_decompose(pair.at_origin, diagonalize_ring(config));

  return TransferReport{m,
                        config.theta(),
                        config.alpha(),
                        period,
                        steps,
                        raw.total,
                        aligned.total,
                        aligned.per_site,
                        model.c_plus,
                        model.c_minus,
                        model.residual_R2};
}

PeriodMeasurement measure_period(const RingConfig& config, long horizon) {
  if (horizon < 3) throw ConfigError("horizon must be at least 3 steps");
  const MajoranaPair pair = field_free_majoranas(config);
  const CoinField field = ring_coin_field(config);

  PeriodMeasurement out;
  out.fidelity.reserve(static_cast<std::size_t>(horizon) + 1);
  WalkerState psi = pair.at_origin;
  for (long t = 0; t <= horizon; ++t) {
    out.fidelity.push_back(std::norm(overlap(pair.at_origin, psi)));
    psi = apply_step(psi, field);
  }

  // Fast ripples from the bulk bands ride on the slow two-level oscillation,
  // so crossings of 1/2 only count once the fidelity has moved clearly past
  // it (below 0.4 or above 0.6).  The crossing time is the last sample pair
  // straddling 1/2 before that point, linearly interpolated.  The revival is
  // the centre of the first excursion back above 1/2.
  const auto& f = out.fidelity;
  std::vector<double> crossings;
  bool high = true;
  for (std::size_t t = 1; t < f.size() && crossings.size() < 3; ++t) {
    const bool flip = high ? f[t] < 0.4 : f[t] > 0.6;
    if (!flip) continue;
    std::size_t j = t;
    while (j > 1 && (f[j - 1] < 0.5) == high) --j;
    const double a = f[j - 1];
    const double b = f[j];
    crossings.push_back(static_cast<double>(j - 1) + (a - 0.5) / (a - b));
    high = !high;
  }
  if (crossings.size() < 3) {
    throw SolverError(fmt::format("no fidelity revival within {} steps", horizon));
  }
  const double refined = 0.5 * (crossings[1] + crossings[2]);
  out.period = refined;
  return out;
}

std::vector<GateOp> parse_gates(std::string_view text) {
  std::vector<GateOp> gates;
  gates.reserve(text.size());
  for (char c : text) {
    if (c == '0') {
      gates.push_back(GateOp::C0);
    } else if (c == '1') {
      gates.push_back(GateOp::C1);
    } else {
      throw ConfigError(fmt::format("gates: unexpected character '{}', expected 0 or 1", c));
    }
  }
  return gates;
}

std::string format_gates(const std::vector<GateOp>& gates) {
  std::string s;
  for (GateOp g : gates) s += g == GateOp::C0 ? '0' : '1';
  return s;
}

std::string label_name(MajoranaLabel label) { return label == MajoranaLabel::Zero ? "|0>" : "|1>"; }

SequenceResult run_gate_sequence(const std::vector<GateOp>& sequence, const RingConfig& config,
                                 MajoranaLabel start) {
  const long c1_steps = half_period_steps(config);
  const MajoranaPair pair = field_free_majoranas(config);
  const CoinField off = ring_coin_field(config.with_alpha(0.0));
  const CoinField on = ring_coin_field(config);

  WalkerState psi = start == MajoranaLabel::Zero ? pair.at_origin : pair.at_interior;
  long total = 0;
  long swaps = 0;
  for (GateOp g : sequence) {
    if (g == GateOp::C0) {
      psi = apply_step(psi, off);
      total += 1;
    } else {
      psi = evolve(psi, c1_steps, on);
      total += c1_steps;
      ++swaps;
    }
  }
  MajoranaLabel target = start;
  if (swaps % 2 == 1) target = start == MajoranaLabel::Zero ? MajoranaLabel::One : MajoranaLabel::Zero;
  const WalkerState& expected = target == MajoranaLabel::Zero ? pair.at_origin : pair.at_interior;

  const double aligned = mismatch(psi, expected, MismatchMode::PhaseAligned).total;
  const double raw = mismatch(psi, expected, MismatchMode::Raw).total;
  const double phase = std::arg(overlap(expected, psi));
  return SequenceResult{sequence, psi, start, target, total, c1_steps, aligned, raw, phase};
}

}  // namespace mring
