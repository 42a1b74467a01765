#pragma once

// Dense diagonalization of the one-step unitary and the quantities built on it:
// localized Majorana pairs and the two-level projection used after a field quench.

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mring/walker.hpp"

namespace mring {

/// Eigen-decomposition of U with eigenvalues e^{-i E_j}, E_j in (-pi, pi].
/// Sorted by |E|, ties broken by distance to pi.
struct QuasiEnergySpectrum {
  std::vector<double> quasi_energies;
  std::vector<WalkerState> eigenvectors;

  std::size_t size() const { return quasi_energies.size(); }
  /// Indices of the `count` quasi-energies closest to `target` on the circle, nearest first.
  std::vector<std::size_t> nearest(double target, std::size_t count) const;
};

QuasiEnergySpectrum diagonalize_step(const Eigen::MatrixXcd& unitary);

/// Convenience: diagonalize the step of `config`'s coin field.
QuasiEnergySpectrum diagonalize_ring(const RingConfig& config);

enum class MajoranaTarget { Zero, Pi };

struct MajoranaPair {
  WalkerState at_origin;    // localized at the boundary n = 0
  WalkerState at_interior;  // localized at the boundary n = n1
};

/// Resolves the degenerate doublet at quasi-energy 0 or pi into the state with
/// maximal probability on site 0 and its orthogonal complement.
MajoranaPair extract_majorana_pair(const QuasiEnergySpectrum& spectrum, MajoranaTarget target,
                                   const RingConfig& config);

struct TwoLevelModel {
  cplx c_plus;
  cplx c_minus;
  double residual_R2;
  double gap;  // E+ - E-
  WalkerState plus;
  WalkerState minus;
};

/// Projects `psi` onto the near-zero doublet E+ > 0 > E- of `spectrum_alpha`.
TwoLevelModel two_level_decompose(const WalkerState& psi, const QuasiEnergySpectrum& spectrum_alpha);

/// || psi - (psi+ + psi-) / sqrt(2) ||^2 after rotating psi+- so that c+- are real and positive.
double residual_Rprime(const WalkerState& psi, const TwoLevelModel& model);

}  // namespace mring
