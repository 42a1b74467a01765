#pragma once

// Closed-form and root-finding solver for the boundary-mode spectrum of the
// two-domain ring.
//
// The field alpha is handled by a gauge transformation: the ring with field
// alpha is equivalent to the field-free problem on the unrolled line with a
// Bloch phase phi satisfying N*alpha + phi = 2*m*pi. All boundary-matrix and
// root-finding routines therefore use alpha = 0 coins and take phi explicitly.

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mring/walker.hpp"

namespace mring {

/// Coin-space eigenvector of a plane wave; (a, b) for +theta, (c, d) for -theta.
struct PlaneWaveVector {
  cplx a;
  cplx b;
};

enum class Branch { NearZero, NearPi };

/// One solution of the boundary problem.
///
/// `mu` is e^{ik} of the decaying plane wave. For a genuine bound state it is
/// real with 0 < |mu| < 1 (negative on the near-pi branch). When the mode
/// closest to 0 or pi has left the evanescent window (tiny rings) the root is
/// continued onto |mu| = 1 and `evanescent()` reports false.
struct BoundStateSolution {
  double energy = 0.0;
  cplx mu{0.0, 0.0};
  std::array<cplx, 4> u{};
  double bloch_phase = 0.0;
  Branch branch = Branch::NearZero;
  int sign = +1;  // +1 for 0+eps / pi-eps, -1 for 0-eps / pi+eps

  bool evanescent() const { return std::abs(mu.imag()) == 0.0 && std::abs(mu) < 1.0; }
};

/// E = arccos(cos(theta) cos(q)) in [0, pi]. Throws RegimeError if the argument
/// leaves [-1, 1].
double quasi_energy(double q, double theta);

/// Decay factor mu with |mu| < 1 solving cos E = cos(theta) (mu + 1/mu) / 2.
/// Positive near E = 0, negative near E = pi. Throws RegimeError in the propagating regime.
double bound_mu(double energy, double theta);

/// Coin-space eigenvector of the plane wave e^{iqn} with quasi-energy E, q real.
PlaneWaveVector plane_wave_eigenvector(double energy, double q, double theta);

/// Coin-space vector of the plane wave ~ mu^n (direction=+1) or mu^{-n} (direction=-1) at alpha = 0.
PlaneWaveVector decaying_wave_eigenvector(double energy, cplx mu, double theta, int direction);

/// Boundary-condition matrix acting on (u1, u2, u3, u4). config.alpha() is ignored;
/// the field enters through phi.
Eigen::Matrix4cd boundary_matrix(double energy, cplx mu, const RingConfig& config, double phi);

/// Bloch phase phi = 2*m*pi - N*alpha that absorbs the ring's field.
double flux_bloch_phase(const RingConfig& config, int m = 0);

/// |sin E| demanded by the boundary conditions for a general ring at Bloch phase phi.
double energy_sine_general(double mu, double theta, int n1, int n2, double phi);
/// Symmetric-ring reduction of energy_sine_general (signed).
double energy_sine_symmetric(double mu, double theta, int m_half, double phi);
/// Symmetric ring with the flux-quantized Bloch phase phi = 2*m*pi - 2*M*alpha (signed).
double energy_sine_flux(double mu, double theta, int m_half, double alpha);

/// Four solutions: 0 +- eps0 and pi -+ eps1, energies in (-pi, pi].
/// Each carries a unit-norm null vector u of the boundary matrix. When two
/// solutions share an energy (symmetric ring, phi = 0) their null vectors are
/// the localized pair: the first maximizes |u1|^2 + |u4|^2 (mode at n = 0),
/// the second is its orthogonal complement (mode at n = n1).
std::vector<BoundStateSolution> solve_bound_energies(const RingConfig& config, double phi);
/// Same, with phi = flux_bloch_phase(config).
std::vector<BoundStateSolution> solve_bound_energies(const RingConfig& config);

struct ApproxEnergies {
  double eps0;
  double eps1;
  /// {eps0, -eps0, pi - eps1, -(pi - eps1)} folded into (-pi, pi].
  std::array<double, 4> energies() const;
};

/// Leading-order energies for a large field-free ring.
/// Requires mu^min(n1, n2) < 0.2 unless `allow_out_of_regime`.
ApproxEnergies approx_bound_energies(const RingConfig& config, bool allow_out_of_regime = false);

/// Leading-order decay factor cos(theta) / (1 + sin(theta)).
double leading_mu(double theta);

/// Weak-field splitting eps0 = eps1 = 2 mu^M sin(M alpha) sin(theta) of a symmetric ring.
/// Requires |alpha| <= 0.1 pi unless `allow_out_of_regime`.
double approx_bound_energies_flux(int m_half, double theta, double alpha,
                                  bool allow_out_of_regime = false);

/// Two-level oscillation period pi / eps0.
double oscillation_period(int m_half, double theta, double alpha, bool allow_out_of_regime = false);

/// Assembles psi(n) from the solution's amplitudes, multiplies by the gauge
/// factor e^{i alpha n} of `config`, normalizes and fixes the global phase.
/// If `solution.u` is all zero the null vector is computed here and a
/// two-dimensional null space raises DegenerateSubspaceError.
WalkerState bound_state_wavefunction(const BoundStateSolution& solution, const RingConfig& config);

}  // namespace mring
