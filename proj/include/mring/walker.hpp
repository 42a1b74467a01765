#pragma once

// Discrete-time quantum walk on a ring with two coin domains.
//
// Amplitudes are stored site-major: index 2n holds the L component of site n,
// index 2n+1 the R component. One step applies the site-local coin and then
// shifts L one site to the left and R one site to the right.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace mring {

using cplx = std::complex<double>;
using CoinMatrix = Eigen::Matrix2cd;

inline constexpr double kPi = 3.14159265358979323846;

/// Maps an angle onto (-pi, pi].
double wrap_angle(double angle);
/// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

/// Ring geometry and coin parameters.
///
/// Sites [0, n1) carry coin angle +theta, sites [n1, n1 + n2) carry -theta.
/// The uniform phase alpha enters every coin.
class RingConfig {
 public:
  /// Throws ConfigError unless n1, n2 >= 1 and 0 < theta < pi/2.
  RingConfig(int n1, int n2, double theta, double alpha = 0.0);

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  double theta() const { return theta_; }
  double alpha() const { return alpha_; }

  int size() const { return n1_ + n2_; }
  bool symmetric() const { return n1_ == n2_; }
  /// Half-size of a symmetric ring; throws ConfigError otherwise.
  int half() const;

  RingConfig with_alpha(double alpha) const { return RingConfig(n1_, n2_, theta_, alpha); }

  friend bool operator==(const RingConfig&, const RingConfig&) = default;

 private:
  int n1_;
  int n2_;
  double theta_;
  double alpha_;
};

/// Per-site coin angle together with the shared phase alpha.
struct CoinField {
  std::vector<double> theta;
  double alpha = 0.0;

  std::size_t size() const { return theta.size(); }

  static CoinField uniform(std::size_t sites, double theta, double alpha = 0.0);
};

/// Normalized walker wavefunction; 2N complex amplitudes in (L, R) site-major order.
class WalkerState {
 public:
  /// Normalizes `amplitudes`. Throws ConfigError on odd length or zero norm.
  explicit WalkerState(Eigen::VectorXcd amplitudes);

  /// Unit amplitude on one coin component of one site.
  static WalkerState localized(std::size_t sites, std::size_t site, int component);

  std::size_t sites() const { return static_cast<std::size_t>(amps_.size() / 2); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  cplx left(std::size_t n) const { return amps_[2 * n]; }
  cplx right(std::size_t n) const { return amps_[2 * n + 1]; }
  double site_probability(std::size_t n) const { return std::norm(left(n)) + std::norm(right(n)); }
  std::vector<double> probabilities() const;
  double norm() const { return amps_.norm(); }

  /// Rotates the global phase so the largest-magnitude amplitude is real and positive.
  /// Ties within 1e-12 relative go to the lowest index.
  WalkerState with_canonical_phase() const;

 private:
  struct Unchecked {};
  WalkerState(Eigen::VectorXcd amplitudes, Unchecked) : amps_(std::move(amplitudes)) {}
  friend WalkerState apply_step(const WalkerState&, const CoinField&);

  Eigen::VectorXcd amps_;
};

CoinMatrix coin_matrix(double theta, double alpha);

/// +theta on [0, n1), -theta on [n1, N).
CoinField ring_coin_field(const RingConfig& config);

WalkerState apply_step(const WalkerState& state, const CoinField& field);

/// Dense 2N x 2N matrix of one step in the site-major basis.
Eigen::MatrixXcd build_step_unitary(const CoinField& field);

/// <a|b>, conjugate-linear in `a`.
cplx overlap(const WalkerState& a, const WalkerState& b);

}  // namespace mring
