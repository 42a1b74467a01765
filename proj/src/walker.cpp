#include "mring/walker.hpp"

#include <cmath>
#include <string>

#include "mring/error.hpp"

namespace mring {

double wrap_angle(double angle) {
  double w = std::remainder(angle, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

double circular_distance(double a, double b) { return std::abs(wrap_angle(a - b)); }

RingConfig::RingConfig(int n1, int n2, double theta, double alpha)
    : n1_(n1), n2_(n2), theta_(theta), alpha_(alpha) {
  if (n1 < 1) throw ConfigError("n1 must be >= 1, got " + std::to_string(n1));
  if (n2 < 1) throw ConfigError("n2 must be >= 1, got " + std::to_string(n2));
  if (!(theta > 0.0 && theta < kPi / 2)) {
    throw ConfigError("theta must lie strictly inside (0, pi/2), got " + std::to_string(theta));
  }
  if (!std::isfinite(alpha)) throw ConfigError("alpha must be finite");
}

int RingConfig::half() const {
  if (!symmetric()) {
    throw ConfigError("ring is not symmetric (n1=" + std::to_string(n1_) +
                      ", n2=" + std::to_string(n2_) + ")");
  }
  return n1_;
}

CoinField CoinField::uniform(std::size_t sites, double theta, double alpha) {
  return CoinField{std::vector<double>(sites, theta), alpha};
}

WalkerState::WalkerState(Eigen::VectorXcd amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0 || amps_.size() % 2 != 0) {
    throw ConfigError("walker state needs an even, nonzero number of amplitudes");
  }
  const double nrm = amps_.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw ConfigError("walker state has zero norm");
  amps_ /= nrm;
}

WalkerState WalkerState::localized(std::size_t sites, std::size_t site, int component) {
  if (site >= sites || component < 0 || component > 1) {
    throw ConfigError("localized state index out of range");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * sites));
  v[static_cast<Eigen::Index>(2 * site + component)] = 1.0;
  return WalkerState(std::move(v));
}

std::vector<double> WalkerState::probabilities() const {
  std::vector<double> p(sites());
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = site_probability(n);
  return p;
}

WalkerState WalkerState::with_canonical_phase() const {
  const auto mags = amps_.cwiseAbs();
  const double peak = mags.maxCoeff();
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < mags.size(); ++i) {
    if (mags[i] >= peak * (1.0 - 1e-12)) {
      pick = i;
      break;
    }
  }
  const cplx phase = std::conj(amps_[pick]) / std::abs(amps_[pick]);
  Eigen::VectorXcd rotated = amps_ * phase;
  rotated[pick] = std::abs(amps_[pick]);
  return WalkerState(std::move(rotated), Unchecked{});
}

CoinMatrix coin_matrix(double theta, double alpha) {
  const cplx em = std::polar(1.0, -alpha);
  const cplx ep = std::polar(1.0, alpha);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  CoinMatrix m;
  m << c * em, s * em,
      -s * ep, c * ep;
  return m;
}

CoinField ring_coin_field(const RingConfig& config) {
  CoinField field;
  field.alpha = config.alpha();
  field.theta.resize(static_cast<std::size_t>(config.size()));
  for (int n = 0; n < config.size(); ++n) {
    field.theta[static_cast<std::size_t>(n)] = n < config.n1() ? config.theta() : -config.theta();
  }
  return field;
}

WalkerState apply_step(const WalkerState& state, const CoinField& field) {
  const std::size_t n_sites = state.sites();
  if (field.size() != n_sites) {
    throw DimensionError("coin field has " + std::to_string(field.size()) +
                         " sites, state has " + std::to_string(n_sites));
  }
  const auto& in = state.amplitudes();
  Eigen::VectorXcd out(in.size());
  for (std::size_t n = 0; n < n_sites; ++n) {
    const CoinMatrix c = coin_matrix(field.theta[n], field.alpha);
    const cplx l = in[2 * n];
    const cplx r = in[2 * n + 1];
    const std::size_t to_left = (n + n_sites - 1) % n_sites;
    const std::size_t to_right = (n + 1) % n_sites;
    out[2 * to_left] = c(0, 0) * l + c(0, 1) * r;
    out[2 * to_right + 1] = c(1, 0) * l + c(1, 1) * r;
  }
  return WalkerState(std::move(out), WalkerState::Unchecked{});
}

Eigen::MatrixXcd build_step_unitary(const CoinField& field) {
  const auto n_sites = static_cast<Eigen::Index>(field.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2 * n_sites, 2 * n_sites);
  for (Eigen::Index n = 0; n < n_sites; ++n) {
    const CoinMatrix c = coin_matrix(field.theta[static_cast<std::size_t>(n)], field.alpha);
    const Eigen::Index to_left = (n + n_sites - 1) % n_sites;
    const Eigen::Index to_right = (n + 1) % n_sites;
    for (Eigen::Index k = 0; k < 2; ++k) {
      u(2 * to_left, 2 * n + k) += c(0, k);
      u(2 * to_right + 1, 2 * n + k) += c(1, k);
    }
  }
  return u;
}

cplx overlap(const WalkerState& a, const WalkerState& b) {
  if (a.sites() != b.sites()) {
    throw DimensionError("overlap of states with " + std::to_string(a.sites()) + " and " +
                         std::to_string(b.sites()) + " sites");
  }
  return a.amplitudes().dot(b.amplitudes());
}

}  // namespace mring
