#include "mring/spectral_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/core.h>

#include "mring/error.hpp"

namespace mring {
namespace {

constexpr int kScanPoints = 4096;
constexpr double kBracketWidth = 1e-13;
constexpr double kDetTolerance = 1e-10;
constexpr double kNullityRelTol = 1e-8;
constexpr double kLargeRingLimit = 0.2;
constexpr double kWeakFieldLimit = 0.1 * kPi;

template <typename T>
T ipow(T base, int exp) {
  if (exp < 0) return T(1) / ipow(base, -exp);
  T result(1);
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

PlaneWaveVector from_phase_factor(cplx z, double theta) {
  const cplx a = std::sin(theta);
  const cplx b = z - std::cos(theta);
  const double nrm = std::sqrt(std::norm(a) + std::norm(b));
  if (!(nrm > 1e-14)) throw RegimeError("plane-wave eigenvector has a degenerate direction");
  return {a / nrm, b / nrm};
}

double branch_energy(Branch branch, double eps) { return branch == Branch::NearZero ? eps : kPi - eps; }

// Unit-modulus continuation of mu outside the evanescent window.
cplx propagating_mu(double energy, double theta) {
  const double x = std::clamp(std::cos(energy) / std::cos(theta), -1.0, 1.0);
  return {x, -std::sqrt(1.0 - x * x)};
}

// Squared boundary condition divided by mu^N; real for real or unit-modulus mu.
double squared_condition(double energy, cplx mu, double theta, int n1, int n2, double phi) {
  const int n = n1 + n2;
  const double s = std::sin(energy);
  const double c = std::cos(theta);
  const cplx g = 4.0 * s * s * (1.0 - ipow(mu, 2 * n1)) * (1.0 - ipow(mu, 2 * n2)) -
                 ipow(1.0 / mu - mu, 2) * c * c *
                     (ipow(mu, 2 * n1) + ipow(mu, 2 * n2) - 2.0 * ipow(mu, n) * std::cos(phi));
  return (g / ipow(mu, n)).real();
}

struct Root {
  double eps;
  bool evanescent;
};

template <typename F>
double bisect(F&& f, double lo, double hi, double flo) {
  while (hi - lo > kBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  // secant polish inside the final bracket
  const double fhi = f(hi);
  if (fhi != flo) {
    const double x = lo - flo * (hi - lo) / (fhi - flo);
    if (x >= lo && x <= hi) return x;
  }
  return 0.5 * (lo + hi);
}

template <typename F>
std::optional<double> first_sign_change(F&& f, double lo, double hi, bool include_lo) {
  double prev_x = lo;
  double prev_f = f(lo);
  if (include_lo && prev_f == 0.0) return lo;
  for (int i = 1; i <= kScanPoints; ++i) {
    const double x = lo + (hi - lo) * i / kScanPoints;
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) != (prev_f < 0.0)) return bisect(f, prev_x, x, prev_f);
    prev_x = x;
    prev_f = fx;
  }
  return std::nullopt;
}

Root find_branch_root(const RingConfig& config, double phi, Branch branch) {
  const double theta = config.theta();
  const int n1 = config.n1();
  const int n2 = config.n2();

  const auto bound_residual = [&](double eps) {
    const double e = branch_energy(branch, eps);
    return std::sin(eps) - energy_sine_general(bound_mu(e, theta), theta, n1, n2, phi);
  };
  const double edge = theta * (1.0 - 1e-12);
  if (energy_sine_general(bound_mu(branch_energy(branch, 0.0), theta), theta, n1, n2, phi) == 0.0) {
    return {0.0, true};
  }
  if (auto eps = first_sign_change(bound_residual, 0.0, edge, true)) return {*eps, true};

  const auto open_residual = [&](double eps) {
    const double e = branch_energy(branch, eps);
    return squared_condition(e, propagating_mu(e, theta), theta, n1, n2, phi);
  };
  const double start = theta + 1e-9;
  if (auto eps = first_sign_change(open_residual, start, 0.5 * kPi, false)) return {*eps, false};

  throw SolverError(fmt::format(
      "no {} root for ring ({}, {}), theta={:.17g}, phi={:.17g}: bracket [0, pi/2], residual at 0 = {:.3e}",
      branch == Branch::NearZero ? "near-0" : "near-pi", n1, n2, theta, phi, bound_residual(0.0)));
}

std::array<cplx, 4> to_array(const Eigen::Vector4cd& v) { return {v[0], v[1], v[2], v[3]}; }

struct NullSpace {
  Eigen::Matrix<cplx, 4, Eigen::Dynamic> basis;
  double residual;
};

NullSpace null_space(const Eigen::Matrix4cd& a) {
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = std::max(sv[0], 1.0);
  const int dim = sv[2] <= kNullityRelTol * scale ? 2 : 1;
  NullSpace ns;
  ns.basis = svd.matrixV().rightCols(dim);
  ns.residual = sv[3];
  return ns;
}

// Splits a two-dimensional null space into the mode carried by (u1, u4) and its complement.
std::pair<Eigen::Vector4cd, Eigen::Vector4cd> localized_null_pair(
    const Eigen::Matrix<cplx, 4, Eigen::Dynamic>& basis) {
  Eigen::Matrix2cd weight = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      weight(i, j) = std::conj(basis(0, i)) * basis(0, j) + std::conj(basis(3, i)) * basis(3, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(weight);
  const Eigen::Vector4cd first = basis * eig.eigenvectors().col(1);
  const Eigen::Vector4cd second = basis * eig.eigenvectors().col(0);
  return {first.normalized(), second.normalized()};
}

}  // namespace

double quasi_energy(double q, double theta) {
  const double arg = std::cos(theta) * std::cos(q);
  if (std::abs(arg) > 1.0) {
    throw RegimeError("cos(theta) cos(q) outside [-1, 1]: evanescent branch, use bound_mu");
  }
  return std::acos(arg);
}

double bound_mu(double energy, double theta) {
  const double x = std::cos(energy) / std::cos(theta);
  if (!(std::abs(x) > 1.0)) {
    throw RegimeError(fmt::format("no real decay factor for E={:.17g}, theta={:.17g}: propagating regime",
                                  energy, theta));
  }
  // root of mu^2 - 2 x mu + 1 = 0 with |mu| < 1, written without cancellation
  const double root = std::sqrt((x - 1.0) * (x + 1.0));
  return 1.0 / (x + std::copysign(root, x));
}

PlaneWaveVector plane_wave_eigenvector(double energy, double q, double theta) {
  return from_phase_factor(std::polar(1.0, -(energy + q)), theta);
}

PlaneWaveVector decaying_wave_eigenvector(double energy, cplx mu, double theta, int direction) {
  const cplx e = std::polar(1.0, -energy);
  return from_phase_factor(direction > 0 ? e / mu : e * mu, theta);
}

Eigen::Matrix4cd boundary_matrix(double energy, cplx mu, const RingConfig& config, double phi) {
  const int n1 = config.n1();
  const int n = config.size();
  const double theta = config.theta();
  const cplx z = std::polar(1.0, -energy);
  const cplx twist = std::polar(1.0, -phi);  // psi(-1) = e^{-i phi} psi(N-1)

  const PlaneWaveVector va = decaying_wave_eigenvector(energy, mu, theta, +1);
  const PlaneWaveVector vb = decaying_wave_eigenvector(energy, mu, theta, -1);
  const PlaneWaveVector wc = decaying_wave_eigenvector(energy, mu, -theta, +1);
  const PlaneWaveVector wd = decaying_wave_eigenvector(energy, mu, -theta, -1);

  // Column j of psi(site) for the basis amplitude u_j.
  const auto column = [&](int j, int site) -> Eigen::Vector2cd {
    switch (j) {
      case 0: return ipow(mu, site) * Eigen::Vector2cd(va.a, va.b);
      case 1: return ipow(mu, n1 - site) * Eigen::Vector2cd(vb.a, vb.b);
      case 2: return ipow(mu, site - n1) * Eigen::Vector2cd(wc.a, wc.b);
      default: return ipow(mu, n - site) * Eigen::Vector2cd(wd.a, wd.b);
    }
  };
  const auto first_domain = [&](int j, int site) -> Eigen::Vector2cd {
    return j < 2 ? column(j, site) : Eigen::Vector2cd::Zero();
  };
  const auto second_domain = [&](int j, int site) -> Eigen::Vector2cd {
    return j >= 2 ? column(j, site) : Eigen::Vector2cd::Zero();
  };

  const CoinMatrix plus = coin_matrix(theta, 0.0);
  const CoinMatrix minus = coin_matrix(-theta, 0.0);
  Eigen::Matrix4cd a;
  for (int j = 0; j < 4; ++j) {
    const Eigen::Vector2cd last_first = first_domain(j, n1 - 1);
    const Eigen::Vector2cd first_second = second_domain(j, n1);
    const Eigen::Vector2cd origin = first_domain(j, 0);
    const Eigen::Vector2cd before_origin = twist * second_domain(j, n - 1);
    a(0, j) = (plus * last_first)(1) - z * first_second(1);
    a(1, j) = (minus * first_second)(0) - z * last_first(0);
    a(2, j) = (minus * before_origin)(1) - z * origin(1);
    a(3, j) = (plus * origin)(0) - z * before_origin(0);
  }
  return a;
}

double flux_bloch_phase(const RingConfig& config, int m) {
  return 2.0 * kPi * m - config.size() * config.alpha();
}

double energy_sine_general(double mu, double theta, int n1, int n2, double phi) {
  const double spread = ipow(mu, 2 * n1) + ipow(mu, 2 * n2) - 2.0 * ipow(mu, n1 + n2) * std::cos(phi);
  const double numer = (1.0 / mu - mu) * std::cos(theta) * std::sqrt(std::max(spread, 0.0));
  const double denom = 2.0 * std::sqrt((1.0 - ipow(mu, 2 * n1)) * (1.0 - ipow(mu, 2 * n2)));
  return std::abs(numer / denom);
}

double energy_sine_symmetric(double mu, double theta, int m_half, double phi) {
  return (1.0 / mu - mu) * std::cos(theta) * std::sin(0.5 * phi) * ipow(mu, m_half) /
         (1.0 - ipow(mu, 2 * m_half));
}

double energy_sine_flux(double mu, double theta, int m_half, double alpha) {
  return (1.0 / mu - mu) * std::cos(theta) * std::sin(m_half * alpha) * ipow(mu, m_half) /
         (1.0 - ipow(mu, 2 * m_half));
}

std::vector<BoundStateSolution> solve_bound_energies(const RingConfig& config, double phi) {
  std::vector<BoundStateSolution> out;
  out.reserve(4);
  for (Branch branch : {Branch::NearZero, Branch::NearPi}) {
    const Root root = find_branch_root(config, phi, branch);
    const double base = branch_energy(branch, root.eps);
    const cplx mu = root.evanescent ? cplx(bound_mu(base, config.theta()), 0.0)
                                    : propagating_mu(base, config.theta());

    std::array<BoundStateSolution, 2> pair;
    for (int k = 0; k < 2; ++k) {
      auto& s = pair[static_cast<std::size_t>(k)];
      s.sign = k == 0 ? +1 : -1;
      s.energy = wrap_angle(s.sign * base);
      s.mu = mu;
      s.bloch_phase = phi;
      s.branch = branch;
    }

    const Eigen::Matrix4cd a_plus = boundary_matrix(pair[0].energy, mu, config, phi);
    const NullSpace ns_plus = null_space(a_plus);
    if (ns_plus.basis.cols() == 2) {
      const auto [first, second] = localized_null_pair(ns_plus.basis);
      pair[0].u = to_array(first);
      pair[1].u = to_array(second);
    } else {
      pair[0].u = to_array(ns_plus.basis.col(0));
      const NullSpace ns_minus = null_space(boundary_matrix(pair[1].energy, mu, config, phi));
      pair[1].u = to_array(ns_minus.basis.col(ns_minus.basis.cols() - 1));
    }

    for (const auto& s : pair) {
      const Eigen::Matrix4cd a = boundary_matrix(s.energy, s.mu, config, phi);
      const Eigen::Vector4cd u(s.u[0], s.u[1], s.u[2], s.u[3]);
      const double residual = (a * u).norm();
      if (!(residual <= 1e3 * kDetTolerance)) {
        throw SolverError(fmt::format("null vector residual {:.3e} at E={:.17g} exceeds tolerance",
                                      residual, s.energy));
      }
      out.push_back(s);
    }
  }
  return out;
}

std::vector<BoundStateSolution> solve_bound_energies(const RingConfig& config) {
  return solve_bound_energies(config, flux_bloch_phase(config));
}

std::array<double, 4> ApproxEnergies::energies() const {
  return {wrap_angle(eps0), wrap_angle(-eps0), wrap_angle(kPi - eps1), wrap_angle(kPi + eps1)};
}

double leading_mu(double theta) { return std::cos(theta) / (1.0 + std::sin(theta)); }

ApproxEnergies approx_bound_energies(const RingConfig& config, bool allow_out_of_regime) {
  const double mu = leading_mu(config.theta());
  const int shortest = std::min(config.n1(), config.n2());
  if (!allow_out_of_regime && !(ipow(mu, shortest) < kLargeRingLimit)) {
    throw RegimeError(fmt::format("ring too small for the large-ring approximation: mu^{} = {:.4g} >= {}",
                                  shortest, ipow(mu, shortest), kLargeRingLimit));
  }
  const double s = std::sin(config.theta());
  return {(ipow(mu, config.n2()) - ipow(mu, config.n1())) * s,
          (ipow(-mu, config.n2()) - ipow(-mu, config.n1())) * s};
}

double approx_bound_energies_flux(int m_half, double theta, double alpha, bool allow_out_of_regime) {
  if (m_half < 1) throw ConfigError("ring half-size must be >= 1");
  if (!allow_out_of_regime && std::abs(alpha) > kWeakFieldLimit) {
    throw RegimeError(fmt::format("field alpha={:.6g} pi outside the weak-field regime |alpha| <= 0.1 pi",
                                  alpha / kPi));
  }
  const int n = 2 * m_half;
  return 2.0 * ipow(leading_mu(theta), m_half) * std::sin(0.5 * n * alpha) * std::sin(theta);
}

double oscillation_period(int m_half, double theta, double alpha, bool allow_out_of_regime) {
  const double eps = approx_bound_energies_flux(m_half, theta, alpha, allow_out_of_regime);
  if (std::abs(eps) < std::numeric_limits<double>::min() ||
      std::abs(std::sin(m_half * alpha)) < 1e-15) {
    throw RegimeError("sin(N alpha / 2) vanishes: the oscillation period is infinite");
  }
  return kPi / std::abs(eps);
}

WalkerState bound_state_wavefunction(const BoundStateSolution& solution, const RingConfig& config) {
  const Eigen::Matrix4cd a = boundary_matrix(solution.energy, solution.mu, config, solution.bloch_phase);
  Eigen::Vector4cd u(solution.u[0], solution.u[1], solution.u[2], solution.u[3]);
  if (u.norm() == 0.0) {
    const NullSpace ns = null_space(a);
    if (ns.basis.cols() != 1) {
      throw DegenerateSubspaceError(fmt::format(
          "two-dimensional null space at E={:.17g}; resolve the doublet with extract_majorana_pair",
          solution.energy));
    }
    if (!(ns.residual <= 1e3 * kDetTolerance)) {
      throw SolverError(fmt::format("boundary matrix is not singular at E={:.17g} (sigma_min={:.3e})",
                                    solution.energy, ns.residual));
    }
    u = ns.basis.col(0);
  } else if (!((a * u).norm() <= 1e3 * kDetTolerance * u.norm())) {
    throw SolverError(fmt::format("amplitudes are not a null vector at E={:.17g}", solution.energy));
  }

  const int n1 = config.n1();
  const int n = config.size();
  const double theta = config.theta();
  const double e = solution.energy;
  const cplx mu = solution.mu;
  const PlaneWaveVector va = decaying_wave_eigenvector(e, mu, theta, +1);
  const PlaneWaveVector vb = decaying_wave_eigenvector(e, mu, theta, -1);
  const PlaneWaveVector wc = decaying_wave_eigenvector(e, mu, -theta, +1);
  const PlaneWaveVector wd = decaying_wave_eigenvector(e, mu, -theta, -1);

  Eigen::VectorXcd amps(2 * n);
  for (int site = 0; site < n; ++site) {
    Eigen::Vector2cd psi;
    if (site < n1) {
      psi = u[0] * ipow(mu, site) * Eigen::Vector2cd(va.a, va.b) +
            u[1] * ipow(mu, n1 - site) * Eigen::Vector2cd(vb.a, vb.b);
    } else {
      psi = u[2] * ipow(mu, site - n1) * Eigen::Vector2cd(wc.a, wc.b) +
            u[3] * ipow(mu, n - site) * Eigen::Vector2cd(wd.a, wd.b);
    }
    const cplx gauge = std::polar(1.0, config.alpha() * site);
    amps.segment<2>(2 * site) = gauge * psi;
  }
  return WalkerState(std::move(amps)).with_canonical_phase();
}

}  // namespace mring
