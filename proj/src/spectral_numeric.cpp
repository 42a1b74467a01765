#include "mring/spectral_numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/core.h>

#include "mring/error.hpp"

namespace mring {
namespace {

constexpr double kUnitarityTol = 1e-10;
constexpr double kDegeneracyTol = 1e-8;
constexpr double kEigenResidualTol = 1e-9;
constexpr double kDoubletWindow = 0.5;

void orthonormalize_cluster(std::vector<Eigen::VectorXcd>& vecs, const std::vector<std::size_t>& idx) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Eigen::VectorXcd& v = vecs[idx[i]];
    for (std::size_t j = 0; j < i; ++j) {
      const Eigen::VectorXcd& w = vecs[idx[j]];
      v -= w.dot(v) * w;
    }
    v.normalize();
  }
}

}  // namespace

std::vector<std::size_t> QuasiEnergySpectrum::nearest(double target, std::size_t count) const {
  std::vector<std::size_t> idx(quasi_energies.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return circular_distance(quasi_energies[a], target) < circular_distance(quasi_energies[b], target);
  });
  idx.resize(std::min(count, idx.size()));
  return idx;
}

QuasiEnergySpectrum diagonalize_step(const Eigen::MatrixXcd& unitary) {
  if (unitary.rows() != unitary.cols() || unitary.rows() == 0) {
    throw DimensionError("step matrix must be square and nonempty");
  }
  const Eigen::Index dim = unitary.rows();
  const double defect =
      (unitary.adjoint() * unitary - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (!(defect <= kUnitarityTol)) {
    throw SolverError(fmt::format("step matrix is not unitary (max |U^H U - I| = {:.3e})", defect));
  }

  // A unitary matrix is normal, so its Schur form is diagonal and the Schur vectors are eigenvectors.
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(unitary);
  if (schur.info() != Eigen::Success) throw SolverError("Schur decomposition did not converge");
  const Eigen::MatrixXcd& q = schur.matrixU();
  const Eigen::MatrixXcd& t = schur.matrixT();

  std::vector<double> energies(static_cast<std::size_t>(dim));
  std::vector<Eigen::VectorXcd> vecs(static_cast<std::size_t>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx lambda = t(j, j);
    double e = -std::arg(lambda);
    if (e <= -kPi) e = kPi;
    energies[static_cast<std::size_t>(j)] = e;
    vecs[static_cast<std::size_t>(j)] = q.col(j);
  }

  std::vector<std::size_t> order(energies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ka = std::abs(energies[a]);
    const double kb = std::abs(energies[b]);
    if (ka != kb) return ka < kb;
    return circular_distance(energies[a], kPi) < circular_distance(energies[b], kPi);
  });
  std::vector<double> sorted_e;
  std::vector<Eigen::VectorXcd> sorted_v;
  for (std::size_t k : order) {
    sorted_e.push_back(energies[k]);
    sorted_v.push_back(vecs[k]);
  }

  std::vector<bool> used(sorted_e.size(), false);
  for (std::size_t i = 0; i < sorted_e.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> cluster{i};
    for (std::size_t j = i + 1; j < sorted_e.size(); ++j) {
      if (!used[j] && circular_distance(sorted_e[i], sorted_e[j]) < kDegeneracyTol) cluster.push_back(j);
    }
    for (std::size_t k : cluster) used[k] = true;
    if (cluster.size() > 1) orthonormalize_cluster(sorted_v, cluster);
  }

  QuasiEnergySpectrum spec;
  spec.quasi_energies = std::move(sorted_e);
  for (std::size_t k = 0; k < sorted_v.size(); ++k) {
    const Eigen::VectorXcd& v = sorted_v[k];
    const cplx lambda = std::polar(1.0, -spec.quasi_energies[k]);
    const double residual = (unitary * v - lambda * v).norm();
    if (!(residual <= kEigenResidualTol)) {
      throw SolverError(fmt::format("eigenvector {} has residual {:.3e}", k, residual));
    }
    spec.eigenvectors.emplace_back(v);
  }
  return spec;
}

QuasiEnergySpectrum diagonalize_ring(const RingConfig& config) {
  return diagonalize_step(build_step_unitary(ring_coin_field(config)));
}

MajoranaPair extract_majorana_pair(const QuasiEnergySpectrum& spectrum, MajoranaTarget target,
                                   const RingConfig& config) {
  if (spectrum.size() != 2 * static_cast<std::size_t>(config.size())) {
    throw DimensionError("spectrum does not belong to this ring");
  }
  const double where = target == MajoranaTarget::Zero ? 0.0 : kPi;
  const auto idx = spectrum.nearest(where, 2);
  const double e0 = spectrum.quasi_energies[idx[0]];
  const double e1 = spectrum.quasi_energies[idx[1]];
  if (circular_distance(e0, where) > kDegeneracyTol || circular_distance(e1, where) > kDegeneracyTol) {
    throw SolverError(fmt::format("no doublet at quasi-energy {}: nearest levels {:.3e}, {:.3e}",
                                  target == MajoranaTarget::Zero ? "0" : "pi", e0, e1));
  }
  if (circular_distance(e0, e1) > kDegeneracyTol) {
    throw SolverError(fmt::format("doublet split by {:.3e} exceeds the degeneracy tolerance",
                                  circular_distance(e0, e1)));
  }

  const Eigen::VectorXcd& v0 = spectrum.eigenvectors[idx[0]].amplitudes();
  const Eigen::VectorXcd& v1 = spectrum.eigenvectors[idx[1]].amplitudes();
  // probability on site 0 restricted to the doublet
  Eigen::Matrix2cd weight;
  const auto site0 = [](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  };
  weight << site0(v0, v0), site0(v0, v1), site0(v1, v0), site0(v1, v1);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> eig(weight);
  const Eigen::Vector2cd dominant = eig.eigenvectors().col(1);
  const Eigen::Vector2cd complement = eig.eigenvectors().col(0);

  WalkerState first(Eigen::VectorXcd(dominant[0] * v0 + dominant[1] * v1));
  WalkerState second(Eigen::VectorXcd(complement[0] * v0 + complement[1] * v1));
  return {first.with_canonical_phase(), second.with_canonical_phase()};
}

TwoLevelModel two_level_decompose(const WalkerState& psi, const QuasiEnergySpectrum& spectrum_alpha) {
  if (spectrum_alpha.size() != 2 * psi.sites()) throw DimensionError("spectrum and state sizes differ");
  const auto idx = spectrum_alpha.nearest(0.0, 2);
  if (idx.size() < 2) throw SolverError("spectrum has fewer than two levels");
  std::size_t ip = idx[0];
  std::size_t im = idx[1];
  if (spectrum_alpha.quasi_energies[ip] < spectrum_alpha.quasi_energies[im]) std::swap(ip, im);
  const double ep = spectrum_alpha.quasi_energies[ip];
  const double em = spectrum_alpha.quasi_energies[im];
  if (std::abs(ep) > kDoubletWindow || std::abs(em) > kDoubletWindow) {
    throw SolverError(fmt::format("no near-zero doublet: nearest levels {:.6g}, {:.6g}", ep, em));
  }

  const WalkerState& plus = spectrum_alpha.eigenvectors[ip];
  const WalkerState& minus = spectrum_alpha.eigenvectors[im];
  const cplx cp = overlap(plus, psi);
  const cplx cm = overlap(minus, psi);
  return TwoLevelModel{cp, cm, 1.0 - std::norm(cp) - std::norm(cm), ep - em, plus, minus};
}

double residual_Rprime(const WalkerState& psi, const TwoLevelModel& model) {
  if (psi.sites() != model.plus.sites()) throw DimensionError("state and model sizes differ");
  const auto unit_phase = [](cplx c) { return std::abs(c) > 0.0 ? c / std::abs(c) : cplx(1.0); };
  const Eigen::VectorXcd approx = (unit_phase(model.c_plus) * model.plus.amplitudes() +
                                   unit_phase(model.c_minus) * model.minus.amplitudes()) /
                                  std::sqrt(2.0);
  return (psi.amplitudes() - approx).squaredNorm();
}

}  // namespace mring
