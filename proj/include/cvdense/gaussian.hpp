// Copyright 2026 The cvdense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file gaussian.hpp
 * @brief Gaussian states of a few optical modes and the phase-space
 * operations acting on them.
 *
 * Conventions: quadratures are ordered (x1, p1, x2, p2, ...) with
 * [x, p] = i, so the vacuum has covariance 1/2 * Identity. A coherent
 * amplitude alpha shifts the mean by (sqrt(2) Re alpha, sqrt(2) Im alpha),
 * which makes the photon number of a displaced vacuum equal |alpha|^2.
 *
 * Every operation is a pure function returning a new state.
 */
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cvdense/errors.hpp"

namespace cvdense {

inline constexpr double kVacuumVariance = 0.5;

/// Mean vector and covariance matrix over n optical modes.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
      : mean_(std::move(mean)), cov_(std::move(cov)) {
    detail::require(mean_.size() > 0 && mean_.size() % 2 == 0,
                    "GaussianState: mean length must be a positive even number");
    detail::require(cov_.rows() == mean_.size() && cov_.cols() == mean_.size(),
                    "GaussianState: covariance shape does not match mean");
  }

  std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  /// 2x2 covariance block of one mode.
  Eigen::Matrix2d mode_cov(std::size_t mode) const {
    check_mode(mode);
    return cov_.block<2, 2>(2 * mode, 2 * mode);
  }
  /// 2x2 cross-covariance block <d(mode_a) d(mode_b)^T>.
  Eigen::Matrix2d cross_cov(std::size_t mode_a, std::size_t mode_b) const {
    check_mode(mode_a);
    check_mode(mode_b);
    return cov_.block<2, 2>(2 * mode_a, 2 * mode_b);
  }
  Eigen::Vector2d mode_mean(std::size_t mode) const {
    check_mode(mode);
    return mean_.segment<2>(2 * mode);
  }

  void check_mode(std::size_t mode) const {
    if (mode >= n_modes()) {
      throw InvalidParameter("mode index " + std::to_string(mode) + " out of range for " +
                             std::to_string(n_modes()) + "-mode state");
    }
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

enum class OpKind { squeeze, beamsplitter, rotation };

/// Linear phase-space map on the full 2n-dimensional quadrature vector.
struct SymplecticOp {
  Eigen::MatrixXd matrix;
  OpKind kind;
};

/// Quadrature statistics seen by a balanced homodyne detector.
struct HomodyneStats {
  double mean = 0.0;
  double variance = kVacuumVariance;
  /// Variance relative to shot noise, in dB.
  double rel_db = 0.0;
};

/// Ratio of a quadrature variance to the vacuum variance, in dB.
inline double shot_noise_db(double variance) {
  return 10.0 * std::log10(variance / kVacuumVariance);
}

/// Standard symplectic form, block diagonal with [[0, 1], [-1, 0]] per mode.
inline Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

inline GaussianState vacuum(std::size_t n_modes) {
  detail::require(n_modes >= 1, "vacuum: need at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return GaussianState(Eigen::VectorXd::Zero(dim),
                       kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim));
}

namespace detail {

inline Eigen::Matrix2d rotation2(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d m;
  m << c, -s, s, c;
  return m;
}

inline void require_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvalidParameter(std::string(what) + " must lie in [0, 1], got " +
                           std::to_string(value));
  }
}

inline Eigen::MatrixXd embed(std::size_t n_modes, std::size_t mode, const Eigen::Matrix2d& local) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  m.block<2, 2>(2 * mode, 2 * mode) = local;
  return m;
}

}  // namespace detail

/// Single-mode squeezer. Orientation 0 squeezes x by e^{-r} and stretches p
/// by e^{r}; orientation pi/2 swaps the roles.
inline SymplecticOp squeeze_op(std::size_t n_modes, std::size_t mode, double r,
                               double orientation = 0.0) {
  detail::require(mode < n_modes, "squeeze: mode index out of range");
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidParameter("squeeze: r must be finite and >= 0 (use orientation for the other axis)");
  }
  const Eigen::Matrix2d rot = detail::rotation2(orientation);
  const Eigen::Matrix2d local =
      rot * Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal() * rot.transpose();
  return {detail::embed(n_modes, mode, local), OpKind::squeeze};
}

/// Phase shift a -> a e^{-i theta}: afterwards x carries x cos(theta) + p sin(theta).
inline SymplecticOp rotation_op(std::size_t n_modes, std::size_t mode, double theta) {
  detail::require(mode < n_modes, "phase_rotate: mode index out of range");
  return {detail::embed(n_modes, mode, detail::rotation2(theta).transpose()), OpKind::rotation};
}

/// Lossless two-mode beamsplitter:
///   a' =  t a + s e^{i phi} b
///   b' = -s e^{-i phi} a + t b,    t = sqrt(T), s = sqrt(1 - T).
/// At T = 1/2, phi = 0 this is X1 = (x1 + x2)/sqrt2, X2 = (x2 - x1)/sqrt2.
inline SymplecticOp beamsplitter_op(std::size_t n_modes, std::size_t mode_a, std::size_t mode_b,
                                    double transmittance, double phase = 0.0) {
  detail::require(mode_a < n_modes && mode_b < n_modes, "beamsplitter: mode index out of range");
  detail::require(mode_a != mode_b, "beamsplitter: modes must be distinct");
  detail::require_unit_interval(transmittance, "beamsplitter transmittance");
  const double t = std::sqrt(transmittance);
  const double s = std::sqrt(1.0 - transmittance);
  const Eigen::Matrix2d rot = detail::rotation2(phase);
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const auto a = static_cast<Eigen::Index>(2 * mode_a);
  const auto b = static_cast<Eigen::Index>(2 * mode_b);
  m.block<2, 2>(a, a) = t * Eigen::Matrix2d::Identity();
  m.block<2, 2>(a, b) = s * rot;
  m.block<2, 2>(b, a) = -s * rot.transpose();
  m.block<2, 2>(b, b) = t * Eigen::Matrix2d::Identity();
  return {m, OpKind::beamsplitter};
}

inline GaussianState apply(const GaussianState& state, const SymplecticOp& op) {
  detail::require(op.matrix.rows() == state.mean().size(),
                  "apply: operator dimension does not match state");
  return GaussianState(op.matrix * state.mean(), op.matrix * state.cov() * op.matrix.transpose());
}

inline GaussianState squeeze(const GaussianState& state, std::size_t mode, double r,
                             double orientation = 0.0) {
  state.check_mode(mode);
  return apply(state, squeeze_op(state.n_modes(), mode, r, orientation));
}

inline GaussianState beamsplitter(const GaussianState& state, std::size_t mode_a,
                                  std::size_t mode_b, double transmittance, double phase = 0.0) {
  state.check_mode(mode_a);
  state.check_mode(mode_b);
  return apply(state, beamsplitter_op(state.n_modes(), mode_a, mode_b, transmittance, phase));
}

inline GaussianState phase_rotate(const GaussianState& state, std::size_t mode, double theta) {
  state.check_mode(mode);
  return apply(state, rotation_op(state.n_modes(), mode, theta));
}

inline GaussianState displace(const GaussianState& state, std::size_t mode,
                              std::complex<double> alpha) {
  state.check_mode(mode);
  Eigen::VectorXd mean = state.mean();
  mean(2 * mode) += std::numbers::sqrt2 * alpha.real();
  mean(2 * mode + 1) += std::numbers::sqrt2 * alpha.imag();
  return GaussianState(std::move(mean), state.cov());
}

/// Pure-loss channel: mixes the mode with vacuum at the given transmittance.
inline GaussianState loss(const GaussianState& state, std::size_t mode, double transmittance) {
  state.check_mode(mode);
  detail::require_unit_interval(transmittance, "loss transmittance");
  const double amp = std::sqrt(transmittance);
  Eigen::MatrixXd scale = detail::embed(state.n_modes(), mode, amp * Eigen::Matrix2d::Identity());
  Eigen::MatrixXd cov = scale * state.cov() * scale;
  cov.block<2, 2>(2 * mode, 2 * mode) +=
      (1.0 - transmittance) * kVacuumVariance * Eigen::Matrix2d::Identity();
  return GaussianState(scale * state.mean(), std::move(cov));
}

/// Adds independent classical Gaussian noise to the quadratures of one mode.
inline GaussianState add_noise(const GaussianState& state, std::size_t mode, double var_x,
                               double var_p) {
  state.check_mode(mode);
  detail::require(var_x >= 0.0 && var_p >= 0.0, "add_noise: variances must be >= 0");
  Eigen::MatrixXd cov = state.cov();
  cov(2 * mode, 2 * mode) += var_x;
  cov(2 * mode + 1, 2 * mode + 1) += var_p;
  return GaussianState(state.mean(), std::move(cov));
}

/// Mean and variance of x cos(theta) + p sin(theta) on one mode.
inline HomodyneStats homodyne_stats(const GaussianState& state, std::size_t mode,
                                    double lo_phase) {
  const Eigen::Vector2d dir(std::cos(lo_phase), std::sin(lo_phase));
  const double variance = dir.dot(state.mode_cov(mode) * dir);
  return {dir.dot(state.mode_mean(mode)), variance, shot_noise_db(variance)};
}

inline double mean_photon(const GaussianState& state, std::size_t mode) {
  const Eigen::Vector2d m = state.mode_mean(mode);
  const Eigen::Matrix2d v = state.mode_cov(mode);
  return 0.5 * m.squaredNorm() + 0.5 * (v.trace() - 1.0);
}

/// Symplectic eigenvalues in ascending order (one per mode).
///
/// For positive-definite covariances these are the moduli of the eigenvalues
/// of the Hermitian matrix i V^(1/2) Omega V^(1/2); anything else falls back
/// to the general eigenproblem of Omega V.
inline std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  const Eigen::MatrixXd omega = symplectic_form(state.n_modes());
  const Eigen::MatrixXd v = 0.5 * (state.cov() + state.cov().transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cov_solver(v);
  std::vector<double> nu;
  if (cov_solver.info() == Eigen::Success && cov_solver.eigenvalues().minCoeff() > 0.0) {
    const Eigen::MatrixXd root = cov_solver.operatorSqrt();
    const Eigen::MatrixXcd h =
        std::complex<double>(0.0, 1.0) * (root * omega * root).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < h.rows(); ++i) nu.push_back(std::abs(solver.eigenvalues()(i)));
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(omega * v, false);
    for (Eigen::Index i = 0; i < v.rows(); ++i) nu.push_back(std::abs(solver.eigenvalues()(i).imag()));
  }
  std::sort(nu.begin(), nu.end());
  // Eigenvalues come in +-nu pairs.
  std::vector<double> out;
  for (std::size_t i = 0; i < nu.size(); i += 2) out.push_back(0.5 * (nu[i] + nu[i + 1]));
  return out;
}

/// Symmetric covariance obeying the uncertainty principle.
inline bool is_physical(const GaussianState& state, double tol = 1e-9) {
  if ((state.cov() - state.cov().transpose()).cwiseAbs().maxCoeff() > 1e-12) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> cov_solver(state.cov(), Eigen::EigenvaluesOnly);
  if (!(cov_solver.eigenvalues().minCoeff() > 0.0)) return false;
  const auto nu = symplectic_eigenvalues(state);
  return std::all_of(nu.begin(), nu.end(), [tol](double v) { return v >= kVacuumVariance - tol; });
}

inline bool is_pure(const GaussianState& state, double tol = 1e-9) {
  const auto nu = symplectic_eigenvalues(state);
  return std::all_of(nu.begin(), nu.end(),
                     [tol](double v) { return std::abs(v - kVacuumVariance) <= tol; });
}

/// ||S Omega S^T - Omega||_inf.
inline double symplectic_defect(const SymplecticOp& op) {
  const auto n = static_cast<std::size_t>(op.matrix.rows() / 2);
  const Eigen::MatrixXd omega = symplectic_form(n);
  return (op.matrix * omega * op.matrix.transpose() - omega).cwiseAbs().maxCoeff();
}

/// Draws joint quadrature outcomes from the Gaussian moments. Row i is one
/// sample of (x1, p1, x2, p2, ...).
template <class Rng>
Eigen::MatrixXd sample_quadratures(const GaussianState& state, std::size_t count, Rng& rng) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(state.cov());
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd factor = eig.eigenvectors() * root.asDiagonal();
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = state.mean().size();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), dim);
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) z(j) = normal(rng);
    out.row(i) = (state.mean() + factor * z).transpose();
  }
  return out;
}

}  // namespace cvdense
