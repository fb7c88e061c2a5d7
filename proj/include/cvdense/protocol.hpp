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
 * @file protocol.hpp
 * @brief The dense-coding pipeline: two orthogonally squeezed vacua, an EPR
 * beamsplitter, displacement of the signal beam, a decoding beamsplitter and
 * two homodyne detectors.
 *
 * Mode layout: 0 is the signal beam (OPO1 side), 1 the decoding beam (OPO2
 * side), 2 the coherent displacement beam when the partially transmitting
 * mirror is modelled explicitly.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "cvdense/errors.hpp"
#include "cvdense/gaussian.hpp"

namespace cvdense {

struct ExperimentConfig {
  /// Squeezing parameter of both OPOs.
  double r = 0.0;
  std::complex<double> alpha{0.0, 0.0};
  /// Transmittance of the mirror that couples the displacement beam in.
  double pt_transmittance = 0.01;
  double detector_efficiency = 0.999;
  /// true: phase-space displacement; false: coherent beam through the mirror.
  bool ideal_displacement = true;
  /// Noise exponent on the antisqueezed axis; unset means r_plus = r.
  std::optional<double> antisqueeze_r_plus;
  /// Squeezing of OPO2 when it differs from OPO1; unset means r.
  std::optional<double> r_second;

  /// Lossless detectors, phase-space displacement, pure squeezing.
  static ExperimentConfig ideal(double r, std::complex<double> alpha = {}) {
    ExperimentConfig c;
    c.r = r;
    c.alpha = alpha;
    c.detector_efficiency = 1.0;
    c.ideal_displacement = true;
    return c;
  }

  double r2() const { return r_second.value_or(r); }
  double r_plus() const { return antisqueeze_r_plus.value_or(r); }

  void validate() const {
    if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidParameter("r must be finite and >= 0");
    if (r_second && (!(*r_second >= 0.0) || !std::isfinite(*r_second))) {
      throw InvalidParameter("r_second must be finite and >= 0");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
      throw InvalidParameter("alpha must be finite");
    }
    detail::require_unit_interval(pt_transmittance, "pt_transmittance");
    detail::require_unit_interval(detector_efficiency, "detector_efficiency");
    if (!ideal_displacement && pt_transmittance == 0.0) {
      throw InvalidParameter("pt_transmittance must be > 0 for the mirror displacement model");
    }
    if (antisqueeze_r_plus) {
      if (!std::isfinite(*antisqueeze_r_plus)) throw InvalidParameter("r_plus must be finite");
      if (*antisqueeze_r_plus < std::max(r, r2())) {
        throw UncertaintyViolation("antisqueeze r_plus must be >= r");
      }
    }
  }
};

struct DecodedResult {
  /// Output beam 1 measured at LO phase 0.
  HomodyneStats x_channel;
  /// Output beam 2 measured at LO phase pi/2.
  HomodyneStats p_channel;
  /// Variance of the signal EPR beam alone, LO phase 0.
  double epr_variance = kVacuumVariance;
  /// Largest |cross-covariance| between the two decoded output modes.
  double separability_cross_cov = 0.0;
  /// Mean photon number of the signal beam sent through the channel.
  double signal_beam_photons = 0.0;
  GaussianState epr_state = vacuum(2);
  GaussianState decoded_state = vacuum(2);
};

namespace protocol {

inline constexpr std::size_t kSignalMode = 0;
inline constexpr std::size_t kDecodingMode = 1;
inline constexpr std::size_t kDisplacementMode = 2;

inline double antisqueeze_excess_variance(double r, double r_plus) {
  return 0.5 * (std::exp(2.0 * r_plus) - std::exp(2.0 * r));
}

/// OPO1 (x squeezed), OPO2 (p squeezed), 50:50 beamsplitter.
inline GaussianState prepare_epr(const ExperimentConfig& config) {
  config.validate();
  const std::size_t modes = config.ideal_displacement ? 2 : 3;
  GaussianState s = vacuum(modes);
  s = squeeze(s, kSignalMode, config.r, 0.0);
  s = squeeze(s, kDecodingMode, config.r2(), std::numbers::pi / 2);
  if (config.antisqueeze_r_plus) {
    const double rp = config.r_plus();
    s = add_noise(s, kSignalMode, 0.0, antisqueeze_excess_variance(config.r, rp));
    s = add_noise(s, kDecodingMode, antisqueeze_excess_variance(config.r2(), rp), 0.0);
  }
  return beamsplitter(s, kSignalMode, kDecodingMode, 0.5, 0.0);
}

/// Alice's displacement of the signal beam.
inline GaussianState encode(const GaussianState& epr, const ExperimentConfig& config) {
  if (config.ideal_displacement) return displace(epr, kSignalMode, config.alpha);
  const double t = config.pt_transmittance;
  GaussianState s = displace(epr, kDisplacementMode, config.alpha / std::sqrt(t));
  // Signal beam reflects off the mirror (1 - t) and picks up t of the coherent beam.
  return beamsplitter(s, kSignalMode, kDisplacementMode, 1.0 - t, 0.0);
}

/// Bob's 50:50 beamsplitter: outputs (a - b)/sqrt2 and (a + b)/sqrt2.
inline GaussianState decode(const GaussianState& signal, const ExperimentConfig& config) {
  GaussianState s = beamsplitter(signal, kSignalMode, kDecodingMode, 0.5, std::numbers::pi);
  if (config.detector_efficiency < 1.0) {
    s = loss(s, kSignalMode, config.detector_efficiency);
    s = loss(s, kDecodingMode, config.detector_efficiency);
  }
  return s;
}

inline double max_cross_cov(const GaussianState& s) {
  return s.cross_cov(kSignalMode, kDecodingMode).cwiseAbs().maxCoeff();
}

}  // namespace protocol

inline DecodedResult run_experiment(const ExperimentConfig& config) {
  GaussianState epr = protocol::prepare_epr(config);
  const GaussianState sent = protocol::encode(epr, config);
  GaussianState out = protocol::decode(sent, config);
  DecodedResult result;
  result.x_channel = homodyne_stats(out, protocol::kSignalMode, 0.0);
  result.p_channel = homodyne_stats(out, protocol::kDecodingMode, std::numbers::pi / 2);
  result.epr_variance = homodyne_stats(epr, protocol::kSignalMode, 0.0).variance;
  result.separability_cross_cov = protocol::max_cross_cov(out);
  result.signal_beam_photons = mean_photon(sent, protocol::kSignalMode);
  result.epr_state = std::move(epr);
  result.decoded_state = std::move(out);
  return result;
}

/// Signal-beam variance at each of `phases` evenly spaced LO phases in [0, pi).
inline std::vector<double> epr_noise_profile(const ExperimentConfig& config, int phases = 8) {
  detail::require(phases >= 1, "epr_noise_profile: need at least one phase");
  const GaussianState epr = protocol::prepare_epr(config);
  std::vector<double> out;
  for (int k = 0; k < phases; ++k) {
    const double theta = std::numbers::pi * k / phases;
    out.push_back(homodyne_stats(epr, protocol::kSignalMode, theta).variance);
  }
  return out;
}

inline double epr_noise(const ExperimentConfig& config) { return epr_noise_profile(config, 1)[0]; }

inline double separability_check(const ExperimentConfig& config) {
  return run_experiment(config).separability_cross_cov;
}

/// Maps (Re alpha, Im alpha) to the decoded (x mean, p mean).
inline Eigen::Matrix2d signal_transfer(const ExperimentConfig& config) {
  auto means = [&](std::complex<double> a) {
    ExperimentConfig c = config;
    c.alpha = a;
    const DecodedResult d = run_experiment(c);
    return Eigen::Vector2d(d.x_channel.mean, d.p_channel.mean);
  };
  const Eigen::Vector2d zero = means({0.0, 0.0});
  Eigen::Matrix2d m;
  m.col(0) = means({1.0, 0.0}) - zero;
  m.col(1) = means({0.0, 1.0}) - zero;
  return m;
}

}  // namespace cvdense
