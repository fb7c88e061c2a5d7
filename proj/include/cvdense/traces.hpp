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
 * @file traces.hpp
 * @brief Swept spectrum-analyzer emulation of the two homodyne photocurrents.
 *
 * Each photocurrent is synthesised as white Gaussian noise whose variance
 * follows the quadrature variance at the current LO phase, plus the decoded
 * AM/PM signal. The analyzer chain is
 *
 *   mix with LO at f(t) -> Gaussian RBW filter -> |z|^2 -> single-pole VBW
 *   -> sample trace points -> linear average over sweeps -> dB re shot noise
 *
 * with f(t) fixed at the centre frequency in zero span and swept linearly
 * across [centre - span/2, centre + span/2] otherwise. The RBW filter is
 * applied in the frequency domain (FFTW), so it is exact and circular.
 */
#pragma once

#include <fftw3.h>

#include <boost/random/normal_distribution.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cvdense/errors.hpp"
#include "cvdense/gaussian.hpp"
#include "cvdense/protocol.hpp"

namespace cvdense {

/// A sinusoidal modulation of the displacement beam.
struct ToneSignal {
  double freq_hz = 0.0;
  /// Tone amplitude in units of the shot-noise amplitude inside the RBW: a
  /// tone alone reads 20 log10(depth) dB on the analyzer.
  double depth = 0.0;
};

struct TraceConfig {
  double center_hz = 1.1e6;
  /// 0 selects zero-span (time-domain) mode.
  double span_hz = 0.0;
  double rbw_hz = 30e3;
  double vbw_hz = 0.3e3;
  int averages = 10;
  double sweep_s = 0.05;
  bool lo_scan = true;
  std::uint64_t seed = 1;
  /// Amplitude quadrature signal (x channel).
  std::optional<ToneSignal> am_signal;
  /// Phase quadrature signal (p channel).
  std::optional<ToneSignal> pm_signal;
  std::size_t points = 501;
  /// Internal sample rate as a multiple of the highest analyzed frequency.
  double oversample = 16.0;

  /// Zero-span settings of the time-domain measurement.
  static TraceConfig zero_span() { return TraceConfig{}; }

  /// 1 MHz span around 1.1 MHz with AM at 1.3 MHz and PM at 1.1 MHz.
  static TraceConfig spectrum() {
    TraceConfig tc;
    tc.span_hz = 1e6;
    tc.sweep_s = 0.1;
    tc.lo_scan = false;
    tc.am_signal = ToneSignal{1.3e6, 10.0};
    tc.pm_signal = ToneSignal{1.1e6, 10.0};
    return tc;
  }

  double sample_rate() const { return oversample * (center_hz + 0.5 * span_hz); }

  std::size_t samples() const {
    return static_cast<std::size_t>(std::llround(sample_rate() * sweep_s));
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidParameter(std::string(name) + " must be finite and > 0");
      }
    };
    positive(center_hz, "center_hz");
    positive(rbw_hz, "rbw_hz");
    positive(vbw_hz, "vbw_hz");
    positive(sweep_s, "sweep_s");
    if (!(span_hz >= 0.0) || !std::isfinite(span_hz)) throw InvalidParameter("span_hz must be >= 0");
    if (span_hz / 2 >= center_hz) throw InvalidParameter("span_hz must stay above 0 Hz");
    if (vbw_hz > rbw_hz) throw InvalidParameter("vbw_hz must not exceed rbw_hz");
    if (averages < 1) throw InvalidParameter("averages must be >= 1");
    if (points < 2) throw InvalidParameter("points must be >= 2");
    if (!(oversample >= 16.0)) throw InvalidParameter("oversample must be >= 16");
    if (samples() < 4 * points) throw InvalidParameter("sweep_s too short for the requested points");
    for (const auto& s : {am_signal, pm_signal}) {
      if (s && (!(s->freq_hz > 0.0) || !(s->depth >= 0.0))) {
        throw InvalidParameter("signal needs freq_hz > 0 and depth >= 0");
      }
    }
  }
};

enum class TraceKind { shot_noise, epr_noise, squeezed_locked, squeezed_scanned };
enum class Channel { x, p };

inline std::string_view trace_kind_name(TraceKind k) {
  switch (k) {
    case TraceKind::shot_noise: return "shot_noise";
    case TraceKind::epr_noise: return "epr_noise";
    case TraceKind::squeezed_locked: return "squeezed_locked";
    case TraceKind::squeezed_scanned: return "squeezed_scanned";
  }
  return "unknown";
}

struct Trace {
  /// Seconds in zero span, Hz otherwise.
  std::vector<double> axis;
  std::vector<double> power_db;
  TraceKind kind = TraceKind::shot_noise;
  Channel channel = Channel::x;
  bool frequency_axis = false;
};

struct SpectrumPair {
  Trace x;
  Trace p;
  std::vector<std::string> warnings;
};

namespace traces_detail {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

struct FftwPlan {
  fftw_plan plan = nullptr;
  explicit FftwPlan(fftw_plan p) : plan(p) {}
  FftwPlan(const FftwPlan&) = delete;
  FftwPlan& operator=(const FftwPlan&) = delete;
  ~FftwPlan() {
    if (plan) fftw_destroy_plan(plan);
  }
};

/// Power response of the RBW filter at baseband offset f: -3 dB at |f| = rbw/2.
inline double rbw_amplitude(double f, double rbw) {
  return std::exp(-2.0 * std::numbers::ln2 * f * f / (rbw * rbw));
}

inline double bin_frequency(std::size_t k, std::size_t n, double fs) {
  const auto ki = static_cast<double>(k);
  const auto ni = static_cast<double>(n);
  return (k <= n / 2 ? ki : ki - ni) * fs / ni;
}

/// Local quadrature covariance and base LO phase of a channel for a kind.
struct NoiseModel {
  Eigen::Matrix2d cov = kVacuumVariance * Eigen::Matrix2d::Identity();
  double base_phase = 0.0;
  bool scanned = false;

  double variance(double theta_offset) const {
    const double th = base_phase + (scanned ? theta_offset : 0.0);
    const Eigen::Vector2d d(std::cos(th), std::sin(th));
    return d.dot(cov * d);
  }
};

inline NoiseModel noise_model(const DecodedResult& decoded, TraceKind kind, Channel channel,
                              bool lo_scan) {
  const std::size_t mode = channel == Channel::x ? protocol::kSignalMode : protocol::kDecodingMode;
  NoiseModel m;
  m.base_phase = channel == Channel::x ? 0.0 : std::numbers::pi / 2;
  switch (kind) {
    case TraceKind::shot_noise:
      m.scanned = lo_scan;
      break;
    case TraceKind::epr_noise:
      m.cov = decoded.epr_state.mode_cov(mode);
      m.scanned = lo_scan;
      break;
    case TraceKind::squeezed_locked:
      m.cov = decoded.decoded_state.mode_cov(mode);
      break;
    case TraceKind::squeezed_scanned:
      m.cov = decoded.decoded_state.mode_cov(mode);
      m.scanned = true;
      break;
  }
  return m;
}

/// LO detuning during the sweep: one pi of phase, centred on the locked point.
inline double lo_offset(double t, double sweep_s) {
  return std::numbers::pi * (t / sweep_s - 0.5);
}

inline double analyzer_frequency(const TraceConfig& tc, double t) {
  return tc.center_hz + tc.span_hz * (t / tc.sweep_s - 0.5);
}

inline std::size_t point_index(std::size_t j, const TraceConfig& tc) {
  const std::size_t n = tc.samples();
  return std::min(n - 1, static_cast<std::size_t>((static_cast<double>(j) + 0.5) *
                                                  static_cast<double>(n) /
                                                  static_cast<double>(tc.points)));
}

/// A cosine riding on the photocurrent.
struct Tone {
  double amplitude = 0.0;
  double omega = 0.0;
};

inline std::uint64_t channel_tag(Channel c) { return c == Channel::x ? 1 : 2; }

/// Everything needed to run repeated sweeps of one channel.
class Analyzer {
 public:
  explicit Analyzer(const TraceConfig& tc)
      : tc_(tc),
        n_(tc.samples()),
        fs_(tc.sample_rate()),
        buf_(fftw_alloc_complex(n_)),
        forward_(fftw_plan_dft_1d(static_cast<int>(n_), buf_.get(), buf_.get(), FFTW_FORWARD,
                                  FFTW_ESTIMATE)),
        backward_(fftw_plan_dft_1d(static_cast<int>(n_), buf_.get(), buf_.get(), FFTW_BACKWARD,
                                   FFTW_ESTIMATE)),
        filter_(n_) {
    double gain = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      filter_[k] = rbw_amplitude(bin_frequency(k, n_, fs_), tc.rbw_hz);
      gain += filter_[k] * filter_[k];
    }
    shot_power_ = kVacuumVariance * gain / static_cast<double>(n_);
    // Fold the 1/n of the inverse transform into the filter.
    for (double& h : filter_) h /= static_cast<double>(n_);
  }

  /// Detected power of vacuum noise through the RBW filter.
  double shot_power() const { return shot_power_; }

  /// Photocurrent amplitude of a tone whose detected power is depth^2 * shot.
  double tone_amplitude(double depth) const { return 2.0 * depth * std::sqrt(shot_power_); }

  /// One sweep; returns the VBW-filtered detected power at each trace point.
  std::vector<double> sweep(const NoiseModel& noise, const std::vector<Tone>& tones,
                            std::uint64_t seed_a, std::uint64_t seed_b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_a), static_cast<std::uint32_t>(seed_a >> 32),
                      static_cast<std::uint32_t>(seed_b), static_cast<std::uint32_t>(seed_b >> 32)};
    std::mt19937_64 rng(seq);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    fftw_complex* z = buf_.get();
    const double dt = 1.0 / fs_;
    const double two_pi = 2.0 * std::numbers::pi;
    const double f0 = tc_.center_hz - 0.5 * tc_.span_hz;
    const double chirp = tc_.span_hz / tc_.sweep_s;
    auto lo_phasor = [&](double t) {
      double cycles = f0 * t + 0.5 * chirp * t * t;
      cycles -= std::floor(cycles);
      return std::polar(1.0, -two_pi * cycles);
    };
    auto sigma_at = [&](std::size_t i) {
      return std::sqrt(noise.variance(lo_offset(static_cast<double>(i) * dt, tc_.sweep_s)));
    };
    // Phasors advance by recurrence and are recomputed exactly every block.
    const std::complex<double> lo_curve = std::polar(1.0, -two_pi * chirp * dt * dt);
    std::vector<std::complex<double>> tone_step(tones.size());
    for (std::size_t m = 0; m < tones.size(); ++m) tone_step[m] = std::polar(1.0, tones[m].omega * dt);
    std::vector<std::complex<double>> tone_ph(tones.size());

    double sigma_end = sigma_at(0);
    for (std::size_t b = 0; b < n_; b += kBlock) {
      const std::size_t e = std::min(n_, b + kBlock);
      const double t = static_cast<double>(b) * dt;
      std::complex<double> lo = lo_phasor(t);
      std::complex<double> lo_step = lo_phasor(t + dt) / lo;
      for (std::size_t m = 0; m < tones.size(); ++m)
        tone_ph[m] = std::polar(tones[m].amplitude, std::fmod(tones[m].omega * t, two_pi));
      const double sigma_begin = sigma_end;
      sigma_end = noise.scanned ? sigma_at(e) : sigma_begin;
      const double sigma_slope = (sigma_end - sigma_begin) / static_cast<double>(e - b);
      for (std::size_t i = b; i < e; ++i) {
        double current = (sigma_begin + sigma_slope * static_cast<double>(i - b)) * normal(rng);
        for (std::size_t m = 0; m < tones.size(); ++m) {
          current += tone_ph[m].real();
          tone_ph[m] *= tone_step[m];
        }
        z[i][0] = current * lo.real();
        z[i][1] = current * lo.imag();
        lo *= lo_step;
        lo_step *= lo_curve;
      }
    }
    fftw_execute(forward_.plan);
    for (std::size_t k = 0; k < n_; ++k) {
      z[k][0] *= filter_[k];
      z[k][1] *= filter_[k];
    }
    fftw_execute(backward_.plan);

    const double a = -std::expm1(-two_pi * tc_.vbw_hz / fs_);
    // Seed the video filter with the mean over one time constant.
    const auto settle = std::min<std::size_t>(
        n_, std::max<std::size_t>(1, static_cast<std::size_t>(fs_ / (two_pi * tc_.vbw_hz))));
    double y = 0.0;
    for (std::size_t i = 0; i < settle; ++i) y += z[i][0] * z[i][0] + z[i][1] * z[i][1];
    y /= static_cast<double>(settle);

    std::vector<double> out(tc_.points);
    std::size_t next = 0;
    std::size_t next_index = point_index(0, tc_);
    for (std::size_t i = 0; i < n_ && next < tc_.points; ++i) {
      y += a * (z[i][0] * z[i][0] + z[i][1] * z[i][1] - y);
      if (i == next_index) {
        out[next++] = y;
        if (next < tc_.points) next_index = point_index(next, tc_);
      }
    }
    return out;
  }

 private:
  static constexpr std::size_t kBlock = 1024;

  TraceConfig tc_;
  std::size_t n_;
  double fs_;
  FftwBuffer buf_;
  FftwPlan forward_;
  FftwPlan backward_;
  std::vector<double> filter_;
  double shot_power_ = 0.0;
};

inline std::vector<double> point_axis(const TraceConfig& tc) {
  std::vector<double> axis(tc.points);
  const double dt = 1.0 / tc.sample_rate();
  for (std::size_t j = 0; j < tc.points; ++j) {
    const double t = static_cast<double>(point_index(j, tc)) * dt;
    axis[j] = tc.span_hz > 0.0 ? analyzer_frequency(tc, t) : t;
  }
  return axis;
}

inline Trace run_channel(Analyzer& analyzer, const TraceConfig& tc, const DecodedResult& decoded,
                         const Eigen::Matrix2d& transfer, TraceKind kind, Channel channel) {
  const NoiseModel noise = noise_model(decoded, kind, channel, tc.lo_scan);
  // Signals ride on the displacement, so they only appear once decoded.
  const bool carries_signal = kind == TraceKind::squeezed_locked || kind == TraceKind::squeezed_scanned;
  const int row = channel == Channel::x ? 0 : 1;
  const double am_gain = carries_signal && tc.am_signal ? transfer(row, 0) : 0.0;
  const double pm_gain = carries_signal && tc.pm_signal ? transfer(row, 1) : 0.0;
  const double am_amp = tc.am_signal ? analyzer.tone_amplitude(tc.am_signal->depth) : 0.0;
  const double pm_amp = tc.pm_signal ? analyzer.tone_amplitude(tc.pm_signal->depth) : 0.0;
  std::vector<Tone> tones;
  if (am_gain != 0.0) tones.push_back({am_gain * am_amp, 2.0 * std::numbers::pi * tc.am_signal->freq_hz});
  if (pm_gain != 0.0) tones.push_back({pm_gain * pm_amp, 2.0 * std::numbers::pi * tc.pm_signal->freq_hz});

  std::vector<double> sum(tc.points, 0.0);
  for (int k = 0; k < tc.averages; ++k) {
    const std::uint64_t stream =
        (channel_tag(channel) << 48) ^ (static_cast<std::uint64_t>(kind) << 40) ^
        static_cast<std::uint64_t>(k);
    const auto sweep = analyzer.sweep(noise, tones, tc.seed, stream);
    for (std::size_t j = 0; j < tc.points; ++j) sum[j] += sweep[j];
  }
  Trace trace;
  trace.kind = kind;
  trace.channel = channel;
  trace.frequency_axis = tc.span_hz > 0.0;
  trace.axis = point_axis(tc);
  trace.power_db.resize(tc.points);
  const double ref = analyzer.shot_power() * tc.averages;
  for (std::size_t j = 0; j < tc.points; ++j) trace.power_db[j] = 10.0 * std::log10(sum[j] / ref);
  return trace;
}

}  // namespace traces_detail

/// Zero-span record of one homodyne output, dB relative to shot noise.
inline Trace time_trace(const ExperimentConfig& exp, const TraceConfig& tc, TraceKind kind,
                        Channel channel = Channel::x) {
  tc.validate();
  if (tc.span_hz != 0.0) throw InvalidParameter("time_trace needs span_hz = 0");
  const DecodedResult decoded = run_experiment(exp);
  traces_detail::Analyzer analyzer(tc);
  return traces_detail::run_channel(analyzer, tc, decoded, signal_transfer(exp), kind, channel);
}

/// Noise-free level of a zero-span trace at each point, dB relative to shot noise.
inline std::vector<double> expected_time_trace(const ExperimentConfig& exp, const TraceConfig& tc,
                                               TraceKind kind, Channel channel = Channel::x) {
  tc.validate();
  const auto noise = traces_detail::noise_model(run_experiment(exp), kind, channel, tc.lo_scan);
  std::vector<double> out(tc.points);
  const double dt = 1.0 / tc.sample_rate();
  for (std::size_t j = 0; j < tc.points; ++j) {
    const double t = static_cast<double>(traces_detail::point_index(j, tc)) * dt;
    out[j] = shot_noise_db(noise.variance(traces_detail::lo_offset(t, tc.sweep_s)));
  }
  return out;
}

/// Swept spectra of both homodyne outputs.
inline SpectrumPair spectrum_trace(const ExperimentConfig& exp, const TraceConfig& tc,
                                   TraceKind kind = TraceKind::squeezed_locked) {
  tc.validate();
  if (!(tc.span_hz > 0.0)) throw InvalidParameter("spectrum_trace needs span_hz > 0");
  SpectrumPair out;
  const double lo = tc.center_hz - 0.5 * tc.span_hz;
  const double hi = tc.center_hz + 0.5 * tc.span_hz;
  auto check = [&](const std::optional<ToneSignal>& s, const char* name) {
    if (s && (s->freq_hz < lo || s->freq_hz > hi)) {
      std::ostringstream msg;
      msg << name << " signal at " << s->freq_hz << " Hz lies outside the span [" << lo << ", "
          << hi << "] Hz";
      out.warnings.push_back(msg.str());
    }
  };
  check(tc.am_signal, "AM");
  check(tc.pm_signal, "PM");
  const DecodedResult decoded = run_experiment(exp);
  const Eigen::Matrix2d transfer = signal_transfer(exp);
  traces_detail::Analyzer analyzer(tc);
  out.x = traces_detail::run_channel(analyzer, tc, decoded, transfer, kind, Channel::x);
  out.p = traces_detail::run_channel(analyzer, tc, decoded, transfer, kind, Channel::p);
  return out;
}

/// Mean linear power, relative to shot noise, of the points with axis in [lo, hi].
inline double band_power(const Trace& t, double lo, double hi) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < t.axis.size(); ++j) {
    if (t.axis[j] >= lo && t.axis[j] <= hi) {
      sum += std::pow(10.0, t.power_db[j] / 10.0);
      ++n;
    }
  }
  if (n == 0) throw InvalidParameter("no trace points in the requested band");
  return sum / static_cast<double>(n);
}

/// Noise floor of a spectrum in dB: mean linear power of all points more than
/// three RBWs away from any configured tone.
inline double noise_floor_db(const Trace& t, const TraceConfig& tc) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < t.axis.size(); ++j) {
    bool clear = true;
    for (const auto& s : {tc.am_signal, tc.pm_signal}) {
      if (s && std::abs(t.axis[j] - s->freq_hz) <= 3.0 * tc.rbw_hz) clear = false;
    }
    if (clear) {
      sum += std::pow(10.0, t.power_db[j] / 10.0);
      ++n;
    }
  }
  if (n == 0) throw InvalidParameter("no trace points clear of the tones");
  return 10.0 * std::log10(sum / static_cast<double>(n));
}

/// How strongly a tone shows up in the wrong channel: power above the floor in
/// that channel within one RBW of the tone, relative to the tone's peak above
/// the floor in its own channel. -inf when nothing rises above the floor.
inline double leakage_db(const SpectrumPair& s, const TraceConfig& tc, Channel tone_channel) {
  const auto& tone = tone_channel == Channel::x ? tc.am_signal : tc.pm_signal;
  if (!tone) throw InvalidParameter("no tone configured for that channel");
  const Trace& own = tone_channel == Channel::x ? s.x : s.p;
  const Trace& other = tone_channel == Channel::x ? s.p : s.x;
  const double lo = tone->freq_hz - tc.rbw_hz;
  const double hi = tone->freq_hz + tc.rbw_hz;
  double peak = 0.0;
  for (std::size_t j = 0; j < own.axis.size(); ++j) {
    if (own.axis[j] >= lo && own.axis[j] <= hi) {
      peak = std::max(peak, std::pow(10.0, own.power_db[j] / 10.0));
    }
  }
  peak -= std::pow(10.0, noise_floor_db(own, tc) / 10.0);
  const double leak = band_power(other, lo, hi) - std::pow(10.0, noise_floor_db(other, tc) / 10.0);
  if (!(peak > 0.0)) throw InvalidParameter("tone does not rise above the floor in its own channel");
  return leak > 0.0 ? 10.0 * std::log10(leak / peak) : -std::numeric_limits<double>::infinity();
}

}  // namespace cvdense
