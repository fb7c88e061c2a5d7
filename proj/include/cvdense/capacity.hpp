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
 * @file capacity.hpp
 * @brief Mutual information of Gaussian channels at a fixed mean photon
 * number n in the channel, in nats.
 *
 * Squeezing is paid for out of the same budget: a squeezed signal carries
 * n = |alpha|^2 + sinh^2 r photons, so only n - sinh^2 r is left for the
 * signal itself.
 */
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cvdense/errors.hpp"
#include "cvdense/roots.hpp"

namespace cvdense {

inline constexpr double kBitsPerNat = 1.0 / std::numbers::ln2;

inline double nats_to_bits(double nats) { return nats * kBitsPerNat; }

/// Squeezing in dB from the squeezing parameter: 10 log10(e^{2r}).
inline double r_to_db(double r) {
  if (!(r >= 0.0)) throw InvalidParameter("r_to_db: r must be >= 0");
  return 20.0 * r / std::numbers::ln10;
}

inline double db_to_r(double db) {
  if (!(db >= 0.0)) throw InvalidParameter("db_to_r: squeezing in dB must be >= 0");
  return db * std::numbers::ln10 / 20.0;
}

/// Photons spent on squeezing a vacuum by r.
inline double squeezing_photons(double r) {
  const double s = std::sinh(r);
  return s * s;
}

namespace detail {

inline void require_n_bar(double n_bar) {
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw InvalidParameter("mean photon number must be finite and >= 0");
  }
}

inline void require_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidParameter("r must be finite and >= 0");
}

/// |alpha|^2 left once squeezing is paid for.
inline double signal_photons(double n_bar, double r) {
  require_n_bar(n_bar);
  require_r(r);
  const double signal = n_bar - squeezing_photons(r);
  if (signal < 0.0) {
    // Tolerate round-off at the exact boundary n_bar == sinh^2 r.
    if (signal > -1e-12 * std::max(1.0, n_bar)) return 0.0;
    std::ostringstream msg;
    msg << "infeasible photon budget: n_bar=" << n_bar << " < sinh^2(r)=" << squeezing_photons(r)
        << " at r=" << r;
    throw InfeasibleBudget(msg.str());
  }
  return signal;
}

}  // namespace detail

/// Dense coding with squeezing r: ln(1 + |alpha|^2 e^{2r}).
inline double i_dense_coding(double n_bar, double r) {
  return std::log1p(detail::signal_photons(n_bar, r) * std::exp(2.0 * r));
}

/// Optimal squeezing e^{2r*} = 1 + 2 n_bar for dense coding (and squeezed homodyne).
inline double optimal_squeezing_r(double n_bar) {
  detail::require_n_bar(n_bar);
  return 0.5 * std::log1p(2.0 * n_bar);
}

/// Dense coding maximised over r: ln(1 + n + n^2).
inline double i_dense_coding_optimal(double n_bar) {
  detail::require_n_bar(n_bar);
  return std::log1p(n_bar + n_bar * n_bar);
}

/// Coherent states, both quadratures (heterodyne): ln(1 + n).
inline double i_coherent_2q(double n_bar) {
  detail::require_n_bar(n_bar);
  return std::log1p(n_bar);
}

/// Coherent states, one quadrature (homodyne): (1/2) ln(1 + 4n).
inline double i_coherent_1q(double n_bar) {
  detail::require_n_bar(n_bar);
  return 0.5 * std::log1p(4.0 * n_bar);
}

/// Single-quadrature signal on a squeezed carrier: (1/2) ln(1 + 4 |alpha|^2 e^{2r}).
inline double i_squeezed_homodyne(double n_bar, double r) {
  return 0.5 * std::log1p(4.0 * detail::signal_photons(n_bar, r) * std::exp(2.0 * r));
}

/// Squeezed homodyne maximised over r: ln(1 + 2n).
inline double i_squeezed_homodyne_optimal(double n_bar) {
  detail::require_n_bar(n_bar);
  return std::log1p(2.0 * n_bar);
}

/// Classical capacity of a single bosonic mode, g(n) = (1+n) ln(1+n) - n ln n.
inline double holevo_limit(double n_bar) {
  detail::require_n_bar(n_bar);
  if (n_bar == 0.0) return 0.0;
  return (1.0 + n_bar) * std::log1p(n_bar) - n_bar * std::log(n_bar);
}

/// Extra photons carried by excess antisqueezing noise: (e^{r+} - e^{r}) / 4.
inline double excess_photons(double r, double r_plus) {
  detail::require_r(r);
  if (!std::isfinite(r_plus)) throw InvalidParameter("r_plus must be finite");
  if (r_plus < r) {
    throw UncertaintyViolation("antisqueezing r_plus must be >= squeezing r");
  }
  return 0.25 * (std::exp(r_plus) - std::exp(r));
}

enum class ChannelKind {
  dense_coding,
  dense_coding_optimal,
  coherent_1q,
  coherent_2q,
  squeezed_homodyne,
  holevo_limit,
};

struct ChannelModel {
  ChannelKind kind = ChannelKind::coherent_2q;
  double r = 0.0;

  static ChannelModel dense_coding(double r) { return {ChannelKind::dense_coding, r}; }
  static ChannelModel dense_coding_optimal() { return {ChannelKind::dense_coding_optimal, 0.0}; }
  static ChannelModel coherent_1q() { return {ChannelKind::coherent_1q, 0.0}; }
  static ChannelModel coherent_2q() { return {ChannelKind::coherent_2q, 0.0}; }
  static ChannelModel squeezed_homodyne(double r) { return {ChannelKind::squeezed_homodyne, r}; }
  static ChannelModel holevo() { return {ChannelKind::holevo_limit, 0.0}; }

  bool has_r() const {
    return kind == ChannelKind::dense_coding || kind == ChannelKind::squeezed_homodyne;
  }

  /// Smallest photon number at which the channel is defined.
  double min_n_bar() const { return has_r() ? squeezing_photons(r) : 0.0; }

  bool feasible(double n_bar) const { return n_bar >= 0.0 && n_bar >= min_n_bar(); }

  double information(double n_bar) const {
    switch (kind) {
      case ChannelKind::dense_coding: return i_dense_coding(n_bar, r);
      case ChannelKind::dense_coding_optimal: return i_dense_coding_optimal(n_bar);
      case ChannelKind::coherent_1q: return i_coherent_1q(n_bar);
      case ChannelKind::coherent_2q: return i_coherent_2q(n_bar);
      case ChannelKind::squeezed_homodyne: return i_squeezed_homodyne(n_bar, r);
      case ChannelKind::holevo_limit: return holevo_limit(n_bar);
    }
    throw InvalidParameter("unknown channel kind");
  }
};

inline std::string_view kind_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::dense_coding: return "dense_coding";
    case ChannelKind::dense_coding_optimal: return "dense_coding_optimal";
    case ChannelKind::coherent_1q: return "coherent_1q";
    case ChannelKind::coherent_2q: return "coherent_2q";
    case ChannelKind::squeezed_homodyne: return "squeezed_homodyne";
    case ChannelKind::holevo_limit: return "holevo_limit";
  }
  return "unknown";
}

/// Column label, e.g. "dense_coding(r=0.230259)" or "holevo_limit".
inline std::string channel_label(const ChannelModel& m) {
  std::string out(kind_name(m.kind));
  if (m.has_r()) {
    std::ostringstream r;
    r << m.r;
    out += "(r=" + r.str() + ")";
  }
  return out;
}

struct CapacityPoint {
  double n_bar = 0.0;
  double info_nats = 0.0;
};

/// Curve over an n grid; infeasible grid points are returned as std::nullopt.
inline std::vector<std::optional<CapacityPoint>> capacity_curve(const ChannelModel& m,
                                                                const std::vector<double>& grid) {
  std::vector<std::optional<CapacityPoint>> out;
  out.reserve(grid.size());
  for (double n : grid) {
    if (m.feasible(n)) {
      out.push_back(CapacityPoint{n, m.information(n)});
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

/// Photon number where the two capacities are equal, within `tol` in n.
inline double crossing(const ChannelModel& a, const ChannelModel& b, double n_lo, double n_hi,
                       double tol = 1e-6) {
  detail::require_n_bar(n_lo);
  detail::require(n_lo < n_hi, "crossing: bracket must satisfy lo < hi");
  for (const ChannelModel* m : {&a, &b}) {
    if (!m->feasible(n_lo)) {
      std::ostringstream msg;
      msg << channel_label(*m) << " is infeasible inside the bracket (needs n >= " << m->min_n_bar()
          << ", bracket starts at " << n_lo << ")";
      throw InfeasibleBudget(msg.str());
    }
  }
  return find_root([&](double n) { return a.information(n) - b.information(n); }, n_lo, n_hi, tol);
}

/// Smallest squeezing r at which dense coding at n_bar matches the Holevo limit.
inline double min_squeezing_to_beat_holevo(double n_bar, double tol = 1e-10) {
  detail::require_n_bar(n_bar);
  const double target = holevo_limit(n_bar);
  const double r_opt = optimal_squeezing_r(n_bar);
  const auto gap = [&](double r) { return i_dense_coding(n_bar, r) - target; };
  if (gap(r_opt) < 0.0) {
    std::ostringstream msg;
    msg << "dense coding cannot reach the Holevo limit at n_bar=" << n_bar;
    throw NoSignChange(msg.str());
  }
  // Dense coding increases in r on [0, r_opt].
  return find_root(gap, 0.0, r_opt, tol);
}

/// Large-n limit of min_squeezing_to_beat_holevo: ln(n e^{2r}) vs ln(n) + 1 gives r = 1/2.
inline constexpr double asymptotic_min_squeezing() { return 0.5; }

}  // namespace cvdense
