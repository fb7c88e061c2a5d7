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

#include "cvdense/capacity.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cvdense/gaussian.hpp"
#include "cvdense/protocol.hpp"
#include "oracles.hpp"

using namespace cvdense;

namespace {
const double kR2dB = std::log(std::pow(10.0, 0.2)) / 2.0;
}

TEST(DenseCoding, DirectValues) {
  EXPECT_EQ(i_dense_coding(0.0, 0.0), 0.0);
  EXPECT_NEAR(i_dense_coding(1.0 + squeezing_photons(kR2dB), kR2dB), 0.949684188909911, 1e-12);
  for (double n : {0.0, 0.3, 2.0, 7.5}) EXPECT_DOUBLE_EQ(i_dense_coding(n, 0.0), i_coherent_2q(n));
}

TEST(DenseCoding, InfeasibleBudgetIsAnError) {
  EXPECT_THROW(i_dense_coding(0.01, kR2dB), InfeasibleBudget);
  EXPECT_THROW(i_squeezed_homodyne(0.01, kR2dB), InfeasibleBudget);
  EXPECT_THROW(i_dense_coding(-1.0, 0.0), InvalidParameter);
  EXPECT_THROW(i_dense_coding(1.0, -0.1), InvalidParameter);
  // Exactly at the boundary every photon is in the squeezing.
  EXPECT_NEAR(i_dense_coding(squeezing_photons(0.7), 0.7), 0.0, 1e-12);
}

TEST(DenseCodingOptimal, ClosedFormMatchesBruteForce) {
  for (double n : {0.05, 0.1, 0.5, 1.0, 1.883, 2.0, 5.0, 10.0, 40.0}) {
    const double r_max = std::asinh(std::sqrt(n));
    const auto [r_star, best] =
        oracle::brute_force_max([n](double r) { return oracle::dc(n, r); }, 0.0, r_max);
    EXPECT_NEAR(best, i_dense_coding_optimal(n), 1e-8) << n;
    EXPECT_NEAR(std::exp(2 * r_star), 1 + 2 * n, 1e-4 * (1 + 2 * n)) << n;
    EXPECT_NEAR(r_star, optimal_squeezing_r(n), 1e-5) << n;
  }
  EXPECT_EQ(i_dense_coding_optimal(0.0), 0.0);
  EXPECT_NEAR(i_dense_coding_optimal(1.883), 1.86077062943666, 1e-12);
  EXPECT_NEAR(r_to_db(optimal_squeezing_r(1.883)), 6.78, 0.005);
}

TEST(SqueezedHomodyne, ClosedFormAndOptimum) {
  EXPECT_NEAR(i_squeezed_homodyne(squeezing_photons(0.4), 0.4), 0.0, 1e-12);
  for (double n : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double r_max = std::asinh(std::sqrt(n));
    const auto [r_star, best] =
        oracle::brute_force_max([n](double r) { return oracle::sq_hom(n, r); }, 0.0, r_max);
    EXPECT_NEAR(best, i_squeezed_homodyne_optimal(n), 1e-8) << n;
    EXPECT_NEAR(best, std::log(1 + 2 * n), 1e-8) << n;
    EXPECT_NEAR(std::exp(2 * r_star), 1 + 2 * n, 1e-4 * (1 + 2 * n)) << n;
  }
}

TEST(SqueezedHomodyne, MeetsDenseCodingNearThreshold) {
  // 1.316 is the rounded crossing; the exact root is 2 e^{-2r} + sinh^2 r.
  EXPECT_NEAR(i_squeezed_homodyne(1.316, kR2dB), i_dense_coding(1.316, kR2dB), 1e-4);
  const double exact = 2 * std::exp(-2 * kR2dB) + oracle::sinh2(kR2dB);
  EXPECT_NEAR(exact, 1.31587732319571, 1e-12);
  EXPECT_NEAR(i_squeezed_homodyne(exact, kR2dB), i_dense_coding(exact, kR2dB), 1e-9);
}

TEST(Coherent, DirectValues) {
  EXPECT_EQ(i_coherent_1q(0.0), 0.0);
  EXPECT_EQ(i_coherent_2q(0.0), 0.0);
  EXPECT_NEAR(i_coherent_1q(2.0), 1.09861228866811, 1e-12);
  EXPECT_NEAR(i_coherent_2q(2.0), std::log(3.0), 1e-15);
  // One quadrature wins at low photon number, two quadratures above n = 2.
  for (double n : {0.1, 0.5, 1.0, 1.9}) EXPECT_GT(i_coherent_1q(n), i_coherent_2q(n)) << n;
  for (double n : {2.1, 3.0, 10.0, 100.0}) EXPECT_GT(i_coherent_2q(n), i_coherent_1q(n)) << n;
}

TEST(Holevo, DirectValues) {
  EXPECT_EQ(holevo_limit(0.0), 0.0);
  EXPECT_NEAR(holevo_limit(1e-300), 0.0, 1e-290);
  EXPECT_NEAR(holevo_limit(1.0), 2 * std::log(2.0), 1e-15);
  EXPECT_NEAR(holevo_limit(1.883), 1.86092383184796, 1e-12);
  EXPECT_NEAR(holevo_limit(3.0), 2.24934057847523, 1e-12);
}

TEST(Crossing, DenseCodingVersusSqueezedHomodyneAtTwoDecibels) {
  const double n = crossing(ChannelModel::dense_coding(kR2dB), ChannelModel::squeezed_homodyne(kR2dB),
                            0.5, 3.0);
  const double analytic = 2 * std::exp(-2 * kR2dB) + oracle::sinh2(kR2dB);
  EXPECT_NEAR(n, analytic, 1e-6);
  EXPECT_NEAR(n, 1.316, 0.001);
}

TEST(Crossing, OptimalDenseCodingVersusHolevo) {
  const double n = crossing(ChannelModel::dense_coding_optimal(), ChannelModel::holevo(), 1.0, 3.0);
  const double reference = oracle::bisect(
      [](double x) { return std::log(1 + x + x * x) - oracle::holevo(x); }, 1.0, 3.0);
  EXPECT_NEAR(reference, 1.88348576182935, 1e-10);
  EXPECT_NEAR(n, reference, 1e-6);
  EXPECT_NEAR(n, 1.884, 0.005);
  EXPECT_NEAR(r_to_db(optimal_squeezing_r(n)), 6.78, 0.01);
}

TEST(Crossing, CoherentOneAndTwoQuadraturesMeetAtTwo) {
  // (1+n)^2 = 1+4n has its positive root at n = 2.
  const double n = crossing(ChannelModel::coherent_2q(), ChannelModel::coherent_1q(), 1.0, 3.0);
  EXPECT_NEAR(n, 2.0, 1e-6);
  EXPECT_THROW(crossing(ChannelModel::coherent_2q(), ChannelModel::coherent_1q(), 0.01, 1.0),
               NoSignChange);
}

TEST(Crossing, InfeasibleBracketIsReported) {
  EXPECT_THROW(crossing(ChannelModel::dense_coding(1.0), ChannelModel::holevo(), 0.1, 3.0),
               InfeasibleBudget);
  EXPECT_THROW(crossing(ChannelModel::coherent_2q(), ChannelModel::holevo(), 3.0, 1.0),
               InvalidParameter);
}

TEST(AsymptoticSqueezing, HalfIsTheLargePhotonLimit) {
  EXPECT_EQ(asymptotic_min_squeezing(), 0.5);
  EXPECT_NEAR(r_to_db(asymptotic_min_squeezing()), 4.34294481903252, 1e-12);
  const double n = 1e4;
  EXPECT_GT(i_dense_coding(n, 0.51), holevo_limit(n));
  EXPECT_LT(i_dense_coding(n, 0.49), holevo_limit(n));
  double previous = 10.0;
  for (double big : {1e2, 1e3, 1e4, 1e6}) {
    const double r_min = min_squeezing_to_beat_holevo(big);
    EXPECT_GT(r_min, 0.5) << big;
    EXPECT_LT(r_min, previous) << big;
    previous = r_min;
  }
  EXPECT_NEAR(min_squeezing_to_beat_holevo(1e6), 0.5, 1e-5);
  EXPECT_THROW(min_squeezing_to_beat_holevo(1.0), NoSignChange);
}

TEST(ExcessPhotons, Values) {
  EXPECT_EQ(excess_photons(0.3, 0.3), 0.0);
  // r_plus recovered from the reported 0.062 excess at 2 dB squeezing.
  const double r_plus = std::log(4 * 0.062 + std::exp(kR2dB));
  EXPECT_NEAR(r_plus, 0.410071423923226, 1e-12);
  EXPECT_NEAR(excess_photons(kR2dB, 0.41), 0.0620, 0.0005);
  EXPECT_NEAR(excess_photons(kR2dB, 0.41), 0.0619730933296716, 1e-12);
  EXPECT_NEAR(excess_photons(0.0, 0.5), 0.162180317675032, 1e-12);
  EXPECT_THROW(excess_photons(0.4, 0.3), UncertaintyViolation);
}

TEST(Conversions, DecibelsAndSqueezingParameter) {
  EXPECT_NEAR(db_to_r(2.0), 0.230258509299405, 1e-12);
  EXPECT_EQ(db_to_r(0.0), 0.0);
  EXPECT_NEAR(r_to_db(0.5), 4.34294481903252, 1e-12);
  for (double db : {0.0, 0.1, 2.0, 6.78, 15.0}) EXPECT_NEAR(r_to_db(db_to_r(db)), db, 1e-12);
  EXPECT_THROW(db_to_r(-1.0), InvalidParameter);
  EXPECT_THROW(r_to_db(-0.1), InvalidParameter);
  EXPECT_NEAR(nats_to_bits(1.0), 1.4426950408889634, 1e-15);
}

// Dense coding beats coherent 2q exactly while e^{2r} <= 1 + 4n; beyond that
// the squeezing eats too much of the photon budget.
TEST(Ordering, DominanceAndHolevoBound) {
  for (double n = 0.0; n <= 20.0; n += 0.25) {
    EXPECT_GE(holevo_limit(n), i_coherent_2q(n) - 1e-15) << n;
    EXPECT_GE(i_coherent_2q(n), 0.0);
    EXPECT_GE(i_dense_coding_optimal(n), i_coherent_2q(n)) << n;
    for (double r = 0.0; squeezing_photons(r) <= n && r < 3.0; r += 0.05) {
      const double dc = i_dense_coding(n, r);
      const double edge = std::exp(2 * r) - (1 + 4 * n);
      if (r == 0.0) {
        EXPECT_DOUBLE_EQ(dc, i_coherent_2q(n));
      } else if (edge < -1e-9) {
        EXPECT_GT(dc, i_coherent_2q(n)) << n << " " << r;
      } else if (edge > 1e-9) {
        EXPECT_LT(dc, i_coherent_2q(n)) << n << " " << r;
      }
    }
  }
  // The 2 dB curve sits above coherent 2q once n > (e^{2r} - 1) / 4.
  const double edge_2db = (std::exp(2 * kR2dB) - 1) / 4;
  EXPECT_NEAR(edge_2db, (std::pow(10.0, 0.2) - 1) / 4, 1e-15);
  EXPECT_NEAR(i_dense_coding(edge_2db, kR2dB), i_coherent_2q(edge_2db), 1e-12);
}

TEST(Curves, MonotoneOnDenseGrid) {
  const std::vector<ChannelModel> channels = {
      ChannelModel::dense_coding(kR2dB), ChannelModel::dense_coding_optimal(),
      ChannelModel::coherent_1q(),       ChannelModel::coherent_2q(),
      ChannelModel::squeezed_homodyne(kR2dB), ChannelModel::holevo()};
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(0.005 * i);
  for (const auto& m : channels) {
    const auto curve = capacity_curve(m, grid);
    double last = -1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!curve[i]) {
        EXPECT_LT(grid[i], m.min_n_bar());
        continue;
      }
      EXPECT_GT(curve[i]->info_nats, last) << channel_label(m) << " at " << grid[i];
      last = curve[i]->info_nats;
    }
    EXPECT_EQ((ChannelModel{m.kind, 0.0}.information(0.0)), 0.0);
  }
}

// Each closed form is an additive Gaussian channel; sampling the signal and the
// noise (from the Gaussian-state simulator) and estimating (1/2) ln(1 + SNR)
// per quadrature must reproduce it.
TEST(MonteCarlo, GaussianChannelsMatchClosedForms) {
  std::mt19937_64 rng(7);
  const std::size_t samples = 200000;
  auto column = [&](const GaussianState& s, Eigen::Index c) {
    const Eigen::MatrixXd d = sample_quadratures(s, samples, rng);
    return std::vector<double>(d.col(c).data(), d.col(c).data() + d.rows());
  };
  for (double n : {0.5, 1.316, 3.0}) {
    // Dense coding: decoded x and p of the two output modes.
    const DecodedResult d = run_experiment(ExperimentConfig::ideal(kR2dB));
    const double a2 = n - squeezing_photons(kR2dB);
    const double mi_dc = oracle::gaussian_mi_from_samples(a2 / 2, column(d.decoded_state, 0), rng) +
                         oracle::gaussian_mi_from_samples(a2 / 2, column(d.decoded_state, 3), rng);
    EXPECT_NEAR(mi_dc, i_dense_coding(n, kR2dB), 0.02 * i_dense_coding(n, kR2dB)) << n;

    // Coherent 2q: the same pipeline without squeezing.
    const DecodedResult c = run_experiment(ExperimentConfig::ideal(0.0));
    const double mi_2q = oracle::gaussian_mi_from_samples(n / 2, column(c.decoded_state, 0), rng) +
                         oracle::gaussian_mi_from_samples(n / 2, column(c.decoded_state, 3), rng);
    EXPECT_NEAR(mi_2q, i_coherent_2q(n), 0.02 * i_coherent_2q(n)) << n;

    // Coherent 1q: all power in x, <x> = sqrt2 Re(alpha).
    const double mi_1q = oracle::gaussian_mi_from_samples(2 * n, column(vacuum(1), 0), rng);
    EXPECT_NEAR(mi_1q, i_coherent_1q(n), 0.02 * i_coherent_1q(n)) << n;

    // Squeezed homodyne: displaced x-squeezed vacuum.
    const double mi_sq = oracle::gaussian_mi_from_samples(
        2 * a2, column(squeeze(vacuum(1), 0, kR2dB), 0), rng);
    EXPECT_NEAR(mi_sq, i_squeezed_homodyne(n, kR2dB), 0.02 * i_squeezed_homodyne(n, kR2dB)) << n;
  }
}

TEST(ChannelModel, LabelsAndFeasibility) {
  EXPECT_EQ(channel_label(ChannelModel::holevo()), "holevo_limit");
  EXPECT_EQ(channel_label(ChannelModel::dense_coding(0.5)), "dense_coding(r=0.5)");
  EXPECT_FALSE(ChannelModel::dense_coding(1.0).feasible(0.5));
  EXPECT_TRUE(ChannelModel::dense_coding(1.0).feasible(2.0));
  const auto curve = capacity_curve(ChannelModel::dense_coding(1.0), {0.0, 1.0, 2.0});
  EXPECT_FALSE(curve[0].has_value());
  EXPECT_FALSE(curve[1].has_value());
  ASSERT_TRUE(curve[2].has_value());
  EXPECT_NEAR(curve[2]->info_nats, oracle::dc(2.0, 1.0), 1e-12);
}

TEST(RootFinder, ConvergesAndRejectsBadBrackets) {
  const double root = find_root([](double x) { return x * x * x - 2.0; }, 0.0, 2.0, 1e-12);
  EXPECT_NEAR(root, std::cbrt(2.0), 1e-11);
  // Strongly skewed function where plain regula falsi stalls.
  const double skew = find_root([](double x) { return std::exp(20 * x) - 2.0; }, 0.0, 1.0, 1e-12);
  EXPECT_NEAR(skew, std::log(2.0) / 20, 1e-11);
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), NoSignChange);
  EXPECT_THROW(find_root([](double x) { return x; }, 1.0, -1.0), InvalidParameter);
}
