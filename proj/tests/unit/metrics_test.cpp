#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "sidelink/error.hpp"
#include "sidelink/metrics.hpp"

namespace sidelink::metrics {
namespace {

const mac::McsEntry kMcs{1, 1.0, 0.0, 2.0};

// Inverse of the logistic BLER curve for kMcs.
double sinr_for_bler(double b) {
  return kMcs.bler_threshold_db + std::log(1.0 / b - 1.0) * kMcs.bler_slope_db / std::log(99.0);
}

std::vector<linkbudget::LinkBudgetRecord> records(const std::vector<double>& sinrs,
                                                  geometry::VehicleId tx = 4) {
  std::vector<linkbudget::LinkBudgetRecord> out;
  geometry::VehicleId rx = 100;
  for (double s : sinrs) {
    linkbudget::LinkBudgetRecord r;
    r.tx_id = tx;
    r.rx_id = rx++;
    r.sinr_db = s;
    out.push_back(r);
  }
  return out;
}

TEST(PrrForTx, Saturation) {
  Rng rng(1);
  EXPECT_EQ(prr_for_tx(records({60, 60, 60}), kMcs, {}, rng).prr, 1.0);
  EXPECT_EQ(prr_for_tx(records({-40, -40}), kMcs, {}, rng).prr, 0.0);
}

TEST(PrrForTx, ThresholdCount) {
  Rng rng(1);
  const auto s = prr_for_tx(records({sinr_for_bler(0.001), sinr_for_bler(0.5), sinr_for_bler(0.009)}),
                            kMcs, {}, rng);
  EXPECT_EQ(s.tx_id, 4u);
  EXPECT_EQ(s.num_in_range, 3u);
  EXPECT_EQ(s.num_success, 2u);
  EXPECT_NEAR(*s.prr, 2.0 / 3.0, 1e-15);
}

TEST(PrrForTx, EmptyIsUndefined) {
  Rng rng(1);
  const auto s = prr_for_tx({}, kMcs, {}, rng);
  EXPECT_EQ(s.num_in_range, 0u);
  EXPECT_FALSE(s.prr.has_value());
}

TEST(PrrForTx, HalfDuplexHandling) {
  Rng rng(1);
  auto recs = records({60, 60, 60});
  recs[1].half_duplex_skipped = true;
  const auto excluded = prr_for_tx(recs, kMcs, {}, rng);
  EXPECT_EQ(excluded.num_in_range, 2u);
  EXPECT_EQ(excluded.prr, 1.0);

  PrrOptions loss;
  loss.halfduplex_as_loss = true;
  const auto counted = prr_for_tx(recs, kMcs, loss, rng);
  EXPECT_EQ(counted.num_in_range, 3u);
  EXPECT_NEAR(*counted.prr, 2.0 / 3.0, 1e-15);
}

TEST(PrrForTx, MixedTransmittersRejected) {
  Rng rng(1);
  auto recs = records({1, 2});
  recs[1].tx_id = 9;
  EXPECT_THROW(prr_for_tx(recs, kMcs, {}, rng), SimError);
}

TEST(PrrForTx, InvariantUnderRelabeling) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> sinr(3, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> s(20);
    for (auto& x : s) x = sinr(gen);
    auto recs = records(s);
    Rng rng(1);
    const auto a = prr_for_tx(recs, kMcs, {}, rng);
    std::shuffle(recs.begin(), recs.end(), gen);
    for (auto& r : recs) r.rx_id = gen();
    const auto b = prr_for_tx(recs, kMcs, {}, rng);
    EXPECT_EQ(a.num_success, b.num_success);
  }
}

TEST(PrrForTx, DeterministicNonIncreasingUnderLowerSinr) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> sinr(3, 6);
  std::uniform_real_distribution<double> drop(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> s(15);
    for (auto& x : s) x = sinr(gen);
    auto worse = s;
    for (auto& x : worse) x -= drop(gen);
    Rng rng(1);
    EXPECT_LE(prr_for_tx(records(worse), kMcs, {}, rng).num_success,
              prr_for_tx(records(s), kMcs, {}, rng).num_success);
  }
}

TEST(PrrForTx, BernoulliConvergesToMeanSuccessProbability) {
  const std::vector<double> blers{0.02, 0.1, 0.3, 0.5, 0.7, 0.95};
  std::vector<double> s;
  double expected = 0.0;
  for (double b : blers) {
    s.push_back(sinr_for_bler(b));
    expected += (1.0 - b) / static_cast<double>(blers.size());
  }
  PrrOptions opt;
  opt.mode = PrrMode::bernoulli;
  Rng rng(99);
  const int reps = 20'000;
  PrrSample total = prr_for_tx(records(s), kMcs, opt, rng);
  for (int i = 1; i < reps; ++i) total = combine(total, prr_for_tx(records(s), kMcs, opt, rng));
  double var = 0.0;
  for (double b : blers) var += b * (1.0 - b);
  const double sigma = std::sqrt(var) / static_cast<double>(blers.size()) / std::sqrt(double(reps));
  EXPECT_NEAR(*total.prr, expected, 3.0 * sigma);
}

TEST(Aggregate, Examples) {
  const std::vector<std::vector<PrrSample>> one{{{0, 2, 2, 1.0}, {1, 2, 1, 0.5}}};
  auto r = aggregate(one);
  EXPECT_DOUBLE_EQ(r.mean_prr, 0.75);
  EXPECT_EQ(r.stderr_prr, 0.0);

  const std::vector<std::vector<PrrSample>> two{{{0, 10, 8, 0.8}}, {{0, 10, 9, 0.9}}};
  r = aggregate(two);
  EXPECT_NEAR(r.mean_prr, 0.85, 1e-15);
  EXPECT_NEAR(r.stderr_prr, 0.05, 1e-12);
  EXPECT_EQ(r.per_seed_prr.size(), 2u);

  const std::vector<std::vector<PrrSample>> flat{{{0, 4, 3, 0.75}}, {{0, 4, 3, 0.75}}, {{1, 4, 3, 0.75}}};
  r = aggregate(flat);
  EXPECT_DOUBLE_EQ(r.mean_prr, 0.75);
  EXPECT_DOUBLE_EQ(r.stderr_prr, 0.0);
}

TEST(Aggregate, UndefinedSamplesExcluded) {
  const std::vector<std::vector<PrrSample>> s{{{0, 0, 0, std::nullopt}, {1, 4, 2, 0.5}}};
  EXPECT_DOUBLE_EQ(aggregate(s).mean_prr, 0.5);
  const std::vector<std::vector<PrrSample>> none{{{0, 0, 0, std::nullopt}}, {}};
  try {
    aggregate(none);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::no_samples);
  }
}

}  // namespace
}  // namespace sidelink::metrics
