#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sidelink/error.hpp"
#include "sidelink/linkbudget.hpp"

namespace sidelink::linkbudget {
namespace {

geometry::Vehicle at(geometry::VehicleId id, double x, double y = 2.0) {
  geometry::Vehicle v;
  v.id = id;
  v.position = {x, y};
  return v;
}

channel::ChannelParams no_shadowing() {
  channel::ChannelParams p;
  p.shadowing_enabled = false;
  return p;
}

TEST(ReceivedPower, Examples) {
  EXPECT_NEAR(received_power(24, 0, 3, 44.437640146122504), -17.437640146122504, 1e-12);
  EXPECT_DOUBLE_EQ(received_power(24, 0, 3, 0), 27.0);
  EXPECT_DOUBLE_EQ(received_power(0, 0, 0, 100), -100.0);
}

TEST(NoisePower, Examples) {
  EXPECT_DOUBLE_EQ(noise_power(-174, 9, 10e6), -95.0);
  EXPECT_DOUBLE_EQ(noise_power(-174, 0, 1), -174.0);
  EXPECT_NEAR(noise_power(-174, 9, 180e3), -112.44727494896694, 1e-9);
  EXPECT_THROW(noise_power(-174, 9, 0), SimError);
}

TEST(Sinr, Examples) {
  EXPECT_NEAR(sinr(-95, {}, -95), 0.0, 1e-12);
  const double one[] = {-95.0};
  EXPECT_NEAR(sinr(-90, one, -95), 1.9897000433601884, 1e-9);
  const double tiny[] = {-200.0};
  EXPECT_NEAR(sinr(-90, tiny, -95), 5.0, 1e-6);
}

TEST(BuildLinkBudgets, NoInterferersGivesSnr) {
  const channel::LinkChannel ch(channel::ChannelParams{}, 1.5, 35, 3);
  const auto tx = at(0, 1000);
  const std::vector<geometry::Vehicle> rx{at(1, 1100), at(2, 1300, 6), at(3, 700, 10)};
  const auto recs = build_link_budgets(tx, rx, {}, ch, RadioParams{});
  ASSERT_EQ(recs.size(), 3u);
  for (const auto& r : recs) {
    EXPECT_EQ(r.interference_power_dbm, kNoPower);
    EXPECT_FALSE(r.half_duplex_skipped);
    EXPECT_NEAR(r.sinr_db, r.rx_power_dbm - r.noise_power_dbm, 1e-9);
    EXPECT_DOUBLE_EQ(r.noise_power_dbm, -95.0);
    EXPECT_NEAR(r.rx_power_dbm, 27.0 - r.pathloss_db - r.shadowing_db, 1e-12);
  }
}

TEST(BuildLinkBudgets, CoLocatedInterfererHandComputed) {
  const channel::LinkChannel ch(no_shadowing(), 1.5, 35, 3);
  const auto tx = at(0, 1000);
  const auto intf = at(9, 1000);
  const std::vector<geometry::Vehicle> rx{at(1, 1050), at(2, 1250), at(3, 900, 14)};
  const auto recs = build_link_budgets(tx, rx, std::vector{intf}, ch, RadioParams{});
  for (std::size_t i = 0; i < rx.size(); ++i) {
    // Independent evaluation: equal distances => equal received powers p.
    const double d = std::hypot(rx[i].position.x - 1000.0, rx[i].position.y - 2.0);
    const double pl = d < 177.12253455021875
                          ? 21.5 * std::log10(d) + 20 * std::log10(5.9 / 5.0)
                          : 40 * std::log10(d) + 10.5 - 37 * std::log10(1.5) + 1.5 * std::log10(5.9 / 5.0);
    const double p_mw = std::pow(10.0, (27.0 - pl) / 10.0);
    const double n_mw = std::pow(10.0, -95.0 / 10.0);
    EXPECT_NEAR(recs[i].sinr_db, 10 * std::log10(p_mw / (p_mw + n_mw)), 1e-9);
    EXPECT_NEAR(recs[i].interference_power_dbm, recs[i].rx_power_dbm, 1e-9);
  }
}

TEST(BuildLinkBudgets, HalfDuplexReceiverSkipped) {
  const channel::LinkChannel ch(channel::ChannelParams{}, 1.5, 35, 3);
  const auto tx = at(0, 1000);
  const std::vector<geometry::Vehicle> rx{at(1, 1100), at(2, 1200)};
  const std::vector<geometry::Vehicle> intf{at(2, 1200), at(7, 3000)};
  const auto recs = build_link_budgets(tx, rx, intf, ch, RadioParams{});
  EXPECT_FALSE(recs[0].half_duplex_skipped);
  EXPECT_TRUE(recs[1].half_duplex_skipped);
  EXPECT_EQ(recs[1].sinr_db, kNoPower);
}

TEST(BuildLinkBudgets, TransmitterInInterfererListRejected) {
  const channel::LinkChannel ch(channel::ChannelParams{}, 1.5, 35, 3);
  const auto tx = at(0, 1000);
  EXPECT_THROW(build_link_budgets(tx, std::vector{at(1, 1100)}, std::vector{tx}, ch, RadioParams{}),
               SimError);
}

class RandomLinks : public ::testing::Test {
 protected:
  std::mt19937_64 gen{12345};
  std::uniform_real_distribution<double> x{0, 3000};
  std::uniform_real_distribution<double> y{0, 24};

  std::vector<geometry::Vehicle> scatter(std::size_t n, geometry::VehicleId first) {
    std::vector<geometry::Vehicle> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(first + i, x(gen), y(gen)));
    return out;
  }
};

TEST_F(RandomLinks, DbLinearRoundTrip) {
  for (int trial = 0; trial < 200; ++trial) {
    const channel::LinkChannel ch(channel::ChannelParams{}, 1.5, 35, gen());
    const auto tx = at(0, x(gen), y(gen));
    const auto rx = scatter(8, 1);
    const auto intf = scatter(trial % 5, 100);
    for (const auto& r : build_link_budgets(tx, rx, intf, ch, RadioParams{})) {
      const double i_mw = r.interference_power_dbm == kNoPower ? 0.0 : dbm_to_mw(r.interference_power_dbm);
      const double recomputed = 10 * std::log10(dbm_to_mw(r.rx_power_dbm) /
                                                (i_mw + dbm_to_mw(r.noise_power_dbm)));
      EXPECT_NEAR(recomputed, r.sinr_db, 1e-9);
    }
  }
}

TEST_F(RandomLinks, InterfererOrderIrrelevant) {
  for (int trial = 0; trial < 100; ++trial) {
    const channel::LinkChannel ch(channel::ChannelParams{}, 1.5, 35, gen());
    const auto tx = at(0, x(gen), y(gen));
    const auto rx = scatter(6, 1);
    auto intf = scatter(6, 100);
    const auto a = build_link_budgets(tx, rx, intf, ch, RadioParams{});
    std::shuffle(intf.begin(), intf.end(), gen);
    const auto b = build_link_budgets(tx, rx, intf, ch, RadioParams{});
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i].sinr_db, b[i].sinr_db, 1e-9);
  }
}

TEST_F(RandomLinks, AddingInterfererNeverRaisesSinr) {
  for (int trial = 0; trial < 300; ++trial) {
    const channel::LinkChannel ch(channel::ChannelParams{}, 1.5, 35, gen());
    const auto tx = at(0, x(gen), y(gen));
    const auto rx = scatter(5, 1);
    auto intf = scatter(trial % 4, 100);
    const auto before = build_link_budgets(tx, rx, intf, ch, RadioParams{});
    intf.push_back(at(500, x(gen), y(gen)));
    const auto after = build_link_budgets(tx, rx, intf, ch, RadioParams{});
    for (std::size_t i = 0; i < rx.size(); ++i) EXPECT_LE(after[i].sinr_db, before[i].sinr_db);
  }
}

}  // namespace
}  // namespace sidelink::linkbudget
