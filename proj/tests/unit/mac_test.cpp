#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "sidelink/error.hpp"
#include "sidelink/geometry.hpp"
#include "sidelink/mac.hpp"

namespace sidelink::mac {
namespace {

const McsTable& table() {
  static const McsTable t = calibrate_default_curves(McsTable::lte_cqi());
  return t;
}

geometry::Vehicle ue(geometry::VehicleId id, geometry::CellId cell) {
  geometry::Vehicle v;
  v.id = id;
  v.attached_cell = cell;
  return v;
}

TEST(DataVolume, ReferenceLoads) {
  EXPECT_DOUBLE_EQ(data_volume(256, 1920, 10), 39.3216e6);
  EXPECT_DOUBLE_EQ(data_volume(256, 96, 10), 1966080.0);
  EXPECT_DOUBLE_EQ(data_volume(1, 1, 1), 8.0);
}

TEST(RequiredSe, Examples) {
  EXPECT_DOUBLE_EQ(required_se(39.3216e6, 10e6), 3.93216);
  EXPECT_DOUBLE_EQ(required_se(19.6608e6, 10e6), 1.96608);
  EXPECT_DOUBLE_EQ(required_se(0, 10e6), 0.0);
  EXPECT_THROW(required_se(1, 0), SimError);
}

TEST(McsTable, DefaultEfficiencies) {
  const double expected[] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
                             2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
  const auto t = McsTable::lte_cqi();
  ASSERT_EQ(t.size(), 15u);
  for (std::size_t i = 0; i < 15; ++i) {
    EXPECT_EQ(t.entries()[i].spectral_efficiency, expected[i]);
    EXPECT_EQ(t.entries()[i].index, i + 1);
  }
}

TEST(McsTable, RejectsUnorderedEntries) {
  EXPECT_THROW(McsTable({{1, 1.0, 0, 2}, {2, 1.0, 0, 2}}), SimError);
  EXPECT_THROW(McsTable({{1, 2.0, 0, 2}, {2, 1.0, 0, 2}}), SimError);
  EXPECT_THROW(McsTable({}), SimError);
}

TEST(SelectMcs, Examples) {
  EXPECT_EQ(select_mcs(3.93216, table()).spectral_efficiency, 4.5234);
  EXPECT_EQ(select_mcs(0.39322, table()).spectral_efficiency, 0.6016);
  EXPECT_EQ(select_mcs(2.4063, table()).spectral_efficiency, 2.4063);
  try {
    select_mcs(5.6, table());
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::capacity_exceeded);
  }
}

TEST(SelectMcs, MinimalQualifyingEntryExhaustive) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> req(0.0, table().max_se());
  for (int i = 0; i < 5000; ++i) {
    const double r = i < 15 ? table().entries()[static_cast<std::size_t>(i)].spectral_efficiency : req(gen);
    const auto& chosen = select_mcs(r, table());
    EXPECT_GE(chosen.spectral_efficiency, r);
    for (const auto& e : table().entries()) {
      if (e.spectral_efficiency >= r) EXPECT_LE(chosen.spectral_efficiency, e.spectral_efficiency);
    }
    EXPECT_EQ(&select_mcs(chosen.spectral_efficiency, table()), &chosen);
  }
}

TEST(SelectMcs, ReferenceSweepLoads) {
  struct Row {
    double ivd;
    std::size_t ues;
    double volume_mbps;
    double se;
  };
  const Row rows[] = {{5, 1920, 39.3216, 4.5234}, {10, 960, 19.6608, 2.4063},
                      {20, 480, 9.8304, 1.1758},  {40, 240, 4.9152, 0.6016},
                      {50, 192, 3.9322, 0.6016},  {80, 120, 2.4576, 0.3770},
                      {100, 96, 1.9660, 0.2344}};
  for (const auto& row : rows) {
    geometry::ScenarioConfig sc;
    sc.ivd_m = row.ivd;
    const auto n = geometry::expected_vehicle_count(sc);
    EXPECT_EQ(n, row.ues);
    const double dv = data_volume(256, n, 10);
    EXPECT_LT(std::abs(dv / 1e6 - row.volume_mbps), 1e-4) << row.ivd;
    EXPECT_EQ(select_mcs(required_se(dv, 10e6), table()).spectral_efficiency, row.se) << row.ivd;
  }
}

TEST(Bler, AnchorsAndSaturation) {
  const McsEntry e{1, 1.0, 2.0, 2.0};
  EXPECT_DOUBLE_EQ(bler(2.0, e), 0.5);
  EXPECT_NEAR(bler(4.0, e), 0.01, 1e-12);
  EXPECT_EQ(bler(1e6, e), 0.0);
  EXPECT_EQ(bler(-1e6, e), 1.0);
  EXPECT_EQ(bler(INFINITY, e), 0.0);
  EXPECT_EQ(bler(-INFINITY, e), 1.0);
}

TEST(Bler, MonotoneAndOrderedAcrossMcs) {
  for (const auto& e : table().entries()) {
    double prev = 1.0;
    for (double s = -30; s <= 40; s += 0.01) {
      const double b = bler(s, e);
      EXPECT_LE(b, prev);
      EXPECT_GE(b, 0.0);
      EXPECT_LE(b, 1.0);
      prev = b;
    }
  }
  const auto entries = table().entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    for (double s = -10; s <= 30; s += 0.05) EXPECT_LE(bler(s, entries[i - 1]), bler(s, entries[i]));
  }
}

TEST(CalibrateDefaultCurves, Examples) {
  const McsTable one({{1, 1.0, 0, 1}});
  EXPECT_NEAR(calibrate_default_curves(one, 2.0).entries()[0].bler_threshold_db, 2.0, 1e-12);
  const McsTable low({{1, 0.1523, 0, 1}});
  const auto cal = calibrate_default_curves(low, 0.0, 3.0);
  EXPECT_NEAR(cal.entries()[0].bler_threshold_db, -9.533495582999263, 1e-9);
  EXPECT_EQ(cal.entries()[0].bler_slope_db, 3.0);

  const auto entries = table().entries();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    EXPECT_GT(entries[i].bler_threshold_db, entries[i - 1].bler_threshold_db);
  }
}

TEST(LoadMcsTableCsv, ReadsRowsAfterHeader) {
  const auto path = std::filesystem::temp_directory_path() / "sidelink_mcs_ok.csv";
  {
    std::ofstream f(path);
    f << "index,se,threshold_db,slope_db\n1,0.5,-1.5,1.0\n2,1.5,4.25,1.5\r\n\n";
  }
  const auto t = load_mcs_table_csv(path);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.entries()[1].index, 2u);
  EXPECT_EQ(t.entries()[1].bler_threshold_db, 4.25);
  EXPECT_EQ(t.entries()[1].bler_slope_db, 1.5);
  std::filesystem::remove(path);
}

TEST(LoadMcsTableCsv, Errors) {
  EXPECT_THROW(load_mcs_table_csv("/nonexistent/mcs.csv"), ConfigError);
  const auto path = std::filesystem::temp_directory_path() / "sidelink_mcs_bad.csv";
  {
    std::ofstream f(path);
    f << "index,se,threshold_db,slope_db\n1,0.5,oops,1\n";
  }
  try {
    load_mcs_table_csv(path);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "mcs_table_file");
  }
  std::filesystem::remove(path);
}

TEST(NumSlots, CapacityFormula) {
  const TrafficModel t{256, 10};
  EXPECT_EQ(num_slots(10e6, t, {13, 4.5234, 0, 2}), 2208u);
  EXPECT_EQ(num_slots(10e6, t, {1, 0.2344, 0, 2}), 114u);
  EXPECT_EQ(num_slots(1e3, t, {1, 0.1523, 0, 2}), 0u);
}

TEST(AllocateResources, ZeroSlotsIsCapacityExceeded) {
  Rng rng(1);
  const std::vector v{ue(0, 0)};
  try {
    allocate_resources(v, {1, 0.1523, 0, 2}, {256, 10}, 1e3, AllocationPolicy::round_robin, rng);
    FAIL();
  } catch (const SimError& e) {
    EXPECT_EQ(e.code(), ErrorCode::capacity_exceeded);
  }
}

TEST(AllocateResources, SingleCellOrthogonalWhenItFits) {
  Rng rng(1);
  std::vector<geometry::Vehicle> v;
  for (std::size_t i = 0; i < 114; ++i) v.push_back(ue(i, 0));
  const auto g = allocate_resources(v, {2, 0.2344, 0, 2}, {256, 10}, 10e6, AllocationPolicy::round_robin, rng);
  ASSERT_EQ(g.num_slots(), 114u);
  std::set<std::size_t> used;
  for (const auto& [id, slot] : g.assignment()) used.insert(slot);
  EXPECT_EQ(used.size(), 114u);
  for (const auto& x : v) EXPECT_TRUE(g.co_channel(x.id).empty());
}

TEST(AllocateResources, ReuseOneAcrossCells) {
  Rng rng(1);
  const std::vector v{ue(5, 1), ue(2, 0), ue(9, 1), ue(3, 0)};
  const auto g = allocate_resources(v, {2, 0.2344, 0, 2}, {256, 10}, 10e6, AllocationPolicy::round_robin, rng);
  EXPECT_EQ(g.slot_of(2), 0u);
  EXPECT_EQ(g.slot_of(5), 0u);
  EXPECT_EQ(g.slot_of(3), 1u);
  EXPECT_EQ(g.slot_of(9), 1u);
  EXPECT_EQ(g.co_channel(2), std::vector<geometry::VehicleId>{5});
  EXPECT_EQ(g.co_channel(5), std::vector<geometry::VehicleId>{2});
}

TEST(AllocateResources, OverloadedCellWrapsEvenly) {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + gen() % 600;
    std::vector<geometry::Vehicle> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(ue(i, i % 3));
    Rng rng(gen());
    const auto g = allocate_resources(v, {2, 0.2344, 0, 2}, {256, 10}, 10e6, AllocationPolicy::round_robin, rng);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> uses;
    std::map<std::size_t, std::size_t> per_cell;
    for (const auto& x : v) {
      ++uses[{x.attached_cell, g.slot_of(x.id)}];
      ++per_cell[x.attached_cell];
    }
    for (const auto& [key, count] : uses) {
      const std::size_t cap = (per_cell[key.first] + g.num_slots() - 1) / g.num_slots();
      EXPECT_LE(count, cap);
    }
  }
}

TEST(AllocateResources, RandomPolicyDeterministicPerSeed) {
  std::vector<geometry::Vehicle> v;
  for (std::size_t i = 0; i < 300; ++i) v.push_back(ue(i, i % 2));
  Rng a(77), b(77), c(78);
  const McsEntry m{2, 0.2344, 0, 2};
  const auto ga = allocate_resources(v, m, {256, 10}, 10e6, AllocationPolicy::random, a);
  const auto gb = allocate_resources(v, m, {256, 10}, 10e6, AllocationPolicy::random, b);
  const auto gc = allocate_resources(v, m, {256, 10}, 10e6, AllocationPolicy::random, c);
  EXPECT_EQ(ga.assignment(), gb.assignment());
  EXPECT_NE(ga.assignment(), gc.assignment());
  for (const auto& [id, slot] : ga.assignment()) EXPECT_LT(slot, ga.num_slots());
}

TEST(ParsePolicy, Names) {
  EXPECT_EQ(parse_allocation_policy("round_robin"), AllocationPolicy::round_robin);
  EXPECT_EQ(parse_allocation_policy("random"), AllocationPolicy::random);
  EXPECT_THROW(parse_allocation_policy("greedy"), ConfigError);
}

}  // namespace
}  // namespace sidelink::mac
