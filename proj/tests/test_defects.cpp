#include "cmol/defects.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cmol;

TEST(DefectPdf, ClosedFormValues) {
  const Coord c{5, 5};
  EXPECT_NEAR(defect_pdf(5, 5, c, 3.0), 0.1330, 5e-5);
  EXPECT_NEAR(defect_pdf(5, 5, c, 6.0), 0.0665, 5e-5);
  // one sigma away the density drops by exp(-1/2)
  EXPECT_NEAR(defect_pdf(8, 5, c, 3.0) / defect_pdf(5, 5, c, 3.0), std::exp(-0.5), 1e-12);
  EXPECT_DOUBLE_EQ(defect_pdf(2, 7, c, 3.0), defect_pdf(8, 3, c, 3.0));
  EXPECT_GT(defect_pdf(5, 5, c, 0.1), 1.0);
}

TEST(Inject, SameSeedSameDefects) {
  const Fabric f(8, 8, 3);
  InjectionConfig cfg;
  cfg.seed = 99;
  const auto a = inject(f, cfg);
  const auto b = inject(f, cfg);
  EXPECT_EQ(a.defects, b.defects);
  EXPECT_EQ(a.center, b.center);
  cfg.seed = 100;
  EXPECT_NE(inject(f, cfg).defects, a.defects);
}

TEST(Inject, OnlyRequestedKindsAppearAndApply) {
  const Fabric f(8, 8, 3);
  InjectionConfig cfg;
  cfg.center = Coord{4, 4};
  cfg.kinds = {DefectKind::StuckOpen};
  const auto inj = inject(f, cfg);
  ASSERT_FALSE(inj.defects.empty());
  for (const auto& d : inj.defects) {
    EXPECT_EQ(d.kind, DefectKind::StuckOpen);
    EXPECT_FALSE(inj.fabric.can_drive(d.a, *d.b));
  }
  EXPECT_EQ(inj.fabric.defects(), inj.defects);
}

TEST(Inject, TinySigmaHitsOnlyTheCenter) {
  const Fabric f(6, 6, 3);
  InjectionConfig cfg;
  cfg.center = Coord{2, 3};
  cfg.sigma = 0.05;
  cfg.kinds = {DefectKind::DeadCell};
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    const auto inj = inject(f, cfg);
    ASSERT_EQ(inj.defects.size(), 1u);
    EXPECT_EQ(inj.defects[0].a, (Coord{2, 3}));
  }
}

TEST(Inject, SitesClusterAroundTheCenter) {
  const Fabric f(21, 21, 3);
  InjectionConfig cfg;
  cfg.center = Coord{12, 8};
  cfg.sigma = 3.0;
  cfg.kinds = {DefectKind::DeadCell, DefectKind::WireBreak};
  double sx = 0, sy = 0;
  std::size_t n = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    cfg.seed = seed;
    for (const auto& d : inject(f, cfg).defects) {
      sx += d.a.x;
      sy += d.a.y;
      ++n;
    }
  }
  ASSERT_GT(n, 500u);
  EXPECT_NEAR(sx / n, 12.0, 0.5);
  EXPECT_NEAR(sy / n, 8.0, 0.5);
}

TEST(Inject, WireBreakFractionsStayInRange) {
  const Fabric f(10, 10, 4);
  InjectionConfig cfg;
  cfg.kinds = {DefectKind::WireBreak};
  cfg.sigma = 1.0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    cfg.seed = seed;
    for (const auto& d : inject(f, cfg).defects) {
      EXPECT_GE(d.break_fraction, 0.2);
      EXPECT_LT(d.break_fraction, 0.8);
    }
  }
}

// Expected number of hits equals the summed density over every candidate site.
TEST(Inject, DefectCountMatchesSummedDensity) {
  const Fabric f(9, 9, 3);
  InjectionConfig cfg;
  cfg.center = Coord{4, 4};
  cfg.sigma = 3.0;
  cfg.kinds = {DefectKind::DeadCell};
  double expected = 0;
  for (Coord c : f.cells())
    expected += defect_pdf(c.x, c.y, *cfg.center, cfg.sigma);
  double total = 0;
  const int runs = 2000;
  for (int seed = 1; seed <= runs; ++seed) {
    cfg.seed = static_cast<std::uint64_t>(seed);
    total += static_cast<double>(inject(f, cfg).defects.size());
  }
  EXPECT_NEAR(total / runs, expected, 0.1 * expected);
}
