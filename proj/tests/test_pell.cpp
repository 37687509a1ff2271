#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "unitcert/pell.hpp"

using namespace unitcert;

namespace {

void expect_unit(long d, const char* x, const char* y, int norm) {
  const QuadUnit u = fundamental_pell(d);
  EXPECT_EQ(u.x, Integer(x)) << "d = " << d;
  EXPECT_EQ(u.y, Integer(y)) << "d = " << d;
  EXPECT_EQ(u.norm, norm) << "d = " << d;
}

}  // namespace

TEST(Pell, WorkedExampleUnits) {
  expect_unit(133, "2588599", "224460", 1);
  expect_unit(266, "685", "42", 1);
  expect_unit(21, "55", "12", 1);
  expect_unit(42, "13", "2", 1);
  expect_unit(77, "351", "40", 1);
  expect_unit(154, "21295", "1716", 1);
  expect_unit(301, "5883392537695", "339113108232", 1);
  expect_unit(602, "687", "28", 1);
  expect_unit(413, "113399", "5580", 1);
  expect_unit(826, "222239304685", "7732694382", 1);
}

TEST(Pell, TwoByBruteForce) {
  long found = 0;
  for (long y = 1; y <= 10 && !found; ++y) {
    for (long x = 1; x <= 40; ++x) {
      if (x * x - 2 * y * y == 1 || x * x - 2 * y * y == -1) {
        found = y;
        expect_unit(2, std::to_string(x).c_str(), std::to_string(y).c_str(), x * x - 2 * y * y);
        break;
      }
    }
  }
  EXPECT_EQ(found, 1);
}

TEST(Pell, RejectsBadDiscriminants) {
  for (long d : {0L, 1L, -5L, 4L, 12L, 18L}) EXPECT_THROW(fundamental_pell(d), unitcert::invalid_argument) << d;
}

TEST(Pell, MinimalAndCorrectNormUpTo150) {
  int count = 0;
  for (long d = 2; d <= 150; ++d) {
    if (oracle::squarefree_class(d) != d) continue;
    const QuadUnit u = fundamental_pell(d);
    ASSERT_TRUE(u.satisfies_norm_equation()) << d;
    EXPECT_TRUE(oracle::pell_fundamental(d, u.x, u.y, u.norm)) << "eps_" << d << " is not minimal";
    ++count;
  }
  EXPECT_EQ(count, 91);
}

TEST(Pell, NegativeNormMatchesDirectSearch) {
  // negative Pell is solvable for these d and not for the others checked
  for (long d : {2L, 5L, 10L, 13L, 17L, 26L, 29L, 37L, 41L, 53L, 58L, 61L, 65L, 73L, 74L, 82L, 85L, 89L, 97L}) {
    EXPECT_EQ(fundamental_pell(d).norm, -1) << d;
  }
  for (long d : {3L, 6L, 7L, 11L, 14L, 15L, 21L, 34L, 133L, 826L}) EXPECT_EQ(fundamental_pell(d).norm, 1) << d;
}

TEST(PellCache, RecomputesCorruptEntries) {
  PellCache cache;
  cache.inject(QuadUnit{Integer(21), Integer(56), Integer(12), 1});
  const QuadUnit u = cache.unit(21);
  EXPECT_EQ(u.x, 55);
  EXPECT_EQ(cache.rejected_entries(), 1U);
  EXPECT_EQ(cache.unit(21).x, 55);
  EXPECT_EQ(cache.rejected_entries(), 1U);
}

TEST(PellCache, PersistsAndReloads) {
  const auto path = std::filesystem::temp_directory_path() / "unitcert_pell_cache_test.json";
  std::filesystem::remove(path);
  {
    PellCache cache(path);
    cache.unit(826);
    cache.unit(133);
    cache.save();
  }
  ASSERT_TRUE(std::filesystem::exists(path));
  {
    std::ifstream in(path);
    const auto doc = nlohmann::json::parse(in);
    EXPECT_EQ(doc.at("826").at("x").get<std::string>(), "222239304685");
    EXPECT_EQ(doc.at("826").at("norm").get<std::string>(), "1");
  }
  {
    std::ofstream out(path);
    out << R"({"826": {"x": "222239304686", "y": "7732694382", "norm": "1"}, "133": {"x": "oops"}})";
  }
  PellCache reloaded(path);
  EXPECT_EQ(reloaded.unit(826).x, Integer("222239304685"));
  EXPECT_EQ(reloaded.unit(133).x, 2588599);
  EXPECT_EQ(reloaded.rejected_entries(), 2U);
  std::filesystem::remove(path);
}
