#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "surfdiff/rng.hpp"

using namespace surfdiff;

TEST_CASE("splitmix matches the published reference sequence") {
  // First outputs for state 0, as used by the xoshiro/xoroshiro seeding code.
  SplitMix g{0};
  CHECK(g.next() == 0xE220A8397B1DCDAFull);
  CHECK(g.next() == 0x6E789E6AA1B965F4ull);
  CHECK(g.next() == 0x06C45D188009454Full);
}

TEST_CASE("keyed words agree with sequential generation") {
  const std::uint64_t key = 0xDEADBEEFCAFEF00Dull;
  SplitMix g{key};
  for (std::uint64_t i = 0; i < 100; ++i) CHECK(keyed_word(key, i) == g.next());
}

TEST_CASE("unit interval mappings hit their documented ranges") {
  CHECK(u01_from(0) == 0.0);
  CHECK(u01_from(~0ull) < 1.0);
  CHECK(open01_from(0) > 0.0);
  CHECK(open01_from(~0ull) == 1.0);
  SplitMix g{42};
  for (int i = 0; i < 1000; ++i) {
    const double u = g.next_u01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 2, 3) == keyed_word(keyed_word(1, 2), 3));
}

TEST_CASE("normal pairs have standard moments") {
  SplitMix g{2024};
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const NormalPair z = normal_pair(g);
    sum += z.z0 + z.z1;
    sum_sq += z.z0 * z.z0 + z.z1 * z.z1;
    cross += z.z0 * z.z1;
  }
  const double mean = sum / (2.0 * n);
  const double var = sum_sq / (2.0 * n) - mean * mean;
  const double corr = cross / n;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(2.0 * n));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("noise pairs are counter addressable") {
  const std::uint64_t key = 77;
  SplitMix g{key};
  for (std::uint64_t step = 0; step < 50; ++step) {
    const NormalPair sequential = normal_pair(g);
    const NormalPair addressed = noise_pair(key, step);
    CHECK(addressed.z0 == sequential.z0);
    CHECK(addressed.z1 == sequential.z1);
  }
}

TEST_CASE("poisson counts match their first two moments") {
  SplitMix g{99};
  SUBCASE("zero mean is deterministic") {
    for (int i = 0; i < 10; ++i) CHECK(poisson_count(g, 0.0) == 0);
  }
  SUBCASE("moderate mean") {
    const double mean = 3.0;
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double c = static_cast<double>(poisson_count(g, mean));
      sum += c;
      sum_sq += c * c;
    }
    const double m = sum / n;
    const double v = sum_sq / n - m * m;
    CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
    CHECK(v == doctest::Approx(mean).epsilon(0.05));
  }
  SUBCASE("large mean exercises the chunked path") {
    const double mean = 1000.0;
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(poisson_count(g, mean));
    CHECK(std::abs(sum / n - mean) < 4.0 * std::sqrt(mean / n));
  }
  SUBCASE("negative mean is rejected") {
    CHECK_THROWS_AS(poisson_count(g, -1.0), std::invalid_argument);
  }
}
