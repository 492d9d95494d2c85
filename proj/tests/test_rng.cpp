#include <doctest.h>

#include <cstdint>
#include <set>

#include "hatchling/rng.hpp"

using namespace hatchling;

// The sampling stream is part of the artifact's contract: golden trial data
// bakes in these exact draws. The frozen values below were produced by the
// shipped generator once and must never drift.

TEST_CASE("engine words match the frozen stream") {
  SampleRng rng(42);
  CHECK(rng.next_u64() == 13930160852258120406ull);
  CHECK(rng.next_u64() == 11788048577503494824ull);
  CHECK(rng.next_u64() == 13874630024467741450ull);
}

TEST_CASE("uniform01 matches the frozen stream and stays in range") {
  SampleRng rng(42);
  CHECK(rng.uniform01() == 0.75515553295453897);
  CHECK(rng.uniform01() == 0.63903139385469743);
  CHECK(rng.uniform01() == 0.7521452007480266);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("normal draws match the frozen stream") {
  SampleRng rng(42);
  CHECK(rng.normal(0.0, 1.0) == -0.48121769980184492);
  CHECK(rng.normal(0.0, 1.0) == 0.49458385623521345);
  CHECK(rng.normal(0.0, 1.0) == 0.37455426884981358);
}

TEST_CASE("a normal draw consumes exactly two engine words") {
  SampleRng a(42);
  a.normal(0.0, 1.0);
  SampleRng b(42);
  b.next_u64();
  b.next_u64();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("zero stddev pins the draw to the mean but still burns words") {
  SampleRng a(5);
  CHECK(a.normal(0.97, 0.0) == 0.97);
  SampleRng b(5);
  b.normal(0.97, 123.0);
  // Both streams sit at the same engine position afterwards.
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("bernoulli endpoints are deterministic") {
  SampleRng rng(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.bernoulli(1.0));
    CHECK(!rng.bernoulli(0.0));
  }
}

TEST_CASE("identical seeds replay identical streams") {
  SampleRng a(123456789);
  SampleRng b(123456789);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  SampleRng c(123456790);
  CHECK(SampleRng(123456789).next_u64() != c.next_u64());
}

TEST_CASE("normal sample moments land near the target") {
  SampleRng rng(271828);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal(10.0, 2.0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean - 10.0) < 3.0 * 2.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 4.0) < 0.1);
}

TEST_CASE("splitmix64 matches its reference vectors") {
  CHECK(splitmix64(0) == 16294208416658607535ull);
  CHECK(splitmix64(1) == 10451216379200822465ull);
}

TEST_CASE("fnv1a hashes are stable") {
  CHECK(fnv1a("dry_sand") == 11934809829248637241ull);
  CHECK(fnv1a("") == 0xCBF29CE484222325ull);
}

TEST_CASE("trial seeds are frozen and collision-free on a working grid") {
  CHECK(derive_trial_seed(42, 0, 0) == 17108450196074574238ull);
  CHECK(derive_trial_seed(42, 3, 17) == 10604298298060862825ull);

  std::set<std::uint64_t> seen;
  for (std::uint64_t config = 0; config < 64; ++config) {
    for (std::uint64_t trial = 0; trial < 256; ++trial) {
      seen.insert(derive_trial_seed(42, config, trial));
    }
  }
  CHECK(seen.size() == 64u * 256u);
}

TEST_CASE("trial seeds do not depend on evaluation order") {
  // Values are pure functions of (master, config, trial); spot-check that
  // interleaving queries cannot perturb them.
  const std::uint64_t direct = derive_trial_seed(9, 5, 5);
  derive_trial_seed(9, 1, 1);
  derive_trial_seed(9, 7, 0);
  CHECK(derive_trial_seed(9, 5, 5) == direct);
}
