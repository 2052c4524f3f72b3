#include "floodgate/errors.hpp"
#include "floodgate/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace floodgate;

TEST_CASE("exponential mean converges to 1/rate")
{
  for (double rate : {0.5, 9.0, 1e4}) {
    RandomStream rng(42);
    const int n = 1'000'000;
    long double sum = 0.0L;
    for (int i = 0; i < n; ++i) {
      sum += sample_exponential(rate, rng);
    }
    double mean = static_cast<double>(sum / n);
    CHECK(std::abs(mean - 1.0 / rate) <= 0.01 / rate);
  }
}

TEST_CASE("inverse CDF at the median")
{
  CHECK(exponential_from_uniform(0.5, 1.0) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(exponential_from_uniform(0.0, 3.0) == 0.0);
}

TEST_CASE("non-positive rate is rejected")
{
  RandomStream rng(1);
  CHECK_THROWS_AS(sample_exponential(0.0, rng), InvalidParameter);
  CHECK_THROWS_AS(sample_exponential(-2.0, rng), InvalidParameter);
}

TEST_CASE("derived streams are reproducible and distinct")
{
  auto a = RandomStream::derive(7, 1);
  auto b = RandomStream::derive(7, 1);
  auto c = RandomStream::derive(7, 2);
  auto d = RandomStream::derive(8, 1);
  auto x = a.next_raw();
  CHECK(x == b.next_raw());
  CHECK(x != c.next_raw());
  CHECK(x != d.next_raw());

  RandomStream u(3);
  for (int i = 0; i < 10000; ++i) {
    double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}
