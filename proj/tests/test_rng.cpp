#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "specsense/rng.hpp"

using namespace specsense;

TEST_CASE("identical stream keys reproduce the same sequence") {
  RngStream a(42, make_tag(StreamPurpose::Noise, 3), 7, 1);
  RngStream b(42, make_tag(StreamPurpose::Noise, 3), 7, 1);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct stream coordinates give distinct sequences") {
  RngStream base(42, make_tag(StreamPurpose::Noise), 0, 0);
  RngStream seed(43, make_tag(StreamPurpose::Noise), 0, 0);
  RngStream tag(42, make_tag(StreamPurpose::ChannelGain), 0, 0);
  RngStream w1(42, make_tag(StreamPurpose::Noise), 1, 0);
  RngStream w2(42, make_tag(StreamPurpose::Noise), 0, 1);
  const auto v = base.next_u64();
  CHECK(v != seed.next_u64());
  CHECK(v != tag.next_u64());
  CHECK(v != w1.next_u64());
  CHECK(v != w2.next_u64());
}

TEST_CASE("philox blocks for consecutive counters do not collide") {
  std::set<std::uint64_t> seen;
  RngStream s(1, make_tag(StreamPurpose::General), 0, 0);
  for (int i = 0; i < 4096; ++i) seen.insert(s.next_u64());
  CHECK(seen.size() == 4096);
}

TEST_CASE("uniform ranges") {
  RngStream s(5, make_tag(StreamPurpose::General), 0, 0);
  for (int i = 0; i < 20000; ++i) {
    const double u = s.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = s.uniform_pos();
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("normal moments") {
  RngStream s(11, make_tag(StreamPurpose::General), 0, 0);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("complex normal is circular with the requested power") {
  RngStream s(13, make_tag(StreamPurpose::General), 0, 0);
  const int n = 200000;
  double power = 0.0, re_im = 0.0, re2 = 0.0, im2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = s.complex_normal(2.0);
    power += std::norm(z);
    re_im += z.real() * z.imag();
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
  }
  CHECK(power / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(re2 / n == doctest::Approx(1.0).epsilon(0.03));   // I variance
  CHECK(im2 / n == doctest::Approx(1.0).epsilon(0.03));   // Q variance
  CHECK(std::fabs(re_im / n) < 0.02);                     // I/Q decorrelated
}

TEST_CASE("gamma draw moments") {
  RngStream s(17, make_tag(StreamPurpose::General), 0, 0);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = s.gamma(3.0, 2.0);
    sum += g;
    sumsq += g * g;
  }
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(6.0).epsilon(0.02));       // shape*scale
  CHECK(sumsq / n - mean * mean == doctest::Approx(12.0).epsilon(0.05));
}

TEST_CASE("gamma below shape 1 stays positive with the right mean") {
  RngStream s(19, make_tag(StreamPurpose::General), 0, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double g = s.gamma(0.5, 1.0);
    CHECK(g > 0.0);
    sum += g;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("exponential mean") {
  RngStream s(23, make_tag(StreamPurpose::General), 0, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += s.exponential(4.0);
  CHECK(sum / n == doctest::Approx(0.25).epsilon(0.03));
}
