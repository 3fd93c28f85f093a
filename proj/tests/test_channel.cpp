#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "vecirs/channel.hpp"

using namespace vecirs;
using std::numbers::pi;

TEST_CASE("path loss") {
  CHECK(path_loss(1.0, 2.0, 1e-3) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(path_loss(100.0, 2.0, 1e-3) == doctest::Approx(1e-7).epsilon(1e-12));
  CHECK(path_loss(10.0, 3.5, 1e-3) == doctest::Approx(3.16227766e-7).epsilon(1e-8));
  CHECK(path_loss(0.2, 3.0, 1e-3) == path_loss(1.0, 3.0, 1e-3));  // clamped below 1 m
  double prev = path_loss(1.0, 2.2, 1e-3);
  for (double d = 1.5; d < 1000.0; d *= 1.5) {
    const double pl = path_loss(d, 2.2, 1e-3);
    CHECK(pl > 0.0);
    CHECK(pl < prev);
    prev = pl;
  }
  CHECK_THROWS(path_loss(std::numeric_limits<double>::quiet_NaN(), 2.0, 1e-3));
}

TEST_CASE("fading draws have unit average power") {
  Rng rng(7);
  auto mean_power = [](const std::vector<ComplexCoeff>& v) {
    double s = 0.0;
    for (auto c : v) s += std::norm(c);
    return s / static_cast<double>(v.size());
  };
  CHECK(mean_power(sample_fading(FadingKind::rayleigh(), 100000, rng)) ==
        doctest::Approx(1.0).epsilon(0.02));
  CHECK(mean_power(sample_fading(FadingKind::rician(10.0), 100000, rng)) ==
        doctest::Approx(1.0).epsilon(0.02));

  const auto los = sample_fading(FadingKind::rician(std::numeric_limits<double>::infinity()), 8, rng);
  for (auto c : los) CHECK(std::abs(c) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(los.front() == los.back());
}

TEST_CASE("cascaded channel") {
  const std::vector<ComplexCoeff> none;
  CHECK(cascaded_channel(none, none, PhaseConfig{}) == ComplexCoeff(0.0, 0.0));

  const std::vector<ComplexCoeff> ones{1.0, 1.0};
  const ComplexCoeff two = cascaded_channel(ones, ones, PhaseConfig{{0.0, 0.0}});
  CHECK(two.real() == doctest::Approx(2.0));
  CHECK(two.imag() == doctest::Approx(0.0));

  const std::vector<ComplexCoeff> j{{0.0, 1.0}}, one{1.0};
  const ComplexCoeff c = cascaded_channel(j, one, PhaseConfig{{3.0 * pi / 2.0}});
  CHECK(c.real() == doctest::Approx(1.0));
  CHECK(std::abs(c.imag()) < 1e-15);

  CHECK_THROWS(cascaded_channel(ones, one, PhaseConfig{{0.0, 0.0}}));
}

TEST_CASE("optimal phases") {
  const std::vector<ComplexCoeff> pos{0.5, 2.0, 1.0};
  for (double t : optimal_phases(1.0, pos, pos).phases) CHECK(t == doctest::Approx(0.0));

  const std::vector<ComplexCoeff> j{{0.0, 1.0}}, one{1.0};
  const PhaseConfig p = optimal_phases(1.0, j, one);
  REQUIRE(p.size() == 1);
  CHECK(p.phases[0] == doctest::Approx(3.0 * pi / 2.0));

  oracle::Gen gen(11);
  std::vector<ComplexCoeff> h(30), g(30);
  for (auto& x : h) x = std::polar(1.0, gen.range(0.0, 2.0 * pi));
  for (auto& x : g) x = std::polar(1.0, gen.range(0.0, 2.0 * pi));
  const PhaseConfig q = optimal_phases(0.0, h, g);
  const double gain = effective_gain(0.0, cascaded_channel(h, g, q), 1.0, 1.0);
  CHECK(gain == doctest::Approx(900.0).epsilon(1e-12));
  for (double t : q.phases) {
    CHECK(t >= 0.0);
    CHECK(t < 2.0 * pi);
  }
}

TEST_CASE("phase quantization") {
  const PhaseConfig in{{0.1, 1.2, 2.0, 3.5, 4.9, 6.2}};
  for (double t : quantize_phases(in, 1).phases) CHECK((t == 0.0 || t == doctest::Approx(pi)));

  const PhaseConfig q2 = quantize_phases(PhaseConfig{{0.3 * pi}}, 2);
  CHECK(q2.phases[0] == doctest::Approx(pi / 2.0));

  // 0.25*pi is exactly between 0 and pi/2: lower level wins.
  CHECK(quantize_phases(PhaseConfig{{0.25 * pi}}, 2).phases[0] == 0.0);
  // Nearest level wraps around 2*pi back to 0.
  CHECK(quantize_phases(PhaseConfig{{1.95 * pi}}, 2).phases[0] == 0.0);

  CHECK(quantize_phases(in, std::nullopt).phases == in.phases);
}

TEST_CASE("effective gain and rate") {
  CHECK(effective_gain(0.5, 0.0, 2.0, 1e-14) == doctest::Approx(2.0 * 0.25));
  CHECK(effective_gain(0.0, 3.0, 1.0, 1e-14) == doctest::Approx(9e-14).epsilon(1e-12));
  CHECK(effective_gain(1.0, 1.0, 0.25, 0.25) == doctest::Approx(4.0 * 0.25));

  const double n0 = 5.012e-21;
  CHECK(achievable_rate(1e6, 0.1, 0.0, n0) == 0.0);
  // SNR = 3 -> log2(4) = 2 bits/s/Hz.
  const double g3 = 3.0 * n0 * 1e6 / 0.1;
  CHECK(achievable_rate(1e6, 0.1, g3, n0) == doctest::Approx(2e6).epsilon(1e-12));
  const double r = achievable_rate(2e6, 0.1, 1e-13, n0);
  CHECK(r == doctest::Approx(1.997e6).epsilon(5e-4));
  CHECK(r == doctest::Approx(oracle::rate(2e6, 0.1, 1e-13, n0)).epsilon(1e-14));

  double prev = 0.0;
  for (double b = 1e3; b < 1e8; b *= 3.0) {
    const double rb = achievable_rate(b, 0.1, 1e-13, n0);
    CHECK(rb >= prev);
    prev = rb;
  }
  CHECK(achievable_rate(1e6, 0.2, 1e-13, n0) > achievable_rate(1e6, 0.1, 1e-13, n0));
  CHECK(achievable_rate(1e6, 0.1, 2e-13, n0) > achievable_rate(1e6, 0.1, 1e-13, n0));
}

TEST_CASE("realizations are seeded and shaped") {
  SystemConfig c;
  c.n_vehicles = 3;
  c.n_irs_elements = 5;
  const Scenario sc = generate_scenario(c);
  const ChannelRealization a = sample_realization(sc);
  const ChannelRealization b = sample_realization(sc);
  CHECK(a.direct.size() == 3);
  CHECK(a.to_irs.size() == 3);
  CHECK(a.to_irs[0].size() == 5);
  CHECK(a.irs_to_ap.size() == 5);
  CHECK(a.direct == b.direct);
  CHECK(a.irs_to_ap == b.irs_to_ap);

  const LinkGeometry geo = link_geometry(sc, 0, {250.0, 250.0});
  const Vec2 p = sc.vehicles[0].position;
  const double d_ap = distance(p, c.ap_position);
  CHECK(geo.pl_direct == doctest::Approx(oracle::path_loss(d_ap, 3.5, 1e-3)).epsilon(1e-12));
  const double up = slant_distance(p, {250.0, 250.0}, 80.0);
  const double down = 80.0;  // drone directly above the AP
  CHECK(geo.pl_cascaded == doctest::Approx(oracle::path_loss(up, 2.2, 1e-3) *
                                           oracle::path_loss(down, 2.2, 1e-3))
                               .epsilon(1e-12));
}
