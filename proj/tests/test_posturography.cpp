#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bplat/posturography.hpp"

using namespace bplat;

namespace {
constexpr double kRLow = 0.25;
}

TEST_CASE("center of mass") {
  SUBCASE("equal weights sit at the origin") {
    const auto com = center_of_mass({50.0, 50.0, 50.0}, kRLow);
    REQUIRE(com.loaded);
    CHECK(std::abs(com.x) < 1e-12);
    CHECK(std::abs(com.y) < 1e-12);
  }
  SUBCASE("single loaded cell lands on its vertex") {
    const auto com = center_of_mass({80.0, 0.0, 0.0}, kRLow);
    REQUIRE(com.loaded);
    CHECK(com.x == doctest::Approx(0.0));
    CHECK(com.y == doctest::Approx(kRLow));
  }
  SUBCASE("two equal base cells average to the base midpoint") {
    const auto com = center_of_mass({0.0, 40.0, 40.0}, kRLow);
    REQUIRE(com.loaded);
    CHECK(com.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(com.y == doctest::Approx(-kRLow / 2.0).epsilon(1e-12));
  }
  SUBCASE("below threshold reports unloaded") {
    const auto com = center_of_mass({0.1, 0.1, 0.1}, kRLow);
    CHECK_FALSE(com.loaded);
  }
  SUBCASE("inside the cell triangle and scale invariant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int k = 0; k < 200; ++k) {
      std::array<double, 3> w{u(rng) + 0.5, u(rng) + 0.5, u(rng) + 0.5};
      const auto com = center_of_mass(w, kRLow);
      REQUIRE(com.loaded);
      // Convexity: distance from origin can never exceed the circumradius.
      CHECK(std::hypot(com.x, com.y) <= kRLow + 1e-12);
      std::array<double, 3> w2{3.7 * w[0], 3.7 * w[1], 3.7 * w[2]};
      const auto com2 = center_of_mass(w2, kRLow);
      CHECK(com2.x == doctest::Approx(com.x).epsilon(1e-12));
      CHECK(com2.y == doctest::Approx(com.y).epsilon(1e-12));
    }
  }
}

TEST_CASE("center of pressure") {
  CHECK(center_of_pressure(10.0, 0.0, 500.0) == doctest::Approx(0.02));
  CHECK(center_of_pressure(0.03 * 7.0, 7.0, 123.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(center_of_pressure(10.0, 0.0, 0.0), DomainError);
}

TEST_CASE("zone pressures") {
  const FootLayout layout;

  SUBCASE("fixture built from target ratios recovers them exactly") {
    // Right-foot reference ratios [N/cm^2].
    const double toes = 3.54, met = 28.24, mid = 0.97, heel = 12.42;
    LoadCellFrame frame;
    frame.upper[4] = toes * layout.areas.toes;
    frame.upper[5] = met * layout.areas.metatarsals;
    frame.upper[6] = mid * layout.areas.midfoot;
    frame.upper[7] = heel * layout.areas.heel;
    const auto zp = pressure_ratios(frame, layout);
    CHECK(zp.right.toes == doctest::Approx(toes).epsilon(1e-10));
    CHECK(zp.right.metatarsals == doctest::Approx(met).epsilon(1e-10));
    CHECK(zp.right.midfoot == doctest::Approx(mid).epsilon(1e-10));
    CHECK(zp.right.heel == doctest::Approx(heel).epsilon(1e-10));
  }
  SUBCASE("zero frame gives zero everywhere") {
    const auto zp = pressure_ratios(LoadCellFrame{}, layout);
    CHECK(zp.left.total_force == 0.0);
    CHECK(zp.right.total_force == 0.0);
    for (double p : zp.region_pressure) CHECK(p == 0.0);
  }
  SUBCASE("linearity and left/right mirror") {
    LoadCellFrame frame;
    for (int i = 0; i < 8; ++i) frame.upper[static_cast<size_t>(i)] = 3.0 + i;
    const auto zp1 = pressure_ratios(frame, layout);
    LoadCellFrame doubled = frame;
    for (auto& f : doubled.upper) f *= 2.0;
    const auto zp2 = pressure_ratios(doubled, layout);
    for (int i = 0; i < 8; ++i)
      CHECK(zp2.region_pressure[static_cast<size_t>(i)] ==
            doctest::Approx(2.0 * zp1.region_pressure[static_cast<size_t>(i)]));

    LoadCellFrame mirrored;
    for (int i = 0; i < 4; ++i) {
      mirrored.upper[static_cast<size_t>(i)] = frame.upper[static_cast<size_t>(i + 4)];
      mirrored.upper[static_cast<size_t>(i + 4)] = frame.upper[static_cast<size_t>(i)];
    }
    const auto zpm = pressure_ratios(mirrored, layout);
    CHECK(zpm.left.toes == zp1.right.toes);
    CHECK(zpm.right.heel == zp1.left.heel);
  }
  SUBCASE("saturated cells are flagged") {
    LoadCellFrame frame;
    frame.upper[3] = kUpperCellCapacity + 1.0;
    const auto zp = pressure_ratios(frame, layout);
    CHECK(zp.saturated[3]);
    CHECK_FALSE(zp.saturated[0]);
  }
}

TEST_CASE("synthesized load streams") {
  const FootLayout layout;

  SUBCASE("standing case reproduces the expected region ordering") {
    SynthesisConfig cfg;
    cfg.duration = 5.0;
    const auto stream = synthesize_loads(cfg, layout, kRLow);
    REQUIRE(stream.frames.size() == 501);

    std::array<double, 8> mean{};
    for (const auto& f : stream.frames) {
      const auto zp = pressure_ratios(f, layout);
      for (int i = 0; i < 8; ++i)
        mean[static_cast<size_t>(i)] +=
            zp.region_pressure[static_cast<size_t>(i)] / stream.frames.size();
    }
    std::array<int, 8> order{0, 1, 2, 3, 4, 5, 6, 7};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return mean[static_cast<size_t>(a)] > mean[static_cast<size_t>(b)]; });
    CHECK(order[0] == 7);  // region 8 largest
    CHECK(order[1] == 3);  // region 4 next
    CHECK(order[7] == 6);  // region 7 smallest
  }
  SUBCASE("forward-shifted case raises the front regions") {
    SynthesisConfig base_cfg;
    base_cfg.duration = 5.0;
    SynthesisConfig fwd_cfg = base_cfg;
    fwd_cfg.load_case = LoadCase::kStatic2;
    const auto base = synthesize_loads(base_cfg, layout, kRLow);
    const auto fwd = synthesize_loads(fwd_cfg, layout, kRLow);
    auto mean_of = [&](const SynthesizedStream& s, int region) {
      double acc = 0.0;
      for (const auto& f : s.frames) acc += f.upper[static_cast<size_t>(region)];
      return acc / s.frames.size();
    };
    for (int region : {0, 1, 4, 5})
      CHECK(mean_of(fwd, region) > mean_of(base, region));
  }
  SUBCASE("standing heel share is half the body weight") {
    SynthesisConfig cfg;
    cfg.duration = 5.0;
    const auto stream = synthesize_loads(cfg, layout, kRLow);
    double heel = 0.0, total = 0.0;
    for (const auto& f : stream.frames) {
      heel += f.upper[3] + f.upper[7];
      total += std::accumulate(f.upper.begin(), f.upper.end(), 0.0);
    }
    const double share = 100.0 * heel / total;
    CHECK(share > 49.0);
    CHECK(share < 51.0);
  }
  SUBCASE("lower cells carry the same load at the matching centroid") {
    SynthesisConfig cfg;
    cfg.duration = 1.0;
    cfg.noise_scale = 0.0;
    const auto stream = synthesize_loads(cfg, layout, kRLow);
    const auto& f = stream.frames.front();
    const double upper_total =
        std::accumulate(f.upper.begin(), f.upper.end(), 0.0);
    const double lower_total =
        std::accumulate(f.lower.begin(), f.lower.end(), 0.0);
    CHECK(lower_total == doctest::Approx(upper_total).epsilon(1e-9));
    const auto com = center_of_mass(f.lower, kRLow);
    REQUIRE(com.loaded);
    CHECK(std::abs(com.x) < 0.005);   // profile is nearly left/right even
    CHECK(com.y < 0.0);               // heels behind the center
  }
  SUBCASE("dynamic case ramps after the hold and stamps the stimulus") {
    SynthesisConfig cfg;
    cfg.load_case = LoadCase::kDynDorsi;
    cfg.duration = 20.0;
    const auto stream = synthesize_loads(cfg, layout, kRLow);
    REQUIRE(stream.stimulus_times.size() == 1);
    CHECK(stream.stimulus_times[0] == doctest::Approx(10.0));
    auto heel_at = [&](double t) {
      for (const auto& f : stream.frames)
        if (f.t >= t) return f.upper[3] + f.upper[7];
      return 0.0;
    };
    CHECK(heel_at(19.0) > heel_at(5.0) * 1.1);
  }
  SUBCASE("same seed gives identical frames") {
    SynthesisConfig cfg;
    cfg.duration = 1.0;
    const auto a = synthesize_loads(cfg, layout, kRLow);
    const auto b = synthesize_loads(cfg, layout, kRLow);
    REQUIRE(a.frames.size() == b.frames.size());
    for (size_t k = 0; k < a.frames.size(); ++k)
      CHECK(a.frames[k].upper == b.frames[k].upper);
  }
}

TEST_CASE("reaction detection") {
  auto make_stream = [](double step_at, double step_size, double duration) {
    std::vector<LoadCellFrame> frames;
    for (int k = 0; k <= static_cast<int>(duration * 100); ++k) {
      LoadCellFrame f;
      f.t = k * 0.01;
      f.upper[2] = 20.0 + (f.t >= step_at ? step_size : 0.0);
      for (int i = 0; i < 8; ++i)
        if (i != 2) f.upper[static_cast<size_t>(i)] = 10.0;
      f.lower = {30.0, 30.0, 30.0};
      frames.push_back(f);
    }
    return frames;
  };

  SUBCASE("constructed latency is recovered within one sample") {
    const auto frames = make_stream(2.35, 15.0, 5.0);
    const auto events = detect_reaction({2.0}, frames);
    REQUIRE(events.size() == 1);
    REQUIRE(events[0].responded);
    CHECK(events[0].latency == doctest::Approx(0.35).epsilon(0.03));
    CHECK(std::abs(events[0].latency - 0.35) <= 0.01 + 1e-9);
    CHECK(events[0].channel == 2);
  }
  SUBCASE("flat stream yields a no-response event") {
    const auto frames = make_stream(100.0, 0.0, 5.0);
    const auto events = detect_reaction({2.0}, frames);
    REQUIRE(events.size() == 1);
    CHECK_FALSE(events[0].responded);
  }
  SUBCASE("two stimuli produce the constructed latency pair") {
    std::vector<LoadCellFrame> frames;
    for (int k = 0; k <= 1200; ++k) {
      LoadCellFrame f;
      f.t = k * 0.01;
      double v = 20.0;
      if (f.t >= 2.3 && f.t < 4.0) v += 12.0;  // response to stimulus at 2.0
      if (f.t >= 7.45) v += 12.0;              // response to stimulus at 7.0
      f.upper[0] = v;
      f.lower = {30.0, 30.0, 30.0};
      frames.push_back(f);
    }
    const auto events = detect_reaction({2.0, 7.0}, frames);
    REQUIRE(events.size() == 2);
    REQUIRE(events[0].responded);
    REQUIRE(events[1].responded);
    CHECK(events[0].latency == doctest::Approx(0.30).epsilon(0.04));
    CHECK(events[1].latency == doctest::Approx(0.45).epsilon(0.04));
    CHECK(events[1].latency / events[0].latency == doctest::Approx(1.5).epsilon(0.05));
  }
  SUBCASE("latency is invariant to a constant channel offset") {
    auto frames = make_stream(2.35, 15.0, 5.0);
    const auto before = detect_reaction({2.0}, frames);
    for (auto& f : frames) {
      for (auto& v : f.upper) v += 123.0;
      for (auto& v : f.lower) v += 123.0;
    }
    const auto after = detect_reaction({2.0}, frames);
    REQUIRE(before[0].responded);
    REQUIRE(after[0].responded);
    CHECK(before[0].latency == after[0].latency);
  }
  SUBCASE("non-monotone timestamps are rejected") {
    auto frames = make_stream(2.35, 15.0, 1.0);
    frames[10].t = frames[9].t;
    CHECK_THROWS_AS(detect_reaction({0.5}, frames), DomainError);
  }
}
