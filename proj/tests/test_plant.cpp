#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hrsg/plant.hpp"
#include "oracles.hpp"

using namespace hrsg;

namespace {

DisturbanceFrame nominal_frame() {
  DisturbanceFrame d;
  d.fuel_flow = 1.0;
  d.steam_flow = 65.0;
  d.ambient_rate = 0.0;
  d.dsh_inlet_temp = 520.0;
  d.spray_temp = 150.0;
  d.dsh_inlet_rate = 0.0;
  d.dsh_outlet_flow = 65.8;
  d.mean_dsh_inlet_flow = 65.0;
  d.tgt = 530.0;
  return d;
}

PlantConstants nominal_constants() {
  PlantConstants c;
  c.heat_gain = -33.0;
  c.sh_rate = 1.0 / (100.0 * 65.8);
  c.dsh_rate = 1.0 / (30.0 * 65.8);
  return c;
}

}  // namespace

TEST_CASE("derivatives vanish at full equilibrium") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();
  c.heat_gain = 0.0;  // K1*d1 == d3 == 0
  const PlantState s{520.0, 520.0};
  const PlantRates r = plant_derivatives(s, 0.0, d, c, 0.0);
  CHECK(r.sh == 0.0);
  CHECK(r.dsh == 0.0);
}

TEST_CASE("zero spray pins the DSH outlet to its inlet") {
  PlantConstants c = nominal_constants();
  for (Scalar steam : {20.0, 65.0, 200.0}) {
    DisturbanceFrame d = nominal_frame();
    d.steam_flow = steam;
    const PlantState s{500.0, d.dsh_inlet_temp};
    const PlantRates r = plant_derivatives(s, 0.0, d, c, 0.0);
    CHECK(r.dsh == 0.0);
  }
}

TEST_CASE("leak-only steady state matches the closed form and a root finder") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();
  const Scalar leak = 0.5;

  // x2 = d4 - (u+f)(d4-d5)/(d2+u+f) at u = 0.
  const Scalar expected = 520.0 - 0.5 * 370.0 / 65.5;
  CHECK(expected == doctest::Approx(517.176).epsilon(1e-5));

  const Scalar x2_root = oracle::bisect(
      [&](Scalar x2) {
        return plant_derivatives({515.0, x2}, 0.0, d, c, leak).dsh;
      },
      d.spray_temp, d.dsh_inlet_temp);
  CHECK(x2_root == doctest::Approx(expected).epsilon(1e-10));
  CHECK(steady_state(0.0, d, c, leak).dsh_temp == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("step holds an exact fixed point") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();
  c.heat_gain = 0.0;
  const PlantState s{520.0, 520.0};
  for (Scalar dt : {0.5, 1.0, 10.0}) {
    const PlantState next = plant_step(s, 0.0, d, c, 0.0, dt);
    CHECK(next.sh_temp == s.sh_temp);
    CHECK(next.dsh_temp == s.dsh_temp);
  }
}

TEST_CASE("spray injection strictly cools when inlet is hotter than spray") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();
  const PlantState s{515.0, d.dsh_inlet_temp};
  const PlantState next = plant_step(s, 1.0, d, c, 0.0, 1.0);
  CHECK(next.dsh_temp < s.dsh_temp);
}

TEST_CASE("RK4 at dt=1 tracks a dt=1e-3 Euler oracle through the leak transient") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();
  const PlantState start{515.0, 520.0};
  const Scalar leak = 0.5, u = 0.0;

  PlantState x = start;
  for (int t = 0; t < 200; ++t) x = plant_step(x, u, d, c, leak, 1.0);
  const PlantState ref = oracle::euler_plant(start, u, d, c, leak, 200.0, 1e-3);

  CHECK(std::abs(x.dsh_temp - ref.dsh_temp) < 1e-3);
  CHECK(std::abs(x.sh_temp - ref.sh_temp) < 1e-3);
  // and the trajectory has nearly reached the closed-form fixed point
  CHECK(x.dsh_temp == doctest::Approx(520.0 - 0.5 * 370.0 / 65.5).epsilon(1e-4));
}

TEST_CASE("steady_state closed forms") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();

  SUBCASE("no spray, no inlet drift: outlet equals inlet") {
    CHECK(steady_state(0.0, d, c, 0.0).dsh_temp == 520.0);
  }
  SUBCASE("balanced heat input: both temperatures coincide") {
    c.heat_gain = 0.0;
    const PlantState s = steady_state(0.7, d, c, 0.0);
    CHECK(s.sh_temp == s.dsh_temp);
  }
  SUBCASE("nominal spray point, cross-checked by simulation") {
    const PlantState s = steady_state(0.8, d, c, 0.0);
    CHECK(s.dsh_temp == doctest::Approx(515.50).epsilon(1e-4));
    PlantState x{500.0, 500.0};
    for (int t = 0; t < 1500; ++t) x = plant_step(x, 0.8, d, c, 0.0, 1.0);
    CHECK(std::abs(x.dsh_temp - s.dsh_temp) < 1e-3);
    CHECK(std::abs(x.sh_temp - s.sh_temp) < 1e-3);
  }
  SUBCASE("division guards") {
    d.dsh_outlet_flow = 0.0;
    CHECK_THROWS_AS((void)steady_state(0.8, d, c, 0.0), std::invalid_argument);
    d = nominal_frame();
    d.steam_flow = 1.0;
    CHECK_THROWS_AS((void)steady_state(-1.0, d, c, 0.0), std::invalid_argument);
  }
}

TEST_CASE("steady-state DSH temperature is strictly decreasing in total spray") {
  PlantConstants c = nominal_constants();
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<Scalar> steam(30.0, 120.0), inlet(480.0, 560.0),
      spray(100.0, 200.0);
  for (int trial = 0; trial < 50; ++trial) {
    DisturbanceFrame d = nominal_frame();
    d.steam_flow = steam(eng);
    d.dsh_inlet_temp = inlet(eng);
    d.spray_temp = spray(eng);
    Scalar prev = steady_state(0.0, d, c, 0.0).dsh_temp;
    for (Scalar w = 0.1; w <= 3.0; w += 0.1) {
      const Scalar cur = steady_state(w, d, c, 0.0).dsh_temp;
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("fault equivalence: the leak acts exactly as extra commanded spray") {
  PlantConstants c = nominal_constants();
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<Scalar> temp(480.0, 560.0), flow(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    DisturbanceFrame d = nominal_frame();
    const PlantState s{temp(eng), temp(eng)};
    const Scalar u = flow(eng), f = flow(eng) * 0.5;
    const PlantRates a = plant_derivatives(s, u, d, c, f);
    const PlantRates b = plant_derivatives(s, u + f, d, c, 0.0);
    CHECK(a.dsh == b.dsh);
    CHECK(a.sh == b.sh);
  }
}

TEST_CASE("identical inputs produce bit-identical trajectories") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();
  PlantState a{510.0, 518.0}, b{510.0, 518.0};
  for (int t = 0; t < 300; ++t) {
    a = plant_step(a, 0.9, d, c, 0.25, 1.0);
    b = plant_step(b, 0.9, d, c, 0.25, 1.0);
    REQUIRE(a.sh_temp == b.sh_temp);
    REQUIRE(a.dsh_temp == b.dsh_temp);
  }
}

TEST_CASE("model blow-up is reported with the offending term") {
  DisturbanceFrame d = nominal_frame();
  PlantConstants c = nominal_constants();

  SUBCASE("non-finite disturbance") {
    d.dsh_inlet_temp = std::numeric_limits<Scalar>::infinity();
    try {
      (void)plant_derivatives({515.0, 515.0}, 0.5, d, c, 0.0);
      FAIL("expected ModelBlowup");
    } catch (const ModelBlowup& ex) {
      CHECK(ex.term() == "dsh_mix");
    }
  }
  SUBCASE("guard band exit") {
    c.heat_gain = 1e9;
    CHECK_THROWS_AS((void)plant_step({515.0, 515.0}, 0.0, d, c, 0.0, 1.0), ModelBlowup);
  }
}

TEST_CASE("frame and fault validation") {
  DisturbanceFrame d = nominal_frame();
  CHECK_NOTHROW(validate_frame(d));
  d.spray_temp = 600.0;  // hotter than the steam it is meant to cool
  CHECK_THROWS_AS(validate_frame(d), std::invalid_argument);

  FaultSpec fault;
  fault.leak_flow = 0.5;
  fault.max_leak = 1.0;
  CHECK_NOTHROW(fault.validate());
  CHECK(fault.flow_at(fault.onset_time - 1.0) == 0.0);
  CHECK(fault.flow_at(fault.onset_time) == 0.5);
  fault.leak_flow = 2.0;
  CHECK_THROWS_AS(fault.validate(), std::invalid_argument);
}
