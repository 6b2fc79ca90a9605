#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "relsol/evolution.hpp"

using namespace relsol;

namespace {

const GroundState& ground8() {
  static const GroundState gs = solve_petviashvili({3.0, 8.0, 1.0}, Grid(256.0, 1024));
  return gs;
}

/// Brute-force minimum of the weighted distance over integer grid shifts and a phase lattice.
double lattice_distance(const Field& u, const Field& Q, double c, int phases) {
  const Grid& g = u.grid();
  auto w = [c](double xi) { return 1.0 + hc_symbol(xi, c); };
  double best = kInfinity;
  for (long s = -20; s <= 20; ++s) {
    const Field t = shift_samples(u, s);
    for (int k = 0; k < phases; ++k) {
      Field v = t;
      v *= std::polar(1.0, 2.0 * std::numbers::pi * k / phases);
      best = std::min(best, std::sqrt(weighted_norm_sq(v - Q, w)));
    }
  }
  (void)g;
  return best;
}

}  // namespace

TEST(Evolution, StandingWavePhase) {
  const auto& gs = ground8();
  IntegratorConfig cfg{1e-3, 0.25, 50, 0};
  const Trajectory tr = evolve(gs.Q, gs.params, cfg);
  Field expect = gs.Q;
  expect *= std::polar(1.0, gs.mu * 0.25);
  EXPECT_LT(norm(tr.final_state.u - expect), 1e-9);
  EXPECT_DOUBLE_EQ(tr.final_state.t, 0.25);
}

TEST(Evolution, StrangStepIsTimeReversible) {
  const auto& gs = ground8();
  Field u = gs.Q;
  u.axpy(0.1, even_perturbation(gs.Q.grid(), 8.0, 3));
  const StrangStepper fwd(gs.params, u.grid(), 0.05), bwd(gs.params, u.grid(), -0.05);
  Field v = u;
  for (int i = 0; i < 10; ++i) fwd.step(v);
  for (int i = 0; i < 10; ++i) bwd.step(v);
  EXPECT_LT(norm(v - u), 1e-12);
}

TEST(Evolution, SubstepsConserveMassAndModulus) {
  const auto& gs = ground8();
  Field u = gs.Q;
  u.axpy(cplx(0.0, 0.2), even_perturbation(gs.Q.grid(), 8.0, 4));
  const StrangStepper st(gs.params, u.grid(), 0.1);
  Field a = u;
  st.linear_half(a);
  EXPECT_NEAR(mass(a), mass(u), 1e-14);
  Field b = u;
  st.nonlinear(b);
  for (std::size_t j = 0; j < u.size(); ++j) EXPECT_NEAR(std::abs(b[j]), std::abs(u[j]), 1e-15);
}

TEST(Evolution, ShortFinalStepLandsOnT) {
  const auto& gs = ground8();
  const Trajectory tr = evolve(gs.Q, gs.params, {0.3, 1.0, 1, 0});
  EXPECT_EQ(tr.steps, 4);
  EXPECT_DOUBLE_EQ(tr.samples.back().t, 1.0);
}

TEST(Evolution, ModulationOfGroundStateIsZero) {
  const auto m = modulation_distance(ground8().Q, ground8());
  EXPECT_LT(m.distance, 1e-12);
  EXPECT_NEAR(m.x1, 0.0, 1e-12);
  EXPECT_NEAR(m.theta1, 0.0, 1e-12);
}

TEST(Evolution, ModulationRecoversShiftAndPhase) {
  const auto& gs = ground8();
  const double h = gs.Q.grid().spacing();
  Field u = translate(gs.Q, 5.0 * h);
  u *= std::polar(1.0, std::numbers::pi / 3.0);
  const auto m = modulation_distance(u, gs);
  EXPECT_LT(m.distance, 1e-10);
  EXPECT_NEAR(m.x1, -5.0 * h, 1e-9);
  EXPECT_NEAR(m.theta1, -std::numbers::pi / 3.0, 1e-9);
}

// Property: the continuous minimizer is never worse than a lattice search.
TEST(Evolution, ModulationBeatsLatticeSearch) {
  const auto& gs = ground8();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Field u = translate(gs.Q, 0.37 * static_cast<double>(seed));
    u *= std::polar(1.0, 0.7 * static_cast<double>(seed));
    u.axpy(0.05, even_perturbation(gs.Q.grid(), 8.0, seed));
    const double d = modulation_distance(u, gs).distance;
    EXPECT_LE(d, lattice_distance(u, gs.Q, 8.0, 720) + 1e-12);
  }
}

TEST(Evolution, PerturbationIsNormalizedAndSeeded) {
  const Grid g(256.0, 1024);
  const Field a = even_perturbation(g, 8.0, 42), b = even_perturbation(g, 8.0, 42);
  EXPECT_EQ(norm(a - b), 0.0);
  EXPECT_NEAR(weighted_norm_sq(a, [](double xi) { return 1.0 + hc_symbol(xi, 8.0); }), 1.0, 1e-13);
  EXPECT_LT(norm(a - symmetrize(a)), 1e-13);
}

TEST(Evolution, KineticMonitorNeedsNegativeEnergy) {
  const Grid g(256.0, 1024);
  // A tall narrow bump has positive energy.
  const Field u = Field::sample(g, [](double x) { return 0.2 * std::exp(-x * x * 100.0); });
  Field v = u;
  v *= std::sqrt(1.0 / mass(v));
  const ModelParams prm{3.0, 8.0, 1.0};
  ASSERT_GT(energy_c(v, prm), 0.0);
  const Trajectory tr = evolve(v, prm, {1e-2, 0.1, 5, 0});
  const auto rep = gwp_monitor(tr, prm, constants_for(3.0));
  EXPECT_FALSE(rep.hypotheses_met);
  EXPECT_EQ(rep.status.rfind("hypotheses unmet", 0), 0u);
}

TEST(Evolution, StabilityShortRun) {
  const auto& gs = ground8();
  const auto rep = stability_experiment(gs, 1e-3, {1e-2, 5.0, 10, 0}, constants_for(3.0));
  EXPECT_NEAR(rep.initial_distance, 1e-3, 2e-4);
  EXPECT_LT(rep.sup_distance, 1e-2);
  EXPECT_TRUE(rep.gwp.holds);
  EXPECT_LT(rep.conservation.mass_drift, 1e-12);
  EXPECT_FALSE(rep.blow_up);
}
