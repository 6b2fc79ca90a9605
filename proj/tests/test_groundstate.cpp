#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "relsol/groundstate.hpp"

using namespace relsol;

namespace {

const Grid& grid1024() {
  static const Grid g(256.0, 1024);
  return g;
}

}  // namespace

TEST(GroundState, PetviashviliMatchesIndependentSolver) {
  const auto ref = oracle::ground_state(3.0, 8.0, 1.0, 256.0, 1024, 0.05, 0.08);
  const GroundState gs = solve_petviashvili({3.0, 8.0, 1.0}, grid1024());
  EXPECT_NEAR(gs.mu, ref.mu, 1e-11);
  double d = 0.0;
  for (std::size_t j = 0; j < ref.u.size(); ++j) d = std::max(d, std::abs(gs.Q[j].real() - ref.u[j]));
  EXPECT_LT(d, 1e-9);
  EXPECT_LE(gs.el_residual, 1e-10);
  EXPECT_NEAR(mass(gs.Q), 1.0, 1e-12);
  // Frozen from the independent solver.
  EXPECT_NEAR(gs.mu, 0.0626425482318, 1e-11);
}

TEST(GroundState, IndependentSolverAtQuarticPower) {
  const Grid g(2048.0, 2048);
  const double mu_inf = mu_inf_of_mass(4.0, 1.0);
  const auto ref = oracle::ground_state(4.0, 16.0, 1.0, 2048.0, 2048, 0.5 * mu_inf, 2.0 * mu_inf);
  const GroundState gs = solve_petviashvili({4.0, 16.0, 1.0}, g);
  EXPECT_NEAR(gs.mu / ref.mu, 1.0, 1e-9);
}

TEST(GroundState, PohozaevIdentitiesAndTheirRelation) {
  const GroundState gs = solve_petviashvili({3.0, 8.0, 1.0}, grid1024());
  const auto t = pohozaev_terms(gs.Q, gs.mu, 3.0, 8.0);
  EXPECT_LE(t.identity_residual, 1e-10);
  EXPECT_LE(t.nehari_residual, 1e-10);
  EXPECT_LE(t.multiplier_form_residual, 1e-10);
  // The multiplier form is the identity minus half the Nehari identity.
  EXPECT_NEAR(t.multiplier_form, t.identity - 0.5 * t.nehari, 1e-15);
}

TEST(GroundState, NonrelativisticPohozaevOnClosedForm) {
  for (double p : {3.0, 3.5, 4.0, 4.5}) {
    const double mu = mu_inf_of_mass(p, 1.0);
    const auto s = soliton_inf(p, mu, default_grid(p, 1.0));
    EXPECT_LE(pohozaev_inf_residual(s.Q, mu, p), 1e-9) << p;
    EXPECT_NEAR(mass(s.Q), 1.0, 1e-10) << p;
  }
}

TEST(GroundState, ShortDomainIsRejected) {
  EXPECT_THROW(soliton_inf(3.0, 1.0 / 16.0, Grid(20.0, 256)), GridError);
}

TEST(GroundState, GradientFlowAgreesWithPetviashvili) {
  const ModelParams prm{3.0, 8.0, 1.0};
  const GroundState a = solve_petviashvili(prm, grid1024());
  const GroundState b = solve_gradient_flow(prm, grid1024());
  EXPECT_LT(h_half_distance_centered(b.Q, a.Q), 1e-8);
  EXPECT_NEAR(a.mu, b.mu, 1e-9);
  // Energy is nonincreasing along accepted steps.
  const auto& E = b.log.energy_trace;
  for (std::size_t i = 1; i < E.size(); ++i) EXPECT_LE(E[i], E[i - 1] + 1e-12);
}

TEST(GroundState, RandomInitializationConverges) {
  const ModelParams prm{3.0, 16.0, 1.0};
  const GroundState a = solve_petviashvili(prm, grid1024());
  SolveOptions o;
  o.init = random_even_init(3.0, 1.0, grid1024(), 7);
  const GroundState b = solve_gradient_flow(prm, grid1024(), o);
  EXPECT_LT(h_half_distance_centered(b.Q, a.Q), 1e-7);
}

TEST(GroundState, EnergyOrderingAgainstSoliton) {
  const ModelParams prm{3.0, 8.0, 1.0};
  const GroundState gs = solve_petviashvili(prm, grid1024());
  const double mu = mu_inf_of_mass(3.0, 1.0);
  const auto s = soliton_inf(3.0, mu, grid1024());
  const double J = min_energy_inf(3.0, 1.0, mu);
  EXPECT_LE(energy_c(gs.Q, prm), energy_c(s.Q, prm));
  EXPECT_LE(energy_c(s.Q, prm), J + 1e-14);
  EXPECT_LT(J, 0.0);
}

TEST(GroundState, ScalingTransportOfGaussian) {
  const Grid src(40.0, 512);
  const Field v = Field::sample(src, [](double x) { return std::exp(-x * x); });
  const double c = 2.0, p = 3.0;
  const Grid dst(20.0, 512);
  const Field u = scaling_transport(v, c, p, dst);
  const double amp = std::pow(c, 2.0 / (p - 1.0));
  for (std::size_t j = 0; j < dst.size(); j += 7)
    EXPECT_NEAR(u[j].real(), amp * std::exp(-c * c * dst.x(j) * dst.x(j)), 1e-12);
  EXPECT_THROW(scaling_transport(v, 4.0, p, dst), GridError);
}

TEST(GroundState, LoglogSlopeOfPowerLaw) {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -2.0));
  EXPECT_NEAR(loglog_slope(x, y), -2.0, 1e-13);
}

TEST(GroundState, LargeSpeedMatchesSolitonInH1) {
  const Grid g = default_grid(3.0, 1.0);
  const GroundState gs = solve_petviashvili({3.0, 1e6, 1.0}, g);
  const auto s = soliton_inf(3.0, mu_inf_of_mass(3.0, 1.0), g);
  EXPECT_LT(std::sqrt(hs_norm_sq(gs.Q - s.Q, 1.0)), 1e-6);
}
