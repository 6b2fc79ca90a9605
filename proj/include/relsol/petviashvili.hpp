#pragma once

// Petviashvili fixed-point iteration for  K u + mu u = |u|^{p-1} u  with a
// real, nonnegative Fourier symbol K:
//     s_n     = <(K + mu) u_n, u_n> / <|u_n|^{p-1} u_n, u_n>
//     u_{n+1} = s_n^gamma (K + mu)^{-1} |u_n|^{p-1} u_n
// At a fixed point s = 1 and u solves the equation.

#include <cmath>
#include <vector>

#include "relsol/error.hpp"
#include "relsol/grid.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

struct PetviashviliResult {
  Field u;
  int iterations = 0;
  std::vector<double> s_trace;
};

/// |u|^{p-1} u pointwise.
inline Field power_nonlinearity(const Field& u, double p) {
  Field out(u.grid());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double a = std::abs(u[j]);
    out[j] = a == 0.0 ? cplx{} : std::pow(a, p - 1.0) * u[j];
  }
  return out;
}

/// Runs the iteration to relative step size < tol. The iterate is kept real
/// and symmetrized about x = 0 every `symmetrize_every` steps (0 disables).
/// Throws SolverError carrying the s_n trace when max_iter is exhausted or
/// the iterate collapses.
template <class Symbol>
PetviashviliResult petviashvili_fixed_mu(Field init, Symbol&& kinetic, double mu, double p, double gamma,
                                         double tol, int max_iter, int symmetrize_every = 50) {
  const Grid g = init.grid();
  const std::size_t n = g.size();
  const double w = g.spacing() / static_cast<double>(n);
  std::vector<double> denom(n);
  for (std::size_t k = 0; k < n; ++k) {
    denom[k] = kinetic(g.frequency(k)) + mu;
    if (!(denom[k] > 0.0)) throw UsageError("Petviashvili: K + mu must be positive on the grid");
  }

  PetviashviliResult res{real_part(init), 0, {}};
  for (int it = 1; it <= max_iter; ++it) {
    const auto spec = spectrum(res.u);
    double lhs = 0.0;
    for (std::size_t k = 0; k < n; ++k) lhs += denom[k] * std::norm(spec[k]);
    lhs *= w;
    Field nl = power_nonlinearity(res.u, p);
    const double rhs = inner(nl, res.u).real();
    if (!(rhs > 0.0) || !std::isfinite(lhs))
      throw SolverError("Petviashvili iterate collapsed (nonpositive <u^p, u>)", res.s_trace);
    const double s = lhs / rhs;
    res.s_trace.push_back(s);

    auto nspec = spectrum(nl);
    const double scale = std::pow(s, gamma);
    for (std::size_t k = 0; k < n; ++k) nspec[k] *= scale / denom[k];
    Field next = real_part(from_spectrum(g, nspec));
    if (symmetrize_every > 0 && it % symmetrize_every == 0) next = symmetrize(next);

    const double step = norm(next - res.u) / norm(res.u);
    res.u = std::move(next);
    res.iterations = it;
    if (!std::isfinite(step)) throw SolverError("Petviashvili iterate became non-finite", res.s_trace);
    if (step < tol) return res;
  }
  throw SolverError("Petviashvili did not converge in " + std::to_string(max_iter) + " iterations",
                    res.s_trace);
}

}  // namespace relsol
