#pragma once

// Linearized operators about a ground state
//     L v = K v - p Q^{p-1} v + mu v,   K = -d^2 (L_inf) or H_c (L_c),
// and the smallest eigenvalue of L on {even} n {v : <v, Q> = 0}.
//
// The eigenvalue is found by shift-invert Lanczos with full
// reorthogonalization. The shift s sits below a rigorous lower bound of the
// spectrum, so (L - s) is positive definite on the constraint space and each
// inverse is a projected preconditioned CG solve; the preconditioner is the
// Fourier-diagonal part K + mu - s.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "relsol/error.hpp"
#include "relsol/groundstate.hpp"
#include "relsol/grid.hpp"
#include "relsol/spectral.hpp"

namespace relsol {

enum class LinearizedKind { LInf, LC };

inline const char* to_string(LinearizedKind k) { return k == LinearizedKind::LInf ? "L_inf" : "L_c"; }

struct LinearizedOperator {
  Field Q;
  double mu = 0.0;
  double p = 3.0;
  double c = kInfinity;
  LinearizedKind kind = LinearizedKind::LInf;
  std::vector<double> symbol;     ///< kinetic symbol on the grid frequencies
  std::vector<double> potential;  ///< p |Q|^{p-1}

  const Grid& grid() const { return Q.grid(); }
  double potential_max() const { return *std::max_element(potential.begin(), potential.end()); }
};

/// L_c for a finite-c ground state, L_inf otherwise.
inline LinearizedOperator make_linearized(const GroundState& gs) {
  LinearizedOperator op;
  op.Q = gs.Q;
  op.mu = gs.mu;
  op.p = gs.params.p;
  op.c = gs.params.c;
  op.kind = gs.params.relativistic() ? LinearizedKind::LC : LinearizedKind::LInf;
  const Grid& g = gs.Q.grid();
  op.symbol.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) op.symbol[k] = hc_symbol(g.frequency(k), op.c);
  op.potential.resize(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) op.potential[j] = op.p * std::pow(std::abs(gs.Q[j]), op.p - 1.0);
  return op;
}

inline Field apply_linearized(const LinearizedOperator& op, const Field& v) {
  op.Q.require_same_grid(v);
  Field out = apply_diagonal(v, op.symbol);
  for (std::size_t j = 0; j < v.size(); ++j) out[j] += (op.mu - op.potential[j]) * v[j];
  return out;
}

struct ConstraintSet {
  bool even = true;
  bool orthogonal_to_Q = true;

  std::string describe() const {
    std::string s;
    if (even) s += "even";
    if (orthogonal_to_Q) s += s.empty() ? "orthogonal-to-Q" : ", orthogonal-to-Q";
    return s.empty() ? "unconstrained" : s;
  }
};

struct EigResult {
  double lambda_min = 0.0;
  Field vector;
  int iterations = 0;  ///< Lanczos steps
  int inner_iterations = 0;
  std::string constraints;
  double residual = 0.0;  ///< ||P (A v - lambda v)|| / ||v||
  double shift = 0.0;
  std::vector<double> ritz_history;
};

struct EigOptions {
  int max_iter = 400;
  double residual_tol = 1e-9;
  double cg_tol = 1e-12;
  int cg_max_iter = 2000;
  std::uint64_t seed = 0x5EED;
  int check_every = 5;
};

/// Symmetric operator on Fields together with the orthogonal projector onto
/// the constraint space, a Fourier-diagonal preconditioner symbol for A - s
/// and the shift s (below the constrained spectrum).
struct ConstrainedProblem {
  std::function<Field(const Field&)> apply;
  std::function<Field(const Field&)> project;
  std::vector<double> precond;  ///< positive, approximates A - shift
  double shift = 0.0;
  Grid grid;
};

namespace detail {

inline double rdot(const Field& a, const Field& b) { return inner(a, b).real(); }

inline Field apply_diag_inverse(const Field& r, const std::vector<double>& d) {
  auto s = spectrum(r);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] /= d[k];
  return from_spectrum(r.grid(), s);
}

/// Projected PCG for P (A - s) P x = b, b in range(P).
inline Field solve_shifted(const ConstrainedProblem& pb, const Field& b, const EigOptions& opt, int& iters) {
  Field x(pb.grid);
  Field r = b;
  const double bn = norm(b);
  if (bn == 0.0) return x;
  Field z = pb.project(apply_diag_inverse(r, pb.precond));
  Field d = z;
  double rz = rdot(r, z);
  double best = 1.0;
  int best_it = 0;
  for (int it = 0; it < opt.cg_max_iter; ++it) {
    Field ad = pb.apply(d);
    ad.axpy(-pb.shift, d);
    ad = pb.project(ad);
    const double dad = rdot(d, ad);
    if (!(dad > 0.0)) throw SolverError("shift-invert CG: operator not positive on the constraint space", {dad});
    const double a = rz / dad;
    x.axpy(a, d);
    r.axpy(-a, ad);
    r = pb.project(r);
    ++iters;
    const double rn = norm(r) / bn;
    if (rn <= opt.cg_tol) return x;
    // Round-off floor: accept once progress stalls close to the target.
    if (rn < best) {
      best = rn;
      best_it = it;
    } else if (it - best_it > 10 && best <= 100.0 * opt.cg_tol) {
      return x;
    }
    z = pb.project(apply_diag_inverse(r, pb.precond));
    const double rz_new = rdot(r, z);
    if (!(rz_new > 0.0)) return x;
    const double beta = rz_new / rz;
    rz = rz_new;
    Field nd = z;
    nd.axpy(beta, d);
    d = pb.project(nd);
  }
  throw SolverError("shift-invert CG did not converge", {norm(r) / bn});
}

inline Field seeded_start(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  Field v(g);
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = nd(rng);
  // Smooth it so the start vector has no grid-scale noise.
  return apply_symbol(v, [](double xi) { return std::exp(-0.5 * xi * xi); });
}

}  // namespace detail

/// Smallest eigenvalue of A on range(P).
inline EigResult lanczos_smallest(const ConstrainedProblem& pb, const EigOptions& opt = {}) {
  EigResult res;
  res.shift = pb.shift;
  std::vector<Field> basis;
  std::vector<double> alpha, beta;

  Field q = pb.project(detail::seeded_start(pb.grid, opt.seed));
  double qn = norm(q);
  if (!(qn > 0.0)) throw SolverError("Lanczos start vector vanishes on the constraint space", {});
  q *= 1.0 / qn;
  basis.push_back(q);

  auto ritz = [&](bool vectors) {
    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd dg(m), sd(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) dg(i) = alpha[i];
    for (Eigen::Index i = 0; i + 1 < m; ++i) sd(i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(dg, sd, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    return es;
  };

  for (int j = 0; j < opt.max_iter; ++j) {
    Field w = detail::solve_shifted(pb, basis.back(), opt, res.inner_iterations);
    w = pb.project(w);
    const double a = detail::rdot(w, basis.back());
    alpha.push_back(a);
    w.axpy(-a, basis.back());
    if (basis.size() > 1) w.axpy(-beta.back(), basis[basis.size() - 2]);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w.axpy(-inner(w, b), b);
    const double bt = norm(w);
    res.iterations = j + 1;

    const auto es = ritz(false);
    const double theta = es.eigenvalues()(es.eigenvalues().size() - 1);
    res.ritz_history.push_back(pb.shift + 1.0 / theta);

    const bool breakdown = bt <= 1e-14 * std::abs(theta);
    if (breakdown || (j + 1) % opt.check_every == 0 || j + 1 == opt.max_iter) {
      const auto ev = ritz(true);
      const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
      const Eigen::VectorXd z = ev.eigenvectors().col(m - 1);
      Field v(pb.grid);
      for (Eigen::Index i = 0; i < m; ++i) v.axpy(z(i), basis[static_cast<std::size_t>(i)]);
      v = pb.project(v);
      v *= 1.0 / norm(v);
      Field av = pb.project(pb.apply(v));
      const double lam = detail::rdot(av, v);
      av.axpy(-lam, v);
      const double r = norm(av);
      if (r <= opt.residual_tol * std::max(1.0, std::abs(lam)) || breakdown) {
        res.lambda_min = lam;
        res.vector = v;
        res.residual = r;
        return res;
      }
    }
    if (breakdown) break;
    beta.push_back(bt);
    w *= 1.0 / bt;
    basis.push_back(std::move(w));
  }
  throw SolverError("Lanczos did not converge in " + std::to_string(opt.max_iter) + " steps", res.ritz_history);
}

inline Field project_constraints(const Field& v, const Field& q_unit, const ConstraintSet& cs) {
  Field out = cs.even ? symmetrize(v) : v;
  if (cs.orthogonal_to_Q) out.axpy(-inner(out, q_unit), q_unit);
  return out;
}

/// Smallest eigenvalue of L on the constraint space.
inline EigResult min_eig_constrained(const LinearizedOperator& op, const ConstraintSet& cs = {},
                                     const EigOptions& opt = {}) {
  Field qn = op.Q;
  qn *= 1.0 / norm(qn);
  const double lb = op.mu - op.potential_max();
  ConstrainedProblem pb{
      [&op](const Field& v) { return apply_linearized(op, v); },
      [qn, cs](const Field& v) { return project_constraints(v, qn, cs); },
      {},
      lb - 0.1 * std::max(std::abs(lb), op.mu),
      op.grid()};
  pb.precond.resize(op.symbol.size());
  for (std::size_t k = 0; k < op.symbol.size(); ++k) pb.precond[k] = op.symbol[k] + op.mu - pb.shift;
  EigResult r = lanczos_smallest(pb, opt);
  r.constraints = cs.describe();
  return r;
}

/// Two-multiplier stationarity  L v = lambda v + lambda' Q: norm of the part
/// of L v - lambda v left after removing the Q direction.
inline double stationarity_residual(const LinearizedOperator& op, const EigResult& r) {
  Field lv = apply_linearized(op, r.vector);
  lv.axpy(-r.lambda_min, r.vector);
  Field qn = op.Q;
  qn *= 1.0 / norm(qn);
  lv.axpy(-inner(lv, qn), qn);
  return norm(lv) / norm(r.vector);
}

/// inf <L v, v> / <W v, v> over the constraint space for a positive weight
/// symbol W, via the transformed operator W^{-1/2} L W^{-1/2} and the
/// constraint y orthogonal to W^{-1/2} Q. The returned vector is v = W^{-1/2} y.
inline EigResult coercivity_eig(const LinearizedOperator& op, const MultiplierSpec& weight,
                                const ConstraintSet& cs = {}, const EigOptions& opt = {}) {
  const Grid& g = op.grid();
  const std::size_t n = g.size();
  auto isqrt = std::make_shared<std::vector<double>>(n);
  double wmin = kInfinity, ratio_min = kInfinity;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = weight(g.frequency(k));
    if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("coercivity weight must be positive and finite");
    (*isqrt)[k] = 1.0 / std::sqrt(w);
    wmin = std::min(wmin, w);
    ratio_min = std::min(ratio_min, (op.symbol[k] + op.mu) / w);
  }
  auto wh = [isqrt](const Field& v) { return apply_diagonal(v, *isqrt); };
  Field qt = wh(op.Q);
  qt *= 1.0 / norm(qt);
  const double lb = ratio_min - op.potential_max() / wmin;
  ConstrainedProblem pb{
      [&op, wh](const Field& y) { return wh(apply_linearized(op, wh(y))); },
      [qt, cs](const Field& v) { return project_constraints(v, qt, cs); },
      {},
      lb - 0.1 * std::max(std::abs(lb), ratio_min),
      g};
  pb.precond.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    pb.precond[k] = (op.symbol[k] + op.mu) * (*isqrt)[k] * (*isqrt)[k] - pb.shift;
  EigResult r = lanczos_smallest(pb, opt);
  r.vector = wh(r.vector);
  r.constraints = cs.describe() + " (weighted)";
  return r;
}

inline double coercivity_ratio(const LinearizedOperator& op, const MultiplierSpec& weight,
                               const EigOptions& opt = {}) {
  return coercivity_eig(op, weight, {}, opt).lambda_min;
}

}  // namespace relsol
