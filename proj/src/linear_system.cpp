#include "vemkit/linear_system.hpp"

#include <cmath>
#include <sstream>

namespace vemkit::pde {

SparseMatrix LinearSystem::matrix() const {
  SparseMatrix out(dimension, dimension);
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

void SparseLUSolver::factorize(const SparseMatrix& matrix) {
  lu_.analyzePattern(matrix);
  lu_.factorize(matrix);
  if (lu_.info() != Eigen::Success)
    throw SolverError("sparse LU failed (" + lu_.lastErrorMessage() +
                      "); the matrix is singular, check for an unconstrained nullspace such as a missing "
                      "zero-mean pressure constraint or a pure Neumann problem");
}

Eigen::VectorXd SparseLUSolver::solve(const Eigen::VectorXd& rhs) {
  Eigen::VectorXd x = lu_.solve(rhs);
  if (lu_.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  return x;
}

double infinity_norm(const SparseMatrix& matrix) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(matrix.rows());
  for (int j = 0; j < matrix.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(matrix, j); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

SolveResult solve(const LinearSystem& system, SparseSolver* backend) {
  if (system.rhs.size() != system.dimension) throw SolverError("right-hand side size mismatch");
  SolveResult result;
  if (system.dimension == 0) return result;
  const SparseMatrix a = system.matrix();
  // row equilibration: saddle-point blocks differ by powers of h
  Eigen::VectorXd scale = Eigen::VectorXd::Zero(a.rows());
  for (int j = 0; j < a.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) scale(it.row()) = std::max(scale(it.row()), std::abs(it.value()));
  for (Eigen::Index i = 0; i < scale.size(); ++i) scale(i) = scale(i) > 0.0 ? 1.0 / scale(i) : 1.0;
  const SparseMatrix scaled = scale.asDiagonal() * a;
  SparseLUSolver fallback;
  SparseSolver& solver = backend ? *backend : fallback;
  solver.factorize(scaled);
  result.x = solver.solve(scale.cwiseProduct(system.rhs));
  // a tiny roundoff pivot can hide a nullspace behind a small residual:
  // probe ||scaled^{-1}|| with a fixed rhs
  Eigen::VectorXd probe(a.rows());
  for (Eigen::Index i = 0; i < probe.size(); ++i) probe(i) = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i));
  result.condition_estimate = infinity_norm(scaled) * solver.solve(probe).lpNorm<Eigen::Infinity>() / 1.5;
  if (!(result.condition_estimate <= kSingularCondition)) {
    std::ostringstream msg;
    msg << "condition estimate " << result.condition_estimate
        << " signals a numerically singular matrix (unconstrained nullspace?)";
    throw SolverError(msg.str());
  }
  // iterative refinement
  Eigen::VectorXd r = system.rhs - a * result.x;
  result.residual = r.lpNorm<Eigen::Infinity>();
  for (int step = 0; step < 3 && result.residual > 0.0; ++step) {
    const Eigen::VectorXd candidate = result.x + solver.solve(scale.cwiseProduct(r));
    const Eigen::VectorXd rc = system.rhs - a * candidate;
    const double rn = rc.lpNorm<Eigen::Infinity>();
    if (!(rn < result.residual)) break;
    result.x = candidate;
    r = rc;
    result.residual = rn;
  }
  result.bound = 1e-9 * (infinity_norm(a) * result.x.lpNorm<Eigen::Infinity>() + system.rhs.lpNorm<Eigen::Infinity>());
  if (!result.x.allFinite() || !(result.residual <= result.bound)) {
    std::ostringstream msg;
    msg << "residual " << result.residual << " exceeds bound " << result.bound
        << "; the matrix is numerically singular (unconstrained nullspace?)";
    throw SolverError(msg.str());
  }
  return result;
}

}  // namespace vemkit::pde
