#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace vemkit::pde {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

struct LinearSystem {
  int dimension = 0;
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs;

  explicit LinearSystem(int n = 0) : dimension(n), rhs(Eigen::VectorXd::Zero(n)) {}
  void add(int row, int col, double value) { triplets.emplace_back(row, col, value); }
  /// Duplicates are summed.
  SparseMatrix matrix() const;
};

/// Backend interface: factorize once, solve any number of right-hand sides.
class SparseSolver {
public:
  virtual ~SparseSolver() = default;
  virtual void factorize(const SparseMatrix& matrix) = 0;
  virtual Eigen::VectorXd solve(const Eigen::VectorXd& rhs) = 0;
};

class SparseLUSolver final : public SparseSolver {
public:
  void factorize(const SparseMatrix& matrix) override;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) override;

private:
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
};

struct SolveResult {
  Eigen::VectorXd x;
  double residual = 0.0;  // ||A x - b||_inf
  double bound = 0.0;     // 1e-9 (||A||_inf ||x||_inf + ||b||_inf)
  double condition_estimate = 0.0;  // lower bound, row-equilibrated matrix
};

/// Condition estimates above this are treated as singular.
constexpr double kSingularCondition = 1e14;

double infinity_norm(const SparseMatrix& matrix);

/// Direct solve with the residual check; throws SolverError when the matrix
/// is singular or the residual bound fails.
SolveResult solve(const LinearSystem& system, SparseSolver* backend = nullptr);

}  // namespace vemkit::pde
