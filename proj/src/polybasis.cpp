#include "vemkit/polybasis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vemkit::polybasis {

int poly_dim(int d, int k) {
  if (k < 0) return 0;
  switch (d) {
    case 1: return k + 1;
    case 2: return (k + 1) * (k + 2) / 2;
    case 3: return (k + 1) * (k + 2) * (k + 3) / 6;
    default: throw std::invalid_argument("poly_dim: unsupported dimension " + std::to_string(d));
  }
}

int monomial_index(int d, std::span<const int> multi_index) {
  if (static_cast<int>(multi_index.size()) != d)
    throw std::invalid_argument("monomial_index: multi-index length differs from dimension");
  for (int a : multi_index)
    if (a < 0) throw std::invalid_argument("monomial_index: negative exponent");
  if (d == 1) return multi_index[0] + 1;
  if (d == 2) {
    const int n = multi_index[0] + multi_index[1];
    return n * (n + 1) / 2 + multi_index[1] + 1;
  }
  throw std::invalid_argument("monomial_index: unsupported dimension");
}

std::vector<int> monomial_exponents(int d, int index) {
  if (index < 1) throw std::invalid_argument("monomial_exponents: index is 1-based");
  if (d == 1) return {index - 1};
  if (d == 2) {
    int n = 0;
    while ((n + 1) * (n + 2) / 2 < index) ++n;
    const int j = index - 1 - n * (n + 1) / 2;
    return {n - j, j};
  }
  throw std::invalid_argument("monomial_exponents: unsupported dimension");
}

int grad_dim(int k) { return poly_dim(2, k + 1) - 1; }
int perp_dim(int k) { return k < 0 ? 0 : 2 * poly_dim(2, k) - grad_dim(k); }

MonomialBasis::MonomialBasis(int order, Point centroid, double diameter)
    : order_(order), centroid_(std::move(centroid)), diameter_(diameter) {
  if (order < 0) throw std::invalid_argument("MonomialBasis: negative order");
  if (!(diameter > 0.0)) throw std::invalid_argument("MonomialBasis: diameter must be positive");
  exponents_.reserve(poly_dim(2, order));
  for (int n = 0; n <= order; ++n)
    for (int j = 0; j <= n; ++j) exponents_.push_back({n - j, j});
}

namespace {

// powers[p] = t^p for p = 0..order
void fill_powers(double t, int order, std::vector<double>& powers) {
  powers.resize(order + 1);
  powers[0] = 1.0;
  for (int p = 1; p <= order; ++p) powers[p] = powers[p - 1] * t;
}

}  // namespace

Eigen::MatrixXd MonomialBasis::values(std::span<const Point> points) const {
  if (points.empty()) throw std::invalid_argument("vandermonde: empty point list");
  Eigen::MatrixXd v(points.size(), size());
  std::vector<double> px, py;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point s = (points[i] - centroid_) / diameter_;
    fill_powers(s.x(), order_, px);
    fill_powers(s.y(), order_, py);
    for (int a = 0; a < size(); ++a) v(i, a) = px[exponents_[a][0]] * py[exponents_[a][1]];
  }
  return v;
}

Eigen::RowVectorXd MonomialBasis::values_at(const Point& x) const {
  return values(std::span<const Point>(&x, 1)).row(0);
}

std::array<Eigen::MatrixXd, 2> MonomialBasis::gradients(std::span<const Point> points) const {
  if (points.empty()) throw std::invalid_argument("vandermonde: empty point list");
  const auto v = values(points);
  std::array<Eigen::MatrixXd, 2> g{v * derivative_matrix(0), v * derivative_matrix(1)};
  return g;
}

Eigen::MatrixXd MonomialBasis::laplacians(std::span<const Point> points) const {
  const auto v = values(points);
  const auto dx = derivative_matrix(0);
  const auto dy = derivative_matrix(1);
  return v * (dx * dx + dy * dy);
}

Eigen::MatrixXd MonomialBasis::derivative_matrix(int axis) const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size(), size());
  for (int a = 0; a < size(); ++a) {
    MultiIndex e = exponents_[a];
    if (e[axis] == 0) continue;
    const double c = e[axis] / diameter_;
    e[axis] -= 1;
    const int row = monomial_index(2, e) - 1;
    d(row, a) = c;
  }
  return d;
}

GradDecomposition build_grad_decomposition(const MonomialBasis& basis) {
  const int k = basis.order();
  const int nk = basis.size();
  const int n_grad = grad_dim(k);
  const MonomialBasis higher = basis.with_order(k + 1);
  const Eigen::MatrixXd dx = higher.derivative_matrix(0);
  const Eigen::MatrixXd dy = higher.derivative_matrix(1);

  GradDecomposition out;
  out.order = k;
  out.t_nabla.resize(n_grad, 2 * nk);
  // derivatives of degree-(k+1) monomials live in the first n_k rows
  for (int a = 0; a < n_grad; ++a) {
    out.t_nabla.block(a, 0, 1, nk) = dx.col(a + 1).head(nk).transpose();
    out.t_nabla.block(a, nk, 1, nk) = dy.col(a + 1).head(nk).transpose();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.t_nabla, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double cutoff = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++rank;
  if (rank != n_grad)
    throw std::runtime_error("build_grad_decomposition: numerical rank " + std::to_string(rank) +
                             " differs from n_nabla = " + std::to_string(n_grad) +
                             " (ill-conditioned scaling?)");
  const int n_perp = 2 * nk - n_grad;
  out.t_perp = svd.matrixV().rightCols(n_perp).transpose();
  return out;
}

Eigen::MatrixXd vector_embedding(int low, int high) {
  const int nl = poly_dim(2, low);
  const int nh = poly_dim(2, high);
  if (nl > nh) throw std::invalid_argument("vector_embedding: low order exceeds high order");
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(2 * nl, 2 * nh);
  for (int a = 0; a < nl; ++a) {
    e(a, a) = 1.0;
    e(nl + a, nh + a) = 1.0;
  }
  return e;
}

}  // namespace vemkit::polybasis
