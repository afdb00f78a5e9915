#include "rcdlab/heat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "rcdlab/error.hpp"

namespace rcdlab {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Symmetrized generator D^{1/2} A D^{-1/2} with D = diag(m).
Eigen::MatrixXd symmetric_generator(const ModelSpace& space) {
  const std::size_t n = space.size();
  const auto& m = space.measure();
  const auto& c = space.conductance();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t e = 0; e < space.edge_count(); ++e) {
    const auto [i, j] = space.edge(e);
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    const double off = c[e] / std::sqrt(m[i] * m[j]);
    b(ii, jj) += off;
    b(jj, ii) += off;
    b(ii, ii) -= c[e] / m[i];
    b(jj, jj) -= c[e] / m[j];
  }
  return b;
}

}  // namespace

SpectralSolver::SpectralSolver(SpacePtr space) : space_(std::move(space)) {
  require(space_ != nullptr, ErrorCode::InvalidParameter, "solver needs a space");
  n_ = space_->size();
  const auto n = static_cast<Eigen::Index>(n_);
  const auto& m = space_->measure();

  // The kernel of the symmetrized generator is spanned by q = √m. Reflect q
  // onto the first axis and solve only on its orthogonal complement so the
  // zero mode is exact instead of carrying an eps·‖B‖ eigenvalue error.
  Eigen::VectorXd q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = std::sqrt(m[static_cast<std::size_t>(i)]);
  q.normalize();
  Eigen::VectorXd v = q;
  v(0) += q(0) >= 0.0 ? 1.0 : -1.0;
  const double vv = v.squaredNorm();
  Eigen::MatrixXd reflect = Eigen::MatrixXd::Identity(n, n) - (2.0 / vv) * v * v.transpose();

  const Eigen::MatrixXd b = symmetric_generator(*space_);
  const Eigen::MatrixXd reflected = reflect * b * reflect;
  Eigen::MatrixXd block = reflected.bottomRightCorner(n - 1, n - 1);
  block = 0.5 * (block + block.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
  if (eig.info() != Eigen::Success)
    fail(ErrorCode::Numerical, "symmetric eigensolver did not converge (n = " + std::to_string(n_) + ")");

  const Eigen::MatrixXd vectors = reflect.rightCols(n - 1) * eig.eigenvectors();

  eigenvalues_.resize(n_);
  basis_.assign(n_ * n_, 0.0);
  eigenvalues_[0] = 0.0;
  for (std::size_t i = 0; i < n_; ++i) basis_[i] = 1.0;
  // Eigen sorts ascending; we store nonincreasing.
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    const Eigen::Index src = n - 2 - k;
    const auto row = static_cast<std::size_t>(k + 1);
    eigenvalues_[row] = std::min(eig.eigenvalues()(src), 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
      basis_[row * n_ + static_cast<std::size_t>(i)] = vectors(i, src) / std::sqrt(m[static_cast<std::size_t>(i)]);
  }
}

ScalarField SpectralSolver::eigenfield(std::size_t k) const {
  std::vector<double> v(basis_.begin() + static_cast<std::ptrdiff_t>(k * n_),
                        basis_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n_));
  return ScalarField(space_, std::move(v));
}

std::vector<double> SpectralSolver::coefficients(const ScalarField& f) const {
  check_field(*space_, f);
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::Map<const RowMatrix> e(basis_.data(), n, n);
  Eigen::VectorXd weighted(n);
  const auto& m = space_->measure();
  for (Eigen::Index i = 0; i < n; ++i) weighted(i) = f[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
  const Eigen::VectorXd c = e * weighted;
  return {c.data(), c.data() + n};
}

ScalarField SpectralSolver::synthesize(const std::vector<double>& coefficients) const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::Map<const RowMatrix> e(basis_.data(), n, n);
  Eigen::Map<const Eigen::VectorXd> c(coefficients.data(), n);
  const Eigen::VectorXd out = e.transpose() * c;
  return ScalarField(space_, std::vector<double>(out.data(), out.data() + n));
}

SpectralSolver build_solver(SpacePtr space) { return SpectralSolver(std::move(space)); }

SolverResiduals solver_residuals(const SpectralSolver& solver) {
  SolverResiduals r;
  const auto& space = *solver.space();
  const std::size_t n = solver.size();
  std::vector<ScalarField> fields;
  fields.reserve(n);
  for (std::size_t k = 0; k < n; ++k) fields.push_back(solver.eigenfield(k));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      r.orthonormality = std::max(r.orthonormality, std::abs(inner(fields[i], fields[j]) - target));
    }
    const ScalarField lap = laplacian(space, fields[i]);
    const double lambda = solver.eigenvalues()[i];
    double worst = 0.0;
    for (std::size_t x = 0; x < n; ++x) worst = std::max(worst, std::abs(lap[x] - lambda * fields[i][x]));
    r.eigen_equation = std::max(r.eigen_equation, worst / std::max(1.0, std::abs(lambda)));
  }
  return r;
}

ScalarField heat_apply(const SpectralSolver& solver, const ScalarField& f, double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorCode::Domain, "heat_apply needs t >= 0");
  if (t == 0.0) {
    check_field(*solver.space(), f);
    return f;
  }
  auto c = solver.coefficients(f);
  const auto& lambda = solver.eigenvalues();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(lambda[k] * t);
  return solver.synthesize(c);
}

ScalarField heat_time_derivative(const SpectralSolver& solver, const ScalarField& f, double t) {
  require(t > 0.0 && std::isfinite(t), ErrorCode::Domain, "heat_time_derivative needs t > 0");
  auto c = solver.coefficients(f);
  const auto& lambda = solver.eigenvalues();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= lambda[k] * std::exp(lambda[k] * t);
  return solver.synthesize(c);
}

ScalarField dirac_density(const SpacePtr& space, std::size_t x) {
  require(x < space->size(), ErrorCode::InvalidParameter, "base node out of range");
  ScalarField d(space, 0.0);
  d[x] = 1.0 / space->measure()[x];
  return d;
}

HeatKernelField heat_kernel(const SpectralSolver& solver, std::size_t x, double t) {
  require(t > 0.0 && std::isfinite(t), ErrorCode::Domain, "heat_kernel needs t > 0");
  require(x < solver.size(), ErrorCode::InvalidParameter, "base node out of range");
  // p(t,x,y) = Σ_k e^{λ_k t} e_k(x) e_k(y): the same products in the same
  // order for (x,y) and (y,x), so the kernel is symmetric to the last bit.
  std::vector<double> c(solver.size());
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = std::exp(solver.eigenvalues()[k] * t) * solver.eigenfield_at(k, x);
  HeatKernelField kernel{x, t, solver.synthesize(c), false};
  kernel.resolution_warning = kernel.density.min() < -1e-12;
  return kernel;
}

GaussianKernelValues gaussian_kernel_oracle(double N, double t, double r) {
  require(t > 0.0 && std::isfinite(t), ErrorCode::Domain, "Gaussian kernel needs t > 0");
  require(N >= 1.0, ErrorCode::InvalidParameter, "Gaussian kernel needs N >= 1");
  require(r >= 0.0, ErrorCode::InvalidParameter, "distance must be nonnegative");
  GaussianKernelValues g;
  const double q = r * r / (4.0 * t * t);
  g.p = std::pow(4.0 * std::numbers::pi * t, -0.5 * N) * std::exp(-r * r / (4.0 * t));
  g.grad_log_sq = q;
  g.dt_log = q - N / (2.0 * t);
  return g;
}

}  // namespace rcdlab
