#include "hboltz/collision_models.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hboltz/errors.hpp"

namespace hboltz {

namespace {

constexpr Eigen::Index kDenseLimit = 500;

double power_iteration(const Eigen::MatrixXd& L, const Eigen::VectorXd& weights, const PowerIterationOptions& opt)
{
  const Eigen::Index n = L.rows();
  Eigen::VectorXd d = weights.size() == n ? weights : Eigen::VectorXd::Ones(n);
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.1 * std::sin(static_cast<double>(i + 1));
  x.normalize();

  double previous = 0.0;
  double residual = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd y = L * x;
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    const double lambda = x.dot(d.cwiseProduct(y)) / x.dot(d.cwiseProduct(x));
    residual = (y - lambda * x).norm() / std::max(std::abs(lambda), 1e-300);
    if (it > 0 && std::abs(std::abs(lambda) - previous) <= opt.tol * std::abs(lambda) && residual <= std::sqrt(opt.tol)) {
      return std::abs(lambda);
    }
    previous = std::abs(lambda);
    x = y / ny;
  }
  std::ostringstream msg;
  msg << "power iteration did not converge in " << opt.max_iterations << " iterations (residual " << residual << ")";
  throw ConvergenceError(msg.str(), previous, residual);
}

}  // namespace

void quadratic_rhs(const CollisionTensor& tensor, std::span<const double> f, std::span<double> out)
{
  const std::size_t n = basis_size(tensor.M0());
  if (f.size() != n || out.size() != n) throw ContractError("quadratic_rhs: state size does not match the tensor");
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (const auto& e : tensor.row(k)) {
      const double w = e.i == e.j ? 1.0 : 2.0;
      sum += w * e.value * f[e.i] * f[e.j];
    }
    out[k] = sum;
  }
}

std::vector<double> quadratic_rhs(const CollisionTensor& tensor, std::span<const double> f)
{
  std::vector<double> out(basis_size(tensor.M0()));
  quadratic_rhs(tensor, f, out);
  return out;
}

void bgk_rhs(double tau, std::span<const double> f, std::span<double> out)
{
  if (!(tau > 0.0)) throw ContractError("bgk_rhs: tau must be positive");
  if (out.size() != f.size()) throw ContractError("bgk_rhs: output size mismatch");
  if (f.empty()) return;
  out[0] = 0.0;
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = -f[k] / tau;
}

std::vector<double> bgk_rhs(double tau, std::span<const double> f)
{
  std::vector<double> out(f.size());
  bgk_rhs(tau, f, out);
  return out;
}

Eigen::MatrixXd linearized_operator(const CollisionTensor& tensor)
{
  const auto n = static_cast<Eigen::Index>(basis_size(tensor.M0()));
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : tensor.entries()) {
    // A^{0,j} + A^{j,0} = 2 S^{0,j} in symmetrized storage
    if (e.i == 0) L(e.k, e.j) += 2.0 * e.value;
  }
  return L;
}

Eigen::VectorXd hermite_norms(int M0)
{
  const auto idx = index_set(M0);
  Eigen::VectorXd d(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    d(static_cast<Eigen::Index>(r)) =
        std::exp(log_factorial(idx[r].k1) + log_factorial(idx[r].k2) + log_factorial(idx[r].k3));
  }
  return d;
}

double spectral_radius(const Eigen::MatrixXd& L, SpectralMethod method, const Eigen::VectorXd& weights,
                       const PowerIterationOptions& options)
{
  if (L.rows() != L.cols()) throw ContractError("spectral_radius: matrix must be square");
  if (L.rows() == 0) return 0.0;
  if (method == SpectralMethod::automatic) method = L.rows() <= kDenseLimit ? SpectralMethod::dense : SpectralMethod::power;
  if (method == SpectralMethod::power) return power_iteration(L, weights, options);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(L, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("dense eigensolve failed", 0.0, 0.0);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

double linearized_radius(const CollisionTensor& tensor)
{
  return spectral_radius(linearized_operator(tensor), SpectralMethod::automatic, hermite_norms(tensor.M0()));
}

}  // namespace

HybridModel::HybridModel(std::shared_ptr<const CollisionTensor> tensor, int M)
    : HybridModel(tensor, M, tensor ? linearized_radius(*tensor) : 0.0)
{
}

HybridModel::HybridModel(std::shared_ptr<const CollisionTensor> tensor, int M, double nu)
    : tensor_(std::move(tensor)), M_(M), nu_(nu)
{
  if (!tensor_) throw ContractError("HybridModel: null tensor");
  if (M < tensor_->M0()) throw ContractError("HybridModel: M must be at least M0");
  if (!(nu >= 0.0)) throw ContractError("HybridModel: nu must be nonnegative");
}

void hybrid_rhs(const HybridModel& model, std::span<const double> f, std::span<double> out)
{
  const std::size_t n = basis_size(model.M());
  const std::size_t n0 = basis_size(model.M0());
  if (f.size() != n || out.size() != n) throw ContractError("hybrid_rhs: state size does not match M");
  // I_{M0} is a prefix of I_M in rank order.
  quadratic_rhs(model.tensor(), f.first(n0), out.first(n0));
  for (std::size_t k = n0; k < n; ++k) out[k] = -model.nu() * f[k];
}

std::vector<double> hybrid_rhs(const HybridModel& model, std::span<const double> f)
{
  std::vector<double> out(f.size());
  hybrid_rhs(model, f, out);
  return out;
}

}  // namespace hboltz
