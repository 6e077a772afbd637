#pragma once

// Right-hand sides of the moment ODE: quadratic Galerkin operator, BGK,
// and the hybrid quadratic core with an exponentially damped tail.

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hboltz/collision_tensor.hpp"

namespace hboltz {

/// Q_k = sum_{i,j} A_k^{i,j} f_i f_j over I_{M0}. `f` and `out` must have
/// exactly N_{M0} entries.
void quadratic_rhs(const CollisionTensor& tensor, std::span<const double> f, std::span<double> out);
std::vector<double> quadratic_rhs(const CollisionTensor& tensor, std::span<const double> f);

/// 0 for k = (0,0,0), -f_k / tau otherwise. Requires tau > 0.
void bgk_rhs(double tau, std::span<const double> f, std::span<double> out);
std::vector<double> bgk_rhs(double tau, std::span<const double> f);

/// L_{kj} = A_k^{000,j} + A_k^{j,000}, dense N_{M0} x N_{M0}.
Eigen::MatrixXd linearized_operator(const CollisionTensor& tensor);

/// diag(k1! k2! k3!) over I_{M0}. D * L is symmetric, so L has real
/// eigenvalues and is self-adjoint in the D-weighted inner product.
Eigen::VectorXd hermite_norms(int M0);

enum class SpectralMethod { automatic, dense, power };

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iterations = 100000;
};

/// Largest |lambda| of L. Automatic uses a dense eigensolve for N <= 500
/// and power iteration above. `weights`, if non-empty, is a positive
/// diagonal D making D * L symmetric; power iteration then uses the
/// D-weighted Rayleigh quotient. Throws ConvergenceError when power
/// iteration stalls.
double spectral_radius(const Eigen::MatrixXd& L, SpectralMethod method = SpectralMethod::automatic,
                       const Eigen::VectorXd& weights = {}, const PowerIterationOptions& options = {});

/// Quadratic core on I_{M0} plus decay at rate nu on I_M \ I_{M0}.
class HybridModel {
 public:
  /// nu is taken as the spectral radius of the linearized operator.
  HybridModel(std::shared_ptr<const CollisionTensor> tensor, int M);
  HybridModel(std::shared_ptr<const CollisionTensor> tensor, int M, double nu);

  const CollisionTensor& tensor() const noexcept { return *tensor_; }
  int M() const noexcept { return M_; }
  int M0() const noexcept { return tensor_->M0(); }
  double nu() const noexcept { return nu_; }

 private:
  std::shared_ptr<const CollisionTensor> tensor_;
  int M_;
  double nu_;
};

/// `f` and `out` have N_M entries.
void hybrid_rhs(const HybridModel& model, std::span<const double> f, std::span<double> out);
std::vector<double> hybrid_rhs(const HybridModel& model, std::span<const double> f);

}  // namespace hboltz
