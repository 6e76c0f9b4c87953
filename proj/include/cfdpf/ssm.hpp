#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "cfdpf/common.hpp"

namespace cfdpf {

using Point2 = Eigen::Vector2d;

struct Measurement {
  int node = 0;
  Vector value;
  int time_index = 0;
};

struct CoordinatedTurnParams {
  double accel = 1.08e-5;  // manoeuvre acceleration A_m, units/s^2
  double dt = 1.0;
  double sigma_v = 1.6e-3;
};

struct GlintNoiseParams {
  double epsilon = 0.09;
  // sigma^2(r) = a2 r^2 + a1 r + a0
  std::array<double, 3> variance_coeffs{0.08, 0.1150, 0.7405};
  double inflation = 1e4;
  // Filters score wrapped residuals with the mixture wrapped onto the circle;
  // false uses the mixture on the real line as is.
  bool wrapped = true;

  double variance(double range) const;
};

struct UnicycleParams {
  double dt = 1.0;
  double velocity_mean = 30.0;  // cm/s
  double velocity_std = 5.0;
  double angular_velocity_mean = 0.08;  // rad/s
  double angular_velocity_std = 0.01;
  double orientation_noise_std = 0.01;  // rad
  double cm_per_unit = 100.0;
  double min_angular_velocity = 1e-6;
};

struct UnicycleNoise {
  double velocity = 0.0;          // cm/s
  double angular_velocity = 0.0;  // rad/s
  double orientation = 0.0;       // rad/s, scaled by dt
};

enum class BearingConvention { four_quadrant, single_quadrant };

/// Clockwise coordinated-turn transition matrix evaluated at `state`.
Matrix ct_matrix(const Vector& state, const CoordinatedTurnParams& params);
Vector ct_transition(const Vector& state, const CoordinatedTurnParams& params,
                     const Vector& noise_draw);
/// Analytic Jacobian of x -> ct_matrix(x) * x, including the speed dependence of
/// the turn rate.
Matrix ct_jacobian(const Vector& state, const CoordinatedTurnParams& params);

/// Bearing of the target seen from `sensor`, clockwise from the +y axis.
double bearing(const Vector& state, const Point2& sensor,
               BearingConvention convention = BearingConvention::four_quadrant);

/// Unwrapped two-component mixture density of a residual `delta`.
double glint_log_density(double delta, double variance, const GlintNoiseParams& params);
/// Mixture density of a residual on (-pi, pi] when the noise is wrapped.
double wrapped_glint_log_density(double delta, double variance, const GlintNoiseParams& params);
/// Fisher information of the wrapped mixture about its location.
double wrapped_glint_fisher_information(double variance, const GlintNoiseParams& params);

double glint_log_likelihood(double z, double predicted_bearing, double range,
                            const GlintNoiseParams& params);

/// Fisher information of the glint mixture about its location parameter, for
/// a unit-variance core component. Scale by 1 / sigma^2 for other variances.
double glint_unit_fisher_information(double epsilon, double inflation);

Vector unicycle_transition(const Vector& state, const UnicycleParams& params,
                           const UnicycleNoise& noise);
/// Draws (V, W, xi) with |W| above the configured floor.
UnicycleNoise draw_unicycle_noise(const UnicycleParams& params, Rng& rng);

/// Abstract state-space model: x(k) = f(x(k-1)) + xi, z_l(k) = g_l(x(k)) + zeta_l.
///
/// All sampling goes through the supplied generator, so a model is a pure
/// function of (state, generator state).
class StateSpaceModel {
 public:
  virtual ~StateSpaceModel() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int n_nodes() const = 0;

  virtual Vector propagate(const Vector& x, Rng& rng) const = 0;
  virtual double log_transition(const Vector& next, const Vector& prev) const = 0;
  virtual Vector observe(int node, const Vector& x, Rng& rng) const = 0;
  virtual double log_likelihood(int node, const Vector& z, const Vector& x) const = 0;

  virtual std::vector<int> position_indices() const { return {0, 1}; }

  // Structure used by the information-matrix recursions. Only models with
  // additive Gaussian process noise support these.
  virtual bool additive_gaussian() const { return false; }
  virtual Vector drift(const Vector& x) const;
  virtual Matrix drift_jacobian(const Vector& x) const;
  virtual Matrix process_covariance() const;
  virtual Vector measurement_function(int node, const Vector& x) const;
  virtual Matrix measurement_jacobian(int node, const Vector& x) const;
  /// R_l^{-1} for Gaussian observation noise, or the equivalent Fisher
  /// information for other noise families.
  virtual Matrix observation_information(int node, const Vector& x) const;

  /// Residual z - g(x). Angular models wrap it.
  virtual Vector innovation(int node, const Vector& z, const Vector& x) const;
};

/// Central finite-difference Jacobian, step 1e-6 * (1 + |x_i|). The columns are
/// computed from `fn(x + h e_i) - fn(x - h e_i)` passed through `difference`.
template <typename Fn, typename Diff>
Matrix finite_difference_jacobian(const Fn& fn, const Vector& x, const Diff& difference) {
  const Vector f0 = fn(x);
  Matrix jac(f0.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x(i)));
    Vector xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    jac.col(i) = difference(fn(xp), fn(xm)) / (2.0 * h);
  }
  return jac;
}

/// Shared bearing/glint observation model for the tracking scenarios.
class BearingSensorModel : public StateSpaceModel {
 public:
  BearingSensorModel(std::vector<Point2> sensors, GlintNoiseParams glint,
                     BearingConvention convention);

  int n_nodes() const override { return static_cast<int>(sensors_.size()); }
  Vector observe(int node, const Vector& x, Rng& rng) const override;
  double log_likelihood(int node, const Vector& z, const Vector& x) const override;
  Vector measurement_function(int node, const Vector& x) const override;
  Matrix measurement_jacobian(int node, const Vector& x) const override;
  Matrix observation_information(int node, const Vector& x) const override;
  Vector innovation(int node, const Vector& z, const Vector& x) const override;

  double range(int node, const Vector& x) const;
  const std::vector<Point2>& sensors() const { return sensors_; }
  const GlintNoiseParams& glint() const { return glint_; }

 private:
  std::vector<Point2> sensors_;
  GlintNoiseParams glint_;
  BearingConvention convention_;
  double unit_fisher_;
  std::vector<double> scaled_info_;  // variance * wrapped information on a log10 grid
};

class CoordinatedTurnBearingModel final : public BearingSensorModel {
 public:
  CoordinatedTurnBearingModel(CoordinatedTurnParams params, std::vector<Point2> sensors,
                              GlintNoiseParams glint = {},
                              BearingConvention convention = BearingConvention::four_quadrant);

  std::string name() const override { return "bot"; }
  int state_dim() const override { return 4; }
  Vector propagate(const Vector& x, Rng& rng) const override;
  double log_transition(const Vector& next, const Vector& prev) const override;

  bool additive_gaussian() const override { return true; }
  Vector drift(const Vector& x) const override;
  Matrix drift_jacobian(const Vector& x) const override;
  Matrix process_covariance() const override;

  const CoordinatedTurnParams& params() const { return params_; }

 private:
  CoordinatedTurnParams params_;
  Gaussian process_noise_;
};

class UnicycleBearingModel final : public BearingSensorModel {
 public:
  UnicycleBearingModel(UnicycleParams params, std::vector<Point2> sensors,
                       GlintNoiseParams glint = {},
                       BearingConvention convention = BearingConvention::four_quadrant);

  std::string name() const override { return "unicycle"; }
  int state_dim() const override { return 3; }
  Vector propagate(const Vector& x, Rng& rng) const override;
  /// Exact density of the unicycle step by change of variables from
  /// (V, W, xi) to (X, Y, theta), summed over the turn-rate branches.
  double log_transition(const Vector& next, const Vector& prev) const override;

  const UnicycleParams& params() const { return params_; }

 private:
  UnicycleParams params_;
};

/// x(k) = F x(k-1) + N(0, Q), z_l = H_l x + N(0, R_l).
class LinearGaussianModel final : public StateSpaceModel {
 public:
  LinearGaussianModel(Matrix transition, Matrix process_cov, std::vector<Matrix> observation,
                      std::vector<Matrix> observation_cov);

  std::string name() const override { return "linear_test"; }
  int state_dim() const override { return static_cast<int>(transition_.rows()); }
  int n_nodes() const override { return static_cast<int>(observation_.size()); }
  Vector propagate(const Vector& x, Rng& rng) const override;
  double log_transition(const Vector& next, const Vector& prev) const override;
  Vector observe(int node, const Vector& x, Rng& rng) const override;
  double log_likelihood(int node, const Vector& z, const Vector& x) const override;
  std::vector<int> position_indices() const override;

  bool additive_gaussian() const override { return true; }
  Vector drift(const Vector& x) const override { return transition_ * x; }
  Matrix drift_jacobian(const Vector&) const override { return transition_; }
  Matrix process_covariance() const override { return process_cov_; }
  Vector measurement_function(int node, const Vector& x) const override;
  Matrix measurement_jacobian(int node, const Vector&) const override;
  Matrix observation_information(int node, const Vector&) const override;

  const Matrix& transition() const { return transition_; }
  const Matrix& observation(int node) const { return observation_.at(node); }
  const Matrix& observation_cov(int node) const { return observation_cov_.at(node); }

 private:
  Matrix transition_;
  Matrix process_cov_;
  std::vector<Matrix> observation_;
  std::vector<Matrix> observation_cov_;
  std::vector<Matrix> observation_info_;
  Gaussian process_noise_;
  std::vector<Gaussian> observation_noise_;
};

std::shared_ptr<LinearGaussianModel> linear_gaussian_model(
    const Matrix& transition, const Matrix& process_cov,
    const std::vector<Matrix>& observation, const std::vector<Matrix>& observation_cov);

}  // namespace cfdpf
