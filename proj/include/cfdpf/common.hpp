#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cfdpf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error raised by the library. `code` is a short stable
/// identifier that the CLI copies into its machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Raised when every importance weight underflows.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int node, int time_index)
      : Error("divergence", what + " (node " + std::to_string(node) + ", k " +
                                std::to_string(time_index) + ")"),
        node_(node),
        time_index_(time_index) {}

  int node() const noexcept { return node_; }
  int time_index() const noexcept { return time_index_; }

 private:
  int node_;
  int time_index_;
};

// Seeds are mixed with splitmix64 so every (master, tag...) tuple gets an
// independent stream.
std::uint64_t mix_seed(std::uint64_t value);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags);
Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

Matrix symmetrize(const Matrix& m);

/// Adds lambda * trace(m) / n * I, or `abs_floor` * I when the trace is zero.
Matrix regularize_covariance(const Matrix& m, double lambda = 1e-9, double abs_floor = 1e-12);

/// Inverse of a symmetric positive definite matrix via Cholesky. Falls back to
/// the regularized matrix once; throws `Error{"singular"}` if that fails too.
Matrix spd_inverse(const Matrix& m, const std::string& what = "matrix");

bool is_positive_definite(const Matrix& m);

bool all_finite(const Matrix& m);

/// Multivariate normal density with a cached Cholesky factor.
class Gaussian {
 public:
  Gaussian() = default;
  Gaussian(Vector mean, const Matrix& covariance);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }

  double log_pdf(const Vector& x) const;
  Vector sample(Rng& rng) const;

 private:
  Vector mean_;
  Matrix covariance_;
  Matrix lower_;
  double log_norm_ = 0.0;
};

/// Draws a vector of independent standard normals.
Vector standard_normal(int n, Rng& rng);

double log_sum_exp(const Vector& values);

}  // namespace cfdpf
