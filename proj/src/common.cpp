#include "cfdpf/common.hpp"

#include <cmath>
#include <limits>

namespace cfdpf {

std::uint64_t mix_seed(std::uint64_t value) {
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix_seed(master);
  for (auto t : tags) h = mix_seed(h ^ mix_seed(t + 0x632be59bd9b4e019ULL));
  return h;
}

Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> tags) {
  return Rng(derive_seed(master, tags));
}

double wrap_angle(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

Matrix regularize_covariance(const Matrix& m, double lambda, double abs_floor) {
  const auto n = m.rows();
  Matrix out = symmetrize(m);
  const double tr = out.trace();
  const double shift = tr > 0.0 ? lambda * tr / static_cast<double>(n) : abs_floor;
  out.diagonal().array() += shift;
  return out;
}

bool is_positive_definite(const Matrix& m) {
  if (!all_finite(m)) return false;
  Eigen::LLT<Matrix> llt(symmetrize(m));
  return llt.info() == Eigen::Success;
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix spd_inverse(const Matrix& m, const std::string& what) {
  const auto n = m.rows();
  Matrix sym = symmetrize(m);
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() != Eigen::Success || !sym.allFinite()) {
    llt.compute(regularize_covariance(sym));
    if (llt.info() != Eigen::Success || !sym.allFinite()) {
      throw Error("singular", what + " is not positive definite");
    }
  }
  return symmetrize(llt.solve(Matrix::Identity(n, n)));
}

Gaussian::Gaussian(Vector mean, const Matrix& covariance)
    : mean_(std::move(mean)), covariance_(symmetrize(covariance)) {
  Eigen::LLT<Matrix> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw Error("singular", "Gaussian covariance is not positive definite");
  }
  lower_ = llt.matrixL();
  const double log_det = 2.0 * lower_.diagonal().array().log().sum();
  log_norm_ = -0.5 * (static_cast<double>(mean_.size()) * std::log(2.0 * kPi) + log_det);
}

double Gaussian::log_pdf(const Vector& x) const {
  Vector r = x - mean_;
  lower_.triangularView<Eigen::Lower>().solveInPlace(r);
  return log_norm_ - 0.5 * r.squaredNorm();
}

Vector Gaussian::sample(Rng& rng) const {
  return mean_ + lower_ * standard_normal(dim(), rng);
}

Vector standard_normal(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

double log_sum_exp(const Vector& values) {
  const double mx = values.maxCoeff();
  if (!std::isfinite(mx)) return mx;
  return mx + std::log((values.array() - mx).exp().sum());
}

}  // namespace cfdpf
