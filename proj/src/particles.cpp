#include "cfdpf/particles.hpp"

#include <cmath>

namespace cfdpf {

Vector ParticleSet::weights() const {
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) throw DivergenceError("total weight underflow", -1, time_index);
  return (log_weights.array() - lse).exp();
}

void ParticleSet::normalize(int node) {
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) throw DivergenceError("filter divergence", node, time_index);
  log_weights.array() -= lse;
}

ParticleSet sample_prior(const Vector& mean, const Matrix& covariance, int count, Rng& rng,
                         int time_index) {
  const Gaussian prior(mean, covariance);
  ParticleSet set;
  set.particles.resize(mean.size(), count);
  for (int i = 0; i < count; ++i) set.particles.col(i) = prior.sample(rng);
  set.log_weights = Vector::Constant(count, -std::log(static_cast<double>(count)));
  set.time_index = time_index;
  set.kind = DensityKind::filtering;
  return set;
}

ParticleSet sample_prediction(const ParticleSet& set, const StateSpaceModel& model, Rng& rng) {
  ParticleSet out;
  out.particles.resize(set.dim(), set.size());
  for (int i = 0; i < set.size(); ++i) {
    out.particles.col(i) = model.propagate(set.particles.col(i), rng);
  }
  out.log_weights = set.log_weights;
  out.time_index = set.time_index + 1;
  out.kind = DensityKind::prediction;
  return out;
}

void apply_likelihood(ParticleSet& set, std::span<const Measurement> measurements,
                      const StateSpaceModel& model, int node) {
  for (int i = 0; i < set.size(); ++i) {
    const Vector x = set.particles.col(i);
    double ll = 0.0;
    for (const auto& z : measurements) ll += model.log_likelihood(z.node, z.value, x);
    set.log_weights(i) += ll;
  }
  set.kind = DensityKind::filtering;
  set.normalize(node);
}

ParticleSet sir_step(const ParticleSet& set, std::span<const Measurement> measurements,
                     const StateSpaceModel& model, Rng& rng, ResamplePolicy policy, int node) {
  ParticleSet out = sample_prediction(set, model, rng);
  apply_likelihood(out, measurements, model, node);
  resample_if_degenerate(out, rng, policy);
  return out;
}

GaussianSummary summarize(const ParticleSet& set, int node) {
  const Vector w = set.weights();
  GaussianSummary s;
  s.mean = set.particles * w;
  const Matrix centred = set.particles.colwise() - s.mean;
  s.covariance = regularize_covariance(centred * w.asDiagonal() * centred.transpose());
  s.kind = set.kind;
  s.node = node;
  s.time_index = set.time_index;
  return s;
}

std::vector<int> systematic_counts(const Vector& weights, int count, double offset) {
  std::vector<int> counts(weights.size(), 0);
  const double step = 1.0 / count;
  double u = offset * step;
  double cumulative = 0.0;
  int j = 0;
  const int last = static_cast<int>(weights.size()) - 1;
  for (int i = 0; i < count; ++i) {
    while (j < last && cumulative + weights(j) <= u) {
      cumulative += weights(j);
      ++j;
    }
    ++counts[j];
    u += step;
  }
  return counts;
}

ParticleSet resample(const ParticleSet& set, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto counts = systematic_counts(set.weights(), set.size(), unif(rng));
  ParticleSet out;
  out.particles.resize(set.dim(), set.size());
  int col = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    for (int c = 0; c < counts[j]; ++c) out.particles.col(col++) = set.particles.col(j);
  }
  out.log_weights = Vector::Constant(set.size(), -std::log(static_cast<double>(set.size())));
  out.time_index = set.time_index;
  out.kind = set.kind;
  return out;
}

double ess(const ParticleSet& set) { return 1.0 / set.weights().squaredNorm(); }

bool resample_if_degenerate(ParticleSet& set, Rng& rng, ResamplePolicy policy) {
  if (ess(set) >= policy.ess_fraction * set.size()) return false;
  set = resample(set, rng);
  return true;
}

Vector weighted_mean_standard_error(const ParticleSet& set) {
  const Vector w = set.weights();
  const Vector mean = set.particles * w;
  const Matrix centred = set.particles.colwise() - mean;
  return (centred.array().square().matrix() * w.array().square().matrix()).array().sqrt();
}

}  // namespace cfdpf
