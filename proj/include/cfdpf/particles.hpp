#pragma once

#include <span>

#include "cfdpf/common.hpp"
#include "cfdpf/ssm.hpp"

namespace cfdpf {

enum class DensityKind { filtering, prediction };

/// Weighted particle cloud. Particles are stored column-wise (n_x x N_s);
/// weights live in the log domain.
struct ParticleSet {
  Matrix particles;
  Vector log_weights;
  int time_index = 0;
  DensityKind kind = DensityKind::filtering;

  int size() const { return static_cast<int>(particles.cols()); }
  int dim() const { return static_cast<int>(particles.rows()); }

  /// exp(log_weights - logsumexp); throws DivergenceError on total underflow.
  Vector weights() const;
  /// Subtracts logsumexp so that the exponentiated weights sum to one.
  void normalize(int node = -1);
};

struct GaussianSummary {
  Vector mean;
  Matrix covariance;
  DensityKind kind = DensityKind::filtering;
  int node = 0;
  int time_index = 0;
};

struct ResamplePolicy {
  double ess_fraction = 0.5;  // resample when ESS < fraction * N
};

/// Draws N particles from N(mean, cov) with uniform weights.
ParticleSet sample_prior(const Vector& mean, const Matrix& covariance, int count, Rng& rng,
                         int time_index = 0);

/// One draw per particle from p(x(k) | X_i(k-1)); weights copied.
ParticleSet sample_prediction(const ParticleSet& set, const StateSpaceModel& model, Rng& rng);

/// Adds the sum of the supplied measurements' log-likelihoods to each particle
/// and renormalizes. `node` only labels a divergence error.
void apply_likelihood(ParticleSet& set, std::span<const Measurement> measurements,
                      const StateSpaceModel& model, int node = -1);

/// Transition-prior SIR step: predict, weight, normalize, resample if the ESS
/// falls below the policy threshold.
ParticleSet sir_step(const ParticleSet& set, std::span<const Measurement> measurements,
                     const StateSpaceModel& model, Rng& rng, ResamplePolicy policy = {},
                     int node = -1);

GaussianSummary summarize(const ParticleSet& set, int node = 0);

/// Systematic resampling; output weights are uniform.
ParticleSet resample(const ParticleSet& set, Rng& rng);
/// Systematic resampling counts for normalized weights and a single offset
/// u in [0, 1).
std::vector<int> systematic_counts(const Vector& weights, int count, double offset);

double ess(const ParticleSet& set);

/// Resamples when ESS < fraction * N. Returns true when it did.
bool resample_if_degenerate(ParticleSet& set, Rng& rng, ResamplePolicy policy = {});

/// Standard error of the weighted mean, sqrt(sum_i W_i^2 (X_i - mean)^2).
Vector weighted_mean_standard_error(const ParticleSet& set);

}  // namespace cfdpf
