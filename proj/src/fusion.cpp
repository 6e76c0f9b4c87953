#include "cfdpf/fusion.hpp"

#include <Eigen/Eigenvalues>

namespace cfdpf {

const char* to_string(ProposalKind kind) {
  switch (kind) {
    case ProposalKind::sir: return "sir";
    case ProposalKind::product: return "product";
    case ProposalKind::optimal_gaussian: return "optimal";
  }
  return "unknown";
}

ProposalKind proposal_from_string(const std::string& name) {
  if (name == "sir") return ProposalKind::sir;
  if (name == "product") return ProposalKind::product;
  if (name == "optimal" || name == "optimal_gaussian") return ProposalKind::optimal_gaussian;
  throw Error("config", "unknown proposal '" + name + "'");
}

GaussianSummary gaussian_product(std::span<const GaussianSummary> summaries) {
  if (summaries.empty()) throw Error("domain", "gaussian_product needs at least one input");
  if (summaries.size() == 1) return summaries.front();
  const auto n = summaries.front().mean.size();
  Matrix info = Matrix::Zero(n, n);
  Vector info_mean = Vector::Zero(n);
  for (const auto& s : summaries) {
    if (s.mean.size() != n) throw Error("shape", "gaussian_product inputs differ in dimension");
    const Matrix inv = spd_inverse(s.covariance, "covariance of node " + std::to_string(s.node));
    info += inv;
    info_mean += inv * s.mean;
  }
  GaussianSummary out;
  out.covariance = spd_inverse(info, "product information");
  out.mean = out.covariance * info_mean;
  out.kind = summaries.front().kind;
  out.node = summaries.front().node;
  out.time_index = summaries.front().time_index;
  return out;
}

std::vector<FusedSummaries> consensus_product(std::span<const LocalSummaries> local,
                                              const ConsensusMatrix& u, int budget) {
  const int n = static_cast<int>(local.size());
  if (n == 0) throw Error("domain", "consensus_product needs at least one node");
  if (u.size() != n) throw Error("shape", "consensus matrix size does not match node count");

  ConsensusState c1, c2, c3, c4;
  for (const auto& s : local) {
    const Matrix p_inv =
        spd_inverse(s.filtering.covariance, "filtering covariance of node " +
                                                std::to_string(s.filtering.node));
    const Matrix r_inv =
        spd_inverse(s.prediction.covariance, "prediction covariance of node " +
                                                 std::to_string(s.prediction.node));
    c1.values.push_back(p_inv);
    c2.values.push_back(p_inv * s.filtering.mean);
    c3.values.push_back(r_inv);
    c4.values.push_back(r_inv * s.prediction.mean);
  }
  const auto r1 = run_consensus(c1, u, budget);
  const auto r2 = run_consensus(c2, u, budget);
  const auto r3 = run_consensus(c3, u, budget);
  const auto r4 = run_consensus(c4, u, budget);

  const double scale = static_cast<double>(n);
  std::vector<FusedSummaries> out(n);
  for (int l = 0; l < n; ++l) {
    auto& f = out[l];
    const Matrix& x1 = r1.state.values[l];
    const Matrix& x3 = r3.state.values[l];
    const Matrix x1_inv = spd_inverse(x1, "consensus filtering information at node " +
                                              std::to_string(l));
    const Matrix x3_inv = spd_inverse(x3, "consensus prediction information at node " +
                                              std::to_string(l));
    f.filtering.covariance = x1_inv / scale;
    f.filtering.mean = x1_inv * r2.state.values[l];
    f.filtering.kind = DensityKind::filtering;
    f.filtering.node = l;
    f.filtering.time_index = local[l].filtering.time_index;
    f.prediction.covariance = x3_inv / scale;
    f.prediction.mean = x3_inv * r4.state.values[l];
    f.prediction.kind = DensityKind::prediction;
    f.prediction.node = l;
    f.prediction.time_index = local[l].prediction.time_index;
    f.filtering_info_sum = scale * x1;
    f.filtering_info_mean_sum = scale * r2.state.values[l];
    f.prediction_info_sum = scale * x3;
    f.prediction_info_mean_sum = scale * r4.state.values[l];
    f.iterations = budget;
    f.disagreement = r1.disagreement.back();
  }
  return out;
}

FusionFilterState init_fusion_state(ParticleSet particles, int node) {
  FusionFilterState s;
  s.previous = particles.particles;
  s.particles = std::move(particles);
  s.node = node;
  return s;
}

bool track_fusion_gaussian(const FusedSummaries& fused, const GaussianSummary& local_prediction,
                           Gaussian& out, double floor_ratio) {
  const Matrix r_inv = spd_inverse(local_prediction.covariance, "local prediction covariance");
  const Matrix info =
      symmetrize(r_inv + fused.filtering_info_sum - fused.prediction_info_sum);
  if (!info.allFinite()) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(info);
  Vector lambda = es.eigenvalues();
  const double largest = lambda.maxCoeff();
  if (!(largest > 0.0)) return false;
  const double floor = floor_ratio * lambda.cwiseAbs().maxCoeff();
  lambda = lambda.cwiseMax(floor);
  const Matrix& v = es.eigenvectors();
  const Matrix cov = symmetrize(v * lambda.cwiseInverse().asDiagonal() * v.transpose());
  const Vector mean =
      cov * (r_inv * local_prediction.mean + fused.filtering_info_mean_sum -
             fused.prediction_info_mean_sum);
  if (!mean.allFinite() || !cov.allFinite()) return false;
  out = Gaussian(mean, cov);
  return true;
}

ProposalDraw propose(ProposalKind kind, const FusionFilterState& state, const FusedSummaries& fused,
                     const GaussianSummary& local_prediction, const StateSpaceModel& model,
                     Rng& rng) {
  ProposalDraw draw;
  draw.requested_ = kind;
  draw.applied_ = kind;
  const auto& prev = state.particles.particles;
  const int count = state.particles.size();
  draw.particles_.resize(prev.rows(), count);

  if (kind == ProposalKind::optimal_gaussian &&
      !track_fusion_gaussian(fused, local_prediction, draw.track_fusion_)) {
    draw.applied_ = ProposalKind::product;
  }
  switch (draw.applied_) {
    case ProposalKind::sir:
      for (int i = 0; i < count; ++i) draw.particles_.col(i) = model.propagate(prev.col(i), rng);
      break;
    case ProposalKind::product: {
      const Gaussian q(fused.filtering.mean, fused.filtering.covariance);
      for (int i = 0; i < count; ++i) draw.particles_.col(i) = q.sample(rng);
      break;
    }
    case ProposalKind::optimal_gaussian:
      for (int i = 0; i < count; ++i) draw.particles_.col(i) = draw.track_fusion_.sample(rng);
      break;
  }
  return draw;
}

ParticleSet ff_weight_update(const ProposalDraw& draw, const FusionFilterState& state,
                             const FusedSummaries& fused, const StateSpaceModel& model) {
  const Gaussian numerator(fused.filtering.mean, fused.filtering.covariance);
  const Gaussian denominator(fused.prediction.mean, fused.prediction.covariance);
  const auto& prev = state.particles.particles;
  ParticleSet out;
  out.particles = draw.particles();
  out.log_weights = state.particles.log_weights;
  out.time_index = state.particles.time_index + 1;
  out.kind = DensityKind::filtering;
  for (int i = 0; i < out.size(); ++i) {
    const Vector x = out.particles.col(i);
    double increment = 0.0;
    switch (draw.applied()) {
      case ProposalKind::sir:
        increment = numerator.log_pdf(x) - denominator.log_pdf(x);
        break;
      case ProposalKind::product:
        increment = model.log_transition(x, prev.col(i)) - denominator.log_pdf(x);
        break;
      case ProposalKind::optimal_gaussian:
        increment = numerator.log_pdf(x) + model.log_transition(x, prev.col(i)) -
                    denominator.log_pdf(x) - draw.track_fusion().log_pdf(x);
        break;
    }
    out.log_weights(i) += increment;
  }
  const double lse = log_sum_exp(out.log_weights);
  if (!std::isfinite(lse)) throw DivergenceError("fusion divergence", state.node, out.time_index);
  out.log_weights.array() -= lse;
  return out;
}

FusionFilterState fusion_update(const FusionFilterState& state, const FusedSummaries& fused,
                                const GaussianSummary& local_prediction, ProposalKind kind,
                                const StateSpaceModel& model, Rng& rng, ResamplePolicy policy,
                                FusionStepInfo* info) {
  const ProposalDraw draw = propose(kind, state, fused, local_prediction, model, rng);
  FusionFilterState next;
  next.node = state.node;
  next.previous = state.particles.particles;
  next.particles = ff_weight_update(draw, state, fused, model);
  const double e = ess(next.particles);
  const bool resampled = resample_if_degenerate(next.particles, rng, policy);
  if (info != nullptr) *info = {draw.fell_back(), resampled, e};
  return next;
}

std::vector<FusionFilterState> fusion_filter_step(const std::vector<FusionFilterState>& states,
                                                  std::span<const LocalSummaries> local,
                                                  const ConsensusMatrix& u, int budget,
                                                  ProposalKind kind, const StateSpaceModel& model,
                                                  std::vector<Rng>& rngs, ResamplePolicy policy,
                                                  std::vector<FusionStepInfo>* info) {
  const auto fused = consensus_product(local, u, budget);
  std::vector<FusionFilterState> out;
  out.reserve(states.size());
  if (info != nullptr) info->assign(states.size(), {});
  for (std::size_t l = 0; l < states.size(); ++l) {
    out.push_back(fusion_update(states[l], fused[l], local[l].prediction, kind, model, rngs[l],
                                policy, info != nullptr ? &(*info)[l] : nullptr));
  }
  return out;
}

std::vector<FusionFilterState> modified_fusion_filter_step(
    const std::vector<FusionFilterState>& states,
    const std::vector<std::vector<LocalSummaries>>& history, const ConsensusMatrix& u, int budget,
    const StateSpaceModel& model, std::vector<Rng>& rngs, ResamplePolicy policy, int skipped,
    std::vector<FusionStepInfo>* info, std::vector<FusedSummaries>* fused_out) {
  const int n = static_cast<int>(states.size());
  if (static_cast<int>(history.size()) != n) {
    throw Error("insufficient_buffer", "insufficient local summary buffer");
  }
  const int m = history.empty() ? 0 : static_cast<int>(history.front().size());
  if (m < 1) throw Error("insufficient_buffer", "insufficient local summary buffer");

  // Per-node products over the buffered indices.
  std::vector<LocalSummaries> combined(n);
  for (int l = 0; l < n; ++l) {
    if (static_cast<int>(history[l].size()) != m) {
      throw Error("insufficient_buffer", "insufficient local summary buffer at node " +
                                             std::to_string(l));
    }
    std::vector<GaussianSummary> filt, pred;
    for (const auto& s : history[l]) {
      filt.push_back(s.filtering);
      pred.push_back(s.prediction);
    }
    combined[l].filtering = gaussian_product(filt);
    combined[l].prediction = gaussian_product(pred);
  }
  const auto fused = consensus_product(combined, u, budget);
  if (fused_out != nullptr) *fused_out = fused;

  std::vector<FusionFilterState> out;
  out.reserve(n);
  if (info != nullptr) info->assign(n, {});
  for (int l = 0; l < n; ++l) {
    const auto& state = states[l];
    Rng& rng = rngs[l];
    const Gaussian numerator(fused[l].filtering.mean, fused[l].filtering.covariance);
    const Gaussian denominator(fused[l].prediction.mean, fused[l].prediction.covariance);
    const int count = state.particles.size();

    FusionFilterState next;
    next.node = state.node;
    next.particles.particles.resize(state.particles.dim(), count);
    next.previous.resize(state.particles.dim(), count);
    next.particles.log_weights = state.particles.log_weights;
    next.particles.time_index = state.particles.time_index + skipped + m;
    next.particles.kind = DensityKind::filtering;

    for (int i = 0; i < count; ++i) {
      Vector x = state.particles.particles.col(i);
      for (int s = 0; s < skipped; ++s) x = model.propagate(x, rng);
      double transitions = 0.0;
      for (int step = 1; step < m; ++step) {
        Vector y = model.propagate(x, rng);
        transitions += model.log_transition(y, x);
        x = std::move(y);
      }
      const Vector final_draw = numerator.sample(rng);
      next.previous.col(i) = x;
      next.particles.particles.col(i) = final_draw;
      next.particles.log_weights(i) +=
          transitions + model.log_transition(final_draw, x) - denominator.log_pdf(final_draw);
    }
    const double lse = log_sum_exp(next.particles.log_weights);
    if (!std::isfinite(lse)) {
      throw DivergenceError("fusion divergence", state.node, next.particles.time_index);
    }
    next.particles.log_weights.array() -= lse;
    const double e = ess(next.particles);
    const bool resampled = resample_if_degenerate(next.particles, rng, policy);
    if (info != nullptr) (*info)[l] = {false, resampled, e};
    out.push_back(std::move(next));
  }
  return out;
}

Vector fused_estimate(const FusionFilterState& state) {
  return state.particles.particles * state.particles.weights();
}

}  // namespace cfdpf
