#pragma once

#include <span>
#include <vector>

#include "cfdpf/consensus.hpp"
#include "cfdpf/particles.hpp"

namespace cfdpf {

enum class ProposalKind { sir, product, optimal_gaussian };

const char* to_string(ProposalKind kind);
ProposalKind proposal_from_string(const std::string& name);

/// A node's filtering summary (mu, P) and prediction summary (upsilon, R) for
/// one time index.
struct LocalSummaries {
  GaussianSummary filtering;
  GaussianSummary prediction;
};

/// Network products as reconstructed at one node after consensus. The four
/// `*_sum` members are the network sums sum_j P_j^-1, sum_j P_j^-1 mu_j,
/// sum_j R_j^-1 and sum_j R_j^-1 upsilon_j, i.e. N times the node's consensus
/// averages.
struct FusedSummaries {
  GaussianSummary filtering;
  GaussianSummary prediction;
  Matrix filtering_info_sum;
  Vector filtering_info_mean_sum;
  Matrix prediction_info_sum;
  Vector prediction_info_mean_sum;
  int iterations = 0;
  double disagreement = 0.0;  // final max disagreement of the filtering information
};

/// P = (sum P_l^-1)^-1, mu = P sum P_l^-1 mu_l. A single input is returned
/// unchanged.
GaussianSummary gaussian_product(std::span<const GaussianSummary> summaries);

/// Runs the four information-form consensus states for `budget` rounds and
/// reconstructs both products at every node.
std::vector<FusedSummaries> consensus_product(std::span<const LocalSummaries> local,
                                              const ConsensusMatrix& u, int budget);

struct FusionFilterState {
  ParticleSet particles;  // time index k
  Matrix previous;        // particles at k-1, column-aligned with `particles`
  int node = 0;
};

FusionFilterState init_fusion_state(ParticleSet particles, int node);

/// Particles drawn from one proposal together with everything the matching
/// weight update needs. Only `propose` creates these, so the update always
/// uses the proposal that generated the particles.
class ProposalDraw {
 public:
  ProposalKind requested() const { return requested_; }
  /// The proposal actually used; differs from `requested` after a fallback.
  ProposalKind applied() const { return applied_; }
  bool fell_back() const { return requested_ != applied_; }
  const Matrix& particles() const { return particles_; }
  /// Proposal density of the optimal-Gaussian draw; empty otherwise.
  const Gaussian& track_fusion() const { return track_fusion_; }

 private:
  friend ProposalDraw propose(ProposalKind, const FusionFilterState&, const FusedSummaries&,
                              const GaussianSummary&, const StateSpaceModel&, Rng&);
  ProposalKind requested_ = ProposalKind::product;
  ProposalKind applied_ = ProposalKind::product;
  Matrix particles_;
  Gaussian track_fusion_;
};

/// Track-fusion-without-feedback Gaussian for one node: information
/// R_l^-1 + sum P_j^-1 - sum R_j^-1, eigenvalues floored at
/// `floor_ratio` * max|lambda|. Returns false when no positive eigenvalue exists.
bool track_fusion_gaussian(const FusedSummaries& fused, const GaussianSummary& local_prediction,
                           Gaussian& out, double floor_ratio = 1e-9);

ProposalDraw propose(ProposalKind kind, const FusionFilterState& state, const FusedSummaries& fused,
                     const GaussianSummary& local_prediction, const StateSpaceModel& model,
                     Rng& rng);

/// Log-weight increments for the draw's proposal, added to the state's
/// previous weights and normalized. Returns the updated particle set at k+1.
ParticleSet ff_weight_update(const ProposalDraw& draw, const FusionFilterState& state,
                             const FusedSummaries& fused, const StateSpaceModel& model);

struct FusionStepInfo {
  bool fell_back = false;
  bool resampled = false;
  double ess = 0.0;
};

/// One fusion-filter step at a single node given its fused summaries.
FusionFilterState fusion_update(const FusionFilterState& state, const FusedSummaries& fused,
                                const GaussianSummary& local_prediction, ProposalKind kind,
                                const StateSpaceModel& model, Rng& rng, ResamplePolicy policy = {},
                                FusionStepInfo* info = nullptr);

/// Network-wide step: consensus on the local summaries, then `fusion_update`
/// at every node with that node's generator.
std::vector<FusionFilterState> fusion_filter_step(const std::vector<FusionFilterState>& states,
                                                  std::span<const LocalSummaries> local,
                                                  const ConsensusMatrix& u, int budget,
                                                  ProposalKind kind, const StateSpaceModel& model,
                                                  std::vector<Rng>& rngs,
                                                  ResamplePolicy policy = {},
                                                  std::vector<FusionStepInfo>* info = nullptr);

/// Multi-step fusion from k to k + skipped + m. `history[l]` holds node l's
/// summaries for the last m indices in time order. Particles are carried
/// through `skipped` unweighted transitions, then m - 1 transitions that
/// enter the weight, then drawn from the fused filtering product.
std::vector<FusionFilterState> modified_fusion_filter_step(
    const std::vector<FusionFilterState>& states,
    const std::vector<std::vector<LocalSummaries>>& history, const ConsensusMatrix& u, int budget,
    const StateSpaceModel& model, std::vector<Rng>& rngs, ResamplePolicy policy = {},
    int skipped = 0, std::vector<FusionStepInfo>* info = nullptr,
    std::vector<FusedSummaries>* fused_out = nullptr);

/// Weighted mean of the fusion particles.
Vector fused_estimate(const FusionFilterState& state);

}  // namespace cfdpf
