#pragma once

#include <span>
#include <string>
#include <vector>

#include "cfdpf/common.hpp"
#include "cfdpf/ssm.hpp"

namespace cfdpf {

/// Expectation blocks of one step of the information recursions.
struct DBlocks {
  Matrix d11, d12, d21, d22, b22;
  std::vector<Matrix> measurement_info;  // J(z_l(k+1)) per node
  Matrix process_info;                   // Q^-1

  Matrix total_measurement_info() const;
};

enum class ExpectationMode { closed_form_gaussian, monte_carlo };

struct ExpectationConfig {
  int n_trajectories = 200;
  std::uint64_t seed = 0;
  ExpectationMode mode = ExpectationMode::monte_carlo;
};

/// Blocks for additive Gaussian process noise, averaging Jacobian products
/// over state samples at k (transition terms) and k+1 (measurement terms).
DBlocks d_blocks_gaussian(const StateSpaceModel& model, std::span<const Vector> states_now,
                          std::span<const Vector> states_next);

/// Noise-only trajectory samples: result[k][j] is trajectory j at time k,
/// k = 0..n_steps, started from N(mean, covariance). Closed-form mode returns
/// the single noise-free trajectory from the mean.
std::vector<std::vector<Vector>> sample_trajectories(const StateSpaceModel& model,
                                                     const Vector& mean, const Matrix& covariance,
                                                     int n_steps, const ExpectationConfig& cfg);

/// J(k+1) = D22 - D21 (J + D11)^-1 D12.
Matrix centralized_fim_step(const Matrix& j, const DBlocks& blocks);
/// Local recursion of node l: Q^-1 + J(z_l) - D21 (J_l + D11)^-1 D12.
Matrix local_fim_step(const Matrix& j_local, const DBlocks& blocks, int node);
/// J_l(k+1|k) = B22 - D21 (J_l + D11)^-1 D12.
Matrix local_prediction_fim_step(const Matrix& j_local, const DBlocks& blocks);
/// C22 = sum_l J_l(k+1) - sum_l J_l(k+1|k) + B22.
Matrix distributed_c22(std::span<const Matrix> local_fims, std::span<const Matrix> local_pred_fims,
                       const DBlocks& blocks);
/// J(k+1) = C22 - D21 (J + D11)^-1 D12.
Matrix distributed_fim_step(const Matrix& j, std::span<const Matrix> local_fims,
                            std::span<const Matrix> local_pred_fims, const DBlocks& blocks);
/// Node-dependent approximation J_l(k+1) + sum_{j != l} (J_j(k+1) - J_j(k+1|k)),
/// where J_l(k+1) is advanced from `j_node_prev`.
Matrix approx_fim_tharmarasa(const Matrix& j_node_prev, std::span<const Matrix> local_fims,
                             std::span<const Matrix> local_pred_fims, const DBlocks& blocks,
                             int node);
/// sum_l (J_l(k+1) - J_l(k+1|k)).
Matrix approx_fim_sum(std::span<const Matrix> local_fims, std::span<const Matrix> local_pred_fims);

/// sqrt(trace of J^-1 restricted to `position_indices`); throws on singular J.
double pcrlb_position_bound(const Matrix& j, const std::vector<int>& position_indices);
/// Same with the Moore-Penrose inverse, for information matrices that carry
/// no information about some directions.
double pcrlb_position_bound_pinv(const Matrix& j, const std::vector<int>& position_indices);

struct BoundPoint {
  int k = 0;
  std::string variant;  // central, exact, tharmarasa_<node>, sum
  double position_bound = 0.0;
  Matrix information;
};

struct PcrlbRun {
  std::vector<BoundPoint> points;
  std::vector<DBlocks> blocks;  // blocks[k] drives the step k -> k+1
};

/// All variants on shared blocks. `tharmarasa_nodes` selects the nodes whose
/// approximation is reported.
PcrlbRun run_pcrlb(const StateSpaceModel& model, const Vector& prior_mean,
                   const Matrix& prior_covariance, int n_steps, const ExpectationConfig& cfg,
                   const std::vector<int>& tharmarasa_nodes);

}  // namespace cfdpf
