#include "cfdpf/pcrlb.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cfdpf {

namespace {

// D21 (J + D11)^-1 D12, the information carried over from the previous step.
Matrix carried_information(const Matrix& j, const DBlocks& blocks) {
  const Matrix a = symmetrize(j + blocks.d11);
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) {
    // Fall back once to the regularized matrix, as for covariance inverses.
    llt.compute(regularize_covariance(a));
    if (llt.info() != Eigen::Success) throw Error("singular", "J + D11 is singular");
  }
  return blocks.d21 * llt.solve(blocks.d12);
}

}  // namespace

Matrix DBlocks::total_measurement_info() const {
  Matrix total = Matrix::Zero(d11.rows(), d11.cols());
  for (const auto& m : measurement_info) total += m;
  return total;
}

DBlocks d_blocks_gaussian(const StateSpaceModel& model, std::span<const Vector> states_now,
                          std::span<const Vector> states_next) {
  if (!model.additive_gaussian()) {
    throw Error("unsupported", model.name() + " has no additive Gaussian process noise");
  }
  if (states_now.empty() || states_next.empty()) {
    throw Error("domain", "D-blocks need at least one state sample");
  }
  const int n = model.state_dim();
  const Matrix q_inv = spd_inverse(model.process_covariance(), "process covariance");
  DBlocks b;
  b.process_info = q_inv;
  b.d11 = Matrix::Zero(n, n);
  Matrix mean_jac = Matrix::Zero(n, n);
  for (const auto& x : states_now) {
    const Matrix f = model.drift_jacobian(x);
    b.d11 += f.transpose() * q_inv * f;
    mean_jac += f;
  }
  const double inv_now = 1.0 / static_cast<double>(states_now.size());
  b.d11 = symmetrize(b.d11 * inv_now);
  mean_jac *= inv_now;
  b.d12 = -mean_jac.transpose() * q_inv;
  b.d21 = b.d12.transpose();
  b.b22 = q_inv;

  const double inv_next = 1.0 / static_cast<double>(states_next.size());
  b.measurement_info.assign(model.n_nodes(), Matrix::Zero(n, n));
  for (int l = 0; l < model.n_nodes(); ++l) {
    Matrix acc = Matrix::Zero(n, n);
    for (const auto& x : states_next) {
      const Matrix h = model.measurement_jacobian(l, x);
      acc += h.transpose() * model.observation_information(l, x) * h;
    }
    b.measurement_info[l] = symmetrize(acc * inv_next);
  }
  b.d22 = q_inv + b.total_measurement_info();
  return b;
}

std::vector<std::vector<Vector>> sample_trajectories(const StateSpaceModel& model,
                                                     const Vector& mean, const Matrix& covariance,
                                                     int n_steps, const ExpectationConfig& cfg) {
  if (cfg.n_trajectories < 1) throw Error("config", "n_trajectories must be at least 1");
  std::vector<std::vector<Vector>> out(n_steps + 1);
  if (cfg.mode == ExpectationMode::closed_form_gaussian) {
    Vector x = mean;
    out[0].push_back(x);
    for (int k = 1; k <= n_steps; ++k) {
      x = model.drift(x);
      out[k].push_back(x);
    }
    return out;
  }
  Rng rng(cfg.seed);
  const Gaussian prior(mean, covariance);
  for (int j = 0; j < cfg.n_trajectories; ++j) {
    Vector x = prior.sample(rng);
    out[0].push_back(x);
    for (int k = 1; k <= n_steps; ++k) {
      x = model.propagate(x, rng);
      out[k].push_back(x);
    }
  }
  return out;
}

Matrix centralized_fim_step(const Matrix& j, const DBlocks& blocks) {
  return symmetrize(blocks.d22 - carried_information(j, blocks));
}

Matrix local_fim_step(const Matrix& j_local, const DBlocks& blocks, int node) {
  return symmetrize(blocks.process_info + blocks.measurement_info.at(node) -
                    carried_information(j_local, blocks));
}

Matrix local_prediction_fim_step(const Matrix& j_local, const DBlocks& blocks) {
  return symmetrize(blocks.b22 - carried_information(j_local, blocks));
}

Matrix distributed_c22(std::span<const Matrix> local_fims, std::span<const Matrix> local_pred_fims,
                       const DBlocks& blocks) {
  if (local_fims.size() != local_pred_fims.size()) {
    throw Error("shape", "local and prediction FIM lists differ in length");
  }
  Matrix c22 = blocks.b22;
  for (std::size_t l = 0; l < local_fims.size(); ++l) c22 += local_fims[l] - local_pred_fims[l];
  return symmetrize(c22);
}

Matrix distributed_fim_step(const Matrix& j, std::span<const Matrix> local_fims,
                            std::span<const Matrix> local_pred_fims, const DBlocks& blocks) {
  return symmetrize(distributed_c22(local_fims, local_pred_fims, blocks) -
                    carried_information(j, blocks));
}

Matrix approx_fim_tharmarasa(const Matrix& j_node_prev, std::span<const Matrix> local_fims,
                             std::span<const Matrix> local_pred_fims, const DBlocks& blocks,
                             int node) {
  Matrix out = local_fim_step(j_node_prev, blocks, node);
  for (std::size_t l = 0; l < local_fims.size(); ++l) {
    if (static_cast<int>(l) != node) out += local_fims[l] - local_pred_fims[l];
  }
  return symmetrize(out);
}

Matrix approx_fim_sum(std::span<const Matrix> local_fims, std::span<const Matrix> local_pred_fims) {
  if (local_fims.empty()) throw Error("domain", "approx_fim_sum needs at least one node");
  Matrix out = Matrix::Zero(local_fims[0].rows(), local_fims[0].cols());
  for (std::size_t l = 0; l < local_fims.size(); ++l) out += local_fims[l] - local_pred_fims[l];
  return symmetrize(out);
}

double pcrlb_position_bound(const Matrix& j, const std::vector<int>& position_indices) {
  Eigen::LLT<Matrix> llt(symmetrize(j));
  if (llt.info() != Eigen::Success || !j.allFinite()) {
    throw Error("singular", "information matrix is singular");
  }
  const Matrix cov = llt.solve(Matrix::Identity(j.rows(), j.cols()));
  double tr = 0.0;
  for (int i : position_indices) tr += cov(i, i);
  return std::sqrt(tr);
}

double pcrlb_position_bound_pinv(const Matrix& j, const std::vector<int>& position_indices) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(j));
  const Vector& lambda = es.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  Vector inv = Vector::Zero(lambda.size());
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > tol) inv(i) = 1.0 / lambda(i);
  }
  const Matrix& v = es.eigenvectors();
  const Matrix cov = v * inv.asDiagonal() * v.transpose();
  double tr = 0.0;
  for (int i : position_indices) tr += cov(i, i);
  return std::sqrt(tr);
}

PcrlbRun run_pcrlb(const StateSpaceModel& model, const Vector& prior_mean,
                   const Matrix& prior_covariance, int n_steps, const ExpectationConfig& cfg,
                   const std::vector<int>& tharmarasa_nodes) {
  const auto samples = sample_trajectories(model, prior_mean, prior_covariance, n_steps, cfg);
  const auto pos = model.position_indices();
  const int n_nodes = model.n_nodes();
  for (int node : tharmarasa_nodes) {
    if (node < 0 || node >= n_nodes) {
      throw Error("config", "approximation node " + std::to_string(node) + " out of range");
    }
  }
  PcrlbRun run;
  const Matrix j0 = spd_inverse(prior_covariance, "prior covariance");
  Matrix j_central = j0, j_exact = j0;
  std::vector<Matrix> j_local(n_nodes, j0);
  std::vector<Matrix> j_approx(tharmarasa_nodes.size(), j0);

  auto record = [&](int k, const std::string& variant, const Matrix& j, bool pinv) {
    BoundPoint p;
    p.k = k;
    p.variant = variant;
    p.position_bound = pinv ? pcrlb_position_bound_pinv(j, pos) : pcrlb_position_bound(j, pos);
    p.information = j;
    run.points.push_back(std::move(p));
  };
  record(0, "central", j_central, false);
  record(0, "exact", j_exact, false);
  for (std::size_t a = 0; a < tharmarasa_nodes.size(); ++a) {
    record(0, "tharmarasa_" + std::to_string(tharmarasa_nodes[a]), j_approx[a], false);
  }

  for (int k = 0; k < n_steps; ++k) {
    DBlocks blocks = d_blocks_gaussian(model, samples[k], samples[k + 1]);
    std::vector<Matrix> next_local(n_nodes), next_pred(n_nodes);
    for (int l = 0; l < n_nodes; ++l) {
      next_local[l] = local_fim_step(j_local[l], blocks, l);
      next_pred[l] = local_prediction_fim_step(j_local[l], blocks);
    }
    j_central = centralized_fim_step(j_central, blocks);
    j_exact = distributed_fim_step(j_exact, next_local, next_pred, blocks);
    for (std::size_t a = 0; a < tharmarasa_nodes.size(); ++a) {
      const int node = tharmarasa_nodes[a];
      j_approx[a] = approx_fim_tharmarasa(j_local[node], next_local, next_pred, blocks, node);
    }
    const Matrix j_sum = approx_fim_sum(next_local, next_pred);
    j_local = std::move(next_local);

    record(k + 1, "central", j_central, false);
    record(k + 1, "exact", j_exact, false);
    for (std::size_t a = 0; a < tharmarasa_nodes.size(); ++a) {
      record(k + 1, "tharmarasa_" + std::to_string(tharmarasa_nodes[a]), j_approx[a], false);
    }
    record(k + 1, "sum", j_sum, true);
    run.blocks.push_back(std::move(blocks));
  }
  return run;
}

}  // namespace cfdpf
