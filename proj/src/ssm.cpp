#include "cfdpf/ssm.hpp"

#include <cmath>
#include <limits>

namespace cfdpf {

namespace {

// sin(t)/t and (1 - cos t)/t with their derivatives; series near zero where
// the closed forms cancel.
constexpr double kSeriesCutoff = 1e-2;

double sinc(double t) {
  if (std::abs(t) < kSeriesCutoff) {
    const double t2 = t * t;
    return 1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0;
  }
  return std::sin(t) / t;
}

double versinc(double t) {
  if (std::abs(t) < kSeriesCutoff) {
    const double t2 = t * t;
    return t / 2.0 - t * t2 / 24.0 + t * t2 * t2 / 720.0;
  }
  const double s = std::sin(0.5 * t);
  return 2.0 * s * s / t;
}

double sinc_prime(double t) {
  if (std::abs(t) < kSeriesCutoff) {
    const double t2 = t * t;
    return -t / 3.0 + t * t2 / 30.0 - t * t2 * t2 / 840.0;
  }
  return (t * std::cos(t) - std::sin(t)) / (t * t);
}

double versinc_prime(double t) {
  if (std::abs(t) < kSeriesCutoff) {
    const double t2 = t * t;
    return 0.5 - t2 / 8.0 + t2 * t2 / 144.0;
  }
  const double s = std::sin(0.5 * t);
  return (t * std::sin(t) - 2.0 * s * s) / (t * t);
}

double turn_rate(const Vector& state, const CoordinatedTurnParams& params) {
  if (state.size() != 4) throw Error("dimension", "coordinated-turn state must have 4 entries");
  const double speed = std::hypot(state(2), state(3));
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw Error("degenerate_turn_rate", "degenerate turn rate: zero target speed");
  }
  return params.accel / speed;
}

double log_normal_scalar(double x, double mean, double variance) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * kPi * variance) + d * d / variance);
}

double mixture_log_density(double delta, double variance, const GlintNoiseParams& params) {
  const double a = std::log1p(-params.epsilon) + log_normal_scalar(delta, 0.0, variance);
  if (params.epsilon <= 0.0) return a;
  const double b =
      std::log(params.epsilon) + log_normal_scalar(delta, 0.0, params.inflation * variance);
  const double mx = std::max(a, b);
  return mx + std::log(std::exp(a - mx) + std::exp(b - mx));
}

// Normal density wrapped onto (-pi, pi]. Image sum for narrow components,
// Fourier series once the component covers the circle.
double wrapped_normal_log_density(double delta, double variance) {
  if (variance < 2.0 * kPi) {
    const double sd = std::sqrt(variance);
    const int images = static_cast<int>(std::ceil(8.0 * sd / (2.0 * kPi))) + 1;
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    for (int j = -images; j <= images; ++j) {
      terms.push_back(log_normal_scalar(delta + 2.0 * kPi * j, 0.0, variance));
      mx = std::max(mx, terms.back());
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - mx);
    return mx + std::log(acc);
  }
  const double rho = std::exp(-0.5 * variance);
  double acc = 1.0;
  for (int j = 1; j <= 6; ++j) acc += 2.0 * std::pow(rho, j * j) * std::cos(j * delta);
  return std::log(acc / (2.0 * kPi));
}

// Wrapped normal density and its derivative in delta, linear domain.
std::pair<double, double> wrapped_normal_with_slope(double delta, double variance) {
  double dens = 0.0, slope = 0.0;
  if (variance < 2.0 * kPi) {
    const double sd = std::sqrt(variance);
    const int images = static_cast<int>(std::ceil(8.0 * sd / (2.0 * kPi))) + 1;
    for (int j = -images; j <= images; ++j) {
      const double d = delta + 2.0 * kPi * j;
      const double f = std::exp(log_normal_scalar(d, 0.0, variance));
      dens += f;
      slope -= d / variance * f;
    }
    return {dens, slope};
  }
  const double rho = std::exp(-0.5 * variance);
  dens = 1.0;
  for (int j = 1; j <= 6; ++j) {
    const double c = 2.0 * std::pow(rho, j * j);
    dens += c * std::cos(j * delta);
    slope -= c * j * std::sin(j * delta);
  }
  return {dens / (2.0 * kPi), slope / (2.0 * kPi)};
}

constexpr double kInfoGridLo = -6.0;  // log10 variance
constexpr double kInfoGridHi = 6.0;
constexpr double kInfoGridStep = 0.05;

}  // namespace

double wrapped_glint_fisher_information(double variance, const GlintNoiseParams& params) {
  if (!(variance > 0.0)) throw Error("domain", "glint variance must be positive");
  auto integrand = [&](double d) {
    auto [core, core_slope] = wrapped_normal_with_slope(d, variance);
    double dens = (1.0 - params.epsilon) * core;
    double slope = (1.0 - params.epsilon) * core_slope;
    if (params.epsilon > 0.0) {
      auto [tail, tail_slope] = wrapped_normal_with_slope(d, params.inflation * variance);
      dens += params.epsilon * tail;
      slope += params.epsilon * tail_slope;
    }
    return dens > 0.0 ? slope * slope / dens : 0.0;
  };
  auto simpson = [&](double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i) acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  // Symmetric in delta; split where the core component dies out.
  const double split = std::min(kPi, 12.0 * std::sqrt(variance));
  double total = simpson(0.0, split, 1000);
  if (split < kPi) total += simpson(split, kPi, 1000);
  return 2.0 * total;
}

double wrapped_glint_log_density(double delta, double variance, const GlintNoiseParams& params) {
  const double a = std::log1p(-params.epsilon) + wrapped_normal_log_density(delta, variance);
  if (params.epsilon <= 0.0) return a;
  const double b =
      std::log(params.epsilon) + wrapped_normal_log_density(delta, params.inflation * variance);
  const double mx = std::max(a, b);
  return mx + std::log(std::exp(a - mx) + std::exp(b - mx));
}

double glint_log_density(double delta, double variance, const GlintNoiseParams& params) {
  return mixture_log_density(delta, variance, params);
}

double GlintNoiseParams::variance(double range) const {
  const auto& c = variance_coeffs;
  return c[0] * range * range + c[1] * range + c[2];
}

Matrix ct_matrix(const Vector& state, const CoordinatedTurnParams& params) {
  const double omega = turn_rate(state, params);
  const double dt = params.dt;
  const double theta = omega * dt;
  const double a = dt * sinc(theta);     // sin(w dt) / w
  const double b = dt * versinc(theta);  // (1 - cos(w dt)) / w
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix f(4, 4);
  f << 1, 0, a, -b,
       0, 1, b, a,
       0, 0, c, -s,
       0, 0, s, c;
  return f;
}

Vector ct_transition(const Vector& state, const CoordinatedTurnParams& params,
                     const Vector& noise_draw) {
  return ct_matrix(state, params) * state + noise_draw;
}

Matrix ct_jacobian(const Vector& state, const CoordinatedTurnParams& params) {
  const double omega = turn_rate(state, params);
  const double dt = params.dt;
  const double theta = omega * dt;
  const double vx = state(2), vy = state(3);
  const double speed = std::hypot(vx, vy);

  const double a = dt * sinc(theta);
  const double b = dt * versinc(theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  // Derivatives with respect to omega.
  const double da = dt * dt * sinc_prime(theta);
  const double db = dt * dt * versinc_prime(theta);
  const double dc = -dt * s;
  const double ds = dt * c;

  const double k3 = params.accel / (speed * speed * speed);
  const double dw_dvx = -k3 * vx;
  const double dw_dvy = -k3 * vy;

  const double gx = da * vx - db * vy;
  const double gy = db * vx + da * vy;
  const double gvx = dc * vx - ds * vy;
  const double gvy = ds * vx + dc * vy;

  Matrix jac(4, 4);
  jac << 1, 0, a + gx * dw_dvx, -b + gx * dw_dvy,
         0, 1, b + gy * dw_dvx, a + gy * dw_dvy,
         0, 0, c + gvx * dw_dvx, -s + gvx * dw_dvy,
         0, 0, s + gvy * dw_dvx, c + gvy * dw_dvy;
  return jac;
}

double bearing(const Vector& state, const Point2& sensor, BearingConvention convention) {
  const double dx = state(0) - sensor.x();
  const double dy = state(1) - sensor.y();
  if (dx == 0.0 && dy == 0.0) {
    throw Error("undefined_bearing", "undefined bearing: target coincides with sensor");
  }
  if (convention == BearingConvention::single_quadrant) {
    if (dy == 0.0) return dx > 0.0 ? kPi / 2.0 : -kPi / 2.0;
    return std::atan(dx / dy);
  }
  return wrap_angle(std::atan2(dx, dy));
}

double glint_log_likelihood(double z, double predicted_bearing, double range,
                            const GlintNoiseParams& params) {
  if (!std::isfinite(z) || !std::isfinite(predicted_bearing) || !std::isfinite(range)) {
    throw Error("non_finite", "glint likelihood received a non-finite input");
  }
  if (range < 0.0) throw Error("domain", "glint likelihood requires a non-negative range");
  const double variance = params.variance(range);
  if (!(variance > 0.0)) throw Error("domain", "glint variance must be positive");
  return mixture_log_density(wrap_angle(z - predicted_bearing), variance, params);
}

double glint_unit_fisher_information(double epsilon, double inflation) {
  if (epsilon <= 0.0) return 1.0;
  const double wide = std::sqrt(inflation);
  // I = int p'(d)^2 / p(d) dd, integrand even in d. Composite Simpson on two
  // panels: the core and the heavy tail.
  auto integrand = [&](double d) {
    const double core = (1.0 - epsilon) * std::exp(log_normal_scalar(d, 0.0, 1.0));
    const double tail = epsilon * std::exp(log_normal_scalar(d, 0.0, inflation));
    const double dens = core + tail;
    if (dens <= 0.0) return 0.0;
    const double deriv = -d * (core + tail / inflation);
    return deriv * deriv / dens;
  };
  auto simpson = [&](double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i) acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };
  const double split = 40.0;
  return 2.0 * (simpson(0.0, split, 40000) + simpson(split, 40.0 * wide, 40000));
}

Vector unicycle_transition(const Vector& state, const UnicycleParams& params,
                           const UnicycleNoise& noise) {
  if (state.size() != 3) throw Error("dimension", "unicycle state must have 3 entries");
  if (std::abs(noise.angular_velocity) < params.min_angular_velocity) {
    throw Error("domain", "unicycle angular velocity below the configured floor");
  }
  const double dt = params.dt;
  const double v = noise.velocity / params.cm_per_unit;
  const double w = noise.angular_velocity;
  const double theta = state(2);
  const double half = 0.5 * w * dt;
  // (V/W)(sin(theta + W dt) - sin theta) etc., rewritten with product-to-sum
  // identities so small W dt does not cancel.
  const double chord = v * dt * sinc(half);
  Vector next(3);
  next(0) = state(0) + chord * std::cos(theta + half);
  next(1) = state(1) - chord * std::sin(theta + half);
  next(2) = theta + w * dt + noise.orientation * dt;
  return next;
}

UnicycleNoise draw_unicycle_noise(const UnicycleParams& params, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  UnicycleNoise n;
  n.velocity = params.velocity_mean + params.velocity_std * normal(rng);
  do {
    n.angular_velocity = params.angular_velocity_mean + params.angular_velocity_std * normal(rng);
  } while (std::abs(n.angular_velocity) < params.min_angular_velocity);
  n.orientation = params.orientation_noise_std * normal(rng);
  return n;
}

// --- StateSpaceModel defaults ---------------------------------------------

Vector StateSpaceModel::drift(const Vector&) const {
  throw Error("unsupported", name() + " has no additive transition drift");
}

Matrix StateSpaceModel::drift_jacobian(const Vector& x) const {
  return finite_difference_jacobian([this](const Vector& v) { return drift(v); }, x,
                                    [](const Vector& a, const Vector& b) { return Vector(a - b); });
}

Matrix StateSpaceModel::process_covariance() const {
  throw Error("unsupported", name() + " has no additive Gaussian process noise");
}

Vector StateSpaceModel::measurement_function(int, const Vector&) const {
  throw Error("unsupported", name() + " has no additive measurement function");
}

Matrix StateSpaceModel::measurement_jacobian(int node, const Vector& x) const {
  return finite_difference_jacobian(
      [this, node](const Vector& v) { return measurement_function(node, v); }, x,
      [](const Vector& a, const Vector& b) { return Vector(a - b); });
}

Matrix StateSpaceModel::observation_information(int, const Vector&) const {
  throw Error("unsupported", name() + " has no observation information");
}

Vector StateSpaceModel::innovation(int node, const Vector& z, const Vector& x) const {
  return z - measurement_function(node, x);
}

// --- BearingSensorModel ----------------------------------------------------

BearingSensorModel::BearingSensorModel(std::vector<Point2> sensors, GlintNoiseParams glint,
                                       BearingConvention convention)
    : sensors_(std::move(sensors)),
      glint_(glint),
      convention_(convention),
      unit_fisher_(glint_unit_fisher_information(glint.epsilon, glint.inflation)) {
  if (sensors_.empty()) throw Error("config", "bearing model needs at least one sensor");
  if (glint_.epsilon < 0.0 || glint_.epsilon > 1.0) {
    throw Error("config", "glint epsilon must lie in [0, 1]");
  }
  const auto& c = glint_.variance_coeffs;
  if (!(c[2] > 0.0) || c[0] < 0.0 || (c[1] < 0.0 && c[1] * c[1] >= 4.0 * c[0] * c[2])) {
    throw Error("config", "glint variance polynomial must stay positive for r >= 0");
  }
  if (glint_.wrapped) {
    for (double lv = kInfoGridLo; lv <= kInfoGridHi + 1e-9; lv += kInfoGridStep) {
      const double v = std::pow(10.0, lv);
      scaled_info_.push_back(v * wrapped_glint_fisher_information(v, glint_));
    }
  }
}

double BearingSensorModel::range(int node, const Vector& x) const {
  const auto& s = sensors_.at(node);
  return std::hypot(x(0) - s.x(), x(1) - s.y());
}

Vector BearingSensorModel::observe(int node, const Vector& x, Rng& rng) const {
  const double variance = glint_.variance(range(node, x));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool outlier = unif(rng) < glint_.epsilon;
  const double sd = std::sqrt(outlier ? glint_.inflation * variance : variance);
  Vector z(1);
  z(0) = wrap_angle(bearing(x, sensors_.at(node), convention_) + sd * normal(rng));
  return z;
}

double BearingSensorModel::log_likelihood(int node, const Vector& z, const Vector& x) const {
  const double predicted = bearing(x, sensors_.at(node), convention_);
  if (!glint_.wrapped) return glint_log_likelihood(z(0), predicted, range(node, x), glint_);
  return wrapped_glint_log_density(wrap_angle(z(0) - predicted), glint_.variance(range(node, x)),
                                   glint_);
}

Vector BearingSensorModel::measurement_function(int node, const Vector& x) const {
  Vector g(1);
  g(0) = bearing(x, sensors_.at(node), convention_);
  return g;
}

Matrix BearingSensorModel::measurement_jacobian(int node, const Vector& x) const {
  const auto& s = sensors_.at(node);
  const double dx = x(0) - s.x();
  const double dy = x(1) - s.y();
  const double r2 = dx * dx + dy * dy;
  if (r2 == 0.0) throw Error("undefined_bearing", "undefined bearing: target coincides with sensor");
  Matrix h = Matrix::Zero(1, x.size());
  h(0, 0) = dy / r2;
  h(0, 1) = -dx / r2;
  return h;
}

Matrix BearingSensorModel::observation_information(int node, const Vector& x) const {
  const double variance = glint_.variance(range(node, x));
  const double lv = std::log10(variance);
  if (!glint_.wrapped || lv < kInfoGridLo) return Matrix::Constant(1, 1, unit_fisher_ / variance);
  // Interpolate variance * information, which is smooth in log variance.
  const double pos = (std::min(lv, kInfoGridHi) - kInfoGridLo) / kInfoGridStep;
  const auto i = std::min(static_cast<std::size_t>(pos), scaled_info_.size() - 2);
  const double t = pos - static_cast<double>(i);
  const double scaled = (1.0 - t) * scaled_info_[i] + t * scaled_info_[i + 1];
  return Matrix::Constant(1, 1, scaled / variance);
}

Vector BearingSensorModel::innovation(int node, const Vector& z, const Vector& x) const {
  Vector d(1);
  d(0) = wrap_angle(z(0) - bearing(x, sensors_.at(node), convention_));
  return d;
}

// --- CoordinatedTurnBearingModel ------------------------------------------

CoordinatedTurnBearingModel::CoordinatedTurnBearingModel(CoordinatedTurnParams params,
                                                         std::vector<Point2> sensors,
                                                         GlintNoiseParams glint,
                                                         BearingConvention convention)
    : BearingSensorModel(std::move(sensors), glint, convention), params_(params) {
  if (!(params_.accel > 0.0) || !(params_.dt > 0.0) || !(params_.sigma_v > 0.0)) {
    throw Error("config", "coordinated-turn parameters must be positive");
  }
  process_noise_ = Gaussian(Vector::Zero(4), process_covariance());
}

Vector CoordinatedTurnBearingModel::propagate(const Vector& x, Rng& rng) const {
  return ct_transition(x, params_, process_noise_.sample(rng));
}

double CoordinatedTurnBearingModel::log_transition(const Vector& next, const Vector& prev) const {
  return process_noise_.log_pdf(next - drift(prev));
}

Vector CoordinatedTurnBearingModel::drift(const Vector& x) const {
  return ct_matrix(x, params_) * x;
}

Matrix CoordinatedTurnBearingModel::drift_jacobian(const Vector& x) const {
  return ct_jacobian(x, params_);
}

Matrix CoordinatedTurnBearingModel::process_covariance() const {
  return Matrix::Identity(4, 4) * (params_.sigma_v * params_.sigma_v);
}

// --- UnicycleBearingModel --------------------------------------------------

UnicycleBearingModel::UnicycleBearingModel(UnicycleParams params, std::vector<Point2> sensors,
                                           GlintNoiseParams glint, BearingConvention convention)
    : BearingSensorModel(std::move(sensors), glint, convention), params_(params) {
  if (!(params_.dt > 0.0) || !(params_.velocity_std > 0.0) ||
      !(params_.angular_velocity_std > 0.0) || !(params_.orientation_noise_std > 0.0) ||
      !(params_.cm_per_unit > 0.0)) {
    throw Error("config", "unicycle parameters must be positive");
  }
}

Vector UnicycleBearingModel::propagate(const Vector& x, Rng& rng) const {
  return unicycle_transition(x, params_, draw_unicycle_noise(params_, rng));
}

double UnicycleBearingModel::log_transition(const Vector& next, const Vector& prev) const {
  const double dt = params_.dt;
  const double dx = next(0) - prev(0);
  const double dy = next(1) - prev(1);
  const double rho = std::hypot(dx, dy);
  if (rho == 0.0) return -std::numeric_limits<double>::infinity();
  const double theta = prev(2);
  // (dx, -dy) = s (cos phi, sin phi) with s = V * 2 sin(W dt / 2) / W and
  // phi = theta + W dt / 2. Each phi0 + n pi gives one preimage.
  const double phi0 = std::atan2(-dy, dx);
  const double v_mean = params_.velocity_mean / params_.cm_per_unit;
  const double v_var = std::pow(params_.velocity_std / params_.cm_per_unit, 2);
  const double w_var = params_.angular_velocity_std * params_.angular_velocity_std;
  const double xi_var = params_.orientation_noise_std * params_.orientation_noise_std;
  const double centre =
      std::round((theta + 0.5 * params_.angular_velocity_mean * dt - phi0) / kPi);

  double acc_max = -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  for (int off = -3; off <= 3; ++off) {
    const double n = centre + off;
    const double phi = phi0 + n * kPi;
    const double s = (static_cast<long long>(n) % 2 == 0) ? rho : -rho;
    const double w = 2.0 * (phi - theta) / dt;
    if (std::abs(w) < params_.min_angular_velocity) continue;
    const double chord_per_v = dt * sinc(0.5 * w * dt);  // 2 sin(w dt / 2) / w
    if (chord_per_v == 0.0) continue;
    const double v = s / chord_per_v;
    const double xi = (next(2) - theta - w * dt) / dt;
    const double log_jac = std::log(std::abs(s) * std::abs(chord_per_v) * 0.5 * dt * dt);
    const double term = log_normal_scalar(v, v_mean, v_var) +
                        log_normal_scalar(w, params_.angular_velocity_mean, w_var) +
                        log_normal_scalar(xi, 0.0, xi_var) - log_jac;
    terms.push_back(term);
    acc_max = std::max(acc_max, term);
  }
  if (!std::isfinite(acc_max)) return acc_max;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - acc_max);
  return acc_max + std::log(sum);
}

// --- LinearGaussianModel ---------------------------------------------------

LinearGaussianModel::LinearGaussianModel(Matrix transition, Matrix process_cov,
                                         std::vector<Matrix> observation,
                                         std::vector<Matrix> observation_cov)
    : transition_(std::move(transition)),
      process_cov_(std::move(process_cov)),
      observation_(std::move(observation)),
      observation_cov_(std::move(observation_cov)) {
  const auto n = transition_.rows();
  if (transition_.cols() != n || process_cov_.rows() != n || process_cov_.cols() != n) {
    throw Error("dimension", "linear model: F and Q must be square with matching size");
  }
  if (!process_cov_.isApprox(process_cov_.transpose()) || !is_positive_definite(process_cov_)) {
    throw Error("not_positive_definite", "linear model: Q must be symmetric positive definite");
  }
  if (observation_.empty() || observation_.size() != observation_cov_.size()) {
    throw Error("dimension", "linear model: need one (H, R) pair per node");
  }
  process_noise_ = Gaussian(Vector::Zero(n), process_cov_);
  for (std::size_t l = 0; l < observation_.size(); ++l) {
    const auto& h = observation_[l];
    const auto& r = observation_cov_[l];
    if (h.cols() != n || r.rows() != h.rows() || r.cols() != h.rows()) {
      throw Error("dimension", "linear model: H/R dimensions disagree");
    }
    if (!r.isApprox(r.transpose()) || !is_positive_definite(r)) {
      throw Error("not_positive_definite",
                  "linear model: R for node " + std::to_string(l) + " must be positive definite");
    }
    observation_noise_.emplace_back(Vector::Zero(r.rows()), r);
    observation_info_.push_back(spd_inverse(r, "R"));
  }
}

Vector LinearGaussianModel::propagate(const Vector& x, Rng& rng) const {
  return transition_ * x + process_noise_.sample(rng);
}

double LinearGaussianModel::log_transition(const Vector& next, const Vector& prev) const {
  return process_noise_.log_pdf(next - transition_ * prev);
}

Vector LinearGaussianModel::observe(int node, const Vector& x, Rng& rng) const {
  return observation_.at(node) * x + observation_noise_.at(node).sample(rng);
}

double LinearGaussianModel::log_likelihood(int node, const Vector& z, const Vector& x) const {
  return observation_noise_.at(node).log_pdf(z - observation_.at(node) * x);
}

std::vector<int> LinearGaussianModel::position_indices() const {
  std::vector<int> idx;
  for (int i = 0; i < std::min(state_dim(), 2); ++i) idx.push_back(i);
  return idx;
}

Vector LinearGaussianModel::measurement_function(int node, const Vector& x) const {
  return observation_.at(node) * x;
}

Matrix LinearGaussianModel::measurement_jacobian(int node, const Vector&) const {
  return observation_.at(node);
}

Matrix LinearGaussianModel::observation_information(int node, const Vector&) const {
  return observation_info_.at(node);
}

std::shared_ptr<LinearGaussianModel> linear_gaussian_model(
    const Matrix& transition, const Matrix& process_cov, const std::vector<Matrix>& observation,
    const std::vector<Matrix>& observation_cov) {
  return std::make_shared<LinearGaussianModel>(transition, process_cov, observation,
                                               observation_cov);
}

}  // namespace cfdpf
