#include <cmath>

#include "doctest.h"

#include "cfdpf/ssm.hpp"

using namespace cfdpf;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double normal_pdf(double x, double var) {
  return std::exp(-0.5 * x * x / var) / std::sqrt(2.0 * kPi * var);
}

}  // namespace

TEST_CASE("coordinated turn approaches constant velocity at high speed") {
  CoordinatedTurnParams p;
  const Matrix f = ct_matrix(vec({0, 0, 1e9, 0}), p);
  Matrix cv = Matrix::Identity(4, 4);
  cv(0, 2) = cv(1, 3) = p.dt;
  CHECK((f - cv).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("coordinated turn matches entrywise matrix evaluation") {
  CoordinatedTurnParams p;
  const Vector x = vec({0, 0, 1, 0});
  const double w = p.accel / 1.0;
  const double s = std::sin(w), c = std::cos(w);
  Matrix f(4, 4);
  f << 1, 0, s / w, -(1 - c) / w,  //
      0, 1, (1 - c) / w, s / w,    //
      0, 0, c, -s,                 //
      0, 0, s, c;
  const Vector expected = f * x;
  const Vector got = ct_transition(x, p, Vector::Zero(4));
  // The oracle's (1 - cos w) / w loses digits for tiny w.
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coordinated turn preserves speed without noise") {
  CoordinatedTurnParams p;
  p.accel = 0.3;
  Vector x = vec({1, 2, -0.3, 0.4});
  for (int k = 0; k < 50; ++k) x = ct_transition(x, p, Vector::Zero(4));
  CHECK(std::hypot(x(2), x(3)) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("coordinated turn rejects zero speed") {
  CHECK_THROWS_AS(ct_transition(vec({1, 1, 0, 0}), {}, Vector::Zero(4)), Error);
}

TEST_CASE("coordinated turn jacobian agrees with finite differences") {
  CoordinatedTurnParams p;
  p.accel = 0.05;
  const Vector x = vec({3, 6, -0.31, -0.38});
  const Matrix analytic = ct_jacobian(x, p);
  const Matrix numeric = finite_difference_jacobian(
      [&](const Vector& v) { return ct_transition(v, p, Vector::Zero(4)); }, x,
      [](const Vector& a, const Vector& b) { return Vector(a - b); });
  CHECK((analytic - numeric).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("bearing convention") {
  const Point2 origin(0, 0);
  CHECK(bearing(vec({0, 5, 0, 0}), origin) == doctest::Approx(0.0));
  CHECK(bearing(vec({5, 0, 0, 0}), origin) == doctest::Approx(kPi / 2));
  CHECK(bearing(vec({1, 1, 0, 0}), origin) == doctest::Approx(kPi / 4));
  CHECK(bearing(vec({-1, -1, 0, 0}), origin) == doctest::Approx(-3 * kPi / 4));
  CHECK(bearing(vec({0, -2, 0, 0}), origin) == doctest::Approx(kPi));
  // Single-quadrant arctangent folds the rear half-plane onto the front.
  CHECK(bearing(vec({-1, -1, 0, 0}), origin, BearingConvention::single_quadrant) ==
        doctest::Approx(kPi / 4));
  try {
    bearing(vec({2, 3, 0, 0}), Point2(2, 3));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == "undefined_bearing");
  }
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  for (double a : {-10.0, -kPi, -1.0, 0.0, 2.0, kPi, 7.5, 100.0}) {
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(wrap_angle(w + 2 * kPi) == doctest::Approx(w).epsilon(1e-12));
  }
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
}

TEST_CASE("glint variance polynomial") {
  GlintNoiseParams g;
  CHECK(g.variance(0.0) == doctest::Approx(0.7405));
  double prev = g.variance(0.0);
  for (double r = 0.25; r < 30.0; r += 0.25) {
    CHECK(g.variance(r) > prev);
    prev = g.variance(r);
  }
}

TEST_CASE("glint log-likelihood against direct evaluation") {
  GlintNoiseParams g;
  g.variance_coeffs = {0.0, 0.0, 1.0};
  const double expected =
      std::log(0.91 / std::sqrt(2 * kPi) + 0.09 / std::sqrt(2 * kPi * 1e4));
  CHECK(glint_log_likelihood(0.3, 0.3, 2.0, g) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(glint_log_likelihood(0.5, 0.2, 2.0, g) ==
        doctest::Approx(glint_log_likelihood(-0.1, 0.2, 2.0, g)).epsilon(1e-14));
  // Residual is wrapped: z = pi - 0.1 against predicted -pi + 0.1 is 0.2 apart.
  CHECK(glint_log_likelihood(kPi - 0.1, -kPi + 0.1, 1.0, g) ==
        doctest::Approx(glint_log_density(-0.2, 1.0, g)).epsilon(1e-12));
  CHECK_THROWS_AS(glint_log_likelihood(std::nan(""), 0.0, 1.0, g), Error);
}

TEST_CASE("glint density integrates to one on the real line") {
  GlintNoiseParams g;
  for (double var : {0.05, 0.7405, 3.0}) {
    // Outer component dominates the span; integrate to 50 of its deviations.
    const double span = 50.0 * std::sqrt(g.inflation * var);
    const int n = 400000;
    const double h = 2 * span / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * std::exp(glint_log_density(-span + i * h, var, g));
    }
    CHECK(acc * h / 3.0 == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("wrapped glint density integrates to one on the circle") {
  GlintNoiseParams g;
  for (double var : {1e-3, 0.3, 0.7405, 2.0, 9.0, 40.0}) {
    const int n = 20000;
    const double h = 2 * kPi / n;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::exp(wrapped_glint_log_density(-kPi + i * h, var, g));
    CHECK(acc * h == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("wrapped density matches the image sum") {
  GlintNoiseParams g;
  g.epsilon = 0.0;
  for (double var : {0.5, 3.0, 8.0}) {
    for (double d : {-3.0, -1.0, 0.0, 0.4, 2.9}) {
      double direct = 0.0;
      for (int j = -60; j <= 60; ++j) direct += normal_pdf(d + 2 * kPi * j, var);
      CHECK(std::exp(wrapped_glint_log_density(d, var, g)) ==
            doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("glint Fisher information") {
  CHECK(glint_unit_fisher_information(0.0, 1e4) == doctest::Approx(1.0));
  GlintNoiseParams g;
  const double unit = glint_unit_fisher_information(g.epsilon, g.inflation);
  // Independent trapezoid quadrature of p'^2 / p for the unit-variance mixture.
  double direct = 0.0;
  const double h = 1e-3, wide = g.inflation;
  for (double d = -4000.0; d <= 4000.0; d += h) {
    const double core = (1 - g.epsilon) * normal_pdf(d, 1.0);
    const double tail = g.epsilon * normal_pdf(d, wide);
    const double slope = -d * (core + tail / wide);
    if (core + tail > 0.0) direct += slope * slope / (core + tail) * h;
  }
  CHECK(unit == doctest::Approx(direct).epsilon(1e-6));
  // Narrow core: wrapping is immaterial.
  CHECK(1e-6 * wrapped_glint_fisher_information(1e-6, g) == doctest::Approx(unit).epsilon(1e-3));
  GlintNoiseParams pure = g;
  pure.epsilon = 0.0;
  CHECK(1e-4 * wrapped_glint_fisher_information(1e-4, pure) == doctest::Approx(1.0).epsilon(1e-6));
  // Wide core: the wrapped measurement is close to uniform and carries little.
  CHECK(25.0 * wrapped_glint_fisher_information(25.0, g) < 1e-6);
}

TEST_CASE("bearing model information interpolates the wrapped table") {
  GlintNoiseParams g;
  CoordinatedTurnBearingModel m({}, {Point2(0, 0)}, g);
  for (double r : {0.5, 2.0, 5.0, 9.0}) {
    const Vector x = vec({r, 0, 0.1, 0.1});
    const double var = g.variance(r);
    CHECK(m.observation_information(0, x)(0, 0) ==
          doctest::Approx(wrapped_glint_fisher_information(var, g)).epsilon(2e-3));
  }
  GlintNoiseParams flat = g;
  flat.wrapped = false;
  CoordinatedTurnBearingModel u({}, {Point2(0, 0)}, flat);
  const Vector x = vec({2, 0, 0.1, 0.1});
  CHECK(u.observation_information(0, x)(0, 0) ==
        doctest::Approx(glint_unit_fisher_information(g.epsilon, g.inflation) / g.variance(2.0)));
}

TEST_CASE("bearing model replays under a fixed seed") {
  CoordinatedTurnBearingModel m({}, {Point2(0, 0), Point2(4, 1)});
  const Vector x0 = vec({3, 6, -0.3, -0.4});
  Rng a(5), b(5);
  for (int k = 0; k < 5; ++k) {
    const Vector xa = m.propagate(x0, a), xb = m.propagate(x0, b);
    CHECK(xa == xb);
    CHECK(m.observe(1, xa, a) == m.observe(1, xb, b));
  }
}

TEST_CASE("unicycle small turn-rate limit") {
  UnicycleParams p;
  p.min_angular_velocity = 1e-15;
  UnicycleNoise n{100.0, 1e-10, 0.0};
  const Vector next = unicycle_transition(vec({1, 2, 0.3}), p, n);
  CHECK(next(0) == doctest::Approx(1 + std::cos(0.3)).epsilon(1e-9));
  CHECK(next(1) == doctest::Approx(2 - std::sin(0.3)).epsilon(1e-9));
}

TEST_CASE("unicycle quarter turn against a hand-computed pose") {
  UnicycleParams p;
  const double v = 1.0, w = kPi / 2;
  UnicycleNoise n{100.0 * v, w, 0.0};
  const Vector next = unicycle_transition(vec({0, 0, 0}), p, n);
  CHECK(next(0) == doctest::Approx(v / w * (std::sin(w) - std::sin(0.0))));
  CHECK(next(1) == doctest::Approx(v / w * (std::cos(w) - std::cos(0.0))));
  CHECK(next(2) == doctest::Approx(w));
  CHECK_THROWS_AS(unicycle_transition(vec({0, 0, 0}), p, UnicycleNoise{30.0, 0.0, 0.0}), Error);
}

TEST_CASE("unicycle transition density integrates to one") {
  UnicycleParams p;
  UnicycleBearingModel m(p, {Point2(5, 5)});
  const Vector prev = vec({0, 0, 0.2});
  // Box around the mean step, wide enough for six deviations in each draw.
  const double lo_t = 0.2 + 0.08 - 0.1, hi_t = 0.2 + 0.08 + 0.1;
  const int n = 70;
  double acc = 0.0;
  const double x_lo = -0.1, x_hi = 0.7, y_lo = -0.5, y_hi = 0.2;
  const double hx = (x_hi - x_lo) / n, hy = (y_hi - y_lo) / n, ht = (hi_t - lo_t) / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < n; ++t) {
        const Vector x = vec({x_lo + (i + 0.5) * hx, y_lo + (j + 0.5) * hy, lo_t + (t + 0.5) * ht});
        acc += std::exp(m.log_transition(x, prev));
      }
  CHECK(acc * hx * hy * ht == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("linear model likelihood and validation") {
  Matrix f = Matrix::Identity(2, 2), q = 0.5 * Matrix::Identity(2, 2);
  Matrix h = Matrix::Identity(2, 2), r = 2.0 * Matrix::Identity(2, 2);
  auto m = linear_gaussian_model(f, q, {h}, {r});
  const Vector x = vec({1, -1}), z = vec({2, 0});
  const double expected = -std::log(2 * kPi * 2.0) - 0.5 * (1.0 + 1.0) / 2.0;
  CHECK(m->log_likelihood(0, z, x) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(m->log_transition(x, x) == doctest::Approx(-std::log(2 * kPi * 0.5)).epsilon(1e-12));
  Matrix singular = Matrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  CHECK_THROWS_AS(linear_gaussian_model(f, singular, {h}, {r}), Error);
  CHECK_THROWS_AS(linear_gaussian_model(f, q, {h}, {singular}), Error);
}
