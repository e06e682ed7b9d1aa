#include <doctest.h>
#include <phlab/analysis.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace phlab;

namespace {
const CatSuspension& model() {
  static CatSuspension m;
  return m;
}
TimeChange bump_tau() { return TimeChange(1.0, {{0.3, {1, 0}, 0.0}}); }
}  // namespace

TEST_CASE("rates of the unchanged flow are the exact eigenvalue powers") {
  const auto& m = model();
  const TimeChange c = TimeChange::constant(1.0);
  const PhasePoint x = make_point(m, {0.31, 0.47}, 0.22);
  const double T = 6.3;
  const RateReport r = finite_time_rates(m, c, x, T, 1e-11);
  const long n = m.crossings(x, T);
  CHECK(r.alpha == doctest::Approx(T).epsilon(1e-12));
  CHECK(r.crossings == n);
  CHECK(r.nu == doctest::Approx(m.lambda_pow(-n)).epsilon(1e-12));
  CHECK(r.nu_hat == doctest::Approx(m.lambda_pow(-n)).epsilon(1e-12));
  CHECK(r.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.gamma_hat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.center_defect < 1e-14);
}

TEST_CASE("time-changed rates stay partially hyperbolic and bunched") {
  const auto& m = model();
  const TimeChange tau = bump_tau();
  Rng rng(127);
  for (int i = 0; i < 6; ++i) {
    const PhasePoint x = m.sample(rng);
    const RateReport r = finite_time_rates(m, tau, x, 10.0, 1e-10);
    CHECK(r.nu < 1.0);
    CHECK(r.nu_hat < 1.0);
    CHECK(r.nu < r.gamma);
    CHECK(1.0 / r.gamma_hat < 1.0 / r.nu_hat);
    CHECK(r.nu < r.gamma * r.gamma_hat);
    CHECK(r.nu_hat < r.gamma * r.gamma_hat);
    // One-dimensional center: the two center factors are reciprocal.
    CHECK(r.gamma * r.gamma_hat == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.center_defect < 1e-9);
    // Travel time is pinned between the time-change bounds.
    CHECK(r.alpha >= 10.0 / tau.tau_max() - 1e-9);
    CHECK(r.alpha <= 10.0 / tau.tau_min() + 1e-9);
  }
}

TEST_CASE("ensemble rate statistics") {
  const auto& m = model();
  const TimeChange tau = bump_tau();
  Rng rng(131);
  const BunchingReport rep = center_bunching_check(m, tau, 10.0, 20, rng, 1e-10);
  CHECK(rep.n == 20);
  CHECK(rep.frac_contracting == 1.0);
  CHECK(rep.frac_chain == 1.0);
  CHECK(rep.frac_bunched == 1.0);
  CHECK(rep.mean_log_nu < 0.0);
  CHECK(rep.mean_log_nu_hat < 0.0);
  CHECK(rep.max_center_defect < 1e-9);
  // Ensemble exponent tracks -log(lambda) per unit of traveled time.
  CHECK(rep.mean_log_nu == doctest::Approx(-m.log_lambda() * rep.mean_alpha).epsilon(0.05));
}

TEST_CASE("observables are smooth across the seam") {
  const auto& m = model();
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const PhasePoint p = make_point(m, {0.3, 0.8}, 0.25);
  CHECK(observe(Observable::one, p) == 1.0);
  CHECK(observe(Observable::roof_cos, p) == doctest::Approx(std::cos(kTwoPi * 0.25)).epsilon(1e-15));
  CHECK(observe(Observable::roof_sin, p) == doctest::Approx(std::sin(kTwoPi * 0.25)).epsilon(1e-15));
  CHECK(observe(Observable::bump10, p) ==
        doctest::Approx(bump_window(0.25) * std::cos(kTwoPi * 0.3)).epsilon(1e-14));
  CHECK(observe(Observable::bump11, p) ==
        doctest::Approx(bump_window(0.25) * std::cos(kTwoPi * 1.1)).epsilon(1e-14));
  CHECK(observe(Observable::bump1m1, p) ==
        doctest::Approx(bump_window(0.25) * std::cos(kTwoPi * (-0.5))).epsilon(1e-14));

  // Seam identification: f just below roof 1 equals f just above roof 0 at
  // the image base, for every observable.
  const Vec2 b{0.37, 0.69};
  const PhasePoint below = make_point(m, b, 1.0 - 1e-9);
  const PhasePoint above = make_point(m, m.apply_auto(b, +1), 1e-9);
  for (Observable f : {Observable::one, Observable::roof_cos, Observable::roof_sin,
                       Observable::bump10, Observable::bump11, Observable::bump1m1}) {
    CHECK(observe(f, below) == doctest::Approx(observe(f, above)).epsilon(1e-6));
  }
}

TEST_CASE("observable names round-trip") {
  for (Observable f : {Observable::one, Observable::roof_cos, Observable::roof_sin,
                       Observable::bump10, Observable::bump11, Observable::bump1m1}) {
    const auto back = observable_from(observable_name(f));
    REQUIRE(back.has_value());
    CHECK(*back == f);
  }
  CHECK_FALSE(observable_from("no_such_thing").has_value());
}

TEST_CASE("equal-time correlation of a roof harmonic is its variance") {
  const auto& m = model();
  const TimeChange c = TimeChange::constant(1.0);
  Rng rng(137);
  const Estimate e = correlation(m, c, Observable::roof_cos, Observable::roof_cos, 0.0, 2000, rng, 1e-9);
  // Haar variance of cos(2 pi roof) is 1/2; mean is zero.
  CHECK(std::abs(e.value - 0.5) <= 3.0 * e.sem);
  CHECK(e.sem < 0.02);

  Rng rng2(137);
  const Estimate e2 = correlation(m, c, Observable::roof_cos, Observable::roof_cos, 0.0, 2000, rng2, 1e-9);
  CHECK(e2.value == e.value);
  CHECK(e2.sem == e.sem);
}

TEST_CASE("mixing profile matches pointwise correlations on a shared seed") {
  const auto& m = model();
  const TimeChange c = TimeChange::constant(1.0);
  const std::vector<double> times{0.0, 1.0, 2.0};
  Rng rng(139);
  const CorrelationSeries s =
      mixing_profile(m, c, Observable::roof_cos, Observable::roof_cos, times, 500, rng, 1e-9);
  REQUIRE(s.times.size() == 3);
  REQUIRE(s.values.size() == 3);
  // Unit roof and constant time change: integer-time flow returns the roof
  // to itself, so the correlation at integer times equals the variance.
  CHECK(s.values[1].value == doctest::Approx(s.values[0].value).epsilon(1e-12));
  CHECK(s.values[2].value == doctest::Approx(s.values[0].value).epsilon(1e-12));

  Rng rng2(139);
  const Estimate direct =
      correlation(m, c, Observable::roof_cos, Observable::roof_cos, 0.0, 500, rng2, 1e-9);
  CHECK(s.values[0].value == doctest::Approx(direct.value).epsilon(1e-12));
}

TEST_CASE("orbit average of the unit observable is exactly one") {
  const auto& m = model();
  const TimeChange tau = bump_tau();
  const PhasePoint x = make_point(m, {0.57, 0.23}, 0.78);
  for (double T : {2.0, -3.5}) {
    const BirkhoffResult r = birkhoff_average(m, tau, Observable::one, x, T, 1e-11);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.alpha * T > 0.0);  // travel in the same direction
  }
  CHECK_THROWS_AS((void)birkhoff_average(m, tau, Observable::one, x, 0.0, 1e-11),
                  std::invalid_argument);
}

TEST_CASE("orbit average against an incremental grid integration") {
  const auto& m = model();
  const TimeChange tau = bump_tau();
  const PhasePoint x = make_point(m, {0.19, 0.84}, 0.36);
  const double T = 7.0;
  const int n = 20000;
  const double dt = T / n;
  // Midpoint rule in the *time-changed* time, stepping one point forward.
  PhasePoint p = flow_tau(m, tau, x, 0.5 * dt, 1e-12);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += observe(Observable::roof_cos, p);
    if (i + 1 < n) p = flow_tau(m, tau, p, dt, 1e-12);
  }
  acc /= n;
  const BirkhoffResult r = birkhoff_average(m, tau, Observable::roof_cos, x, T, 1e-11);
  CHECK(r.value == doctest::Approx(acc).epsilon(5e-5));
}
