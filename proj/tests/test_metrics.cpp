#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "grover/analyzer.hpp"
#include "grover/circuits.hpp"
#include "grover/metrics.hpp"
#include "grover/rng.hpp"
#include "grover/simulator.hpp"

using namespace grover;
using sim::Distribution;

namespace {

Distribution dist_of(int n, std::vector<sim::DistEntry> entries) {
  Distribution d;
  d.n = n;
  d.entries = std::move(entries);
  sim::canonical_sort(d);
  return d;
}

Eigen::VectorXcd random_state(rng::Prng& prng, int dim) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = {prng.uniform01() - 0.5, prng.uniform01() - 0.5};
  v.normalize();
  return v;
}

}  // namespace

TEST_CASE("search accuracy on the reference two-marked distribution") {
  const auto pred = analyzer::analytic_distribution(4, {"0111", "1101"}, 2);
  CHECK(metrics::search_accuracy(pred, {"0111", "1101"}) == doctest::Approx(1.0));
}

TEST_CASE("the tau filter rejects weak candidates") {
  const auto pred = dist_of(4, {{"0111", 0.47}, {"1101", 0.20}, {"0000", 0.33}});
  CHECK(metrics::search_accuracy(pred, {"0111", "1101"}, 0.3) == doctest::Approx(0.5));
}

TEST_CASE("near-uniform predictions score zero") {
  const auto pred =
      dist_of(2, {{"00", 0.25}, {"01", 0.25}, {"10", 0.25}, {"11", 0.25}});
  CHECK(metrics::search_accuracy(pred, {"11"}, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("truncated predictions treat missing states as misses") {
  const auto pred = dist_of(3, {{"000", 0.6}});
  CHECK(metrics::search_accuracy(pred, {"000", "111"}, 0.3) == doctest::Approx(0.5));
}

TEST_CASE("search accuracy is monotone non-increasing in tau") {
  const auto pred = analyzer::analytic_distribution(4, {"0011", "1100"}, 2);
  double prev = 1.0;
  for (double tau = 0.0; tau <= 1.0; tau += 0.05) {
    const double sa = metrics::search_accuracy(pred, {"0011", "1100"}, tau);
    CHECK(sa <= prev + 1e-15);
    prev = sa;
  }
}

TEST_CASE("search accuracy validates its inputs") {
  const auto pred = dist_of(1, {{"0", 1.0}});
  CHECK_THROWS_AS(metrics::search_accuracy(pred, {}, 0.3), DomainError);
  CHECK_THROWS_AS(metrics::search_accuracy(pred, {"0"}, -0.1), DomainError);
  CHECK_THROWS_AS(metrics::search_accuracy(pred, {"0"}, 1.5), DomainError);
}

TEST_CASE("classical fidelity basics") {
  const auto p = dist_of(2, {{"00", 0.25}, {"01", 0.25}, {"10", 0.25}, {"11", 0.25}});
  const auto q = dist_of(2, {{"11", 1.0}});
  CHECK(metrics::classical_fidelity(p, p) == doctest::Approx(1.0));
  CHECK(metrics::classical_fidelity(p, q) == doctest::Approx(0.25));
  CHECK(metrics::classical_fidelity(q, p) == doctest::Approx(0.25));

  const auto r = dist_of(2, {{"00", 1.0}});
  CHECK(metrics::classical_fidelity(q, r) == doctest::Approx(0.0));
}

TEST_CASE("classical fidelity of analyzer output against simulation") {
  const circuits::GroverSpec spec{4, {"0111", "1101"}, 2};
  const auto program = circuits::build_grover(spec, circuits::Mode::full);
  const auto pred = analyzer::analytic_distribution(spec.n, spec.marked, spec.k);
  const auto truth = sim::sv_simulate(program).second;
  CHECK(metrics::classical_fidelity(pred, truth) >= 0.999999);
}

TEST_CASE("classical fidelity rejects dimension mismatches") {
  const auto p = dist_of(2, {{"00", 1.0}});
  const auto q = dist_of(3, {{"000", 1.0}});
  CHECK_THROWS_AS(metrics::classical_fidelity(p, q), DimensionMismatch);
}

TEST_CASE("state fidelity basics") {
  Eigen::VectorXcd zero(2), one(2), plus(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(metrics::state_fidelity(zero, zero) == doctest::Approx(1.0));
  CHECK(metrics::state_fidelity(zero, one) == doctest::Approx(0.0));
  CHECK(metrics::state_fidelity(plus, zero) == doctest::Approx(0.5));

  Eigen::VectorXcd unnorm(2);
  unnorm << 2.0, 0.0;
  CHECK_THROWS_AS(metrics::state_fidelity(unnorm, zero), NotNormalized);
  Eigen::VectorXcd three(3);
  three << 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(metrics::state_fidelity(zero, three), DimensionMismatch);
}

TEST_CASE("classical fidelity dominates state fidelity for pure states") {
  rng::Prng prng(20240817);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(prng.uniform_below(5));  // dim 4..64
    const int dim = 1 << n;
    const auto a = random_state(prng, dim);
    const auto b = random_state(prng, dim);

    Distribution pa, pb;
    pa.n = pb.n = n;
    for (int i = 0; i < dim; ++i) {
      const auto bits = circuits::bitstring_of(i, n);
      pa.entries.push_back({bits, std::norm(a(i))});
      pb.entries.push_back({bits, std::norm(b(i))});
    }
    const double cf = metrics::classical_fidelity(pa, pb);
    const double sf = metrics::state_fidelity(a, b);
    CHECK(cf >= sf - 1e-12);
    CHECK(cf >= 0.0);
    CHECK(cf <= 1.0 + 1e-12);
  }
}

TEST_CASE("truncation keeps the canonical top entries") {
  Distribution d;
  d.n = 5;
  for (int i = 0; i < 32; ++i) d.entries.push_back({circuits::bitstring_of(i, 5), 1.0 / 32.0});
  const auto top = metrics::truncate_topk(d, 30);
  CHECK(top.entries.size() == 30);
  CHECK(top.truncated);
  CHECK(top.entries.front().bits == "00000");  // ties resolved by integer value
  CHECK(top.entries.back().bits == "11101");

  const auto d16 = analyzer::analytic_distribution(4, {"1000"}, 3);
  const auto same = metrics::truncate_topk(d16, 30);
  CHECK(same.entries.size() == 16);
  CHECK(!same.truncated);

  Distribution empty;
  empty.n = 2;
  CHECK(metrics::truncate_topk(empty, 30).entries.empty());
}

TEST_CASE("zero entries within the limit are retained") {
  Distribution d;
  d.n = 2;
  d.entries = {{"00", 1.0}, {"01", 0.0}, {"10", 0.0}, {"11", 0.0}};
  const auto top = metrics::truncate_topk(d, 30);
  CHECK(top.entries.size() == 4);
}

TEST_CASE("mean and population standard deviation") {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  CHECK(metrics::mean(xs) == doctest::Approx(5.0));
  CHECK(metrics::population_std(xs) == doctest::Approx(2.0));
  CHECK(metrics::population_std(std::vector<double>{3.0}) == doctest::Approx(0.0));
  CHECK(metrics::mean(std::vector<double>{}) == doctest::Approx(0.0));
}

TEST_CASE("metric reports serialize to the pinned CSV layout") {
  metrics::MetricReport r;
  r.n = 4;
  r.t = 2;
  r.sa_mean = 1.0;
  r.cf_mean = 0.999999;
  r.count = 10;
  const auto csv = metrics::reports_csv({r});
  CHECK(csv.rfind("n,t,sa_mean,sa_std,cf_mean,cf_std,count\n", 0) == 0);
  CHECK(csv.find("4,2,1.000000,0.000000,0.999999,0.000000,10\n") != std::string::npos);

  const auto round = metrics::reports_from_json(metrics::reports_json({r}));
  REQUIRE(round.size() == 1);
  CHECK(round[0].n == 4);
  CHECK(round[0].cf_mean == doctest::Approx(0.999999));
}
