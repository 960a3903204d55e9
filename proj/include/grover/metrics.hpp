#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "grover/simulator.hpp"

namespace grover::metrics {

// SA = |top-k of pred (tau-filtered) intersected with true_marked| / k where
// k = |true_marked|. Ordering: probability desc, ties by ascending integer
// value. States missing from a truncated prediction count as probability 0.
double search_accuracy(const sim::Distribution& pred, const std::vector<std::string>& true_marked,
                       double tau = 0.3);

// CF(p, q) = (sum_i sqrt(p_i q_i))^2 over all 2^n states, zero-filling
// truncated entries on both sides.
double classical_fidelity(const sim::Distribution& p, const sim::Distribution& q);

// |<a|b>|^2 for unit-norm pure states.
double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

// Keeps the top `limit` entries under the canonical ordering; zero entries
// are retained if they fall within the limit.
sim::Distribution truncate_topk(const sim::Distribution& dist, std::size_t limit = 30);

struct MetricReport {
  int n = 0;
  int t = 0;  // -1 when grouped by n only
  double sa_mean = 0.0;
  double sa_std = 0.0;
  double cf_mean = 0.0;
  double cf_std = 0.0;
  std::size_t count = 0;
};

double mean(std::span<const double> xs);
double population_std(std::span<const double> xs);

std::string reports_csv(const std::vector<MetricReport>& reports);
std::string reports_json(const std::vector<MetricReport>& reports);
std::vector<MetricReport> reports_from_json(const std::string& text);

}  // namespace grover::metrics
