#include "grover/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace grover::metrics {

double search_accuracy(const sim::Distribution& pred, const std::vector<std::string>& true_marked,
                       double tau) {
  if (true_marked.empty()) throw DomainError("true marked set is empty");
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");

  sim::Distribution sorted = pred;
  sim::canonical_sort(sorted);

  const std::size_t k = true_marked.size();
  const std::set<std::string> truth(true_marked.begin(), true_marked.end());

  std::size_t hits = 0;
  for (std::size_t i = 0; i < sorted.entries.size() && i < k; ++i) {
    const sim::DistEntry& e = sorted.entries[i];
    if (e.p >= tau && truth.count(e.bits)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

double classical_fidelity(const sim::Distribution& p, const sim::Distribution& q) {
  if (p.n != q.n) throw DimensionMismatch("distributions over different qubit counts");
  std::unordered_map<std::string, double> qmap;
  qmap.reserve(q.entries.size());
  for (const sim::DistEntry& e : q.entries) qmap[e.bits] = e.p;

  // States absent from either side contribute sqrt(p * 0) = 0, so iterating
  // p's support suffices for the zero-filled sum.
  double bc = 0.0;
  for (const sim::DistEntry& e : p.entries) {
    const auto it = qmap.find(e.bits);
    if (it == qmap.end()) continue;
    bc += std::sqrt(std::max(0.0, e.p) * std::max(0.0, it->second));
  }
  return bc * bc;
}

double state_fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size()) throw DimensionMismatch("state vectors of different dimension");
  if (std::abs(a.norm() - 1.0) > 1e-6 || std::abs(b.norm() - 1.0) > 1e-6)
    throw NotNormalized("state vectors must have unit norm");
  return std::norm(a.dot(b));
}

sim::Distribution truncate_topk(const sim::Distribution& dist, std::size_t limit) {
  sim::Distribution out = dist;
  sim::canonical_sort(out);
  if (out.entries.size() > limit) {
    out.entries.resize(limit);
    out.truncated = true;
  }
  return out;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

std::string reports_csv(const std::vector<MetricReport>& reports) {
  std::ostringstream out;
  out << "n,t,sa_mean,sa_std,cf_mean,cf_std,count\n";
  char buf[160];
  for (const MetricReport& r : reports) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.6f,%.6f,%.6f,%.6f,%zu\n", r.n, r.t, r.sa_mean,
                  r.sa_std, r.cf_mean, r.cf_std, r.count);
    out << buf;
  }
  return out.str();
}

std::string reports_json(const std::vector<MetricReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const MetricReport& r : reports) {
    arr.push_back({{"n", r.n},
                   {"t", r.t},
                   {"sa_mean", r.sa_mean},
                   {"sa_std", r.sa_std},
                   {"cf_mean", r.cf_mean},
                   {"cf_std", r.cf_std},
                   {"count", r.count}});
  }
  return arr.dump(2) + "\n";
}

std::vector<MetricReport> reports_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<MetricReport> reports;
  for (const auto& item : j) {
    MetricReport r;
    r.n = item.at("n").get<int>();
    r.t = item.at("t").get<int>();
    r.sa_mean = item.at("sa_mean").get<double>();
    r.sa_std = item.at("sa_std").get<double>();
    r.cf_mean = item.at("cf_mean").get<double>();
    r.cf_std = item.at("cf_std").get<double>();
    r.count = item.at("count").get<std::size_t>();
    reports.push_back(r);
  }
  return reports;
}

}  // namespace grover::metrics
