#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "grover/circuits.hpp"
#include "grover/metrics.hpp"
#include "grover/simulator.hpp"

namespace grover::bench {

struct BenchConfig {
  int n_min = 2;
  int n_max = 5;
  int t_max = 3;
  int samples = 0;  // 0 -> min(max(100, 2^n), sample_cap), clamped to the subset count
  int sample_cap = 1024;
  std::uint64_t seed = 42;
  circuits::Mode mode = circuits::Mode::full;
  std::vector<std::string> methods = {"analyzer", "sv"};
  int repeats = 3;
  bool timing = false;
  sim::SimOptions sim_options;
};

BenchConfig config_from_json(const std::string& text);
std::string config_to_json(const BenchConfig& config);

struct ManifestEntry {
  std::string path;  // relative to the dataset directory
  std::string sha256;
};

struct Manifest {
  std::string config_json;
  std::vector<ManifestEntry> files;
};

std::string sha256_hex(const std::string& bytes);

// Writes per-circuit QASM, a JSON label {n, t, marked, k, mode, distribution},
// a JSONL line {qasm, mode, trace_text, results} per circuit, and
// manifest.json listing every artifact with its content hash. Byte-identical
// across runs for identical (config, seed).
Manifest generate_dataset(const BenchConfig& config, const std::filesystem::path& out_dir);

struct EvalRow {
  std::string method;
  int n = 0;
  int t = 0;
  double sa_mean = 0.0;
  double sa_std = 0.0;
  double cf_mean = 0.0;
  double cf_std = 0.0;
  std::size_t count = 0;
  std::size_t errors = 0;
  bool degenerate = false;
};

// True when the analytic per-marked probability at k_opt falls below tau, so
// the tau filter legitimately scores the config as 0.
bool degenerate_config(int n, int t, double tau = 0.3);

// method: "analyzer", "sv", "unitary" or "dm". Scores every dataset sample
// against its label (SA vs the marked set, CF vs the label distribution) and
// aggregates per (n, t). Per-sample failures are counted, not fatal.
std::vector<EvalRow> evaluate_method(const std::string& method,
                                     const std::filesystem::path& dataset_dir, double tau = 0.3,
                                     const sim::SimOptions& options = {});

struct TimingRecord {
  std::string method;
  int n = 0;
  std::vector<double> runs;  // seconds per run (batch-averaged)
  double mean_s = 0.0;
  double std_s = 0.0;
  double s_rel = 0.0;  // mean(n) / mean(n_min)
};

// Times each method end-to-end (program text -> distribution) on one
// deterministic circuit per n: warm-up discarded, `repeats` timed runs,
// inner batching so each run exceeds ~20 ms. Serialized, single worker.
std::vector<TimingRecord> time_methods(const BenchConfig& config);

std::string eval_csv(const std::vector<EvalRow>& rows);
std::string timing_csv(const std::vector<TimingRecord>& records);
std::string eval_json(const std::vector<EvalRow>& rows);
std::string timing_json(const std::vector<TimingRecord>& records);

// Writes CSV and a JSON twin (same stem, .json extension) for whichever of
// rows/records is non-empty; timing goes to <stem>.timing.csv/.timing.json.
void emit_report(const std::vector<EvalRow>& rows, const std::vector<TimingRecord>& records,
                 const std::filesystem::path& csv_path);

// Least-squares fit of log2(seconds) against n; returns {slope, intercept}.
std::pair<double, double> fit_loglinear(const std::vector<std::pair<int, double>>& points);

}  // namespace grover::bench
