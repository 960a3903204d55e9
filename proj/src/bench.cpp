#include "grover/bench.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "grover/analyzer.hpp"
#include "grover/rng.hpp"
#include "json.hpp"

namespace grover::bench {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("short write to " + path.string());
}

std::string sample_stem(int n, int t, std::size_t idx) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "n%02d_t%d_%04zu", n, t, idx);
  return buf;
}

ordered_json distribution_object(const sim::Distribution& dist) {
  ordered_json probs = ordered_json::object();
  for (const sim::DistEntry& e : dist.entries) probs[e.bits] = e.p;
  return probs;
}

std::size_t default_samples(int n, int sample_cap) {
  const std::uint64_t want = std::max<std::uint64_t>(100, 1ULL << n);
  return static_cast<std::size_t>(std::min<std::uint64_t>(want, static_cast<std::uint64_t>(sample_cap)));
}

struct LabeledSample {
  std::string stem;
  int n = 0;
  int t = 0;
  int k = 0;
  circuits::Mode mode = circuits::Mode::full;
  std::vector<std::string> marked;
  sim::Distribution distribution;
  std::string qasm_path;
};

LabeledSample label_from_json(const fs::path& dataset_dir, const std::string& stem,
                              const json& j) {
  LabeledSample s;
  s.stem = stem;
  s.n = j.at("n").get<int>();
  s.t = j.at("t").get<int>();
  s.k = j.at("k").get<int>();
  s.mode = circuits::mode_from_string(j.at("mode").get<std::string>());
  s.marked = j.at("marked").get<std::vector<std::string>>();
  s.distribution.n = s.n;
  for (const auto& [bits, p] : j.at("distribution").items())
    s.distribution.entries.push_back({bits, p.get<double>()});
  sim::canonical_sort(s.distribution);
  s.qasm_path = (dataset_dir / "circuits" / (stem + ".qasm")).string();
  return s;
}

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 0xf]);
  }
  return out;
}

BenchConfig config_from_json(const std::string& text) {
  const auto j = json::parse(text);
  BenchConfig c;
  c.n_min = j.value("n_min", c.n_min);
  c.n_max = j.value("n_max", c.n_max);
  c.t_max = j.value("t_max", c.t_max);
  c.samples = j.value("samples", c.samples);
  c.sample_cap = j.value("sample_cap", c.sample_cap);
  c.seed = j.value("seed", c.seed);
  c.mode = circuits::mode_from_string(j.value("mode", std::string("full")));
  if (j.contains("methods")) c.methods = j.at("methods").get<std::vector<std::string>>();
  c.repeats = j.value("repeats", c.repeats);
  c.timing = j.value("timing", c.timing);
  c.sim_options.unitary_max_qubits =
      j.value("unitary_max_qubits", c.sim_options.unitary_max_qubits);
  c.sim_options.dm_max_qubits = j.value("dm_max_qubits", c.sim_options.dm_max_qubits);
  if (c.n_min < 2 || c.n_max < c.n_min) throw DomainError("bad n range");
  if (c.repeats < 1) throw DomainError("repeats must be at least 1");
  return c;
}

std::string config_to_json(const BenchConfig& c) {
  ordered_json j;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["t_max"] = c.t_max;
  j["samples"] = c.samples;
  j["sample_cap"] = c.sample_cap;
  j["seed"] = c.seed;
  j["mode"] = circuits::to_string(c.mode);
  j["methods"] = c.methods;
  j["repeats"] = c.repeats;
  j["timing"] = c.timing;
  j["unitary_max_qubits"] = c.sim_options.unitary_max_qubits;
  j["dm_max_qubits"] = c.sim_options.dm_max_qubits;
  return j.dump(2) + "\n";
}

bool degenerate_config(int n, int t, double tau) {
  const int k = circuits::optimal_iterations(n, t);
  const analyzer::AnalyticParams params = analyzer::analytic_params(n, t, k);
  return params.p_marked_each < tau;
}

Manifest generate_dataset(const BenchConfig& config, const fs::path& out_dir) {
  if (config.t_max < 1) throw DomainError("t_max must be at least 1");
  if (config.t_max > config.n_max)
    throw DomainError("t_max " + std::to_string(config.t_max) +
                      " exceeds every qubit count in range");

  fs::create_directories(out_dir / "circuits");
  fs::create_directories(out_dir / "labels");

  Manifest manifest;
  manifest.config_json = config_to_json(config);

  std::ostringstream jsonl;
  std::vector<std::pair<std::string, std::string>> files;  // path -> content

  for (int n = config.n_min; n <= config.n_max; ++n) {
    const int t_hi = std::min(n, config.t_max);
    for (int t = 1; t <= t_hi; ++t) {
      const std::uint64_t space = circuits::subset_count(n, t);
      std::size_t count = config.samples > 0 ? static_cast<std::size_t>(config.samples)
                                             : default_samples(n, config.sample_cap);
      count = static_cast<std::size_t>(
          std::min<std::uint64_t>(static_cast<std::uint64_t>(count), space));

      const std::uint64_t stream = static_cast<std::uint64_t>(n) * 64 + static_cast<std::uint64_t>(t);
      const auto specs = circuits::sample_specs(n, t, count, rng::derive_seed(config.seed, stream),
                                                std::min(n, config.t_max));

      for (std::size_t idx = 0; idx < specs.size(); ++idx) {
        const circuits::GroverSpec& spec = specs[idx];
        const std::string stem = sample_stem(n, t, idx);

        const qasm::QasmProgram program = circuits::build_grover(spec, config.mode);
        const std::string text = qasm::print_program(program);

        sim::Distribution label_dist;
        if (config.mode == circuits::Mode::full) {
          label_dist = sim::sv_simulate(program).second;
        } else {
          label_dist = analyzer::analytic_distribution(spec.n, spec.marked, spec.k);
        }

        const analyzer::ReasoningTrace trace = analyzer::analyze(program, config.mode);

        ordered_json label;
        label["n"] = spec.n;
        label["t"] = t;
        label["marked"] = spec.marked;
        label["k"] = spec.k;
        label["mode"] = circuits::to_string(config.mode);
        label["distribution"] = distribution_object(label_dist);

        ordered_json line;
        line["qasm"] = text;
        line["mode"] = circuits::to_string(config.mode);
        line["trace_text"] = analyzer::render_trace(trace);
        line["results"] = distribution_object(trace.results);
        jsonl << line.dump() << "\n";

        files.emplace_back("circuits/" + stem + ".qasm", text);
        files.emplace_back("labels/" + stem + ".json", label.dump(2) + "\n");
      }
    }
  }

  files.emplace_back("dataset.jsonl", jsonl.str());
  std::sort(files.begin(), files.end());

  ordered_json mf;
  mf["config"] = ordered_json::parse(manifest.config_json);
  ordered_json listed = ordered_json::array();
  for (const auto& [rel, content] : files) {
    write_file(out_dir / rel, content);
    const std::string digest = sha256_hex(content);
    manifest.files.push_back({rel, digest});
    listed.push_back({{"path", rel}, {"sha256", digest}});
  }
  mf["files"] = listed;
  write_file(out_dir / "manifest.json", mf.dump(2) + "\n");
  return manifest;
}

std::vector<EvalRow> evaluate_method(const std::string& method, const fs::path& dataset_dir,
                                     double tau, const sim::SimOptions& options) {
  const auto manifest = json::parse(read_file(dataset_dir / "manifest.json"));

  struct Acc {
    std::vector<double> sa, cf;
    std::size_t errors = 0;
  };
  std::map<std::pair<int, int>, Acc> groups;

  for (const auto& entry : manifest.at("files")) {
    const std::string rel = entry.at("path").get<std::string>();
    if (rel.rfind("labels/", 0) != 0) continue;
    const std::string stem = fs::path(rel).stem().string();

    const auto label_json = json::parse(read_file(dataset_dir / rel));
    const LabeledSample sample = label_from_json(dataset_dir, stem, label_json);
    Acc& acc = groups[{sample.n, sample.t}];

    try {
      const std::string text = read_file(sample.qasm_path);
      const qasm::QasmProgram program = qasm::parse_program(text);

      sim::Distribution dist;
      if (method == "analyzer") {
        const analyzer::ReasoningTrace trace = analyzer::analyze(program, sample.mode);
        dist = analyzer::analytic_distribution(trace.n, trace.marked_states, trace.k);
      } else if (method == "sv") {
        dist = sim::sv_simulate(program).second;
      } else if (method == "unitary") {
        dist = sim::unitary_simulate(program, options);
      } else if (method == "dm") {
        dist = sim::dm_simulate(program, options);
      } else {
        throw DomainError("unknown method '" + method + "'");
      }

      acc.sa.push_back(metrics::search_accuracy(dist, sample.marked, tau));
      acc.cf.push_back(metrics::classical_fidelity(dist, sample.distribution));
    } catch (const Error&) {
      ++acc.errors;
    }
  }

  std::vector<EvalRow> rows;
  std::map<int, Acc> by_n;
  for (const auto& [key, acc] : groups) {
    EvalRow row;
    row.method = method;
    row.n = key.first;
    row.t = key.second;
    row.sa_mean = metrics::mean(acc.sa);
    row.sa_std = metrics::population_std(acc.sa);
    row.cf_mean = metrics::mean(acc.cf);
    row.cf_std = metrics::population_std(acc.cf);
    row.count = acc.sa.size();
    row.errors = acc.errors;
    row.degenerate = degenerate_config(key.first, key.second, tau);

    Acc& agg = by_n[key.first];
    // Degenerate configs are reported on their own (n, t) row but kept out
    // of the per-n aggregate, which asserts the non-degenerate trend.
    if (!row.degenerate) {
      agg.sa.insert(agg.sa.end(), acc.sa.begin(), acc.sa.end());
      agg.cf.insert(agg.cf.end(), acc.cf.begin(), acc.cf.end());
    }
    agg.errors += acc.errors;
    rows.push_back(row);
  }

  for (const auto& [n, acc] : by_n) {
    EvalRow row;
    row.method = method;
    row.n = n;
    row.t = -1;
    row.sa_mean = metrics::mean(acc.sa);
    row.sa_std = metrics::population_std(acc.sa);
    row.cf_mean = metrics::mean(acc.cf);
    row.cf_std = metrics::population_std(acc.cf);
    row.count = acc.sa.size();
    row.errors = acc.errors;
    row.degenerate = false;
    rows.push_back(row);
  }
  return rows;
}

std::vector<TimingRecord> time_methods(const BenchConfig& config) {
  std::vector<TimingRecord> records;

  for (const std::string& method : config.methods) {
    std::vector<TimingRecord> method_records;

    for (int n = config.n_min; n <= config.n_max; ++n) {
      const auto specs = circuits::sample_specs(n, 1, 1, rng::derive_seed(config.seed, n));
      const circuits::Mode mode =
          method == "analyzer" ? config.mode : circuits::Mode::full;
      const std::string text =
          qasm::print_program(circuits::build_grover(specs.front(), mode));

      auto run_once = [&]() {
        const qasm::QasmProgram program = qasm::parse_program(text);
        if (method == "analyzer") {
          const analyzer::ReasoningTrace trace = analyzer::analyze(program, mode);
          return trace.results.entries.size();
        }
        sim::Distribution dist;
        if (method == "sv")
          dist = sim::sv_simulate(program).second;
        else if (method == "unitary")
          dist = sim::unitary_simulate(program, config.sim_options);
        else if (method == "dm")
          dist = sim::dm_simulate(program, config.sim_options);
        else
          throw DomainError("unknown method '" + method + "'");
        return dist.entries.size();
      };

      TimingRecord rec;
      rec.method = method;
      rec.n = n;
      try {
        volatile std::size_t sink = run_once();  // warm-up, discarded
        (void)sink;

        const double t0 = now_seconds();
        sink = run_once();
        const double probe = std::max(now_seconds() - t0, 1e-7);
        const std::size_t batch =
            probe >= 0.02 ? 1 : static_cast<std::size_t>(std::ceil(0.02 / probe));

        for (int r = 0; r < config.repeats; ++r) {
          const double start = now_seconds();
          for (std::size_t b = 0; b < batch; ++b) sink = run_once();
          rec.runs.push_back((now_seconds() - start) / static_cast<double>(batch));
        }
      } catch (const SizeLimit&) {
        continue;  // absent data point
      }

      rec.mean_s = metrics::mean(rec.runs);
      rec.std_s = metrics::population_std(rec.runs);
      method_records.push_back(std::move(rec));
    }

    const double base =
        method_records.empty() ? 0.0 : method_records.front().mean_s;
    for (TimingRecord& rec : method_records)
      rec.s_rel = base > 0.0 ? rec.mean_s / base : 0.0;
    if (!method_records.empty()) method_records.front().s_rel = 1.0;

    records.insert(records.end(), std::make_move_iterator(method_records.begin()),
                   std::make_move_iterator(method_records.end()));
  }
  return records;
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::ostringstream out;
  out << "method,n,t,sa_mean,sa_std,cf_mean,cf_std,count,errors,degenerate\n";
  char buf[240];
  for (const EvalRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.6f,%.6f,%.6f,%.6f,%zu,%zu,%d\n",
                  r.method.c_str(), r.n, r.t, r.sa_mean, r.sa_std, r.cf_mean, r.cf_std, r.count,
                  r.errors, r.degenerate ? 1 : 0);
    out << buf;
  }
  return out.str();
}

std::string timing_csv(const std::vector<TimingRecord>& records) {
  std::ostringstream out;
  out << "method,n,mean_s,std_s,s_rel,runs\n";
  char buf[240];
  for (const TimingRecord& r : records) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%.9f,%.9f,%.6f,%zu\n", r.method.c_str(), r.n, r.mean_s,
                  r.std_s, r.s_rel, r.runs.size());
    out << buf;
  }
  return out.str();
}

std::string eval_json(const std::vector<EvalRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const EvalRow& r : rows) {
    arr.push_back({{"method", r.method},
                   {"n", r.n},
                   {"t", r.t},
                   {"sa_mean", r.sa_mean},
                   {"sa_std", r.sa_std},
                   {"cf_mean", r.cf_mean},
                   {"cf_std", r.cf_std},
                   {"count", r.count},
                   {"errors", r.errors},
                   {"degenerate", r.degenerate}});
  }
  return arr.dump(2) + "\n";
}

std::string timing_json(const std::vector<TimingRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const TimingRecord& r : records) {
    arr.push_back({{"method", r.method},
                   {"n", r.n},
                   {"mean_s", r.mean_s},
                   {"std_s", r.std_s},
                   {"s_rel", r.s_rel},
                   {"runs", r.runs}});
  }
  return arr.dump(2) + "\n";
}

void emit_report(const std::vector<EvalRow>& rows, const std::vector<TimingRecord>& records,
                 const fs::path& csv_path) {
  write_file(csv_path, eval_csv(rows));
  fs::path jp = csv_path;
  jp.replace_extension(".json");
  write_file(jp, eval_json(rows));
  if (!records.empty()) {
    fs::path stem = csv_path;
    stem.replace_extension();
    write_file(stem.string() + ".timing.csv", timing_csv(records));
    write_file(stem.string() + ".timing.json", timing_json(records));
  }
}

std::pair<double, double> fit_loglinear(const std::vector<std::pair<int, double>>& points) {
  if (points.size() < 2) throw DomainError("need at least two points to fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, seconds] : points) {
    if (seconds <= 0.0) throw DomainError("timings must be positive");
    const double x = static_cast<double>(n);
    const double y = std::log2(seconds);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(points.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw DomainError("degenerate fit");
  const double slope = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / m;
  return {slope, intercept};
}

}  // namespace grover::bench
