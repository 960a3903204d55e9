#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "grover/analyzer.hpp"
#include "grover/bench.hpp"
#include "grover/circuits.hpp"
#include "grover/errors.hpp"
#include "grover/metrics.hpp"
#include "grover/qasm.hpp"
#include "grover/simulator.hpp"
#include "grover/tokenizer.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw grover::Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw grover::Error("cannot write " + path);
  out << content;
}

std::uint64_t env_seed(std::uint64_t fallback) {
  const char* raw = std::getenv("GROVER_SEED");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') throw grover::Error("invalid GROVER_SEED");
  return v;
}

void print_text(const std::string& text) {
  std::cout << text;
  if (text.empty() || text.back() != '\n') std::cout << '\n';
}

grover::sim::Distribution distribution_from_probs(int n, const json& probs) {
  grover::sim::Distribution dist;
  dist.n = n;
  for (const auto& [bits, p] : probs.items()) dist.entries.push_back({bits, p.get<double>()});
  grover::sim::canonical_sort(dist);
  return dist;
}

int run_generate(int n_min, int n_max, int t_max, int samples, std::uint64_t seed,
                 const std::string& mode, const std::string& out_dir) {
  grover::bench::BenchConfig config;
  config.n_min = n_min;
  config.n_max = n_max;
  config.t_max = t_max;
  config.samples = samples;
  config.seed = seed;
  config.mode = grover::circuits::mode_from_string(mode);
  const grover::bench::Manifest manifest = grover::bench::generate_dataset(config, out_dir);
  std::cout << "wrote " << manifest.files.size() << " files to " << out_dir << "\n";
  return 0;
}

int run_analyze(const std::string& file, bool oracle_only, bool as_json) {
  const auto program = grover::qasm::parse_program(slurp(file));
  const auto mode =
      oracle_only ? grover::circuits::Mode::oracle_only : grover::circuits::Mode::full;
  const auto trace = grover::analyzer::analyze(program, mode);
  print_text(as_json ? grover::analyzer::trace_to_json(trace)
                     : grover::analyzer::render_trace(trace));
  return 0;
}

int run_simulate(const std::string& file, const std::string& method, bool as_json) {
  const auto program = grover::qasm::parse_program(slurp(file));
  grover::sim::Distribution dist;
  if (method == "sv")
    dist = grover::sim::sv_simulate(program).second;
  else if (method == "unitary")
    dist = grover::sim::unitary_simulate(program);
  else
    dist = grover::sim::dm_simulate(program);
  if (as_json) {
    print_text(grover::sim::distribution_to_json(dist));
  } else {
    print_text(grover::analyzer::render_results(grover::metrics::truncate_topk(dist, 30)));
  }
  return 0;
}

int run_tokenize(const std::string& file, const std::string& vocab_path, bool stats) {
  const std::string text = slurp(file);
  const auto tokens = grover::tok::tokenize_program(text);
  if (!vocab_path.empty()) {
    const auto vocab = grover::tok::build_vocabulary({tokens});
    spill(vocab_path, vocab.to_json());
  }
  if (stats) {
    const std::size_t chars = grover::tok::char_count_baseline(text);
    const std::size_t lines = grover::tok::line_level_tokenize(text).size();
    std::cout << "tokens=" << tokens.size() << "\n";
    std::cout << "chars=" << chars << "\n";
    std::cout << "lines=" << lines << "\n";
    if (!tokens.empty() && chars > 0) {
      std::printf("cr=%.6f\n", static_cast<double>(chars) / static_cast<double>(tokens.size()));
      std::printf("srr=%.6f\n",
                  (static_cast<double>(chars) - static_cast<double>(tokens.size())) /
                      static_cast<double>(chars));
    }
    return 0;
  }
  for (const auto& token : tokens) std::cout << token << "\n";
  return 0;
}

int run_bench(const std::string& config_path, const std::string& csv_path) {
  const std::string raw = slurp(config_path);
  grover::bench::BenchConfig config = grover::bench::config_from_json(raw);
  if (!json::parse(raw).contains("seed")) config.seed = env_seed(config.seed);

  std::filesystem::path dataset_dir(csv_path);
  dataset_dir.replace_extension(".dataset");
  grover::bench::generate_dataset(config, dataset_dir);

  std::vector<grover::bench::EvalRow> rows;
  for (const std::string& method : config.methods) {
    const auto part =
        grover::bench::evaluate_method(method, dataset_dir, 0.3, config.sim_options);
    rows.insert(rows.end(), part.begin(), part.end());
  }

  std::vector<grover::bench::TimingRecord> records;
  if (config.timing) records = grover::bench::time_methods(config);

  grover::bench::emit_report(rows, records, csv_path);
  std::cout << "wrote " << csv_path << "\n";
  return 0;
}

int run_metrics(const std::string& pred_path, const std::string& truth_path, double tau) {
  const auto pred = grover::sim::distribution_from_json(slurp(pred_path));
  const json truth = json::parse(slurp(truth_path));

  std::optional<double> sa;
  grover::sim::Distribution truth_dist;
  if (truth.contains("marked")) {
    const auto marked = truth.at("marked").get<std::vector<std::string>>();
    sa = grover::metrics::search_accuracy(pred, marked, tau);
    truth_dist = distribution_from_probs(truth.at("n").get<int>(), truth.at("distribution"));
  } else {
    truth_dist = grover::sim::distribution_from_json(truth.dump());
  }
  const double cf = grover::metrics::classical_fidelity(pred, truth_dist);
  if (sa) std::printf("sa=%.6f\n", *sa);
  std::printf("cf=%.6f\n", cf);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grover circuit toolkit: generate, analyze, simulate, tokenize, benchmark"};
  app.require_subcommand(1);

  int n_min = 2, n_max = 5, t_max = 3, samples = 0;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::string mode = "full", out_dir;
  auto* gen = app.add_subcommand("generate", "Generate a labeled circuit dataset");
  gen->add_option("--n-min", n_min, "smallest qubit count");
  gen->add_option("--n-max", n_max, "largest qubit count");
  gen->add_option("--t-max", t_max, "largest marked-state count");
  gen->add_option("--samples", samples, "samples per (n, t); 0 picks a size-based default");
  gen->add_option("--seed", seed, "master RNG seed")->each([&](const std::string&) {
    seed_given = true;
  });
  gen->add_option("--mode", mode, "circuit emission mode")
      ->check(CLI::IsMember({"full", "oracle_only"}));
  gen->add_option("--out", out_dir, "output directory")->required();

  std::string analyze_file;
  bool oracle_only = false, analyze_json = false, analyze_trace = false;
  auto* ana = app.add_subcommand("analyze", "Symbolically analyze a Grover circuit");
  ana->add_option("file", analyze_file, "QASM file")->required();
  ana->add_flag("--oracle-only", oracle_only, "input carries only gate definitions");
  auto* trace_flag = ana->add_flag("--trace", analyze_trace, "emit the reasoning trace (default)");
  ana->add_flag("--json", analyze_json, "emit the trace as JSON")->excludes(trace_flag);

  std::string sim_file, sim_method;
  bool sim_json = false;
  auto* sim = app.add_subcommand("simulate", "Simulate a circuit and print its distribution");
  sim->add_option("file", sim_file, "QASM file")->required();
  sim->add_option("--method", sim_method, "simulation backend")
      ->required()
      ->check(CLI::IsMember({"sv", "unitary", "dm"}));
  sim->add_flag("--json", sim_json, "emit the distribution as JSON");

  std::string tok_file, vocab_path;
  bool tok_stats = false;
  auto* tok = app.add_subcommand("tokenize", "Tokenize a QASM file");
  tok->add_option("file", tok_file, "QASM file")->required();
  tok->add_option("--vocab", vocab_path, "write the file's vocabulary to this path");
  tok->add_flag("--stats", tok_stats, "print token statistics instead of tokens");

  std::string bench_config, bench_csv;
  auto* ben = app.add_subcommand("bench", "Run a benchmark described by a JSON config");
  ben->add_option("--config", bench_config, "config JSON path")->required();
  ben->add_option("--csv", bench_csv, "output CSV path")->required();

  std::string pred_path, truth_path;
  double tau = 0.3;
  auto* met = app.add_subcommand("metrics", "Score a predicted distribution against a label");
  met->add_option("--pred", pred_path, "predicted distribution JSON")->required();
  met->add_option("--truth", truth_path, "label or distribution JSON")->required();
  met->add_option("--tau", tau, "probability threshold for search accuracy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      if (!seed_given) seed = env_seed(seed);
      return run_generate(n_min, n_max, t_max, samples, seed, mode, out_dir);
    }
    if (ana->parsed()) return run_analyze(analyze_file, oracle_only, analyze_json);
    if (sim->parsed()) return run_simulate(sim_file, sim_method, sim_json);
    if (tok->parsed()) return run_tokenize(tok_file, vocab_path, tok_stats);
    if (ben->parsed()) return run_bench(bench_config, bench_csv);
    if (met->parsed()) return run_metrics(pred_path, truth_path, tau);
  } catch (const grover::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
