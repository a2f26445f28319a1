// procal: rotation-based condensation perturbation for static tables and
// data streams, with baseline methods, reconstruction-attack metrics, and
// a kNN utility harness.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "procal/attacks.hpp"
#include "procal/baselines.hpp"
#include "procal/dataset.hpp"
#include "procal/errors.hpp"
#include "procal/manifest.hpp"
#include "procal/perturb.hpp"
#include "procal/report.hpp"
#include "procal/rng.hpp"
#include "procal/stream.hpp"
#include "procal/synthetic.hpp"
#include "procal/utility.hpp"

namespace {

using namespace procal;

int run_cli(const std::vector<std::string>& args);

struct CommonIo {
  std::string in_path;
  std::string out_path;
  std::optional<int> class_col;
  bool no_header = false;
  std::uint64_t seed = 0;
};

struct MethodParams {
  long k = 0;
  long kprime = 0;
  int iterations = 10;
  double sigma = 0.3;
  bool rp_raw = false;
  int fallback_min_group_size = 2;
};

GroupingConfig make_grouping(const MethodParams& p) {
  GroupingConfig g;
  if (p.k > 0 && p.kprime > 0) {
    throw ConfigError("give either --k or --kprime, not both");
  }
  if (p.k > 0) {
    g.mode = GroupingMode::by_cluster_count;
    g.k = p.k;
  } else {
    g.mode = GroupingMode::by_group_size;
    g.kprime = p.kprime;
  }
  return g;
}

PerturbResult run_method(const std::string& method, const Dataset& d,
                         const MethodParams& p, std::uint64_t seed,
                         bool provenance) {
  if (method == "procal") {
    PerturbConfig cfg;
    cfg.grouping = make_grouping(p);
    cfg.seed = seed;
    cfg.fallback_min_group_size = p.fallback_min_group_size;
    cfg.with_provenance = provenance;
    return perturb_static(d, cfg);
  }
  if (method == "dc") {
    CondensationConfig cfg;
    cfg.group_size = p.kprime;
    cfg.seed = seed;
    cfg.with_provenance = provenance;
    return perturb_condensation(d, cfg);
  }
  if (method == "rp") {
    RandomRotationConfig cfg;
    cfg.iterations = p.iterations;
    cfg.sigma = p.sigma;
    cfg.seed = seed;
    cfg.rotate_raw = p.rp_raw;
    cfg.with_provenance = provenance;
    return perturb_random_rotation(d, cfg);
  }
  throw ConfigError("unknown method " + method);
}

void emit_csv_atomic(const Dataset& d, const std::string& path) {
  const std::string tmp = path + ".tmp";
  emit_csv(d, tmp);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw DataError("cannot move " + tmp + " into place");
  }
}

void write_provenance(const std::vector<Index>& rows, const std::string& path) {
  std::string content = "source_row\n";
  for (Index r : rows) content += std::to_string(r) + "\n";
  write_file_atomic(path, content);
}

RunManifest base_manifest(const std::string& command,
                          const std::vector<std::string>& argv) {
  RunManifest m;
  m.set("command", command);
  m.set("version", std::string(kVersion));
  m.set_argv(argv);
  return m;
}

void fill_method_params(CLI::App* cmd, MethodParams& p) {
  cmd->add_option("--k", p.k, "cluster count (k-means grouping)");
  cmd->add_option("--kprime", p.kprime, "group size (nearest-neighbor grouping)");
  cmd->add_option("--iterations", p.iterations,
                  "random-rotation candidate draws (rp)");
  cmd->add_option("--sigma", p.sigma, "random-rotation noise factor (rp)");
  cmd->add_flag("--rp-raw", p.rp_raw, "rp rotates raw values, not z-scored");
  cmd->add_option("--fallback-min-group-size", p.fallback_min_group_size,
                  "groups smaller than this reuse the last rotation");
}

void fill_common_io(CLI::App* cmd, CommonIo& io, bool need_out = true) {
  cmd->add_option("--in", io.in_path, "input CSV path")->required();
  if (need_out) {
    cmd->add_option("--out", io.out_path, "output path")->required();
  }
  cmd->add_option("--class-col", io.class_col,
                  "class column index in the file (negative counts from the end)");
  cmd->add_flag("--no-header", io.no_header, "input has no header row");
  cmd->add_option("--seed", io.seed, "run seed; drives every internal RNG");
}

// surface configuration errors before any data is read
void validate_early(const std::string& method, const std::string& mode,
                    const MethodParams& params, long buffer, long threshold) {
  if (method == "rp") return;
  const GroupingConfig g = make_grouping(params);
  if (g.mode == GroupingMode::by_group_size && g.kprime < 2) {
    throw InvalidGroupSize(g.kprime);
  }
  if (method == "dc" && g.mode == GroupingMode::by_cluster_count) {
    throw ConfigError("dc groups by size; give --kprime");
  }
  if (mode == "stream") {
    StreamConfig cfg;
    cfg.buffer_size = buffer;
    cfg.release_threshold = threshold;
    cfg.grouping = g;
    validate(cfg);
  }
}

int cmd_perturb(const std::vector<std::string>& argv, const CommonIo& io,
                const MethodParams& params, const std::string& method,
                const std::string& mode, long buffer, long threshold,
                double rate, bool test_mode) {
  validate_early(method, mode, params, buffer, threshold);
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest = base_manifest("perturb", argv);
  manifest.set("method", method);
  manifest.set("mode", mode);
  manifest.set("seed", static_cast<long long>(io.seed));
  manifest.set("in", io.in_path);
  manifest.set("out", io.out_path);

  if (mode == "static") {
    Dataset d = load_csv(io.in_path, !io.no_header, io.class_col);
    PerturbResult r = run_method(method, d, params, io.seed, test_mode);
    emit_csv_atomic(r.data, io.out_path);
    if (test_mode) write_provenance(r.provenance, io.out_path + ".provenance");
    manifest.set("rows", static_cast<long long>(r.data.rows()));
    manifest.set("attributes", static_cast<long long>(r.data.cols()));
  } else if (mode == "stream") {
    if (method != "procal") {
      throw ConfigError("stream mode supports --method procal only");
    }
    StreamConfig cfg;
    cfg.buffer_size = buffer;
    cfg.release_threshold = threshold;
    cfg.grouping = make_grouping(params);
    cfg.seed = io.seed;
    cfg.test_mode = test_mode;

    std::unique_ptr<RecordSource> source;
    if (io.in_path == "-") {
      source = std::make_unique<LineSource>(std::cin, io.class_col);
    } else {
      source = std::make_unique<CsvReplaySource>(io.in_path, !io.no_header,
                                                 io.class_col, rate);
    }
    StreamSession session(*source, cfg);

    Dataset merged;
    std::vector<Index> provenance;
    std::string release_sizes;
    while (auto block = session.next_release()) {
      if (merged.schema.empty()) {
        merged.schema = block->data.schema;
        merged.label_name = block->data.label_name;
      }
      const Index offset = merged.values.rows();
      Matrix grown(offset + block->data.rows(), block->data.cols());
      if (offset > 0) grown.topRows(offset) = merged.values;
      grown.bottomRows(block->data.rows()) = block->data.values;
      merged.values = std::move(grown);
      merged.labels.insert(merged.labels.end(), block->data.labels.begin(),
                           block->data.labels.end());
      provenance.insert(provenance.end(), block->source_rows.begin(),
                        block->source_rows.end());
      if (!release_sizes.empty()) release_sizes += ',';
      release_sizes += std::to_string(block->data.rows());
    }
    if (merged.values.rows() == 0) throw EmptyDataset();
    if (io.class_col && merged.has_labels()) {
      long idx = *io.class_col;
      if (idx < 0) idx += merged.cols() + 1;
      merged.label_column = idx;
    }
    emit_csv_atomic(merged, io.out_path);
    if (test_mode) write_provenance(provenance, io.out_path + ".provenance");
    manifest.set("rows", static_cast<long long>(merged.rows()));
    manifest.set("releases", release_sizes);
    manifest.set("buffer", static_cast<long long>(buffer));
    manifest.set("threshold", static_cast<long long>(threshold));
  } else {
    throw ConfigError("unknown mode " + mode);
  }

  const auto stop = std::chrono::steady_clock::now();
  manifest.set("wall_ms",
               std::chrono::duration<double, std::milli>(stop - start).count());
  manifest.write(io.out_path + ".manifest");
  return 0;
}

int cmd_attack(const std::vector<std::string>& argv, const CommonIo& io,
               const MethodParams& params, std::vector<std::string> methods,
               double known_fraction) {
  for (const auto& method : methods) {
    validate_early(method, "static", params, 0, 0);
  }
  const auto start = std::chrono::steady_clock::now();
  Dataset d = load_csv(io.in_path, !io.no_header, io.class_col);

  std::vector<AttackReport> reports;
  for (const auto& method : methods) {
    const PerturbResult r =
        run_method(method, d, params, derive_seed(io.seed, "method-" + method),
                   /*provenance=*/true);
    reports.push_back(evaluate_attacks(method, d, r, known_fraction,
                                       derive_seed(io.seed, "attack")));
  }

  const Table t = attack_table(reports);
  write_file_atomic(io.out_path + ".csv", t.to_csv());
  write_file_atomic(io.out_path + ".txt", t.to_text());

  RunManifest manifest = base_manifest("attack", argv);
  manifest.set("in", io.in_path);
  manifest.set("out", io.out_path);
  manifest.set("seed", static_cast<long long>(io.seed));
  manifest.set("known_fraction", known_fraction);
  std::string joined;
  for (const auto& m : methods) {
    if (!joined.empty()) joined += ',';
    joined += m;
  }
  manifest.set("methods", joined);
  const auto stop = std::chrono::steady_clock::now();
  manifest.set("wall_ms",
               std::chrono::duration<double, std::milli>(stop - start).count());
  manifest.write(io.out_path + ".manifest");

  std::cout << t.to_text();
  return 0;
}

int cmd_evaluate(const std::vector<std::string>& argv, const CommonIo& io,
                 const MethodParams& params, std::vector<std::string> methods,
                 int folds, int knn_k, const std::string& scaling) {
  for (const auto& method : methods) {
    validate_early(method, "static", params, 0, 0);
  }
  const auto start = std::chrono::steady_clock::now();
  Dataset d = load_csv(io.in_path, !io.no_header, io.class_col);
  if (!d.has_labels()) throw NoLabels();

  std::vector<std::pair<std::string, Dataset>> variants;
  for (const auto& method : methods) {
    PerturbResult r = run_method(method, d, params,
                                 derive_seed(io.seed, "method-" + method),
                                 /*provenance=*/false);
    variants.emplace_back(method, std::move(r.data));
  }

  CVConfig cv;
  cv.folds = folds;
  cv.knn_k = knn_k;
  cv.seed = io.seed;

  UtilityComparison merged;
  for (const bool normalized : {false, true}) {
    if (normalized && scaling == "raw") continue;
    if (!normalized && scaling == "normalized") continue;
    cv.normalize = normalized;
    UtilityComparison c = utility_comparison(d, variants, cv);
    for (auto& col : c.columns) {
      if (scaling == "both") {
        col.method += normalized ? " (normalized)" : " (raw)";
      }
      merged.columns.push_back(std::move(col));
    }
  }

  const Table t = utility_table(merged);
  write_file_atomic(io.out_path + ".csv", t.to_csv());
  write_file_atomic(io.out_path + ".txt", t.to_text());

  RunManifest manifest = base_manifest("evaluate", argv);
  manifest.set("in", io.in_path);
  manifest.set("out", io.out_path);
  manifest.set("seed", static_cast<long long>(io.seed));
  manifest.set("folds", static_cast<long long>(folds));
  manifest.set("knn_k", static_cast<long long>(knn_k));
  manifest.set("scaling", scaling);
  const auto stop = std::chrono::steady_clock::now();
  manifest.set("wall_ms",
               std::chrono::duration<double, std::milli>(stop - start).count());
  manifest.write(io.out_path + ".manifest");

  std::cout << t.to_text();
  return 0;
}

int cmd_bench(const std::vector<std::string>& argv, const std::string& out,
              std::uint64_t seed, const std::string& sweep,
              std::vector<long> values, long fixed_m, long fixed_n,
              const MethodParams& params, int reps) {
  const auto start = std::chrono::steady_clock::now();
  Table t;
  t.header = {"sweep", "value", "rows", "attributes", "median_seconds"};

  for (long v : values) {
    const Index m = sweep == "m" ? v : fixed_m;
    const Index n = sweep == "n" ? v : fixed_n;
    Dataset d = make_gaussian(m, n, derive_seed(seed, "bench-data"));

    PerturbConfig cfg;
    cfg.grouping = make_grouping(params);
    cfg.seed = derive_seed(seed, "bench-run");

    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      perturb_static(d, cfg);
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    t.rows.push_back({sweep, std::to_string(v), std::to_string(m),
                      std::to_string(n), format_double(median)});
  }

  write_file_atomic(out, t.to_csv());
  RunManifest manifest = base_manifest("bench", argv);
  manifest.set("out", out);
  manifest.set("seed", static_cast<long long>(seed));
  manifest.set("sweep", sweep);
  manifest.set("reps", static_cast<long long>(reps));
  const auto stop = std::chrono::steady_clock::now();
  manifest.set("wall_ms",
               std::chrono::duration<double, std::milli>(stop - start).count());
  manifest.write(out + ".manifest");

  std::cout << t.to_text();
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"rotation-based condensation data perturbation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("procal ") + kVersion);

  // perturb
  auto* perturb = app.add_subcommand("perturb", "perturb a dataset or stream");
  CommonIo pio;
  MethodParams pparams;
  std::string method = "procal";
  std::string mode = "static";
  long buffer = 0, threshold = 0;
  double rate = 0.0;
  bool test_mode = false;
  perturb->add_option("--method", method, "procal, dc, or rp")
      ->check(CLI::IsMember({"procal", "dc", "rp"}));
  perturb->add_option("--mode", mode, "static or stream")
      ->check(CLI::IsMember({"static", "stream"}));
  perturb->add_option("--buffer", buffer, "stream buffer size l");
  perturb->add_option("--threshold", threshold, "chunks per release t");
  perturb->add_option("--rate", rate, "stream replay rate, rows/second");
  perturb->add_flag("--test-mode", test_mode,
                    "write the provenance sidecar next to the output");
  fill_common_io(perturb, pio);
  fill_method_params(perturb, pparams);

  // attack
  auto* attack = app.add_subcommand("attack", "attack-resilience report");
  CommonIo aio;
  MethodParams aparams;
  std::vector<std::string> attack_methods{"procal", "dc", "rp"};
  double known_fraction = 0.10;
  attack->add_option("--method,--methods", attack_methods,
                     "methods to evaluate (repeatable or comma-separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"procal", "dc", "rp"}));
  attack->add_option("--known-fraction", known_fraction,
                     "fraction of rows the adversary knows");
  fill_common_io(attack, aio);
  fill_method_params(attack, aparams);

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "kNN utility report");
  CommonIo eio;
  MethodParams eparams;
  std::vector<std::string> eval_methods{"procal", "dc", "rp"};
  int folds = 10, knn_k = 1;
  std::string scaling = "raw";
  evaluate->add_option("--method,--methods", eval_methods,
                       "methods to evaluate (repeatable or comma-separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"procal", "dc", "rp"}));
  evaluate->add_option("--folds", folds, "cross-validation folds");
  evaluate->add_option("--knn-k", knn_k, "kNN neighbor count");
  evaluate->add_option("--scaling", scaling, "raw, normalized, or both")
      ->check(CLI::IsMember({"raw", "normalized", "both"}));
  fill_common_io(evaluate, eio);
  fill_method_params(evaluate, eparams);

  // bench
  auto* bench = app.add_subcommand("bench", "runtime scaling sweep");
  MethodParams bparams;
  std::string bench_out, sweep = "m";
  std::uint64_t bench_seed = 0;
  std::vector<long> sweep_values;
  long fixed_m = 20000, fixed_n = 20;
  int reps = 3;
  bench->add_option("--out", bench_out, "timing CSV path")->required();
  bench->add_option("--sweep", sweep, "dimension to sweep: m or n")
      ->check(CLI::IsMember({"m", "n"}));
  bench->add_option("--values", sweep_values, "sweep values")
      ->required()
      ->delimiter(',');
  bench->add_option("--fixed-m", fixed_m, "row count when sweeping n");
  bench->add_option("--fixed-n", fixed_n, "attribute count when sweeping m");
  bench->add_option("--reps", reps, "repetitions per point (median)");
  bench->add_option("--seed", bench_seed, "data/run seed");
  fill_method_params(bench, bparams);

  // rerun
  auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
  std::string manifest_path;
  rerun->add_option("manifest", manifest_path, "manifest file")->required();

  std::vector<const char*> argv_ptrs;
  argv_ptrs.push_back("procal");
  for (const auto& a : args) argv_ptrs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv_ptrs.size()), argv_ptrs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (perturb->parsed()) {
    return cmd_perturb(args, pio, pparams, method, mode, buffer, threshold,
                       rate, test_mode);
  }
  if (attack->parsed()) {
    return cmd_attack(args, aio, aparams, attack_methods, known_fraction);
  }
  if (evaluate->parsed()) {
    return cmd_evaluate(args, eio, eparams, eval_methods, folds, knn_k,
                        scaling);
  }
  if (bench->parsed()) {
    return cmd_bench(args, bench_out, bench_seed, sweep, sweep_values, fixed_m,
                     fixed_n, bparams, reps);
  }
  if (rerun->parsed()) {
    const RunManifest m = RunManifest::parse(manifest_path);
    const std::vector<std::string> stored = m.argv();
    if (stored.empty() || stored.front() == "rerun") {
      throw DataError("manifest " + manifest_path +
                      " does not record a runnable command");
    }
    return run_cli(stored);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
