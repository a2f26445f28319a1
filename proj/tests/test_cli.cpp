#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "procal/dataset.hpp"
#include "procal/synthetic.hpp"

using namespace procal;

namespace {

const std::string kCli = PROCAL_CLI_PATH;

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run(const std::string& args) {
  const std::string out_file = "/tmp/procal_cli_out.txt";
  const std::string cmd = kCli + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  CommandResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long count_rows(const std::string& csv_path) {
  std::ifstream in(csv_path);
  std::string line;
  long rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++rows;
  }
  return rows - 1;  // header
}

std::string blob_csv(Index m, std::uint64_t seed, const std::string& name) {
  const Dataset d = make_blobs(m, 4, 3, seed);
  const std::string path = "/tmp/procal_cli_" + name + ".csv";
  emit_csv(d, path);
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("perturb static preserves cardinality and writes a manifest") {
  const std::string in = blob_csv(300, 3, "static_in");
  const std::string out = "/tmp/procal_cli_static_out.csv";
  const auto r = run("perturb --method procal --mode static --kprime 20 "
                     "--seed 7 --in " + in + " --out " + out +
                     " --class-col -1");
  REQUIRE(r.exit_code == 0);
  CHECK(count_rows(out) == 300);
  CHECK(read_file(out + ".manifest").find("command=perturb") !=
        std::string::npos);
}

TEST_CASE("perturb rejects an undersized group parameter verbatim") {
  const std::string in = blob_csv(50, 5, "guard_in");
  const auto r = run("perturb --method procal --kprime 1 --seed 1 --in " + in +
                     " --out /tmp/procal_cli_guard_out.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("InvalidGroupSize") != std::string::npos);
}

TEST_CASE("perturb stream appends releases in order") {
  const std::string in = blob_csv(700, 9, "stream_in");
  const std::string out = "/tmp/procal_cli_stream_out.csv";
  const auto r = run("perturb --method procal --mode stream --kprime 10 "
                     "--buffer 100 --threshold 3 --seed 11 --in " + in +
                     " --out " + out + " --class-col -1");
  REQUIRE(r.exit_code == 0);
  CHECK(count_rows(out) == 700);
  const std::string manifest = read_file(out + ".manifest");
  CHECK(manifest.find("releases=300,300,100") != std::string::npos);
}

TEST_CASE("stream guard rejects a buffer below twice the cluster count") {
  const std::string in = blob_csv(100, 13, "stream_guard_in");
  const auto r = run("perturb --method procal --mode stream --k 10 "
                     "--buffer 15 --threshold 2 --seed 1 --in " + in +
                     " --out /tmp/procal_cli_sg_out.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("InvalidStreamConfig") != std::string::npos);
}

TEST_CASE("attack writes a six-metric grid with min <= avg") {
  const std::string in = blob_csv(400, 17, "attack_in");
  const std::string out = "/tmp/procal_cli_attack";
  const auto r = run("attack --method procal --kprime 20 --seed 19 --in " +
                     in + " --out " + out + " --class-col -1");
  REQUIRE(r.exit_code == 0);

  std::ifstream csv(out + ".csv");
  std::string header, row;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "method,NImin,NIavg,ICAmin,ICAavg,IOmin,IOavg");
  REQUIRE(std::getline(csv, row));
  double ni_min, ni_avg, ica_min, ica_avg, io_min, io_avg;
  char name[16];
  REQUIRE(std::sscanf(row.c_str(), "%6[^,],%lf,%lf,%lf,%lf,%lf,%lf", name,
                      &ni_min, &ni_avg, &ica_min, &ica_avg, &io_min,
                      &io_avg) == 7);
  CHECK(ni_min >= 0);
  CHECK(ni_min <= ni_avg);
  CHECK(ica_min <= ica_avg);
  CHECK(io_min <= io_avg);
}

TEST_CASE("evaluate defaults to ten folds and puts the original first") {
  const std::string in = blob_csv(200, 23, "eval_in");
  const std::string out = "/tmp/procal_cli_eval";
  const auto r = run("evaluate --method procal --method dc --kprime 10 "
                     "--seed 29 --in " + in + " --out " + out +
                     " --class-col -1");
  REQUIRE(r.exit_code == 0);

  std::ifstream csv(out + ".csv");
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "fold,original,procal,dc");
  long lines = 0;
  std::string line;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 11);  // ten folds plus the overall row
}

TEST_CASE("evaluate can report raw and normalized scaling side by side") {
  const std::string in = blob_csv(120, 67, "scaling_in");
  const auto r = run("evaluate --method procal --kprime 10 --folds 5 "
                     "--scaling both --seed 13 --class-col -1 --in " + in +
                     " --out /tmp/procal_cli_scaling");
  REQUIRE(r.exit_code == 0);
  std::ifstream csv("/tmp/procal_cli_scaling.csv");
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header ==
        "fold,original (raw),procal (raw),original (normalized),"
        "procal (normalized)");
}

TEST_CASE("evaluate without a class column fails with NoLabels") {
  const Dataset unlabeled = make_gaussian(60, 3, 31);
  const std::string in = "/tmp/procal_cli_eval_nolabel_in.csv";
  emit_csv(unlabeled, in);
  const auto r = run("evaluate --kprime 5 --in " + in +
                     " --out /tmp/procal_cli_eval_nl");
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("NoLabels") != std::string::npos);
}

TEST_CASE("bench emits one timing row per sweep value") {
  const std::string out = "/tmp/procal_cli_bench.csv";
  const auto r = run("bench --sweep m --values 200,400 --fixed-n 6 --k 4 "
                     "--reps 1 --seed 37 --out " + out);
  REQUIRE(r.exit_code == 0);
  std::ifstream csv(out);
  std::string line;
  long lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 3);  // header + two rows
}

TEST_CASE("rerun from the manifest reproduces outputs byte for byte") {
  const std::string in = blob_csv(250, 41, "rerun_in");
  const std::string out = "/tmp/procal_cli_rerun_out.csv";
  const auto first = run("perturb --method procal --kprime 15 --seed 43 "
                         "--test-mode --in " + in + " --out " + out +
                         " --class-col -1");
  REQUIRE(first.exit_code == 0);
  const std::string bytes = read_file(out);
  const std::string provenance = read_file(out + ".provenance");
  CHECK(!provenance.empty());

  const auto again = run("rerun " + out + ".manifest");
  REQUIRE(again.exit_code == 0);
  CHECK(read_file(out) == bytes);
  CHECK(read_file(out + ".provenance") == provenance);
}

TEST_CASE("perturb never touches its input file") {
  const std::string in = blob_csv(120, 59, "immutable_in");
  const std::string before = read_file(in);
  REQUIRE(run("perturb --method procal --kprime 10 --seed 3 --class-col -1 "
              "--in " + in + " --out /tmp/procal_cli_imm_out.csv")
              .exit_code == 0);
  CHECK(read_file(in) == before);
}

TEST_CASE("stream mode reads line-delimited records from stdin") {
  const std::string out = "/tmp/procal_cli_stdin_out.csv";
  std::string rows;
  for (int i = 0; i < 60; ++i) {
    rows += std::to_string(i) + "." + std::to_string(i % 7) + "," +
            std::to_string(2 * i) + ".5\n";
  }
  const std::string feed = "/tmp/procal_cli_stdin_feed.txt";
  std::ofstream(feed) << rows;
  const std::string cmd = kCli +
                          " perturb --mode stream --kprime 5 --buffer 20 "
                          "--threshold 2 --seed 5 --in - --out " + out +
                          " < " + feed + " > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(count_rows(out) == 60);
}

TEST_CASE("evaluate accepts the comma-separated methods form") {
  const std::string in = blob_csv(150, 61, "methods_in");
  const auto r = run("evaluate --methods procal,dc --kprime 10 --folds 5 "
                     "--seed 9 --class-col -1 --in " + in +
                     " --out /tmp/procal_cli_methods");
  REQUIRE(r.exit_code == 0);
  std::ifstream csv("/tmp/procal_cli_methods.csv");
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "fold,original,procal,dc");
}

TEST_CASE("identical seeds give byte-identical reports") {
  const std::string in = blob_csv(300, 47, "det_in");
  const std::string out_a = "/tmp/procal_cli_det_a";
  const std::string out_b = "/tmp/procal_cli_det_b";
  const std::string flags = "attack --method procal --method rp --kprime 15 "
                            "--seed 53 --class-col -1 --in " + in;
  REQUIRE(run(flags + " --out " + out_a).exit_code == 0);
  REQUIRE(run(flags + " --out " + out_b).exit_code == 0);
  CHECK(read_file(out_a + ".csv") == read_file(out_b + ".csv"));
  CHECK(read_file(out_a + ".txt") == read_file(out_b + ".txt"));
}

}  // TEST_SUITE
