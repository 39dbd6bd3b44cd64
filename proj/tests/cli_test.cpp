#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "dpmrf/graph/image.hpp"

namespace fs = std::filesystem;
using namespace dpmrf;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "dpmrf_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  const std::string out_path = path_of("stdout.txt");
  const std::string cmd =
      std::string("\"") + DPMRF_CLI_PATH + "\" " + args + " > \"" + out_path + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  if (stdout_text) {
    std::ifstream in(out_path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    *stdout_text = buf.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::size_t count_commas(const std::string& line) {
  std::size_t n = 0;
  for (char c : line) n += c == ',';
  return n;
}

BinaryImage binary_row(std::vector<std::uint8_t> px) {
  BinaryImage img;
  img.width = static_cast<std::uint32_t>(px.size());
  img.height = 1;
  img.pixels = std::move(px);
  return img;
}

}  // namespace

TEST_CASE("verify prints the metrics header and one six-decimal row") {
  write_binary_pgm(binary_row({1, 1, 0, 0}), path_of("truth_row.pgm"));
  write_binary_pgm(binary_row({1, 0, 0, 1}), path_of("pred_row.pgm"));
  std::string out;
  const int rc = run_cli("verify --pred " + path_of("pred_row.pgm") + " --truth " +
                             path_of("truth_row.pgm"),
                         &out);
  CHECK(rc == 0);
  CHECK(out ==
        "precision,recall,accuracy,porosity_pred,porosity_truth\n"
        "0.500000,0.500000,0.500000,0.500000,0.500000\n");
}

TEST_CASE("verify reports undefined precision without a positive prediction") {
  write_binary_pgm(binary_row({1, 1, 0, 0}), path_of("truth_u.pgm"));
  write_binary_pgm(binary_row({0, 0, 0, 0}), path_of("pred_u.pgm"));
  std::string out;
  const int rc = run_cli(
      "verify --pred " + path_of("pred_u.pgm") + " --truth " + path_of("truth_u.pgm"), &out);
  CHECK(rc == 0);
  CHECK(out ==
        "precision,recall,accuracy,porosity_pred,porosity_truth\n"
        "undefined,0.000000,0.500000,0.000000,0.500000\n");
}

TEST_CASE("bench emits a reference row plus one row per thread and repeat") {
  GrayImage img;
  img.width = 32;
  img.height = 32;
  img.pixels.resize(32 * 32);
  for (std::uint32_t y = 0; y < 32; ++y) {
    for (std::uint32_t x = 0; x < 32; ++x) img.pixels[y * 32 + x] = x < 16 ? 50 : 200;
  }
  write_pgm(img, path_of("bench_input.pgm"));

  std::string out;
  const int rc = run_cli("bench --image " + path_of("bench_input.pgm") +
                             " --block 8 --threads 1,2 --repeat 2 --em-iters 2 --map-iters 4",
                         &out);
  CHECK(rc == 0);
  const auto lines = split_lines(out);
  REQUIRE(lines.size() == 1 + 1 + 2 * 2);
  CHECK(lines[0] ==
        "dataset,backend,threads,chunk,rep,graph_s,cliques_s,hoods_s,optimize_s,wall_s,speedup");
  CHECK(lines[1].rfind("bench_input.pgm,reference,", 0) == 0);
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(count_commas(lines[i]) == 10);
  for (std::size_t i = 2; i < lines.size(); ++i)
    CHECK(lines[i].rfind("bench_input.pgm,threaded,", 0) == 0);

  const int rc_file = run_cli("bench --image " + path_of("bench_input.pgm") +
                                  " --block 8 --threads 1 --repeat 1 --em-iters 2 --map-iters 4" +
                                  " --csv " + path_of("bench.csv"),
                              &out);
  CHECK(rc_file == 0);
  CHECK(out == "bench: wrote 2 records to " + path_of("bench.csv") + "\n");
  std::ifstream csv(path_of("bench.csv"));
  std::ostringstream buf;
  buf << csv.rdbuf();
  CHECK(split_lines(buf.str()).size() == 3);
}

TEST_CASE("gen-synth writes a matching image and truth pair") {
  const int rc = run_cli("gen-synth --size 32 --pore 0.3 --seed 5 --out " + path_of("g.pgm") +
                         " --truth " + path_of("t.pgm"));
  CHECK(rc == 0);
  const auto img = read_pgm(path_of("g.pgm"));
  const auto truth = read_binary_pgm(path_of("t.pgm"));
  CHECK(img.width == 32);
  CHECK(img.height == 32);
  CHECK(truth.width == 32);
  CHECK(truth.height == 32);
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(img.pixels[i] == (truth.pixels[i] ? 50 : 200));
  }
}

TEST_CASE("segment produces a mask with the input dimensions") {
  run_cli("gen-synth --size 32 --pore 0.3 --seed 5 --out " + path_of("seg_in.pgm") +
          " --truth " + path_of("seg_truth.pgm"));
  const int rc = run_cli("segment --image " + path_of("seg_in.pgm") +
                         " --block 8 --seed 7 --out " + path_of("seg_out.pgm"));
  CHECK(rc == 0);
  const auto mask = read_binary_pgm(path_of("seg_out.pgm"));
  CHECK(mask.width == 32);
  CHECK(mask.height == 32);
}

TEST_CASE("usage errors and bad inputs exit with code two") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("no-such-command") == 2);
  CHECK(run_cli("verify --pred a.pgm") == 2);  // missing required --truth
  CHECK(run_cli("verify --pred " + path_of("absent.pgm") + " --truth " + path_of("absent.pgm")) ==
        2);
  write_pgm(GrayImage{4, 1, {1, 2, 3, 4}}, path_of("tiny.pgm"));
  CHECK(run_cli("segment --image " + path_of("tiny.pgm") + " --out " + path_of("x.pgm")) == 2);
  CHECK(run_cli("segment --image " + path_of("tiny.pgm") + " --block 2 --labels 3 --out " +
                path_of("x.pgm")) == 2);
  CHECK(run_cli("gen-synth --size 8 --pore 1.5 --out " + path_of("x.pgm") + " --truth " +
                path_of("y.pgm")) == 2);
  CHECK(run_cli("segment --image " + path_of("tiny.pgm") + " --block 2 --backend bogus --out " +
                path_of("x.pgm")) == 2);
}
