#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpmrf/bench/harness.hpp"
#include "dpmrf/dpp/backend.hpp"
#include "dpmrf/error.hpp"
#include "dpmrf/eval/metrics.hpp"
#include "dpmrf/eval/phantom.hpp"
#include "dpmrf/graph/cliques.hpp"
#include "dpmrf/graph/label_map.hpp"
#include "dpmrf/graph/neighborhoods.hpp"
#include "dpmrf/graph/region_graph.hpp"
#include "dpmrf/mrf/engine.hpp"
#include "dpmrf/simd/dispatch.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point from, Clock::time_point to) {
  return std::chrono::duration<double>(to - from).count();
}

struct ExecFlags {
  std::string backend = "serial";
  unsigned threads = 1;
  std::size_t chunk = 0;
  std::string simd = "auto";
};

void add_exec_flags(CLI::App* cmd, ExecFlags& ef) {
  cmd->add_option("--backend", ef.backend, "Execution backend")
      ->check(CLI::IsMember({"serial", "threaded"}))
      ->capture_default_str();
  cmd->add_option("--threads", ef.threads, "Worker threads for --backend threaded")
      ->capture_default_str();
  cmd->add_option("--chunk", ef.chunk, "Elements per task, 0 picks automatically")
      ->capture_default_str();
  cmd->add_option("--simd", ef.simd, "Kernel variant")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}))
      ->capture_default_str();
}

dpmrf::dpp::Backend make_backend(const ExecFlags& ef) {
  if (ef.simd == "scalar") {
    dpmrf::simd::set_override(dpmrf::simd::Level::Scalar);
  } else if (ef.simd == "avx2") {
    dpmrf::simd::set_override(dpmrf::simd::Level::Avx2);
  } else {
    dpmrf::simd::clear_override();
  }
  return ef.backend == "threaded" ? dpmrf::dpp::Backend::threaded(ef.threads, ef.chunk)
                                  : dpmrf::dpp::Backend::serial();
}

void add_config_flags(CLI::App* cmd, dpmrf::OptimizerConfig& cfg) {
  cmd->add_option("--seed", cfg.rng_seed, "RNG seed")->capture_default_str();
  cmd->add_option("--beta", cfg.beta, "Smoothness weight")->capture_default_str();
  cmd->add_option("--em-iters", cfg.em_max_iters, "Max EM iterations")->capture_default_str();
  cmd->add_option("--map-iters", cfg.map_max_iters, "Max MAP iterations per EM iteration")
      ->capture_default_str();
  cmd->add_option("--window", cfg.convergence_window, "Convergence window L")
      ->capture_default_str();
  cmd->add_option("--tol", cfg.convergence_tol, "Convergence tolerance")->capture_default_str();
}

dpmrf::LabelMap load_oversegmentation(const dpmrf::GrayImage& image, const std::string& overseg,
                                      std::uint32_t block) {
  if (!overseg.empty()) {
    dpmrf::LabelMap labels = dpmrf::read_rlm(overseg);
    if (labels.width != image.width || labels.height != image.height)
      throw dpmrf::InputError("oversegmentation dimensions do not match the image");
    return labels;
  }
  if (block > 0) return dpmrf::grid_oversegment(image.width, image.height, block);
  throw dpmrf::InputError("provide --overseg FILE or --block N");
}

std::string basename_of(const std::string& path) {
  const auto pos = path.find_last_of('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary MRF image segmentation built from data-parallel primitives"};
  app.require_subcommand(1);

  // gen-synth
  auto* gen = app.add_subcommand(
      "gen-synth", "Generate a disc phantom: a ground-truth mask and a corrupted grayscale image");
  dpmrf::PhantomSpec spec;
  std::uint32_t gen_size = 128;
  std::string gen_out;
  std::string gen_truth;
  gen->add_option("--size", gen_size, "Image width and height")->capture_default_str();
  gen->add_option("--pore", spec.pore_fraction, "Target pore fraction in [0,1)")
      ->capture_default_str();
  gen->add_option("--sp", spec.sp_rate, "Salt-and-pepper pixel fraction")->capture_default_str();
  gen->add_option("--gauss", spec.gauss_sigma, "Additive Gaussian noise std")
      ->capture_default_str();
  gen->add_flag("--ringing", spec.ringing, "Add a radial ringing artifact");
  gen->add_option("--seed", spec.seed, "RNG seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Corrupted image (PGM)")->required();
  gen->add_option("--truth", gen_truth, "Ground-truth mask (PGM, 0=solid 255=pore)")->required();
  gen->callback([&] {
    spec.width = gen_size;
    spec.height = gen_size;
    const auto ph = dpmrf::gen_phantom(spec);
    const auto noisy = dpmrf::corrupt(ph.clean, spec);
    dpmrf::write_pgm(noisy, gen_out);
    dpmrf::write_binary_pgm(ph.truth, gen_truth);
    std::cout << "gen-synth: wrote " << gen_out << " and " << gen_truth << ", pore fraction "
              << std::fixed << std::setprecision(4) << dpmrf::porosity(ph.truth) << "\n";
  });

  // segment
  auto* seg = app.add_subcommand("segment",
                                 "Segment a grayscale image into a binary pore/solid mask");
  std::string seg_image, seg_overseg, seg_out;
  std::uint32_t seg_block = 0;
  std::uint32_t seg_labels = 2;
  ExecFlags seg_exec;
  dpmrf::OptimizerConfig seg_cfg;
  seg->add_option("--image", seg_image, "Input grayscale PGM")->required();
  seg->add_option("--overseg", seg_overseg, "Oversegmentation file (RLM1)");
  seg->add_option("--block", seg_block, "Grid oversegmentation block size");
  seg->add_option("--labels", seg_labels, "Number of labels (only 2 supported)")
      ->capture_default_str();
  seg->add_option("--out", seg_out, "Output mask (PGM, 0=solid 255=pore)")->required();
  add_exec_flags(seg, seg_exec);
  add_config_flags(seg, seg_cfg);
  seg->callback([&] {
    if (seg_labels != 2) throw dpmrf::InputError("only --labels 2 is supported");
    const auto image = dpmrf::read_pgm(seg_image);
    const auto labels = load_oversegmentation(image, seg_overseg, seg_block);
    const auto backend = make_backend(seg_exec);

    const auto t0 = Clock::now();
    const auto graph = dpmrf::build_region_graph(backend, image, labels);
    const auto t1 = Clock::now();
    const auto cliques = dpmrf::enumerate_maximal_cliques(backend, graph);
    const auto t2 = Clock::now();
    const auto hoods = dpmrf::build_neighborhoods(backend, graph, cliques);
    const auto t3 = Clock::now();
    const auto res = dpmrf::optimize(backend, graph, hoods, seg_cfg);
    const auto t4 = Clock::now();

    // The darker class (smaller mean) is the pore phase.
    const std::uint32_t pore_label = res.params.mu[0] <= res.params.mu[1] ? 0u : 1u;
    dpmrf::BinaryImage mask;
    mask.width = image.width;
    mask.height = image.height;
    mask.pixels.resize(image.size());
    for (std::size_t i = 0; i < mask.pixels.size(); ++i)
      mask.pixels[i] = res.labels[labels.region[i]] == pore_label ? 1 : 0;
    dpmrf::write_binary_pgm(mask, seg_out);

    std::cout << "segment: regions=" << graph.num_vertices << " cliques=" << cliques.size()
              << " hoods=" << hoods.size() << " em_iters=" << res.trace.size() << std::fixed
              << std::setprecision(6) << " graph_s=" << seconds(t0, t1)
              << " cliques_s=" << seconds(t1, t2) << " hoods_s=" << seconds(t2, t3)
              << " optimize_s=" << seconds(t3, t4) << "\n";
  });

  // verify
  auto* ver = app.add_subcommand(
      "verify",
      "Compare a predicted mask against ground truth; prints the CSV header "
      "precision,recall,accuracy,porosity_pred,porosity_truth and one data row "
      "(6 decimals, 'undefined' on zero denominators)");
  std::string ver_pred, ver_truth;
  ver->add_option("--pred", ver_pred, "Predicted mask (PGM)")->required();
  ver->add_option("--truth", ver_truth, "Ground-truth mask (PGM)")->required();
  ver->callback([&] {
    const auto pred = dpmrf::read_binary_pgm(ver_pred);
    const auto truth = dpmrf::read_binary_pgm(ver_truth);
    const auto m = dpmrf::compute_metrics(dpmrf::confusion(pred, truth));
    std::ostringstream row;
    row << std::fixed << std::setprecision(6);
    if (m.precision_defined) {
      row << m.precision;
    } else {
      row << "undefined";
    }
    row << ',';
    if (m.recall_defined) {
      row << m.recall;
    } else {
      row << "undefined";
    }
    row << ',' << m.accuracy << ',' << dpmrf::porosity(pred) << ',' << dpmrf::porosity(truth);
    std::cout << "precision,recall,accuracy,porosity_pred,porosity_truth\n" << row.str() << "\n";
  });

  // bench
  auto* ben = app.add_subcommand(
      "bench",
      "Strong-scaling benchmark; emits CSV with columns "
      "dataset,backend,threads,chunk,rep,graph_s,cliques_s,hoods_s,optimize_s,wall_s,speedup. "
      "Row one is the serial reference baseline; wall_s covers the optimization phase only, "
      "speedup = reference wall_s / row wall_s");
  std::string ben_image, ben_overseg, ben_csv;
  std::uint32_t ben_block = 0;
  dpmrf::BenchPlan plan;
  ben->add_option("--image", ben_image, "Input grayscale PGM")->required();
  ben->add_option("--overseg", ben_overseg, "Oversegmentation file (RLM1)");
  ben->add_option("--block", ben_block, "Grid oversegmentation block size");
  ben->add_option("--threads", plan.threads, "Thread counts, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  ben->add_option("--repeat", plan.repeats, "Repetitions per thread count")
      ->capture_default_str();
  ben->add_option("--csv", ben_csv, "CSV output path (stdout when omitted)");
  add_config_flags(ben, plan.config);
  ben->callback([&] {
    const auto image = dpmrf::read_pgm(ben_image);
    const auto labels = load_oversegmentation(image, ben_overseg, ben_block);
    plan.dataset = basename_of(ben_image);
    const auto records = dpmrf::run_bench(image, labels, plan);
    const auto csv = dpmrf::bench_csv(records);
    if (ben_csv.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(ben_csv);
      if (!out) throw dpmrf::InputError("cannot write " + ben_csv);
      out << csv;
      std::cout << "bench: wrote " << records.size() << " records to " << ben_csv << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dpmrf::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
