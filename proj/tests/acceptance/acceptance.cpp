// Acceptance gate: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Criteria run in-process against the
// library or through the tigranet executable.
//
// usage: tigranet_acceptance [criterion ...]   (e.g. "1 2 smoke"; default all)

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "tigranet/equivariance/experiment.hpp"
#include "tigranet/equivariance/gap.hpp"
#include "tigranet/equivariance/transform.hpp"
#include "tigranet/grid_graph.hpp"
#include "tigranet/imaging/image.hpp"
#include "tigranet/layers/architecture.hpp"
#include "tigranet/layers/network.hpp"
#include "tigranet/layers/spectral_conv.hpp"
#include "tigranet/layers/statistical.hpp"
#include "tigranet/rng.hpp"
#include "tigranet/spectral_oracle.hpp"
#include "tigranet/training/gradcheck.hpp"
#include "tigranet/training/init.hpp"

namespace fs = std::filesystem;
using namespace tigranet;

namespace {

const std::string kCli = TIGRANET_CLI_PATH;
const std::string kData = TIGRANET_DATA_DIR;
const std::string kMnist = kData + "/mnist-5k";
const std::string kCorpus = kData + "/corpus";

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> random_coeffs(int degree, Rng& rng) {
  std::vector<double> a(static_cast<std::size_t>(degree) + 1);
  for (auto& v : a) v = rng.uniform(-1.0, 1.0);
  return a;
}

// ---- helpers for criteria that drive the executable

fs::path work_root() { return fs::temp_directory_path() / "tigranet_acceptance"; }

int run_cli(const std::string& args, const fs::path& log) {
  fs::create_directories(log.parent_path());
  const std::string cmd = "'" + kCli + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string tail_of(const fs::path& log) {
  std::ifstream in(log);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines.empty() ? std::string("(no output)") : lines.back();
}

// CSV data rows without comment lines, keyed by column name.
std::vector<std::map<std::string, std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::map<std::string, std::string>> rows;
  std::vector<std::string> header;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.starts_with("#")) continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    const auto f = split(line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size() && i < f.size(); ++i) row[header[i]] = f[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string without_comments(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (!line.starts_with("#")) out += line + '\n';
  }
  return out;
}

// ---- criteria

// Polynomial filters commute with grid isometries on signals whose support
// keeps a zero margin of at least the filter degree. Translations also need
// every node within the filter reach to keep full degree after the shift,
// so they are drawn only for signals with spare margin and move the support
// no closer than degree + 1 to the border.
Outcome exact_equivariance() {
  Rng rng(101);
  double worst = 0.0;
  long checks = 0;
  std::vector<TransformSpec> dihedral;
  for (int k = 1; k < 4; ++k) dihedral.push_back(TransformSpec::rotation(k * M_PI / 2));
  dihedral.push_back(TransformSpec::horizontal_reflection());
  dihedral.push_back(TransformSpec::vertical_reflection());
  auto random_support = [&](int n, int margin) {
    GraphSignal y = GraphSignal::Zero(n * n);
    for (int r = margin; r < n - margin; ++r) {
      for (int c = margin; c < n - margin; ++c) y[r * n + c] = rng.uniform(-1.0, 1.0);
    }
    return y;
  };
  for (const auto conn : {Connectivity::FourNN, Connectivity::EightNN}) {
    for (int n = 12; n <= 16; ++n) {
      const auto g = build_grid_graph(n, n, conn);
      const auto powers = laplacian_powers(g, 5);
      for (int degree = 0; degree <= 5; ++degree) {
        const int spare = (n - 1) / 2 - degree - 1;
        std::vector<TransformSpec> shifts;
        for (int dy = -spare; dy <= spare; ++dy) {
          for (int dx = -spare; dx <= spare; ++dx) {
            if (dx != 0 || dy != 0) shifts.push_back(TransformSpec::translation(dx, dy));
          }
        }
        for (int draw = 0; draw < 100; ++draw) {
          const auto alpha = random_coeffs(degree, rng);
          const GraphSignal tight = random_support(n, degree);
          for (const auto& spec : dihedral) {
            worst = std::max(worst, equivariance_gap(powers, g, alpha, tight, spec).per_node.maxCoeff());
            ++checks;
          }
          if (spare < 1) continue;
          const GraphSignal loose = random_support(n, degree + 1 + spare);
          for (const auto& spec : shifts) {
            worst = std::max(worst, equivariance_gap(powers, g, alpha, loose, spec).per_node.maxCoeff());
            ++checks;
          }
        }
      }
    }
  }
  return {worst <= 1e-10, fmt::format("max per-node gap {:.3g} over {} filter/transform pairs", worst, checks)};
}

Outcome oracle_equivalence() {
  Rng rng(102);
  double worst = 0.0;
  int grids = 0;
  for (const auto conn : {Connectivity::FourNN, Connectivity::EightNN}) {
    for (int h = 1; h <= 8; ++h) {
      for (int w = 1; w <= 8; ++w) {
        if (h * w < 2) continue;
        const auto g = build_grid_graph(h, w, conn);
        const auto basis = eigendecompose(g);
        const auto powers = laplacian_powers(g, 5);
        ++grids;
        for (int draw = 0; draw < 100; ++draw) {
          const auto alpha = random_coeffs(draw % 6, rng);
          GraphSignal y(h * w);
          for (Index i = 0; i < y.size(); ++i) y[i] = rng.uniform(-1.0, 1.0);
          const GraphSignal ref = spectral_filter(basis, y, [&](double l) { return polynomial_response(alpha, l); });
          worst = std::max(worst, (apply_polynomial_filter(powers, alpha, y) - ref).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  return {worst <= 1e-8, fmt::format("max per-node difference {:.3g} on {} grids x 100 draws", worst, grids)};
}

Outcome gradient_correctness() {
  const auto g = build_grid_graph(10, 10, Connectivity::EightNN);
  const auto arch = parse_architecture("SC[2, 2]-DP[20]-S[4]-FC[8]-FC[3]");
  std::map<std::string, GroupCheck> worst;
  bool pass = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Network net(arch, g);
    init_network(net, SeedSplitter(seed).derive("init"));
    Rng rng(SeedSplitter(seed).derive("gradcheck-data"));
    std::vector<GraphSignal> images;
    std::vector<int> labels;
    for (int s = 0; s < 3; ++s) {
      GraphSignal y(100);
      for (Index i = 0; i < 100; ++i) y[i] = rng.uniform(0.0, 1.0);
      images.push_back(y);
      labels.push_back(s);
    }
    const auto report = gradient_check(net, images, labels, GradcheckConfig{});
    pass = pass && report.pass();
    for (const auto& gc : report.groups) {
      auto& w = worst[gc.group];
      w.worst_rel_error = std::max(w.worst_rel_error, gc.worst_rel_error);
      w.checked += gc.checked;
      w.masked += gc.masked;
    }
  }
  std::string detail;
  for (const auto& [group, w] : worst) {
    pass = pass && w.checked > 0;
    detail += fmt::format("{}{} {:.2g} ({} checked, {} masked)", detail.empty() ? "" : "; ", group,
                          w.worst_rel_error, w.checked, w.masked);
  }
  return {pass && worst.size() == 3, "worst relative error over 5 seeds (<= 1e-5): " + detail};
}

Outcome variance_constant() {
  double worst = 0.0;
  for (const int n : {3, 5, 8, 10, 16}) {
    const auto g = build_grid_graph(n, n, Connectivity::EightNN);
    Rng rng(static_cast<std::uint64_t>(200 + n));
    SignalList maps;
    for (int k = 0; k < 3; ++k) {
      GraphSignal y(n * n);
      for (Index i = 0; i < y.size(); ++i) y[i] = rng.uniform(-1.0, 1.0);
      maps.push_back(y);
    }
    const auto [lo, hi] = variance_gradient_ratio(statistical_forward(maps, g, 4));
    const double expected = (n * n - 1.0) / (n * n);
    worst = std::max({worst, std::abs(lo - expected), std::abs(hi - expected)});
  }
  return {worst <= 1e-9, fmt::format("ratio deviates from (N-1)/N by at most {:.3g} for N in 9..256", worst)};
}

Outcome mnist012_end_to_end() {
  const auto dir = work_root() / "mnist012";
  fs::remove_all(dir);
  const auto t0 = Clock::now();
  const std::string common = fmt::format("--mnist-dir '{}' --threads 1", kMnist);
  if (run_cli(fmt::format("train {} --seed 7 --epochs 300 --lr 3e-3 --out '{}'", common, (dir / "train").string()),
              dir / "train.log") != 0) {
    return {false, "train failed: " + tail_of(dir / "train.log")};
  }
  const auto ckpt = (dir / "train" / "checkpoint.bin").string();
  std::map<std::string, double> acc;
  for (const auto& [name, split, transform, runs] :
       std::vector<std::tuple<std::string, std::string, std::string, int>>{
           {"train", "train", "none", 1}, {"validation", "validation", "none", 1}, {"rotated", "test", "rotation", 10}}) {
    const auto out = dir / ("eval_" + name);
    if (run_cli(fmt::format("eval {} --checkpoint '{}' --split {} --transform {} --runs {} --out '{}'", common, ckpt,
                            split, transform, runs, out.string()),
                dir / ("eval_" + name + ".log")) != 0) {
      return {false, "eval failed: " + tail_of(dir / ("eval_" + name + ".log"))};
    }
    const auto summary = read_csv(out / "eval_summary.csv");
    if (summary.empty()) return {false, "missing eval summary for " + name};
    acc[name] = std::stod(summary[0].at("mean_accuracy"));
  }
  const double elapsed = seconds_since(t0);
  const bool pass = acc["train"] >= 0.95 && acc["validation"] >= 0.90 && acc["rotated"] >= 0.85 && elapsed <= 1800;
  return {pass, fmt::format("train {:.3f} (>= 0.95), validation {:.3f} (>= 0.90), rotated test mean of 10 draws {:.3f} "
                            "(>= 0.85), {:.0f} s (<= 1800)",
                            acc["train"], acc["validation"], acc["rotated"], elapsed)};
}

// Criteria 6 and 7 share one run of the equivariance experiment.
constexpr std::uint64_t kEquivSeed = 11;

struct EquivRun {
  bool ok = false;
  std::string error;
  std::size_t images = 0;
  fs::path dir;
};

const EquivRun& equiv_run() {
  static const EquivRun run = [] {
    EquivRun r;
    r.dir = work_root() / "equiv";
    fs::remove_all(r.dir);
    r.images = list_images(kCorpus).size();
    const auto log = r.dir / "equiv.log";
    r.ok = run_cli(fmt::format("equiv --seed {} --images '{}' --factors 2,3,4,5,6 --filters 20 --degree 4 "
                               "--dominance-trials 1000 --out '{}'",
                               kEquivSeed, kCorpus, (r.dir / "out").string()),
                   log) == 0;
    if (!r.ok) r.error = tail_of(log);
    return r;
  }();
  return run;
}

Outcome gap_experiment() {
  const auto& run = equiv_run();
  if (!run.ok) return {false, "equiv failed: " + run.error};
  std::map<std::string, std::string> summary;
  for (const auto& row : read_csv(run.dir / "out" / "equiv_summary.csv")) summary[row.at("metric")] = row.at("value");
  // Corpus mean per (t, family), averaged over transform parameters.
  std::map<std::pair<int, std::string>, std::pair<double, int>> means;
  for (const auto& row : read_csv(run.dir / "out" / "gap.csv")) {
    auto& m = means[{std::stoi(row.at("t")), row.at("transform_family")}];
    m.first += std::stod(row.at("mean_gap"));
    m.second += 1;
  }
  std::string curve;
  for (const auto& [key, m] : means) {
    if (key.second == "rotation") curve += fmt::format(" t={}:{:.4g}", key.first, m.first / m.second);
  }
  const bool pass = run.images >= 100 && summary["rotation_monotone"] == "true" &&
                    summary["translation_below_rotation"] == "true";
  return {pass, fmt::format("{} images; rotation gap non-decreasing: {}; translation below rotation at every t: {}; "
                            "rotation mean gap{}",
                            run.images, summary["rotation_monotone"], summary["translation_below_rotation"], curve)};
}

Outcome bound_sanity() {
  const auto& run = equiv_run();
  if (!run.ok) return {false, "equiv failed: " + run.error};
  const auto rows = read_csv(run.dir / "out" / "bound_violations.csv");
  if (rows.size() != 2) return {false, "expected rotation and translation bound rows"};
  bool pass = true;
  std::string detail;
  for (const auto& row : rows) {
    const int trials = std::stoi(row.at("trials"));
    const double rate = std::stod(row.at("violation_rate"));
    pass = pass && trials >= 1000 && rate <= 0.05;
    detail += fmt::format("{}{}: {} of {} trials violated ({:.1f}%), median gap/bound {:.3g}",
                          detail.empty() ? "" : "; ", row.at("family"), row.at("violations"), trials, 100 * rate,
                          std::stod(row.at("median_ratio")));
  }
  // The bound has no budget for the degree-0 term under a sub-pixel shift;
  // the gated trials drop it, and the full-filter rate is reported only.
  DominanceConfig full;
  full.trials = 1000;
  full.size = 32;
  full.seed = SeedSplitter(kEquivSeed).derive("bound-trials");
  full.drop_constant_term = false;
  const auto with_constant = translation_dominance(full);
  detail += fmt::format("; not gated: translation with the degree-0 term kept violates in {:.1f}%",
                        100 * with_constant.violation_rate());
  return {pass, detail};
}

// Each subcommand runs twice with identical flags; every CSV artifact must
// match byte for byte once the timestamped comment lines are dropped.
Outcome determinism() {
  const auto dir = work_root() / "determinism";
  fs::remove_all(dir);
  const std::string data = fmt::format("--mnist-dir '{}'", kMnist);
  const std::string small_arch = "--arch 'SC[2, 2]-DP[100]-S[3]-FC[10]-FC[3]'";
  const auto ckpt_a = (dir / "train_a" / "checkpoint.bin").string();
  const std::vector<std::pair<std::string, std::string>> commands{
      {"train", fmt::format("train {} {} --seed 5 --epochs 2", data, small_arch)},
      {"eval", fmt::format("eval {} --checkpoint '{}' --transform rotation --runs 3", data, ckpt_a)},
      {"gradcheck", "gradcheck --seed 5 --grid 8"},
      {"equiv", fmt::format("equiv --seed 5 --images '{}' --max-images 3 --factors 2,3 --filters 4 "
                            "--dominance-trials 50",
                            kCorpus)},
      {"export", fmt::format("export {} --checkpoint '{}' --lambda-samples 32", data, ckpt_a)},
      {"dataset-build", fmt::format("dataset-build {} --dataset mnist-trans --seed 5 --train-size 200 --val-size 20 "
                                    "--test-size 50",
                                    data)},
  };
  int compared = 0;
  for (const auto& [name, args] : commands) {
    for (const char* run : {"a", "b"}) {
      const auto out = dir / (name + "_" + run);
      const auto log = dir / (name + "_" + run + ".log");
      if (run_cli(args + " --threads 1 --out '" + out.string() + "'", log) != 0) {
        return {false, name + " failed: " + tail_of(log)};
      }
    }
    for (const auto& entry : fs::directory_iterator(dir / (name + "_a"))) {
      if (entry.path().extension() != ".csv") continue;
      const auto other = dir / (name + "_b") / entry.path().filename();
      if (!fs::exists(other) || without_comments(entry.path()) != without_comments(other)) {
        return {false, fmt::format("{} {} differs between runs", name, entry.path().filename().string())};
      }
      ++compared;
    }
  }
  return {compared >= static_cast<int>(commands.size()),
          fmt::format("{} CSV artifacts from {} subcommands identical across runs", compared, commands.size())};
}

Outcome mnist_rot_smoke() {
  const auto dir = work_root() / "mnist_rot";
  fs::remove_all(dir);
  const std::string data =
      fmt::format("--mnist-dir '{}' --dataset mnist-rot --train-size 2000 --val-size 200 --test-size 1000", kMnist);
  if (run_cli(fmt::format("train {} --seed 3 --epochs 80 --lr 3e-3 --out '{}'", data, (dir / "train").string()),
              dir / "train.log") != 0) {
    return {false, "train failed: " + tail_of(dir / "train.log")};
  }
  if (run_cli(fmt::format("eval {} --checkpoint '{}' --split test --transform none --out '{}'", data,
                          (dir / "train" / "checkpoint.bin").string(), (dir / "eval").string()),
              dir / "eval.log") != 0) {
    return {false, "eval failed: " + tail_of(dir / "eval.log")};
  }
  const auto summary = read_csv(dir / "eval" / "eval_summary.csv");
  if (summary.empty()) return {false, "missing eval summary"};
  const double acc = std::stod(summary[0].at("mean_accuracy"));
  return {acc >= 3.0 / 9.0, fmt::format("rotated test accuracy {:.3f} (>= 3 x 1/9 = 0.333)", acc)};
}

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"1", "exact equivariance under grid isometries", exact_equivariance},
      {"2", "vertex-domain filtering matches the spectral oracle", oracle_equivalence},
      {"3", "analytic gradients match finite differences", gradient_correctness},
      {"4", "scaled variance-gradient constant ratio", variance_constant},
      {"5", "MNIST-012 end to end", mnist012_end_to_end},
      {"6", "equivariance-gap trends over downsampling", gap_experiment},
      {"7", "measured gap dominated by the bound", bound_sanity},
      {"8", "determinism of CLI artifacts", determinism},
      {"smoke", "MNIST-rot 2k subsample", mnist_rot_smoke},
  };
  std::set<std::string> selected(argv + 1, argv + argc);
  for (const auto& id : selected) {
    if (std::none_of(criteria.begin(), criteria.end(), [&](const Criterion& c) { return c.id == id; })) {
      fmt::print(stderr, "unknown criterion '{}'\n", id);
      return 2;
    }
  }
  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    fmt::print("{} criterion {} ({}): {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", c.id, c.title, o.detail,
               seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
