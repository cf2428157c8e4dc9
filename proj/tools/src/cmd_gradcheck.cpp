#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/layers/network.hpp"
#include "tigranet/rng.hpp"
#include "tigranet/training/gradcheck.hpp"
#include "tigranet/training/init.hpp"

namespace tigranet::cli {

namespace {

struct GradcheckOptions {
  CommonOptions common;
  std::string arch = "SC[2, 2]-DP[20]-S[4]-FC[8]-FC[3]";
  int grid = 10;
  std::string connectivity = "8nn";
  int samples = 2;
  std::uint64_t seed = 0;
  GradcheckConfig check;
  std::string variance = "exact";
  std::string corrupt_group;
};

int run_gradcheck(CLI::App* sub, GradcheckOptions& o) {
  finish_options(sub, o.common, {"--seed"});
  const auto arch = parse_architecture(o.arch);
  if (o.variance == "scaled") {
    o.check.variance = VarianceGradient::Scaled;
  } else if (o.variance != "exact") {
    throw UsageError("unknown variance gradient '" + o.variance + "' (use exact or scaled)");
  }
  if (!o.corrupt_group.empty()) {
    if (o.corrupt_group != "alpha" && o.corrupt_group != "beta" && o.corrupt_group != "fc") {
      throw UsageError("unknown parameter group '" + o.corrupt_group + "' (use alpha, beta or fc)");
    }
    o.check.corrupt_group = o.corrupt_group;
  }
  const auto dir = prepare_output(sub, o.common);
  const SeedSplitter seeds(o.seed);
  Network net(arch, build_grid_graph(o.grid, o.grid, connectivity_option(o.connectivity)));
  init_network(net, seeds.derive("init"));
  Rng rng = seeds.stream("gradcheck-data");
  SignalList images;
  std::vector<int> labels;
  for (int s = 0; s < o.samples; ++s) {
    GraphSignal y(net.graph().num_nodes());
    for (Index v = 0; v < y.size(); ++v) y[v] = rng.uniform();
    images.push_back(y);
    labels.push_back(static_cast<int>(rng.uniform_int(0, arch.num_classes() - 1)));
  }
  const auto report = gradient_check(net, images, labels, o.check);
  auto csv = open_csv(dir / "gradcheck.csv", "gradcheck", "group,checked,masked,worst_rel_error,tolerance,pass");
  for (const auto& g : report.groups) {
    csv << fmt::format("{},{},{},{},{},{}\n", g.group, g.checked, g.masked, format_double(g.worst_rel_error),
                       format_double(g.tolerance), g.pass ? "true" : "false");
    fmt::print("{:<6} worst relative error {:.3e} over {} coordinates ({} masked): {}\n", g.group,
               g.worst_rel_error, g.checked, g.masked, g.pass ? "pass" : "FAIL");
  }
  if (!report.pass()) {
    for (const auto& g : report.groups) {
      if (!g.pass) fmt::print(stderr, "gradient check failed for group {}\n", g.group);
    }
    return 1;
  }
  return 0;
}

}  // namespace

Command add_gradcheck(CLI::App& root) {
  auto* sub = root.add_subcommand("gradcheck", "Compare analytic gradients with central finite differences");
  auto o = std::make_shared<GradcheckOptions>();
  add_common_options(sub, o->common, "runs/gradcheck");
  sub->add_option("--arch", o->arch, "Architecture string")->capture_default_str();
  sub->add_option("--grid", o->grid, "Grid side length")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--connectivity", o->connectivity, "4nn or 8nn")->capture_default_str();
  sub->add_option("--samples", o->samples, "Random input images")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed (required)");
  sub->add_option("--step", o->check.step, "Finite-difference step")->capture_default_str();
  sub->add_option("--tolerance", o->check.tolerance, "Relative error tolerance")->capture_default_str();
  sub->add_option("--floor", o->check.floor, "Relative error denominator floor")->capture_default_str();
  sub->add_option("--variance-gradient", o->variance, "exact or scaled")->capture_default_str();
  sub->add_option("--corrupt-group", o->corrupt_group, "Test hook: perturb one group's analytic gradient");
  return {sub, [sub, o] { return run_gradcheck(sub, *o); }};
}

}  // namespace tigranet::cli
