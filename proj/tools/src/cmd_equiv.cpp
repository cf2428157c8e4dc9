#include <algorithm>

#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/equivariance/experiment.hpp"
#include "tigranet/imaging/image.hpp"

namespace tigranet::cli {

namespace {

struct EquivOptions {
  CommonOptions common;
  std::string images = std::string(TIGRANET_DEFAULT_DATA_DIR) + "/corpus";
  std::size_t max_images = 0;
  std::vector<int> factors{2, 3, 4, 5, 6};
  int filters = 20;
  int degree = 4;
  std::string family = "all";
  std::string connectivity = "8nn";
  int dominance_trials = 1000;
  int dominance_size = 32;
  std::uint64_t seed = 0;
};

int run_equiv(CLI::App* sub, EquivOptions& o) {
  finish_options(sub, o.common, {"--seed"});
  if (o.family != "all" && o.family != "rotation" && o.family != "translation") {
    throw UsageError("unknown family '" + o.family + "' (use all, rotation or translation)");
  }
  if (!std::filesystem::is_directory(o.images)) throw UsageError("image directory not found: " + o.images);
  auto files = list_images(o.images);
  if (o.max_images > 0 && files.size() > o.max_images) files.resize(o.max_images);
  if (files.empty()) throw UsageError("no .png or .pgm images in " + o.images);
  std::vector<GrayImage> images;
  for (const auto& f : files) images.push_back(read_image(f));

  GapExperimentConfig cfg;
  cfg.factors = o.factors;
  cfg.num_filters = o.filters;
  cfg.degree = o.degree;
  cfg.seed = SeedSplitter(o.seed).derive("gap-filters");
  cfg.connectivity = connectivity_option(o.connectivity);
  cfg.threads = o.common.threads;
  if (o.family != "all") {
    const auto keep = o.family == "rotation" ? TransformFamily::Rotation : TransformFamily::Translation;
    std::erase_if(cfg.transforms, [keep](const GapTransform& t) { return t.family != keep; });
  }
  const auto dir = prepare_output(sub, o.common);
  fmt::print("gap experiment: {} images, factors {}, {} filters of degree {}\n", images.size(),
             fmt::join(o.factors, ","), o.filters, o.degree);
  const auto report = mean_gap_experiment(images, cfg);
  write_gap_csv(dir / "gap.csv", report, header_line("equiv").substr(2));

  auto summary = open_csv(dir / "equiv_summary.csv", "equiv", "metric,value");
  const bool has_rot = o.family != "translation";
  const bool has_tr = o.family != "rotation";
  if (has_rot) {
    summary << "rotation_monotone," << (report.rotation_monotone() ? "true" : "false") << '\n';
    summary << "per_image_monotone_fraction," << format_double(report.per_image_monotone_fraction()) << '\n';
    fmt::print("rotation gap non-decreasing in t: {}\n", report.rotation_monotone());
  }
  if (has_rot && has_tr) {
    summary << "translation_below_rotation," << (report.translation_below_rotation() ? "true" : "false") << '\n';
    fmt::print("translation gap below rotation gap at every t: {}\n", report.translation_below_rotation());
  }
  for (const int t : report.factors) {
    if (has_rot) fmt::print("t={} rotation mean gap {:.5g}\n", t, report.family_mean(TransformFamily::Rotation, t));
    if (has_tr) {
      fmt::print("t={} translation mean gap {:.5g}\n", t, report.family_mean(TransformFamily::Translation, t));
    }
  }

  if (o.dominance_trials > 0) {
    DominanceConfig dcfg;
    dcfg.size = o.dominance_size;
    dcfg.trials = o.dominance_trials;
    dcfg.seed = SeedSplitter(o.seed).derive("bound-trials");
    dcfg.threads = o.common.threads;
    auto bounds = open_csv(dir / "bound_violations.csv", "equiv",
                           "family,trials,violations,violation_rate,max_ratio,median_ratio");
    std::vector<DominanceResult> results;
    if (has_rot) results.push_back(rotation_dominance(dcfg));
    if (has_tr) results.push_back(translation_dominance(dcfg));
    for (const auto& r : results) {
      bounds << fmt::format("{},{},{},{},{},{}\n", to_string(r.family), r.trials, r.violations,
                            format_double(r.violation_rate()), format_double(r.max_ratio),
                            format_double(r.median_ratio));
      fmt::print("{} bound: {} of {} trials violated ({:.1f}%), median gap/bound {:.3f}\n", to_string(r.family),
                 r.violations, r.trials, 100.0 * r.violation_rate(), r.median_ratio);
    }
  }
  return 0;
}

}  // namespace

Command add_equiv(CLI::App& root) {
  auto* sub = root.add_subcommand("equiv", "Equivariance-gap experiment and bound dominance trials");
  auto o = std::make_shared<EquivOptions>();
  add_common_options(sub, o->common, "runs/equiv");
  sub->add_option("--images", o->images, "Directory of grayscale .png/.pgm images")->capture_default_str();
  sub->add_option("--max-images", o->max_images, "Use only the first N images (0 = all)")->capture_default_str();
  sub->add_option("--factors", o->factors, "Downsampling factors")->delimiter(',')->capture_default_str();
  sub->add_option("--filters", o->filters, "Random filters")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--degree", o->degree, "Filter degree")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--family", o->family, "all, rotation or translation")->capture_default_str();
  sub->add_option("--connectivity", o->connectivity, "4nn or 8nn")->capture_default_str();
  sub->add_option("--dominance-trials", o->dominance_trials, "Bound trials per family (0 = skip)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--dominance-size", o->dominance_size, "Synthetic image side for bound trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed (required)");
  return {sub, [sub, o] { return run_equiv(sub, *o); }};
}

}  // namespace tigranet::cli
