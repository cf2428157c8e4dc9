#include <cmath>

#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/errors.hpp"
#include "tigranet/rng.hpp"
#include "tigranet/training/checkpoint.hpp"
#include "tigranet/training/trainer.hpp"

namespace tigranet::cli {

namespace {

struct EvalOptions {
  CommonOptions common;
  DatasetOptions data;
  std::string checkpoint;
  std::string split = "test";
  std::string transform = "rotation";
  int runs = 10;
  int max_shift = 6;
  std::uint64_t seed = 0;
};

int run_eval(CLI::App* sub, EvalOptions& o) {
  finish_options(sub, o.common, {"--checkpoint"});
  if (o.transform != "none" && o.transform != "rotation" && o.transform != "translation") {
    throw UsageError("unknown transform '" + o.transform + "' (use none, rotation or translation)");
  }
  if (!std::filesystem::is_regular_file(o.checkpoint)) throw UsageError("checkpoint not found: " + o.checkpoint);
  const auto ckpt = load_checkpoint(o.checkpoint);
  // The dataset is rebuilt from the training seed unless one is given.
  const std::uint64_t seed = sub->get_option("--seed")->count() > 0 ? o.seed : ckpt.seed;
  const auto splits = resolve_dataset(o.data, seed);
  const auto& base = select_split(splits, o.split);
  const auto& g = ckpt.network.graph();
  if (base.grid->height() != g.height() || base.grid->width() != g.width() ||
      base.grid->connectivity() != g.connectivity()) {
    throw DimensionError(fmt::format("checkpoint grid {}x{} {} does not match dataset grid {}x{} {}", g.height(),
                                     g.width(), to_string(g.connectivity()), base.grid->height(), base.grid->width(),
                                     to_string(base.grid->connectivity())));
  }
  const auto dir = prepare_output(sub, o.common);
  const int runs = o.transform == "none" ? 1 : o.runs;
  Rng rng = SeedSplitter(seed).stream("eval-transforms");

  auto csv = open_csv(dir / "eval_runs.csv", "eval", "run,split,transform,accuracy,loss");
  std::vector<double> acc;
  std::vector<double> loss;
  for (int r = 0; r < runs; ++r) {
    Evaluation ev;
    if (o.transform == "rotation") {
      ev = evaluate(ckpt.network, rotate_set(base, rng), o.common.threads);
    } else if (o.transform == "translation") {
      ev = evaluate(ckpt.network, translate_set(base, o.max_shift, rng), o.common.threads);
    } else {
      ev = evaluate(ckpt.network, base, o.common.threads);
    }
    acc.push_back(ev.accuracy);
    loss.push_back(ev.loss);
    csv << fmt::format("{},{},{},{},{}\n", r, o.split, o.transform, format_double(ev.accuracy),
                       format_double(ev.loss));
    fmt::print("run {:>2}: accuracy {:.4f} loss {:.4f}\n", r, ev.accuracy, ev.loss);
  }
  double mean = 0.0;
  double mean_loss = 0.0;
  for (int r = 0; r < runs; ++r) {
    mean += acc[static_cast<std::size_t>(r)] / runs;
    mean_loss += loss[static_cast<std::size_t>(r)] / runs;
  }
  double var = 0.0;
  for (const double a : acc) var += (a - mean) * (a - mean);
  const double std_dev = runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;
  auto summary = open_csv(dir / "eval_summary.csv", "eval", "split,transform,runs,mean_accuracy,std_accuracy,mean_loss");
  summary << fmt::format("{},{},{},{},{},{}\n", o.split, o.transform, runs, format_double(mean),
                         format_double(std_dev), format_double(mean_loss));
  fmt::print("{} {} accuracy {:.4f} +- {:.4f} over {} run(s)\n", o.split, o.transform, mean, std_dev, runs);
  return 0;
}

}  // namespace

Command add_eval(CLI::App& root) {
  auto* sub = root.add_subcommand("eval", "Evaluate a checkpoint on seeded transformed draws of a split");
  auto o = std::make_shared<EvalOptions>();
  add_common_options(sub, o->common, "runs/eval");
  add_dataset_options(sub, o->data);
  sub->add_option("--checkpoint", o->checkpoint, "Checkpoint file (required)");
  sub->add_option("--split", o->split, "train, validation or test")->capture_default_str();
  sub->add_option("--transform", o->transform, "none, rotation or translation")->capture_default_str();
  sub->add_option("--runs", o->runs, "Transformed draws")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--max-shift", o->max_shift, "Translation range in pixels")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Seed for the dataset and transform draws (default: checkpoint seed)");
  return {sub, [sub, o] { return run_eval(sub, *o); }};
}

}  // namespace tigranet::cli
