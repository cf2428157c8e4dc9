#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/layers/network.hpp"
#include "tigranet/rng.hpp"
#include "tigranet/training/checkpoint.hpp"
#include "tigranet/training/init.hpp"
#include "tigranet/training/trainer.hpp"

namespace tigranet::cli {

namespace {

struct TrainOptions {
  CommonOptions common;
  DatasetOptions data;
  std::string arch = "SC[3, 3]-DP[300]-SC[6, 3]-DP[100]-S[10]-FC[50]-FC[30]-FC[10]";
  std::uint64_t seed = 0;
  int epochs = 100;
  int batch_size = 32;
  AdamConfig adam;
  std::string variance = "exact";
};

VarianceGradient variance_option(const std::string& text) {
  if (text == "exact") return VarianceGradient::Exact;
  if (text == "scaled") return VarianceGradient::Scaled;
  throw UsageError("unknown variance gradient '" + text + "' (use exact or scaled)");
}

int run_train(CLI::App* sub, TrainOptions& o) {
  finish_options(sub, o.common, {"--seed"});
  const auto arch = parse_architecture(o.arch);
  const auto mode = variance_option(o.variance);
  const auto splits = resolve_dataset(o.data, o.seed);
  if (arch.num_classes() < splits.train.num_classes) {
    throw UsageError(fmt::format("architecture has {} outputs but the dataset has {} classes", arch.num_classes(),
                                 splits.train.num_classes));
  }
  const auto dir = prepare_output(sub, o.common);

  Network net(arch, *splits.train.grid);
  init_network(net, SeedSplitter(o.seed).derive("init"));
  TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch_size;
  cfg.adam = o.adam;
  cfg.seed = o.seed;
  cfg.threads = o.common.threads;
  cfg.variance = mode;

  fmt::print("training {} on {} ({} train / {} validation), {} parameters\n", arch.to_string(), splits.name,
             splits.train.size(), splits.validation.size(), net.parameter_count());
  auto log = open_csv(dir / "train_log.csv", "train", "epoch,train_loss,train_acc,val_loss,val_acc");
  const auto result = train(net, splits.train, &splits.validation, cfg, [&](const EpochRecord& r) {
    log << fmt::format("{},{},{},{},{}\n", r.epoch, format_double(r.train_loss), format_double(r.train_acc),
                       format_double(r.val_loss), format_double(r.val_acc));
    log.flush();
    fmt::print("epoch {:>4}  train loss {:.4f} acc {:.4f}  val loss {:.4f} acc {:.4f}\n", r.epoch, r.train_loss,
               r.train_acc, r.val_loss, r.val_acc);
    std::fflush(stdout);
  });
  save_checkpoint(dir / "checkpoint.bin", net, &result.adam, o.seed, result.best_epoch);
  const auto train_eval = evaluate(net, splits.train, o.common.threads);
  const auto val_eval = evaluate(net, splits.validation, o.common.threads);
  fmt::print("best epoch {}: train accuracy {:.4f}, validation accuracy {:.4f}\n", result.best_epoch,
             train_eval.accuracy, val_eval.accuracy);
  fmt::print("wrote {}\n", (dir / "checkpoint.bin").string());
  return 0;
}

}  // namespace

Command add_train(CLI::App& root) {
  auto* sub = root.add_subcommand("train", "Train a network and write a checkpoint and training log");
  auto o = std::make_shared<TrainOptions>();
  add_common_options(sub, o->common, "runs/train");
  add_dataset_options(sub, o->data);
  sub->add_option("--arch", o->arch, "Architecture string")->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed (required)");
  sub->add_option("--epochs", o->epochs, "Epoch budget")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--batch-size", o->batch_size)->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--lr", o->adam.learning_rate, "Adam learning rate")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--beta1", o->adam.decay1)->capture_default_str();
  sub->add_option("--beta2", o->adam.decay2)->capture_default_str();
  sub->add_option("--adam-eps", o->adam.epsilon)->capture_default_str();
  sub->add_option("--variance-gradient", o->variance, "exact or scaled")->capture_default_str();
  return {sub, [sub, o] { return run_train(sub, *o); }};
}

}  // namespace tigranet::cli
