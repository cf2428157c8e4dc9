#include <map>

#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/datasets/cache.hpp"

namespace tigranet::cli {

namespace {

struct DatasetBuildOptions {
  CommonOptions common;
  DatasetOptions data;
  std::uint64_t seed = 0;
};

// Test shift range used by make_mnist_trans.
constexpr int kMaxShift = 6;

int run_dataset_build(CLI::App* sub, DatasetBuildOptions& o) {
  finish_options(sub, o.common, {"--seed"});
  if (o.data.dataset != "mnist012" && o.data.dataset != "mnist-rot" && o.data.dataset != "mnist-trans") {
    throw UsageError("dataset-build needs mnist012, mnist-rot or mnist-trans, got " + o.data.dataset);
  }
  const auto splits = resolve_dataset(o.data, o.seed);
  const auto dir = prepare_output(sub, o.common);
  const std::string params = fmt::format(
      R"({{"variant":"{}","seed":{},"train_size":{},"validation_size":{},"test_size":{},)"
      R"("rotation":"bilinear, uniform [0, 2pi), zero fill","translation":"integer, uniform [-{}, {}]^2"}})",
      splits.name, o.seed, splits.train.size(), splits.validation.size(), splits.test.size(), kMaxShift,
      kMaxShift);
  const auto path = dir / (splits.name + ".tgds");
  save_dataset(path, splits, o.seed, params);

  auto csv = open_csv(dir / "dataset_summary.csv", "dataset-build", "split,label,count");
  for (const auto* set : {&splits.train, &splits.validation, &splits.test}) {
    std::map<int, int> counts;
    for (const int l : set->labels) ++counts[l];
    for (const auto& [label, n] : counts) csv << fmt::format("{},{},{}\n", to_string(set->split), label, n);
    fmt::print("{:<10} {:>6} images on a {}x{} grid\n", to_string(set->split), set->size(), set->grid->height(),
               set->grid->width());
  }
  fmt::print("wrote {}\n", path.string());
  return 0;
}

}  // namespace

Command add_dataset_build(CLI::App& root) {
  auto* sub = root.add_subcommand("dataset-build", "Build a dataset and write it as a replayable cache file");
  auto o = std::make_shared<DatasetBuildOptions>();
  add_common_options(sub, o->common, "runs/dataset");
  add_dataset_options(sub, o->data);
  sub->add_option("--seed", o->seed, "Master seed (required)");
  return {sub, [sub, o] { return run_dataset_build(sub, *o); }};
}

}  // namespace tigranet::cli
