#include "common.hpp"

#include <chrono>
#include <cstdlib>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "tigranet/datasets/cache.hpp"
#include "tigranet/errors.hpp"
#include "tigranet/rng.hpp"

namespace fs = std::filesystem;

namespace tigranet::cli {

void add_common_options(CLI::App* sub, CommonOptions& opts, const std::string& default_out) {
  opts.out = default_out;
  sub->add_option("--config", opts.config, "Flat key=value file of option defaults");
  sub->add_option("--out", opts.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", opts.threads, "Worker threads; 1 is bit-reproducible")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void apply_config_file(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw UsageError("malformed config file " + path + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "config" || item.name == "++" || item.name == "--") continue;
    auto* opt = sub->get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw UsageError(fmt::format("{}: unknown key '{}'", path, item.name));
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError(fmt::format("{}: bad value for '{}': {}", path, item.name, e.what()));
    }
  }
}

void finish_options(CLI::App* sub, const CommonOptions& opts, std::initializer_list<const char*> required) {
  if (!opts.config.empty()) apply_config_file(sub, opts.config);
  for (const char* name : required) {
    const auto* opt = sub->get_option(name);
    if (opt->count() == 0) throw UsageError(fmt::format("{} is required (flag or config key)", name));
  }
}

fs::path prepare_output(CLI::App* sub, const CommonOptions& opts) {
  const fs::path dir(opts.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory " + dir.string());
  std::ofstream cfg(dir / "effective_config.ini");
  cfg << sub->config_to_str(true, false);
  return dir;
}

std::string header_line(const std::string& command) {
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("# tigranet {} generated_at={:%Y-%m-%dT%H:%M:%SZ}", command, now);
}

std::ofstream open_csv(const fs::path& path, const std::string& command, const std::string& columns) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header_line(command) << '\n' << columns << '\n';
  return out;
}

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

Connectivity connectivity_option(const std::string& text) {
  try {
    return parse_connectivity(text);
  } catch (const std::exception&) {
    throw UsageError("unknown connectivity '" + text + "' (use 4nn or 8nn)");
  }
}

void add_dataset_options(CLI::App* sub, DatasetOptions& opts) {
  sub->add_option("--dataset", opts.dataset, "mnist012, mnist-rot, mnist-trans or a dataset cache file")
      ->capture_default_str();
  sub->add_option("--mnist-dir", opts.mnist_dir, "Directory with MNIST IDX files (default $TIGRANET_DATA)");
  sub->add_option("--train-size", opts.train_size, "mnist-rot/mnist-trans training images")->capture_default_str();
  sub->add_option("--val-size", opts.val_size, "mnist-rot/mnist-trans validation images")->capture_default_str();
  sub->add_option("--test-size", opts.test_size, "mnist-rot/mnist-trans test images (0 = all)")
      ->capture_default_str();
}

fs::path mnist_directory(const DatasetOptions& opts) {
  if (!opts.mnist_dir.empty()) return opts.mnist_dir;
  if (const char* env = std::getenv("TIGRANET_DATA"); env != nullptr && *env != '\0') return env;
  return fs::path(TIGRANET_DEFAULT_DATA_DIR) / "mnist-5k";
}

DatasetSplits resolve_dataset(const DatasetOptions& opts, std::uint64_t seed) {
  const bool builtin = opts.dataset == "mnist012" || opts.dataset == "mnist-rot" || opts.dataset == "mnist-trans";
  if (!builtin) {
    if (!fs::is_regular_file(opts.dataset)) throw UsageError("dataset not found: " + opts.dataset);
    return load_dataset(opts.dataset).splits;
  }
  const auto dir = mnist_directory(opts);
  if (!fs::is_directory(dir)) throw UsageError("MNIST directory not found: " + dir.string());
  MnistSource source;
  try {
    source = load_mnist(dir);
  } catch (const FormatError&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw UsageError(e.what());
  }
  const auto dataset_seed = SeedSplitter(seed).derive("dataset");
  if (opts.dataset == "mnist012") return make_mnist012(source.train, dataset_seed);
  const VariantSizes sizes{opts.train_size, opts.val_size, opts.test_size};
  return opts.dataset == "mnist-rot" ? make_mnist_rot(source, dataset_seed, sizes)
                                     : make_mnist_trans(source, dataset_seed, sizes);
}

const LabeledSignalSet& select_split(const DatasetSplits& splits, const std::string& split) {
  if (split == "train") return splits.train;
  if (split == "validation") return splits.validation;
  if (split == "test") return splits.test;
  throw UsageError("unknown split '" + split + "' (use train, validation or test)");
}

}  // namespace tigranet::cli
