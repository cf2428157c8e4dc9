#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "tigranet/datasets/mnist.hpp"
#include "tigranet/grid_graph.hpp"

namespace tigranet::cli {

/// Bad flags, config or input paths; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Command {
  CLI::App* app;
  std::function<int()> run;
};

Command add_train(CLI::App& root);
Command add_eval(CLI::App& root);
Command add_gradcheck(CLI::App& root);
Command add_equiv(CLI::App& root);
Command add_export(CLI::App& root);
Command add_dataset_build(CLI::App& root);

/// Options every subcommand shares.
struct CommonOptions {
  std::string config;
  std::string out;
  int threads = 1;
};

void add_common_options(CLI::App* sub, CommonOptions& opts, const std::string& default_out);

/// Applies a flat key=value file: each key names a long option of `sub`.
/// Values already given on the command line win.
void apply_config_file(CLI::App* sub, const std::string& path);

/// Applies --config if given, then checks that every listed option is set.
void finish_options(CLI::App* sub, const CommonOptions& opts, std::initializer_list<const char*> required);

/// Creates the output directory and writes effective_config.ini into it.
std::filesystem::path prepare_output(CLI::App* sub, const CommonOptions& opts);

/// "# tigranet <command> generated_at=<UTC time>"; excluded from artifact comparisons.
std::string header_line(const std::string& command);

/// Opens a CSV, writes the header line and the column row.
std::ofstream open_csv(const std::filesystem::path& path, const std::string& command, const std::string& columns);

std::string format_double(double value);

Connectivity connectivity_option(const std::string& text);

/// Dataset selection shared by train, eval, export and dataset-build.
struct DatasetOptions {
  /// mnist012, mnist-rot, mnist-trans, or the path of a dataset cache file.
  std::string dataset = "mnist012";
  std::string mnist_dir;
  std::size_t train_size = 50000;
  std::size_t val_size = 3000;
  std::size_t test_size = 0;
};

void add_dataset_options(CLI::App* sub, DatasetOptions& opts);

/// MNIST directory: --mnist-dir, else $TIGRANET_DATA, else the bundled subset.
std::filesystem::path mnist_directory(const DatasetOptions& opts);

/// Builds or loads the dataset. Built datasets draw from the "dataset"
/// stream of `seed`. Missing inputs raise UsageError naming the path.
DatasetSplits resolve_dataset(const DatasetOptions& opts, std::uint64_t seed);

const LabeledSignalSet& select_split(const DatasetSplits& splits, const std::string& split);

}  // namespace tigranet::cli
