#include <fmt/format.h>

#include "common.hpp"
#include "tigranet/equivariance/transform.hpp"
#include "tigranet/errors.hpp"
#include "tigranet/imaging/image.hpp"
#include "tigranet/spectral_oracle.hpp"
#include "tigranet/training/checkpoint.hpp"

namespace tigranet::cli {

namespace {

struct ExportOptions {
  CommonOptions common;
  DatasetOptions data;
  std::string checkpoint;
  int lambda_samples = 256;
  std::string image;
  std::string split = "test";
  std::size_t index = 0;
  int quarter_turns = 0;
  int layer = -1;
  bool skip_maps = false;
};

GraphSignal input_signal(const ExportOptions& o, const Checkpoint& ckpt) {
  const auto& g = ckpt.network.graph();
  if (!o.image.empty()) {
    if (!std::filesystem::is_regular_file(o.image)) throw UsageError("image not found: " + o.image);
    const auto img = read_image(o.image);
    if (img.height != g.height() || img.width != g.width()) {
      throw DimensionError(fmt::format("image is {}x{} but the network grid is {}x{}", img.height, img.width,
                                       g.height(), g.width()));
    }
    return img.to_signal();
  }
  const auto splits = resolve_dataset(o.data, ckpt.seed);
  const auto& set = select_split(splits, o.split);
  if (o.index >= set.size()) throw UsageError(fmt::format("index {} out of range for {} images", o.index, set.size()));
  if (set.grid->num_nodes() != g.num_nodes()) throw DimensionError("dataset grid does not match the checkpoint");
  return set.signals[o.index];
}

int run_export(CLI::App* sub, ExportOptions& o) {
  finish_options(sub, o.common, {"--checkpoint"});
  if (!std::filesystem::is_regular_file(o.checkpoint)) throw UsageError("checkpoint not found: " + o.checkpoint);
  const auto ckpt = load_checkpoint(o.checkpoint);
  const auto& net = ckpt.network;
  const int layers = static_cast<int>(net.conv.size());
  if (o.layer < -1 || o.layer >= layers) {
    throw UsageError(fmt::format("layer {} out of range (network has {} conv layers)", o.layer, layers));
  }
  const auto dir = prepare_output(sub, o.common);

  auto filters = open_csv(dir / "filters.csv", "export", "layer,filter,lambda,response");
  for (int l = 0; l < layers; ++l) {
    if (o.layer >= 0 && l != o.layer) continue;
    const auto& alpha = net.conv[static_cast<std::size_t>(l)].alpha;
    for (Index i = 0; i < alpha.rows(); ++i) {
      const Eigen::VectorXd row = alpha.row(i);
      const std::span<const double> coeffs(row.data(), static_cast<std::size_t>(row.size()));
      for (const auto& [lambda, h] : sample_filter_response(coeffs, o.lambda_samples)) {
        filters << fmt::format("{},{},{},{}\n", l, i, format_double(lambda), format_double(h));
      }
    }
  }
  if (o.skip_maps) return 0;

  const auto& g = net.graph();
  GraphSignal y = input_signal(o, ckpt);
  if (o.quarter_turns % 4 != 0) {
    y = apply_graph_isometry(y, g.height(), g.width(), TransformSpec::rotation(o.quarter_turns * M_PI / 2));
  }
  write_pgm(dir / "input.pgm", GrayImage::from_signal(y, g.height(), g.width()));
  const auto cache = net.forward(y);
  auto maps_csv = open_csv(dir / "feature_maps.csv", "export", "layer,map,row,col,value");
  for (int l = 0; l < layers; ++l) {
    if (o.layer >= 0 && l != o.layer) continue;
    const auto& maps = l + 1 < layers ? cache.conv_inputs[static_cast<std::size_t>(l) + 1] : cache.final_maps;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      const auto& z = maps[i];
      const double lo = z.minCoeff();
      const double hi = z.maxCoeff();
      write_pgm(dir / fmt::format("layer{}_map{}.pgm", l, i), GrayImage::from_signal(z, g.height(), g.width()), lo,
                hi);
      for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
          maps_csv << fmt::format("{},{},{},{},{}\n", l, i, r, c, format_double(z[g.node(r, c)]));
        }
      }
    }
  }
  fmt::print("exported {} conv layer(s) to {}\n", o.layer >= 0 ? 1 : layers, dir.string());
  return 0;
}

}  // namespace

Command add_export(CLI::App& root) {
  auto* sub = root.add_subcommand("export", "Export filter responses and feature maps from a checkpoint");
  auto o = std::make_shared<ExportOptions>();
  add_common_options(sub, o->common, "runs/export");
  add_dataset_options(sub, o->data);
  sub->add_option("--checkpoint", o->checkpoint, "Checkpoint file (required)");
  sub->add_option("--lambda-samples", o->lambda_samples, "Points on [0, 2] per filter curve")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  sub->add_option("--image", o->image, "Input image (.png/.pgm); default: a dataset sample");
  sub->add_option("--split", o->split, "Dataset split for the input sample")->capture_default_str();
  sub->add_option("--index", o->index, "Sample index within the split")->capture_default_str();
  sub->add_option("--quarter-turns", o->quarter_turns, "Rotate the input by k * 90 degrees first")
      ->capture_default_str();
  sub->add_option("--layer", o->layer, "Conv layer to export (-1 = all)")->capture_default_str();
  sub->add_flag("--no-maps", o->skip_maps, "Only export filter responses");
  return {sub, [sub, o] { return run_export(sub, *o); }};
}

}  // namespace tigranet::cli
