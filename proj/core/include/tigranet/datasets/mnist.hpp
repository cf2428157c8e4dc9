#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tigranet/datasets/idx.hpp"
#include "tigranet/datasets/labeled_set.hpp"
#include "tigranet/rng.hpp"

namespace tigranet {

/// u8 digit images with labels, as read from IDX files.
struct MnistCollection {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  ///< count * height * width, row-major per image
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const std::uint8_t> image(std::size_t i) const;
};

/// Training and (optional) test collections found in one directory.
struct MnistSource {
  MnistCollection train;
  std::optional<MnistCollection> test;
};

/// Looks for train-images-idx3-ubyte and train-labels-idx1-ubyte (optionally
/// .gz) and the matching t10k files. Throws std::runtime_error naming the
/// missing path when the training files are absent.
MnistSource load_mnist(const std::filesystem::path& dir);

MnistCollection make_collection(const IdxArray& images, const IdxArray& labels);

/// Row-major flatten with u8 -> [0, 1] scaling. Throws DimensionError when
/// the pixel count differs from the grid size.
GraphSignal image_to_signal(std::span<const std::uint8_t> pixels, const GridGraph& grid);

struct DatasetSplits {
  std::string name;
  LabeledSignalSet train;
  LabeledSignalSet validation;
  LabeledSignalSet test;
};

/// 500 / 100 / 100 images with labels 0, 1, 2 drawn without replacement
/// from the training collection; 28x28 8-NN grid, no transforms.
/// Throws std::invalid_argument when the source has too few such images.
DatasetSplits make_mnist012(const MnistCollection& train, std::uint64_t seed);

struct VariantSizes {
  std::size_t train = 50000;
  std::size_t validation = 3000;
  /// 0 means every available test image.
  std::size_t test = 0;
};

/// Digits 0-8 resized to 26x26 (bilinear). Train and validation are
/// untransformed; every test image is rotated by an angle uniform in
/// [0, 2 pi) about its center with zero fill. Without a test collection the
/// test split is drawn from the training pool, disjoint from the other splits.
DatasetSplits make_mnist_rot(const MnistSource& source, std::uint64_t seed, VariantSizes sizes = {});

/// Digits 0-8 zero-padded by 3 px to 34x34; test images are shifted by an
/// integer offset uniform in [-6, 6]^2.
DatasetSplits make_mnist_trans(const MnistSource& source, std::uint64_t seed, VariantSizes sizes = {});

/// Fresh copy with each image rotated by an angle uniform in [0, 2 pi).
LabeledSignalSet rotate_set(const LabeledSignalSet& set, Rng& rng);

/// Fresh copy with each image shifted by an integer offset in [-max_shift, max_shift]^2.
LabeledSignalSet translate_set(const LabeledSignalSet& set, int max_shift, Rng& rng);

}  // namespace tigranet
