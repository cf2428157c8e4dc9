#include "tigranet/datasets/mnist.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "tigranet/datasets/idx.hpp"
#include "tigranet/errors.hpp"
#include "tigranet/imaging/resample.hpp"

namespace tigranet {

std::span<const std::uint8_t> MnistCollection::image(std::size_t i) const {
  const std::size_t n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  return {pixels.data() + i * n, n};
}

MnistCollection make_collection(const IdxArray& images, const IdxArray& labels) {
  if (images.dims.size() != 3) throw FormatError("image IDX must be 3-dimensional");
  if (labels.dims.size() != 1) throw FormatError("label IDX must be 1-dimensional");
  if (images.dims[0] != labels.dims[0]) throw FormatError("image and label counts differ");
  MnistCollection c;
  c.height = static_cast<int>(images.dims[1]);
  c.width = static_cast<int>(images.dims[2]);
  c.pixels = images.data;
  c.labels.assign(labels.data.begin(), labels.data.end());
  return c;
}

namespace {

std::optional<std::filesystem::path> find_file(const std::filesystem::path& dir, const std::string& stem) {
  for (const auto& candidate : {dir / stem, dir / (stem + ".gz")}) {
    if (std::filesystem::is_regular_file(candidate)) return candidate;
  }
  return std::nullopt;
}

std::optional<MnistCollection> load_pair(const std::filesystem::path& dir, const std::string& prefix, bool required) {
  const auto images = find_file(dir, prefix + "-images-idx3-ubyte");
  const auto labels = find_file(dir, prefix + "-labels-idx1-ubyte");
  if (!images || !labels) {
    if (!required) return std::nullopt;
    const auto missing = dir / (prefix + (images ? "-labels-idx1-ubyte[.gz]" : "-images-idx3-ubyte[.gz]"));
    throw std::runtime_error("MNIST file not found: " + missing.string());
  }
  return make_collection(read_idx_file(*images), read_idx_file(*labels));
}

LabeledSignalSet empty_set(Split split, std::shared_ptr<const GridGraph> grid, int classes) {
  LabeledSignalSet s;
  s.split = split;
  s.grid = std::move(grid);
  s.num_classes = classes;
  return s;
}

/// Indices of `c` whose label is in [0, classes), shuffled by rng.
std::vector<std::size_t> shuffled_pool(const MnistCollection& c, int classes, Rng& rng) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c.labels[i] >= 0 && c.labels[i] < classes) pool.push_back(i);
  }
  rng.shuffle(pool);
  return pool;
}

GrayImage to_image(const MnistCollection& c, std::size_t i) {
  return GrayImage::from_u8(c.image(i).data(), c.height, c.width);
}

}  // namespace

MnistSource load_mnist(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("MNIST directory not found: " + dir.string());
  MnistSource source;
  source.train = *load_pair(dir, "train", true);
  source.test = load_pair(dir, "t10k", false);
  return source;
}

GraphSignal image_to_signal(std::span<const std::uint8_t> pixels, const GridGraph& grid) {
  if (static_cast<Index>(pixels.size()) != grid.num_nodes()) {
    throw DimensionError(fmt::format("image has {} pixels but the grid has {} nodes", pixels.size(), grid.num_nodes()));
  }
  GraphSignal y(grid.num_nodes());
  for (Index i = 0; i < y.size(); ++i) y[i] = pixels[static_cast<std::size_t>(i)] / 255.0;
  return y;
}

DatasetSplits make_mnist012(const MnistCollection& train, std::uint64_t seed) {
  constexpr std::size_t kSizes[] = {500, 100, 100};
  Rng rng = SeedSplitter(seed).stream("dataset");
  const auto pool = shuffled_pool(train, 3, rng);
  if (pool.size() < 700) {
    throw std::invalid_argument(fmt::format("MNIST-012 needs 700 images labelled 0-2, source has {}", pool.size()));
  }
  auto grid = std::make_shared<const GridGraph>(train.height, train.width, Connectivity::EightNN);
  DatasetSplits out{"mnist012", empty_set(Split::Train, grid, 3), empty_set(Split::Validation, grid, 3),
                    empty_set(Split::Test, grid, 3)};
  LabeledSignalSet* sets[] = {&out.train, &out.validation, &out.test};
  std::size_t pos = 0;
  for (int s = 0; s < 3; ++s) {
    for (std::size_t k = 0; k < kSizes[s]; ++k, ++pos) {
      const std::size_t idx = pool[pos];
      sets[s]->signals.push_back(image_to_signal(train.image(idx), *grid));
      sets[s]->labels.push_back(train.labels[idx]);
      sets[s]->source_indices.push_back(static_cast<std::int64_t>(idx));
    }
  }
  return out;
}

namespace {

enum class Variant { Rot, Trans };

DatasetSplits make_variant(const MnistSource& source, std::uint64_t seed, VariantSizes sizes, Variant variant) {
  constexpr int kClasses = 9;
  const SeedSplitter seeds(seed);
  Rng pick = seeds.stream("dataset");
  Rng transforms = seeds.stream("dataset-transforms");
  const auto pool = shuffled_pool(source.train, kClasses, pick);

  std::vector<std::size_t> test_pool;
  const MnistCollection* test_source = &source.train;
  std::size_t needed = sizes.train + sizes.validation;
  if (source.test) {
    test_source = &*source.test;
    test_pool = shuffled_pool(*source.test, kClasses, pick);
    if (sizes.test == 0 || sizes.test > test_pool.size()) sizes.test = test_pool.size();
    test_pool.resize(sizes.test);
    std::sort(test_pool.begin(), test_pool.end());
  } else {
    if (sizes.test == 0) sizes.test = pool.size() > needed ? pool.size() - needed : 0;
    needed += sizes.test;
  }
  if (pool.size() < needed || sizes.test == 0) {
    throw std::invalid_argument(fmt::format("source has {} usable images, the requested splits need {}", pool.size(),
                                            needed + (sizes.test == 0 ? 1 : 0)));
  }
  if (!source.test) {
    test_pool.assign(pool.begin() + static_cast<std::ptrdiff_t>(sizes.train + sizes.validation),
                     pool.begin() + static_cast<std::ptrdiff_t>(needed));
  }

  const int side = variant == Variant::Rot ? 26 : source.train.height + 6;
  auto grid = std::make_shared<const GridGraph>(side, side, Connectivity::EightNN);
  DatasetSplits out{variant == Variant::Rot ? "mnist-rot" : "mnist-trans",
                    empty_set(Split::Train, grid, kClasses), empty_set(Split::Validation, grid, kClasses),
                    empty_set(Split::Test, grid, kClasses)};

  const auto prepare = [&](const MnistCollection& c, std::size_t idx) {
    const GrayImage img = to_image(c, idx);
    return variant == Variant::Rot ? resize_bilinear(img, side, side) : pad_image(img, 3);
  };
  const auto append = [&](LabeledSignalSet& set, const MnistCollection& c, std::size_t idx, const GrayImage& img) {
    set.signals.push_back(img.to_signal());
    set.labels.push_back(c.labels[idx]);
    set.source_indices.push_back(static_cast<std::int64_t>(idx));
  };

  for (std::size_t k = 0; k < sizes.train; ++k) append(out.train, source.train, pool[k], prepare(source.train, pool[k]));
  for (std::size_t k = 0; k < sizes.validation; ++k) {
    const std::size_t idx = pool[sizes.train + k];
    append(out.validation, source.train, idx, prepare(source.train, idx));
  }
  for (const std::size_t idx : test_pool) {
    const GrayImage base = prepare(*test_source, idx);
    SampleTransform t;
    GrayImage moved;
    if (variant == Variant::Rot) {
      t.rotation = transforms.uniform(0.0, 2.0 * std::numbers::pi);
      moved = rotate_bilinear(base, t.rotation);
    } else {
      t.shift_x = static_cast<int>(transforms.uniform_int(-6, 6));
      t.shift_y = static_cast<int>(transforms.uniform_int(-6, 6));
      moved = translate_integer(base, t.shift_x, t.shift_y);
    }
    append(out.test, *test_source, idx, moved);
    out.test.transforms.push_back(t);
  }
  return out;
}

}  // namespace

DatasetSplits make_mnist_rot(const MnistSource& source, std::uint64_t seed, VariantSizes sizes) {
  return make_variant(source, seed, sizes, Variant::Rot);
}

DatasetSplits make_mnist_trans(const MnistSource& source, std::uint64_t seed, VariantSizes sizes) {
  return make_variant(source, seed, sizes, Variant::Trans);
}

LabeledSignalSet rotate_set(const LabeledSignalSet& set, Rng& rng) {
  if (!set.grid) throw std::invalid_argument("set has no grid");
  LabeledSignalSet out = set;
  out.transforms.assign(set.size(), {});
  const int h = set.grid->height();
  const int w = set.grid->width();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double gamma = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.signals[i] = rotate_bilinear(GrayImage::from_signal(set.signals[i], h, w), gamma).to_signal();
    out.transforms[i].rotation = gamma;
  }
  return out;
}

LabeledSignalSet translate_set(const LabeledSignalSet& set, int max_shift, Rng& rng) {
  if (!set.grid) throw std::invalid_argument("set has no grid");
  if (max_shift < 0) throw std::invalid_argument("max_shift must be >= 0");
  LabeledSignalSet out = set;
  out.transforms.assign(set.size(), {});
  const int h = set.grid->height();
  const int w = set.grid->width();
  for (std::size_t i = 0; i < set.size(); ++i) {
    auto& t = out.transforms[i];
    t.shift_x = static_cast<int>(rng.uniform_int(-max_shift, max_shift));
    t.shift_y = static_cast<int>(rng.uniform_int(-max_shift, max_shift));
    out.signals[i] = translate_integer(GrayImage::from_signal(set.signals[i], h, w), t.shift_x, t.shift_y).to_signal();
  }
  return out;
}

}  // namespace tigranet
