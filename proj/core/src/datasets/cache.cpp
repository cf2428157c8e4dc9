#include "tigranet/datasets/cache.hpp"

#include "../container.hpp"
#include "tigranet/errors.hpp"

namespace tigranet {

const char* to_string(Split split) {
  switch (split) {
    case Split::Train:
      return "train";
    case Split::Validation:
      return "validation";
    case Split::Test:
      return "test";
  }
  return "unknown";
}

namespace {

constexpr std::string_view kMagic = "TGNDSET";

void append_split(std::vector<detail::ContainerArray>& arrays, const LabeledSignalSet& set, Index nodes) {
  const std::string prefix = to_string(set.split);
  const auto n = static_cast<std::int64_t>(set.size());

  detail::ContainerArray signals{prefix + ".signals", "f64", {n, static_cast<std::int64_t>(nodes)}, {}, {}};
  signals.f64.reserve(static_cast<std::size_t>(n * nodes));
  for (const auto& s : set.signals) signals.f64.insert(signals.f64.end(), s.data(), s.data() + s.size());

  detail::ContainerArray labels{prefix + ".labels", "u8", {n}, {}, {}};
  for (const int l : set.labels) labels.u8.push_back(static_cast<std::uint8_t>(l));

  detail::ContainerArray sources{prefix + ".source_indices", "f64", {n}, {}, {}};
  for (const auto i : set.source_indices) sources.f64.push_back(static_cast<double>(i));

  detail::ContainerArray transforms{prefix + ".transforms", "f64", {static_cast<std::int64_t>(set.transforms.size()), 3}, {}, {}};
  for (const auto& t : set.transforms) {
    transforms.f64.insert(transforms.f64.end(), {t.rotation, static_cast<double>(t.shift_x), static_cast<double>(t.shift_y)});
  }
  arrays.push_back(std::move(signals));
  arrays.push_back(std::move(labels));
  arrays.push_back(std::move(sources));
  arrays.push_back(std::move(transforms));
}

LabeledSignalSet read_split(const detail::Container& c, Split split, std::shared_ptr<const GridGraph> grid, int classes) {
  const std::string prefix = to_string(split);
  const auto& signals = c.array(prefix + ".signals");
  const auto& labels = c.array(prefix + ".labels");
  const auto& sources = c.array(prefix + ".source_indices");
  const auto& transforms = c.array(prefix + ".transforms");
  const Index nodes = grid->num_nodes();
  if (signals.shape.size() != 2 || signals.shape[1] != nodes) throw FormatError("cached signals do not match the grid");
  const auto n = static_cast<std::size_t>(signals.shape[0]);
  if (labels.u8.size() != n || sources.f64.size() != n) throw FormatError("cached split arrays disagree in length");
  if (!transforms.f64.empty() && transforms.f64.size() != 3 * n) throw FormatError("cached transforms have the wrong size");

  LabeledSignalSet set;
  set.split = split;
  set.grid = std::move(grid);
  set.num_classes = classes;
  for (std::size_t i = 0; i < n; ++i) {
    set.signals.push_back(Eigen::Map<const GraphSignal>(signals.f64.data() + i * static_cast<std::size_t>(nodes), nodes));
    set.labels.push_back(labels.u8[i]);
    set.source_indices.push_back(static_cast<std::int64_t>(sources.f64[i]));
    if (!transforms.f64.empty()) {
      set.transforms.push_back({transforms.f64[3 * i], static_cast<int>(transforms.f64[3 * i + 1]),
                                static_cast<int>(transforms.f64[3 * i + 2])});
    }
  }
  return set;
}

}  // namespace

void save_dataset(const std::filesystem::path& path, const DatasetSplits& splits, std::uint64_t seed,
                  const std::string& generation_params_json) {
  const auto& grid = splits.train.grid;
  if (!grid) throw std::invalid_argument("dataset has no grid");
  nlohmann::json header = {
      {"format", "tigranet-dataset"},
      {"name", splits.name},
      {"seed", seed},
      {"grid", {{"height", grid->height()}, {"width", grid->width()}, {"connectivity", to_string(grid->connectivity())}}},
      {"num_classes", splits.train.num_classes},
      {"generation", generation_params_json.empty() ? nlohmann::json::object()
                                                    : nlohmann::json::parse(generation_params_json)},
  };
  std::vector<detail::ContainerArray> arrays;
  for (const auto* set : {&splits.train, &splits.validation, &splits.test}) append_split(arrays, *set, grid->num_nodes());
  detail::write_container(path, kMagic, kDatasetCacheVersion, std::move(header), arrays);
}

CachedDataset load_dataset(const std::filesystem::path& path) {
  const auto c = detail::read_container(path, kMagic);
  if (c.version != kDatasetCacheVersion) {
    throw FormatError(path.string() + ": unsupported dataset cache version " + std::to_string(c.version));
  }
  try {
    const auto& h = c.header;
    const auto& g = h.at("grid");
    auto grid = std::make_shared<const GridGraph>(g.at("height").get<int>(), g.at("width").get<int>(),
                                                  parse_connectivity(g.at("connectivity").get<std::string>()));
    const int classes = h.at("num_classes").get<int>();
    CachedDataset out;
    out.splits.name = h.at("name").get<std::string>();
    out.splits.train = read_split(c, Split::Train, grid, classes);
    out.splits.validation = read_split(c, Split::Validation, grid, classes);
    out.splits.test = read_split(c, Split::Test, grid, classes);
    out.seed = h.at("seed").get<std::uint64_t>();
    out.generation_params_json = h.at("generation").dump();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad dataset header: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace tigranet
