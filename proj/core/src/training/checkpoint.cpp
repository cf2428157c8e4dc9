#include "tigranet/training/checkpoint.hpp"

#include "../container.hpp"
#include "tigranet/errors.hpp"
#include "tigranet/layers/architecture.hpp"

namespace tigranet {

namespace {

constexpr std::string_view kMagic = "TGNCKPT";

detail::ContainerArray f64_array(std::string name, const double* data, Index size) {
  detail::ContainerArray a;
  a.name = std::move(name);
  a.dtype = "f64";
  a.shape = {static_cast<std::int64_t>(size)};
  a.f64.assign(data, data + size);
  return a;
}

void copy_into(const detail::ContainerArray& a, double* data, Index size) {
  if (a.dtype != "f64" || static_cast<Index>(a.f64.size()) != size) {
    throw FormatError("checkpoint array '" + a.name + "' has the wrong size");
  }
  std::copy(a.f64.begin(), a.f64.end(), data);
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Network& network,
                     const AdamState* adam, std::uint64_t seed, int epoch) {
  const auto& g = network.graph();
  nlohmann::json header = {
      {"format", "tigranet-checkpoint"},
      {"architecture", network.architecture().to_string()},
      {"grid", {{"height", g.height()}, {"width", g.width()}, {"connectivity", to_string(g.connectivity())}}},
      {"seed", seed},
      {"epoch", epoch},
  };
  std::vector<detail::ContainerArray> arrays;
  for (const auto& v : network.parameters()) arrays.push_back(f64_array(v.name, v.data, v.size));
  if (adam) {
    header["adam"] = {{"learning_rate", adam->config.learning_rate},
                      {"decay1", adam->config.decay1},
                      {"decay2", adam->config.decay2},
                      {"epsilon", adam->config.epsilon},
                      {"step", adam->step},
                      {"has_moments", !adam->first_moment.empty()}};
    const auto views = network.parameters();
    for (std::size_t b = 0; b < adam->first_moment.size(); ++b) {
      arrays.push_back(f64_array("adam.m." + views[b].name, adam->first_moment[b].data(),
                                 adam->first_moment[b].size()));
      arrays.push_back(f64_array("adam.v." + views[b].name, adam->second_moment[b].data(),
                                 adam->second_moment[b].size()));
    }
  }
  detail::write_container(path, kMagic, kCheckpointVersion, std::move(header), arrays);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  const auto c = detail::read_container(path, kMagic);
  if (c.version != kCheckpointVersion) {
    throw FormatError(path.string() + ": unsupported checkpoint version " + std::to_string(c.version));
  }
  try {
    const auto& h = c.header;
    const auto& grid = h.at("grid");
    Network network(parse_architecture(h.at("architecture").get<std::string>()),
                    GridGraph(grid.at("height").get<int>(), grid.at("width").get<int>(),
                              parse_connectivity(grid.at("connectivity").get<std::string>())));
    for (const auto& v : network.parameters()) copy_into(c.array(v.name), v.data, v.size);

    std::optional<AdamState> adam;
    if (h.contains("adam")) {
      const auto& a = h.at("adam");
      AdamState state(AdamConfig{a.at("learning_rate").get<double>(), a.at("decay1").get<double>(),
                                 a.at("decay2").get<double>(), a.at("epsilon").get<double>()});
      state.step = a.at("step").get<std::int64_t>();
      if (a.at("has_moments").get<bool>()) {
        for (const auto& v : network.parameters()) {
          Eigen::VectorXd m(v.size), s(v.size);
          copy_into(c.array("adam.m." + v.name), m.data(), v.size);
          copy_into(c.array("adam.v." + v.name), s.data(), v.size);
          state.first_moment.push_back(std::move(m));
          state.second_moment.push_back(std::move(s));
        }
      }
      adam = std::move(state);
    }
    return Checkpoint{std::move(network), std::move(adam), h.at("seed").get<std::uint64_t>(),
                      h.at("epoch").get<int>()};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad checkpoint header: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace tigranet
