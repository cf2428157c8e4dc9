#include "tigranet/training/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tigranet/errors.hpp"
#include "tigranet/layers/softmax.hpp"
#include "tigranet/training/backprop.hpp"

namespace tigranet {

namespace {

/// Discrete state of a forward pass; the loss is smooth while it is fixed.
std::vector<std::int64_t> forward_signature(const ForwardCache& cache) {
  std::vector<std::int64_t> sig;
  for (const auto& pool : cache.pools) {
    if (!pool) continue;
    for (const auto& nodes : pool->per_filter_nodes) {
      sig.push_back(-1);
      sig.insert(sig.end(), nodes.begin(), nodes.end());
    }
  }
  for (const auto& per_map : cache.stats.chebyshev) {
    for (const auto& t : per_map) {
      for (Index v = 0; v < t.size(); ++v) sig.push_back(t[v] > 0.0 ? 1 : (t[v] < 0.0 ? 2 : 0));
    }
  }
  for (std::size_t j = 0; j + 1 < cache.pre_activations.size(); ++j) {
    const auto& pre = cache.pre_activations[j];
    for (Index r = 0; r < pre.size(); ++r) sig.push_back(pre[r] > 0.0 ? 3 : 4);
  }
  return sig;
}

struct Probe {
  double loss = 0.0;
  std::vector<std::int64_t> signature;
};

Probe probe(const Network& network, std::span<const GraphSignal> images, std::span<const int> labels) {
  Probe p;
  for (std::size_t s = 0; s < images.size(); ++s) {
    const auto cache = network.forward(images[s]);
    p.loss += softmax_nll(cache.logits, labels[s]).loss;
    auto sig = forward_signature(cache);
    p.signature.insert(p.signature.end(), sig.begin(), sig.end());
  }
  p.loss /= static_cast<double>(images.size());
  return p;
}

}  // namespace

bool GradcheckReport::pass() const {
  return std::all_of(groups.begin(), groups.end(), [](const GroupCheck& g) { return g.pass; });
}

GradcheckReport gradient_check(Network& network, std::span<const GraphSignal> images,
                               std::span<const int> labels, const GradcheckConfig& config) {
  if (images.empty() || images.size() != labels.size()) {
    throw DimensionError("gradient check needs matching, nonempty images and labels");
  }
  auto analytic = NetworkGradients::zeros_like(network);
  for (std::size_t s = 0; s < images.size(); ++s) {
    analytic += network_backward(network, images[s], labels[s], config.variance).gradients;
  }
  analytic *= 1.0 / static_cast<double>(images.size());

  GradcheckReport report;
  for (const char* name : {"alpha", "beta", "fc"}) {
    report.groups.push_back({name, 0.0, 0, 0, config.tolerance, true});
  }
  auto group_of = [&](const std::string& name) -> GroupCheck& {
    for (auto& g : report.groups) {
      if (g.group == name) return g;
    }
    throw std::logic_error("unknown parameter group " + name);
  };

  const auto base = probe(network, images, labels);
  auto params = network.parameters();
  auto grads = analytic.views();
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto& group = group_of(params[b].group);
    const bool corrupt = config.corrupt_group && *config.corrupt_group == params[b].group;
    for (Index i = 0; i < params[b].size; ++i) {
      double& theta = params[b].data[i];
      const double saved = theta;
      theta = saved + config.step;
      const auto plus = probe(network, images, labels);
      theta = saved - config.step;
      const auto minus = probe(network, images, labels);
      theta = saved;
      if (plus.signature != base.signature || minus.signature != base.signature) {
        ++group.masked;
        continue;
      }
      const double numeric = (plus.loss - minus.loss) / (2.0 * config.step);
      double a = grads[b].data[i];
      if (corrupt) a = a * 1.01 + 1e-3;
      const double denom = std::max({std::abs(a), std::abs(numeric), config.floor});
      const double rel = std::abs(a - numeric) / denom;
      group.worst_rel_error = std::max(group.worst_rel_error, rel);
      ++group.checked;
    }
  }
  for (auto& g : report.groups) g.pass = g.checked > 0 && g.worst_rel_error <= g.tolerance;
  return report;
}

std::pair<double, double> variance_gradient_ratio(const StatisticalCache& cache) {
  Eigen::MatrixXd d_phi = Eigen::MatrixXd::Zero(cache.stats.phi.rows(), cache.stats.phi.cols());
  for (Index c = 1; c < d_phi.cols(); c += 2) d_phi.col(c).setOnes();
  const auto exact = statistical_output_gradients(cache, d_phi, VarianceGradient::Exact);
  const auto scaled = statistical_output_gradients(cache, d_phi, VarianceGradient::Scaled);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    for (std::size_t k = 0; k < exact[i].size(); ++k) {
      for (Index v = 0; v < exact[i][k].size(); ++v) {
        if (exact[i][k][v] == 0.0) continue;
        const double r = scaled[i][k][v] / exact[i][k][v];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
  }
  return {lo, hi};
}

}  // namespace tigranet
