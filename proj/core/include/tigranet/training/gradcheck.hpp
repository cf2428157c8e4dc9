#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tigranet/layers/network.hpp"

namespace tigranet {

struct GradcheckConfig {
  double step = 1e-5;
  double tolerance = 1e-5;
  /// Relative error is |a - n| / max(|a|, |n|, floor). Central differences at
  /// step 1e-5 carry about 1e-11 of roundoff per unit loss, so gradients much
  /// below 1e-4 cannot be resolved to 1e-5 relative.
  double floor = 1e-4;
  VarianceGradient variance = VarianceGradient::Exact;
  /// Test hook: perturbs the analytic gradient of this group ("alpha",
  /// "beta" or "fc") so the check must fail.
  std::optional<std::string> corrupt_group;
};

struct GroupCheck {
  std::string group;
  double worst_rel_error = 0.0;
  int checked = 0;
  /// Coordinates skipped because a +-step crosses a |.|, ReLU or pooling kink.
  int masked = 0;
  double tolerance = 0.0;
  bool pass = true;
};

struct GradcheckReport {
  std::vector<GroupCheck> groups;
  bool pass() const;
};

/// Compares analytic gradients of the mean loss over the given samples with
/// central finite differences for every parameter. A coordinate is masked
/// when the discrete forward pattern (pool selections, signs of every
/// Chebyshev term, ReLU activity) differs at theta +- step from theta.
/// The network parameters are restored on return.
GradcheckReport gradient_check(Network& network, std::span<const GraphSignal> images,
                               std::span<const int> labels, const GradcheckConfig& config);

/// Ratio between the scaled variance-path constant and the exact
/// population-variance gradient, per node, for one statistical cache with
/// unit upstream on every variance output. Entries where the exact gradient
/// vanishes are skipped; returns {min ratio, max ratio}.
std::pair<double, double> variance_gradient_ratio(const StatisticalCache& cache);

}  // namespace tigranet
