#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tigranet {

/// One SC[K, M] block with its optional trailing DP[J].
struct ConvBlockSpec {
  int filters = 0;
  int degree = 0;
  std::optional<int> pool_budget;

  bool operator==(const ConvBlockSpec&) const = default;
};

/// Network layout in the "SC[K, M]-DP[J]-...-S[Kmax]-FC[H]-..." notation.
/// Grammar: one or more SC blocks (each optionally followed by one DP), then
/// exactly one S, then one or more FC. The last FC width is the class count.
struct Architecture {
  std::vector<ConvBlockSpec> conv;
  int max_order = 0;
  std::vector<int> dense;

  int num_classes() const { return dense.back(); }
  int max_degree() const;
  /// Canonical text, e.g. "SC[3, 3]-DP[300]-S[10]-FC[10]".
  std::string to_string() const;

  bool operator==(const Architecture&) const = default;
};

/// Whitespace inside brackets is ignored. Throws std::invalid_argument with
/// the offending token on malformed input.
Architecture parse_architecture(std::string_view text);

}  // namespace tigranet
