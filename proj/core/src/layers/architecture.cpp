#include "tigranet/layers/architecture.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include <fmt/format.h>

namespace tigranet {

namespace {

std::string strip(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

struct Token {
  std::string kind;
  std::vector<int> args;
};

Token parse_token(const std::string& raw) {
  const auto open = raw.find('[');
  if (open == std::string::npos || raw.back() != ']' || open == 0) {
    throw std::invalid_argument("malformed architecture token '" + raw + "'");
  }
  Token token{raw.substr(0, open), {}};
  std::string_view body(raw.data() + open + 1, raw.size() - open - 2);
  while (true) {
    const auto comma = body.find(',');
    const auto piece = body.substr(0, comma);
    int value = 0;
    const auto [end, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (piece.empty() || ec != std::errc() || end != piece.data() + piece.size()) {
      throw std::invalid_argument("bad number in architecture token '" + raw + "'");
    }
    token.args.push_back(value);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return token;
}

void expect_args(const Token& token, std::size_t count, int minimum, const std::string& raw) {
  if (token.args.size() != count) {
    throw std::invalid_argument(fmt::format("'{}' expects {} argument(s)", raw, count));
  }
  for (const int v : token.args) {
    if (v < minimum) throw std::invalid_argument(fmt::format("'{}' has an out-of-range value", raw));
  }
}

}  // namespace

int Architecture::max_degree() const {
  int m = 0;
  for (const auto& c : conv) m = std::max(m, c.degree);
  return m;
}

std::string Architecture::to_string() const {
  std::string out;
  for (const auto& c : conv) {
    out += fmt::format("SC[{}, {}]-", c.filters, c.degree);
    if (c.pool_budget) out += fmt::format("DP[{}]-", *c.pool_budget);
  }
  out += fmt::format("S[{}]", max_order);
  for (const int h : dense) out += fmt::format("-FC[{}]", h);
  return out;
}

Architecture parse_architecture(std::string_view text) {
  const std::string compact = strip(text);
  if (compact.empty()) throw std::invalid_argument("empty architecture string");

  std::vector<std::string> raws;
  std::size_t start = 0;
  while (true) {
    const auto dash = compact.find('-', start);
    raws.push_back(compact.substr(start, dash == std::string::npos ? std::string::npos : dash - start));
    if (dash == std::string::npos) break;
    start = dash + 1;
  }

  enum class Stage { Conv, Fc } stage = Stage::Conv;
  Architecture arch;
  bool seen_stats = false;
  for (const auto& raw : raws) {
    const Token token = parse_token(raw);
    if (token.kind == "SC") {
      if (stage != Stage::Conv) throw std::invalid_argument("SC after S in '" + compact + "'");
      expect_args(token, 2, 0, raw);
      if (token.args[0] < 1) throw std::invalid_argument("'" + raw + "' needs at least one filter");
      arch.conv.push_back({token.args[0], token.args[1], std::nullopt});
    } else if (token.kind == "DP") {
      if (stage != Stage::Conv || arch.conv.empty() || arch.conv.back().pool_budget) {
        throw std::invalid_argument("DP must directly follow an SC block: '" + raw + "'");
      }
      expect_args(token, 1, 1, raw);
      arch.conv.back().pool_budget = token.args[0];
    } else if (token.kind == "S") {
      if (seen_stats) throw std::invalid_argument("more than one S layer");
      if (arch.conv.empty()) throw std::invalid_argument("S needs at least one SC block before it");
      expect_args(token, 1, 0, raw);
      arch.max_order = token.args[0];
      seen_stats = true;
      stage = Stage::Fc;
    } else if (token.kind == "FC") {
      if (!seen_stats) throw std::invalid_argument("FC before S in '" + compact + "'");
      expect_args(token, 1, 1, raw);
      arch.dense.push_back(token.args[0]);
    } else {
      throw std::invalid_argument("unknown layer type '" + token.kind + "'");
    }
  }
  if (!seen_stats) throw std::invalid_argument("architecture needs an S layer");
  if (arch.dense.empty()) throw std::invalid_argument("architecture needs at least one FC layer");
  return arch;
}

}  // namespace tigranet
