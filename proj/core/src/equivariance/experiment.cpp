#include "tigranet/equivariance/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "tigranet/equivariance/bounds.hpp"
#include "tigranet/equivariance/gap.hpp"
#include "tigranet/imaging/resample.hpp"
#include "tigranet/layers/spectral_conv.hpp"
#include "tigranet/parallel.hpp"
#include "tigranet/rng.hpp"

namespace tigranet {

const char* to_string(TransformFamily family) {
  return family == TransformFamily::Rotation ? "rotation" : "translation";
}

TransformSpec GapTransform::spec() const {
  return family == TransformFamily::Rotation ? TransformSpec::rotation(param) : TransformSpec::translation(param, param);
}

std::vector<GapTransform> default_gap_transforms() {
  constexpr double pi = std::numbers::pi;
  return {{TransformFamily::Rotation, pi / 18},  {TransformFamily::Rotation, pi / 9},
          {TransformFamily::Rotation, pi / 6},   {TransformFamily::Rotation, pi / 4},
          {TransformFamily::Translation, 0.1},   {TransformFamily::Translation, 0.2},
          {TransformFamily::Translation, 0.3},   {TransformFamily::Translation, 0.4}};
}

namespace {

struct Cell {
  double mean_gap = 0.0;
  double max_gap = 0.0;
  double bound = 0.0;
};

std::vector<Index> disk_nodes(const GridGraph& graph, int degree) {
  const double cx = (graph.width() - 1) / 2.0;
  const double cy = (graph.height() - 1) / 2.0;
  const double radius = (std::min(graph.width(), graph.height()) - 1) / 2.0 - (degree + 2) * std::numbers::sqrt2 - 1.0;
  std::vector<Index> out;
  if (radius <= 0.0) return out;
  for (int r = 0; r < graph.height(); ++r) {
    for (int c = 0; c < graph.width(); ++c) {
      if (std::hypot(c - cx, r - cy) <= radius) out.push_back(graph.node(r, c));
    }
  }
  return out;
}

Eigen::MatrixXd random_filters(const GapExperimentConfig& config) {
  Rng rng = SeedSplitter(config.seed).stream("gap-filters");
  Eigen::MatrixXd alpha(config.num_filters, config.degree + 1);
  for (int i = 0; i < config.num_filters; ++i) {
    for (int m = 0; m <= config.degree; ++m) alpha(i, m) = rng.uniform(config.coeff_lo, config.coeff_hi);
  }
  return alpha;
}

}  // namespace

GapReport mean_gap_experiment(const std::vector<GrayImage>& images, const GapExperimentConfig& config) {
  if (images.empty()) throw std::invalid_argument("gap experiment needs at least one image");
  if (config.num_filters < 1 || config.degree < 0 || config.factors.empty() || config.transforms.empty()) {
    throw std::invalid_argument("gap experiment needs filters, factors and transforms");
  }
  const Eigen::MatrixXd alpha = random_filters(config);
  const std::size_t nf = config.factors.size();
  const std::size_t nt = config.transforms.size();
  const auto filters = static_cast<std::size_t>(config.num_filters);

  // cells[(image * nf + factor) * nt * filters + transform * filters + filter]
  std::vector<Cell> cells(images.size() * nf * nt * filters);
  parallel_for(images.size() * nf, config.threads, [&](std::size_t job) {
    const std::size_t img = job / nf;
    const int t = config.factors[job % nf];
    const GrayImage small = downsample_bicubic(images[img], t);
    const GridGraph graph(small.height, small.width, config.connectivity);
    const LaplacianPowers powers(graph, config.degree);
    const auto disk = disk_nodes(graph, config.degree);
    if (disk.empty()) {
      throw std::invalid_argument(fmt::format("image {} is too small at factor {}", img, t));
    }
    const GraphSignal y = small.to_signal();
    std::vector<GraphSignal> filtered;
    for (std::size_t f = 0; f < filters; ++f) {
      const Eigen::VectorXd a = alpha.row(static_cast<Index>(f)).transpose();
      filtered.push_back(apply_polynomial_filter(powers, {a.data(), static_cast<std::size_t>(a.size())}, y));
    }
    for (std::size_t k = 0; k < nt; ++k) {
      const auto& tr = config.transforms[k];
      const TransformSpec spec = tr.spec();
      const TransformSpec back = inverse(spec);
      const GraphSignal moved = apply_general_isometry(y, small.height, small.width, spec);
      for (std::size_t f = 0; f < filters; ++f) {
        const Eigen::VectorXd a = alpha.row(static_cast<Index>(f)).transpose();
        const std::span<const double> coeffs(a.data(), static_cast<std::size_t>(a.size()));
        const GraphSignal response = apply_polynomial_filter(powers, coeffs, moved);
        const GraphSignal restored = apply_general_isometry(response, small.height, small.width, back);
        Cell cell;
        for (const Index v : disk) {
          const double d = std::abs(restored[v] - filtered[f][v]);
          cell.mean_gap += d;
          cell.max_gap = std::max(cell.max_gap, d);
        }
        cell.mean_gap /= static_cast<double>(disk.size());
        cell.bound = tr.family == TransformFamily::Rotation ? rotation_bound(coeffs, small, tr.param)
                                                            : translation_bound(coeffs, small, tr.param, tr.param);
        cells[(job * nt + k) * filters + f] = cell;
      }
    }
  });

  GapReport report;
  report.factors = config.factors;
  for (std::size_t j = 0; j < nf; ++j) {
    for (const auto family : {TransformFamily::Rotation, TransformFamily::Translation}) {
      GapRow all{config.factors[j], family, "all"};
      int all_count = 0;
      int all_violations = 0;
      for (std::size_t k = 0; k < nt; ++k) {
        if (config.transforms[k].family != family) continue;
        GapRow row{config.factors[j], family, fmt::format("{:.6g}", config.transforms[k].param)};
        int violations = 0;
        for (std::size_t img = 0; img < images.size(); ++img) {
          for (std::size_t f = 0; f < filters; ++f) {
            const Cell& c = cells[((img * nf + j) * nt + k) * filters + f];
            row.mean_gap += c.mean_gap;
            row.max_gap = std::max(row.max_gap, c.max_gap);
            row.bound += c.bound;
            violations += c.max_gap > c.bound ? 1 : 0;
          }
        }
        const auto count = static_cast<int>(images.size() * filters);
        all.mean_gap += row.mean_gap;
        all.max_gap = std::max(all.max_gap, row.max_gap);
        all.bound += row.bound;
        all_count += count;
        all_violations += violations;
        row.mean_gap /= count;
        row.bound /= count;
        row.violation_rate = static_cast<double>(violations) / count;
        report.rows.push_back(row);
      }
      if (all_count == 0) continue;
      all.mean_gap /= all_count;
      all.bound /= all_count;
      all.violation_rate = static_cast<double>(all_violations) / all_count;
      report.rows.push_back(all);
    }
  }

  report.per_image_rotation.assign(images.size(), std::vector<double>(nf, 0.0));
  for (std::size_t img = 0; img < images.size(); ++img) {
    for (std::size_t j = 0; j < nf; ++j) {
      double sum = 0.0;
      int count = 0;
      for (std::size_t k = 0; k < nt; ++k) {
        if (config.transforms[k].family != TransformFamily::Rotation) continue;
        for (std::size_t f = 0; f < filters; ++f) {
          sum += cells[((img * nf + j) * nt + k) * filters + f].mean_gap;
          ++count;
        }
      }
      report.per_image_rotation[img][j] = count > 0 ? sum / count : 0.0;
    }
  }
  return report;
}

double GapReport::family_mean(TransformFamily family, int t) const {
  for (const auto& row : rows) {
    if (row.family == family && row.t == t && row.transform_param == "all") return row.mean_gap;
  }
  throw std::out_of_range(fmt::format("no {} rows for factor {}", to_string(family), t));
}

bool GapReport::rotation_monotone() const {
  std::vector<int> sorted = factors;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    if (family_mean(TransformFamily::Rotation, sorted[j]) < family_mean(TransformFamily::Rotation, sorted[j - 1])) {
      return false;
    }
  }
  return true;
}

bool GapReport::translation_below_rotation() const {
  return std::all_of(factors.begin(), factors.end(), [&](int t) {
    return family_mean(TransformFamily::Translation, t) < family_mean(TransformFamily::Rotation, t);
  });
}

double GapReport::per_image_monotone_fraction() const {
  if (per_image_rotation.empty()) return 0.0;
  std::vector<std::size_t> order(factors.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return factors[a] < factors[b]; });
  int monotone = 0;
  for (const auto& gaps : per_image_rotation) {
    bool ok = true;
    for (std::size_t j = 1; j < order.size(); ++j) ok = ok && gaps[order[j]] >= gaps[order[j - 1]];
    monotone += ok ? 1 : 0;
  }
  return static_cast<double>(monotone) / static_cast<double>(per_image_rotation.size());
}

void write_gap_csv(const std::filesystem::path& path, const GapReport& report, const std::string& header_comment) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (!header_comment.empty()) out << "# " << header_comment << '\n';
  out << "t,transform_family,transform_param,mean_gap,max_gap,bound,violation_rate\n";
  for (const auto& r : report.rows) {
    out << fmt::format("{},{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, to_string(r.family), r.transform_param,
                       r.mean_gap, r.max_gap, r.bound, r.violation_rate);
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

namespace {

GrayImage smooth_image(int size, Rng& rng) {
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return gaussian_bumps(size, 1, rng);
    case 1:
      return random_polynomial(size, rng);
    default:
      return gaussian_bumps(size, 3, rng);
  }
}

std::vector<double> random_alpha(int max_degree, Rng& rng) {
  const auto degree = static_cast<int>(rng.uniform_int(1, max_degree));
  std::vector<double> alpha(static_cast<std::size_t>(degree) + 1);
  for (auto& a : alpha) a = rng.uniform(-1.0, 1.0);
  return alpha;
}

DominanceResult summarize(TransformFamily family, const std::vector<double>& ratios) {
  DominanceResult out;
  out.family = family;
  out.trials = static_cast<int>(ratios.size());
  for (const double r : ratios) out.violations += r > 1.0 ? 1 : 0;
  std::vector<double> sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty()) {
    out.max_ratio = sorted.back();
    out.median_ratio = sorted[sorted.size() / 2];
  }
  return out;
}

void check_dominance_config(const DominanceConfig& config) {
  if (config.size < 8 || config.trials < 1 || config.max_degree < 1) {
    throw std::invalid_argument("dominance suite needs size >= 8, trials >= 1, max_degree >= 1");
  }
}

}  // namespace

DominanceResult rotation_dominance(const DominanceConfig& config) {
  check_dominance_config(config);
  const GridGraph graph(config.size, config.size, config.connectivity);
  const LaplacianPowers powers(graph, config.max_degree);
  const SeedSplitter seeds(config.seed);
  constexpr double pi = std::numbers::pi;
  const double angles[] = {pi / 18, pi / 9, pi / 6};
  const int n = config.size;

  std::vector<double> ratios(static_cast<std::size_t>(config.trials));
  parallel_for(ratios.size(), config.threads, [&](std::size_t trial) {
    Rng rng = seeds.stream(fmt::format("rotation-trial-{}", trial));
    const auto alpha = random_alpha(config.max_degree, rng);
    const GrayImage image = smooth_image(n, rng);
    const double gamma = angles[trial % 3];
    double gap = 0.0;
    for (int probe = 0; probe < 6; ++probe) {
      const auto row = static_cast<int>(rng.uniform_int(n / 2 - n / 6, n / 2 + n / 6 - 1));
      const auto col = static_cast<int>(rng.uniform_int(n / 2 - n / 6, n / 2 + n / 6 - 1));
      gap = std::max(gap, vertex_gap(powers, graph, alpha, image, gamma, row, col));
    }
    const double bound = rotation_bound(alpha, image, gamma);
    ratios[trial] = bound > 0.0 ? gap / bound : (gap > 0.0 ? INFINITY : 0.0);
  });
  return summarize(TransformFamily::Rotation, ratios);
}

DominanceResult translation_dominance(const DominanceConfig& config) {
  check_dominance_config(config);
  const GridGraph graph(config.size, config.size, config.connectivity);
  const LaplacianPowers powers(graph, config.max_degree);
  const SeedSplitter seeds(config.seed);
  const double shifts[] = {0.1, 0.2, 0.3, 0.4};

  std::vector<double> ratios(static_cast<std::size_t>(config.trials));
  parallel_for(ratios.size(), config.threads, [&](std::size_t trial) {
    Rng rng = seeds.stream(fmt::format("translation-trial-{}", trial));
    const auto alpha = random_alpha(config.max_degree, rng);
    const GrayImage image = smooth_image(config.size, rng);
    const double xi = shifts[trial % 4];
    std::vector<double> measured = alpha;
    if (config.drop_constant_term) measured[0] = 0.0;
    const GraphSignal y = image.to_signal();
    const GraphSignal moved = translate_bilinear(image, xi, xi).to_signal();
    const GraphSignal diff =
        apply_polynomial_filter(powers, measured, moved) - apply_polynomial_filter(powers, measured, y);
    double gap = 0.0;
    const int margin = static_cast<int>(alpha.size()) + 1;
    for (const Index v : interior_nodes(graph, margin)) gap = std::max(gap, std::abs(diff[v]));
    const double bound = translation_bound(alpha, image, xi, xi);
    ratios[trial] = bound > 0.0 ? gap / bound : (gap > 0.0 ? INFINITY : 0.0);
  });
  return summarize(TransformFamily::Translation, ratios);
}

}  // namespace tigranet
