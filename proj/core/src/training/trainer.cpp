#include "tigranet/training/trainer.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "tigranet/errors.hpp"
#include "tigranet/layers/softmax.hpp"
#include "tigranet/parallel.hpp"
#include "tigranet/rng.hpp"
#include "tigranet/training/backprop.hpp"

namespace tigranet {

namespace {

void check_set(const Network& network, const LabeledSignalSet& set) {
  if (set.signals.size() != set.labels.size()) throw DimensionError("signal/label count mismatch");
  for (const int label : set.labels) {
    if (label < 0 || label >= network.num_classes()) {
      throw DimensionError(fmt::format("label {} outside the network's {} classes", label,
                                       network.num_classes()));
    }
  }
  if (set.grid && !(*set.grid == network.graph())) {
    throw DimensionError(fmt::format("dataset grid {}x{} does not match the network grid {}x{}",
                                     set.grid->height(), set.grid->width(), network.graph().height(),
                                     network.graph().width()));
  }
}

std::vector<double> snapshot(const Network& network) {
  std::vector<double> flat;
  for (const auto& v : network.parameters()) flat.insert(flat.end(), v.data, v.data + v.size);
  return flat;
}

void restore(Network& network, const std::vector<double>& flat) {
  std::size_t pos = 0;
  for (const auto& v : network.parameters()) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(v.size)), v.data);
    pos += static_cast<std::size_t>(v.size);
  }
}

}  // namespace

Evaluation evaluate(const Network& network, const LabeledSignalSet& set, int threads) {
  check_set(network, set);
  if (set.empty()) return {};
  std::vector<double> losses(set.size());
  std::vector<int> correct(set.size());
  parallel_for(set.size(), threads, [&](std::size_t i) {
    const Eigen::VectorXd logits = network.logits(set.signals[i]);
    losses[i] = softmax_nll(logits, set.labels[i]).loss;
    Index best = 0;
    logits.maxCoeff(&best);
    correct[i] = best == set.labels[i] ? 1 : 0;
  });
  const double n = static_cast<double>(set.size());
  return {std::accumulate(losses.begin(), losses.end(), 0.0) / n,
          std::accumulate(correct.begin(), correct.end(), 0) / n};
}

TrainResult train(Network& network, const LabeledSignalSet& train_set,
                  const LabeledSignalSet* validation_set, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  if (config.epochs < 0) throw std::invalid_argument("epoch count must be >= 0");
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  check_set(network, train_set);
  if (validation_set) check_set(network, *validation_set);
  if (train_set.empty() && config.epochs > 0) throw std::invalid_argument("empty training set");

  TrainResult result;
  result.adam = AdamState(config.adam);
  Rng shuffle_rng = SeedSplitter(config.seed).stream("shuffle");
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> best_params = snapshot(network);
  AdamState best_adam = result.adam;
  double best_val = -1.0;

  std::vector<LossAndGradients> slots;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t count = std::min(order.size() - start, static_cast<std::size_t>(config.batch_size));
      slots.assign(count, {});
      parallel_for(count, config.threads, [&](std::size_t b) {
        const std::size_t idx = order[start + b];
        slots[b] = network_backward(network, train_set.signals[idx], train_set.labels[idx], config.variance);
      });
      NetworkGradients total = std::move(slots[0].gradients);
      double batch_loss = slots[0].loss;
      for (std::size_t b = 1; b < count; ++b) {
        total += slots[b].gradients;
        batch_loss += slots[b].loss;
      }
      total *= 1.0 / static_cast<double>(count);
      if (!std::isfinite(batch_loss) || !total.all_finite()) {
        throw NumericError(fmt::format("training diverged: non-finite loss or gradient at epoch {}, batch {}",
                                       epoch, start / static_cast<std::size_t>(config.batch_size)));
      }
      adam_step(result.adam, network.parameters(), total.views());
    }

    EpochRecord record;
    record.epoch = epoch;
    const auto tr = evaluate(network, train_set, config.threads);
    record.train_loss = tr.loss;
    record.train_acc = tr.accuracy;
    if (validation_set && !validation_set->empty()) {
      const auto va = evaluate(network, *validation_set, config.threads);
      record.val_loss = va.loss;
      record.val_acc = va.accuracy;
    }
    if (!std::isfinite(record.train_loss)) {
      throw NumericError(fmt::format("training diverged: non-finite training loss after epoch {}", epoch));
    }
    result.log.push_back(record);
    if (on_epoch) on_epoch(record);

    const bool has_val = validation_set && !validation_set->empty();
    if (!has_val || record.val_acc >= best_val) {
      best_val = record.val_acc;
      result.best_epoch = epoch;
      best_params = snapshot(network);
      best_adam = result.adam;
    }
  }
  restore(network, best_params);
  result.adam = std::move(best_adam);
  return result;
}

}  // namespace tigranet
