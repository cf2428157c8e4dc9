#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tigranet/datasets/labeled_set.hpp"
#include "tigranet/layers/network.hpp"
#include "tigranet/training/adam.hpp"

namespace tigranet {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 32;
  AdamConfig adam;
  /// Master seed; the shuffle order comes from its "shuffle" stream.
  std::uint64_t seed = 0;
  int threads = 1;
  VarianceGradient variance = VarianceGradient::Exact;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  /// Epoch of the returned network (0 = initial parameters).
  int best_epoch = 0;
  AdamState adam;
};

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Mean loss and accuracy; per-sample results are reduced in index order.
Evaluation evaluate(const Network& network, const LabeledSignalSet& set, int threads = 1);

/// Mini-batch Adam on the mean batch loss. After every epoch both splits are
/// evaluated; on return `network` holds the parameters of the epoch with the
/// best validation accuracy (the latest one on ties, since it has trained
/// longer on the same validation evidence; the last epoch without a
/// validation set). `on_epoch` sees each record as it is produced.
/// Throws NumericError on a non-finite loss or gradient.
TrainResult train(Network& network, const LabeledSignalSet& train_set,
                  const LabeledSignalSet* validation_set, const TrainConfig& config,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace tigranet
