#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"
#include "kgr/core/random.hpp"
#include "kgr/embed/model.hpp"

namespace kgr::embed {

struct Corruption {
  Triple triple;
  bool head_replaced = false;
  /// True when 100 draws all hit known triples and the last one was kept.
  bool fallback = false;
};

inline constexpr int kMaxCorruptionAttempts = 100;

/// Replaces the head (p = 1/2) or the tail with a uniform entity, redrawing
/// while the result is in the graph.
Corruption corrupt(const KnowledgeGraph& kg, const Triple& positive, Rng& rng);
Triple negative_sample(const KnowledgeGraph& kg, const Triple& positive, Rng& rng);

struct TrainResult {
  ModelParams params;
  /// Mean loss per positive triple, one entry per epoch.
  std::vector<double> epoch_loss;
};

/// Called after every SGD step with (params, epoch, batch).
using StepObserver = std::function<void(const ModelParams&, std::size_t, std::size_t)>;

/// Plain mini-batch SGD over shuffled training triples. With workers > 1
/// each batch is split into contiguous slices whose gradients are summed in
/// slice order. Throws NumericalError on a non-finite loss or parameter.
TrainResult train(ModelParams params, const KnowledgeGraph& kg, const TrainingConfig& config,
                  const StepObserver& observer = {});

/// `epoch,loss` CSV with a header row.
void write_loss_trace(std::ostream& out, std::span<const double> epoch_loss);

}  // namespace kgr::embed
