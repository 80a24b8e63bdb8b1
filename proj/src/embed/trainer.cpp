#include "kgr/embed/trainer.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "kgr/embed/loss.hpp"

namespace kgr::embed {

Corruption corrupt(const KnowledgeGraph& kg, const Triple& positive, Rng& rng) {
  const auto n = static_cast<EntityId>(kg.entity_count());
  if (n < 2) throw ConfigError("negative sampling needs at least 2 entities");
  Corruption c;
  for (int attempt = 0; attempt < kMaxCorruptionAttempts; ++attempt) {
    c.head_replaced = std::bernoulli_distribution(0.5)(rng);
    const EntityId e = uniform_index<EntityId>(rng, n);
    c.triple = positive;
    (c.head_replaced ? c.triple.head : c.triple.tail) = e;
    if (!kg.contains(c.triple)) return c;
  }
  c.fallback = true;
  return c;
}

Triple negative_sample(const KnowledgeGraph& kg, const Triple& positive, Rng& rng) {
  return corrupt(kg, positive, rng).triple;
}

namespace {

double batch_gradient(const ModelParams& params, std::span<const Triple> positives,
                      std::span<const Triple> negatives, const TrainingConfig& config,
                      std::vector<GradientBuffer>& buffers) {
  const std::size_t n = config.negatives;
  const std::size_t slices = std::min(buffers.size(), positives.size());
  if (slices <= 1) return loss_and_gradient(params, positives, negatives, config.margin, &buffers[0]);

  std::vector<double> losses(slices, 0.0);
  std::vector<std::thread> threads;
  const std::size_t per = (positives.size() + slices - 1) / slices;
  for (std::size_t s = 0; s < slices; ++s) {
    const std::size_t begin = std::min(s * per, positives.size());
    const std::size_t end = std::min(begin + per, positives.size());
    threads.emplace_back([&, s, begin, end] {
      losses[s] = loss_and_gradient(params, positives.subspan(begin, end - begin),
                                    negatives.subspan(begin * n, (end - begin) * n), config.margin, &buffers[s]);
    });
  }
  for (auto& t : threads) t.join();
  for (std::size_t s = 1; s < slices; ++s) {
    buffers[0].accumulate(buffers[s]);
    buffers[s].clear();
  }
  return std::accumulate(losses.begin(), losses.end(), 0.0);
}

}  // namespace

TrainResult train(ModelParams params, const KnowledgeGraph& kg, const TrainingConfig& config,
                  const StepObserver& observer) {
  config.validate();
  if (config.epochs > 0 && kg.empty()) throw ConfigError("cannot train on an empty graph");
  if (params.entity_count() < kg.entity_count() || params.relation_count() < kg.relation_count())
    throw ConfigError("model tables are smaller than the graph vocabulary");

  TrainResult result;
  const auto triples = kg.triples();
  std::vector<std::size_t> order(triples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  Rng rng(derive_seed(config.seed, "train"));
  std::vector<GradientBuffer> buffers;
  for (std::size_t w = 0; w < config.workers; ++w) buffers.emplace_back(params);

  std::vector<Triple> positives;
  std::vector<Triple> negatives;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_total = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(start + config.batch_size, order.size());
      positives.clear();
      negatives.clear();
      for (std::size_t i = start; i < end; ++i) {
        const Triple& pos = triples[order[i]];
        positives.push_back(pos);
        for (std::size_t j = 0; j < config.negatives; ++j) negatives.push_back(negative_sample(kg, pos, rng));
      }
      const double loss = batch_gradient(params, positives, negatives, config, buffers);
      if (!std::isfinite(loss)) {
        std::ostringstream msg;
        msg << "non-finite loss " << loss << " at epoch " << epoch + 1 << ", batch " << batch_index + 1 << " ("
            << model_name(params.kind()) << ", lr=" << config.learning_rate << ", margin=" << config.margin << ")";
        throw NumericalError(msg.str());
      }
      buffers[0].apply_sgd(params, config.learning_rate);
      epoch_total += loss;
      if (observer) observer(params, epoch, batch_index);
    }
    if (!params.all_finite()) {
      throw NumericalError("non-finite parameter after epoch " + std::to_string(epoch + 1) + " (" +
                           std::string(model_name(params.kind())) + ")");
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(triples.size()));
  }
  result.params = std::move(params);
  return result;
}

void write_loss_trace(std::ostream& out, std::span<const double> epoch_loss) {
  out << "epoch,loss\n";
  out.precision(17);
  for (std::size_t i = 0; i < epoch_loss.size(); ++i) out << i + 1 << ',' << epoch_loss[i] << '\n';
}

}  // namespace kgr::embed
