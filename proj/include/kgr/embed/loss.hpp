#pragma once

#include <span>
#include <vector>

#include "kgr/embed/model.hpp"

namespace kgr::embed {

/// Gradient with the parameter tables' shape. Rows are tracked as they are
/// touched so clearing and applying cost O(touched rows).
class GradientBuffer {
 public:
  explicit GradientBuffer(const ModelParams& shape);

  std::span<double> entity(EntityId e);
  std::span<double> relation(RelationId r);
  std::span<const double> entity_view(EntityId e) const;
  std::span<const double> relation_view(RelationId r) const;

  /// this += other, visiting other's rows in their touch order.
  void accumulate(const GradientBuffer& other);
  /// params -= lr * gradient on touched rows; RotatE phases are wrapped
  /// back into [0, 2pi). Leaves the buffer cleared.
  void apply_sgd(ModelParams& params, double learning_rate);
  void clear();

  const std::vector<EntityId>& touched_entities() const { return touched_entities_; }
  const std::vector<RelationId>& touched_relations() const { return touched_relations_; }

 private:
  std::size_t entity_width_;
  std::size_t relation_width_;
  std::vector<double> entities_;
  std::vector<double> relations_;
  std::vector<char> entity_touched_;
  std::vector<char> relation_touched_;
  std::vector<EntityId> touched_entities_;
  std::vector<RelationId> touched_relations_;
};

/// Loss of a mini-batch. `negatives` holds n corrupted triples per positive,
/// grouped by positive: negatives[i*n .. i*n+n) belong to positives[i].
///
///   TransE:   sum_i sum_j max(0, margin + ||h+r-t|| - ||h'+r-t'||)
///   DistMult: sum_i sum_j max(0, margin + ||h*r*t|| - ||h'*r*t'||)
///   RotatE:   sum_i -log s(margin - D_i) - sum_j (1/n) log s(D'_ij - margin)
///
/// Throws ContractError when the negatives are not a positive multiple of
/// the positives.
double loss_batch(const ModelParams& params, std::span<const Triple> positives, std::span<const Triple> negatives,
                  double margin);

/// Same loss; adds its gradient into `grad` when non-null. Norm gradients at
/// a zero residual are taken as 0.
double loss_and_gradient(const ModelParams& params, std::span<const Triple> positives,
                         std::span<const Triple> negatives, double margin, GradientBuffer* grad);

}  // namespace kgr::embed
