#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kgr/core/types.hpp"

namespace kgr::embed {

enum class ModelKind : std::uint32_t { TransE = 0, DistMult = 1, RotatE = 2 };

std::string_view model_name(ModelKind kind);
/// Case-insensitive; throws ConfigError on an unknown name.
ModelKind parse_model_kind(std::string_view name);

struct TrainingConfig {
  std::size_t dim = 50;
  double learning_rate = 0.01;
  std::size_t epochs = 200;
  double margin = 1.0;
  std::size_t negatives = 1;
  std::size_t batch_size = 1024;
  std::uint64_t seed = 42;
  std::size_t workers = 1;

  void validate() const;
};

/// Entity and relation tables, row-major.
///
/// TransE/DistMult rows have `dim` reals. RotatE entity rows hold `dim` real
/// parts followed by `dim` imaginary parts; RotatE relation rows hold phase
/// angles in [0, 2pi), so every relation component has modulus exactly 1.
class ModelParams {
 public:
  ModelParams() = default;
  ModelParams(ModelKind kind, std::size_t dim, std::size_t entity_count, std::size_t relation_count,
              std::uint64_t seed);

  ModelKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t entity_count() const { return entity_count_; }
  std::size_t relation_count() const { return relation_count_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t entity_width() const { return kind_ == ModelKind::RotatE ? 2 * dim_ : dim_; }
  std::size_t relation_width() const { return dim_; }

  std::span<const double> entity(EntityId e) const {
    return {entities_.data() + static_cast<std::size_t>(e) * entity_width(), entity_width()};
  }
  std::span<double> entity(EntityId e) {
    return {entities_.data() + static_cast<std::size_t>(e) * entity_width(), entity_width()};
  }
  std::span<const double> relation(RelationId r) const {
    return {relations_.data() + static_cast<std::size_t>(r) * dim_, dim_};
  }
  std::span<double> relation(RelationId r) {
    return {relations_.data() + static_cast<std::size_t>(r) * dim_, dim_};
  }

  std::vector<double>& entity_table() { return entities_; }
  const std::vector<double>& entity_table() const { return entities_; }
  std::vector<double>& relation_table() { return relations_; }
  const std::vector<double>& relation_table() const { return relations_; }

  bool all_finite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  ModelKind kind_ = ModelKind::TransE;
  std::size_t dim_ = 0;
  std::size_t entity_count_ = 0;
  std::size_t relation_count_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<double> entities_;
  std::vector<double> relations_;
};

/// Entries uniform in [-6/sqrt(d), 6/sqrt(d)]; RotatE phases uniform in [0, 2pi).
ModelParams init_model(ModelKind kind, std::size_t entity_count, std::size_t relation_count,
                       const TrainingConfig& config);

double sigmoid(double x);
/// log(sigmoid(x)) without overflow.
double log_sigmoid(double x);

/// Read-only scoring view. Caches cos/sin of RotatE phases; safe to share
/// across threads.
class Scorer {
 public:
  explicit Scorer(const ModelParams& params);

  /// The model's distance: ||h+r-t||, ||h*r*t|| or ||h o r - t||.
  double distance(const Triple& t) const;
  /// sigmoid(-distance), in (0, 0.5].
  double score(const Triple& t) const { return sigmoid(-distance(t)); }

  const ModelParams& params() const { return *params_; }

 private:
  const ModelParams* params_;
  std::vector<double> cos_;
  std::vector<double> sin_;
};

double score(const ModelParams& params, const Triple& t);

}  // namespace kgr::embed
