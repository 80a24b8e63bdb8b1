#include "kgr/embed/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <random>

#include "kgr/core/random.hpp"
#include "kgr/simd/kernels.hpp"

namespace kgr::embed {

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::TransE:
      return "TransE";
    case ModelKind::DistMult:
      return "DistMult";
    case ModelKind::RotatE:
      return "RotatE";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "transe") return ModelKind::TransE;
  if (lower == "distmult") return ModelKind::DistMult;
  if (lower == "rotate") return ModelKind::RotatE;
  throw ConfigError("unknown model '" + std::string(name) + "' (expected transe, distmult or rotate)");
}

void TrainingConfig::validate() const {
  if (dim == 0) throw ConfigError("embedding dimension must be >= 1");
  if (!(margin > 0.0)) throw ConfigError("margin must be > 0");
  if (negatives == 0) throw ConfigError("negatives per positive must be >= 1");
  if (batch_size == 0) throw ConfigError("batch size must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be > 0");
  if (workers == 0) throw ConfigError("workers must be >= 1");
}

ModelParams::ModelParams(ModelKind kind, std::size_t dim, std::size_t entity_count, std::size_t relation_count,
                         std::uint64_t seed)
    : kind_(kind), dim_(dim), entity_count_(entity_count), relation_count_(relation_count), seed_(seed) {
  entities_.assign(entity_count_ * entity_width(), 0.0);
  relations_.assign(relation_count_ * dim_, 0.0);
}

bool ModelParams::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(entities_.begin(), entities_.end(), finite) &&
         std::all_of(relations_.begin(), relations_.end(), finite);
}

ModelParams init_model(ModelKind kind, std::size_t entity_count, std::size_t relation_count,
                       const TrainingConfig& config) {
  if (config.dim == 0) throw ConfigError("embedding dimension must be >= 1");
  if (entity_count == 0 || relation_count == 0) throw ConfigError("model needs at least one entity and relation");

  ModelParams params(kind, config.dim, entity_count, relation_count, config.seed);
  Rng rng(derive_seed(config.seed, "init"));
  const double bound = 6.0 / std::sqrt(static_cast<double>(config.dim));
  std::uniform_real_distribution<double> uniform(-bound, bound);
  for (auto& v : params.entity_table()) v = uniform(rng);
  if (kind == ModelKind::RotatE) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (auto& v : params.relation_table()) v = phase(rng);
  } else {
    for (auto& v : params.relation_table()) v = uniform(rng);
  }
  return params;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

Scorer::Scorer(const ModelParams& params) : params_(&params) {
  if (params.kind() == ModelKind::RotatE) {
    const auto& phases = params.relation_table();
    cos_.resize(phases.size());
    sin_.resize(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i) {
      cos_[i] = std::cos(phases[i]);
      sin_[i] = std::sin(phases[i]);
    }
  }
}

double Scorer::distance(const Triple& t) const {
  const auto& k = simd::kernels();
  const auto d = params_->dim();
  const double* h = params_->entity(t.head).data();
  const double* tl = params_->entity(t.tail).data();
  switch (params_->kind()) {
    case ModelKind::TransE:
      return k.translation_distance(h, params_->relation(t.relation).data(), tl, d);
    case ModelKind::DistMult:
      return k.hadamard_norm(h, params_->relation(t.relation).data(), tl, d);
    case ModelKind::RotatE: {
      const std::size_t off = static_cast<std::size_t>(t.relation) * d;
      return k.rotation_distance(h, cos_.data() + off, sin_.data() + off, tl, d);
    }
  }
  return 0.0;
}

double score(const ModelParams& params, const Triple& t) { return Scorer(params).score(t); }

}  // namespace kgr::embed
