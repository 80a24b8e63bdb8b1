#include "kgr/embed/loss.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace kgr::embed {

GradientBuffer::GradientBuffer(const ModelParams& shape)
    : entity_width_(shape.entity_width()),
      relation_width_(shape.relation_width()),
      entities_(shape.entity_count() * shape.entity_width(), 0.0),
      relations_(shape.relation_count() * shape.relation_width(), 0.0),
      entity_touched_(shape.entity_count(), 0),
      relation_touched_(shape.relation_count(), 0) {}

std::span<double> GradientBuffer::entity(EntityId e) {
  if (!entity_touched_[e]) {
    entity_touched_[e] = 1;
    touched_entities_.push_back(e);
  }
  return {entities_.data() + static_cast<std::size_t>(e) * entity_width_, entity_width_};
}

std::span<double> GradientBuffer::relation(RelationId r) {
  if (!relation_touched_[r]) {
    relation_touched_[r] = 1;
    touched_relations_.push_back(r);
  }
  return {relations_.data() + static_cast<std::size_t>(r) * relation_width_, relation_width_};
}

std::span<const double> GradientBuffer::entity_view(EntityId e) const {
  return {entities_.data() + static_cast<std::size_t>(e) * entity_width_, entity_width_};
}

std::span<const double> GradientBuffer::relation_view(RelationId r) const {
  return {relations_.data() + static_cast<std::size_t>(r) * relation_width_, relation_width_};
}

void GradientBuffer::accumulate(const GradientBuffer& other) {
  for (EntityId e : other.touched_entities_) {
    auto dst = entity(e);
    auto src = other.entity_view(e);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
  for (RelationId r : other.touched_relations_) {
    auto dst = relation(r);
    auto src = other.relation_view(r);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  }
}

void GradientBuffer::apply_sgd(ModelParams& params, double learning_rate) {
  for (EntityId e : touched_entities_) {
    auto p = params.entity(e);
    auto g = entity_view(e);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * g[i];
  }
  const bool phases = params.kind() == ModelKind::RotatE;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (RelationId r : touched_relations_) {
    auto p = params.relation(r);
    auto g = relation_view(r);
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] -= learning_rate * g[i];
      if (phases) {
        p[i] = std::fmod(p[i], two_pi);
        if (p[i] < 0) p[i] += two_pi;
        if (p[i] >= two_pi) p[i] = 0.0;
      }
    }
  }
  clear();
}

void GradientBuffer::clear() {
  for (EntityId e : touched_entities_) {
    std::fill_n(entities_.begin() + static_cast<std::ptrdiff_t>(e * entity_width_), entity_width_, 0.0);
    entity_touched_[e] = 0;
  }
  for (RelationId r : touched_relations_) {
    std::fill_n(relations_.begin() + static_cast<std::ptrdiff_t>(r * relation_width_), relation_width_, 0.0);
    relation_touched_[r] = 0;
  }
  touched_entities_.clear();
  touched_relations_.clear();
}

namespace {

// Straight-line distance used by training. Kept separate from the SIMD
// scoring kernels so the gradient path has one fixed summation order.
double model_distance(const ModelParams& p, const Triple& tr) {
  const auto d = p.dim();
  const auto h = p.entity(tr.head);
  const auto r = p.relation(tr.relation);
  const auto t = p.entity(tr.tail);
  double acc = 0.0;
  switch (p.kind()) {
    case ModelKind::TransE:
      for (std::size_t i = 0; i < d; ++i) {
        const double v = h[i] + r[i] - t[i];
        acc += v * v;
      }
      break;
    case ModelKind::DistMult:
      for (std::size_t i = 0; i < d; ++i) {
        const double v = h[i] * r[i] * t[i];
        acc += v * v;
      }
      break;
    case ModelKind::RotatE:
      for (std::size_t i = 0; i < d; ++i) {
        const double c = std::cos(r[i]);
        const double s = std::sin(r[i]);
        const double re = h[i] * c - h[d + i] * s - t[i];
        const double im = h[i] * s + h[d + i] * c - t[d + i];
        acc += re * re + im * im;
      }
      break;
  }
  return std::sqrt(acc);
}

// grad += scale * d(distance)/d(params) for one triple.
void add_distance_gradient(const ModelParams& p, const Triple& tr, double distance, double scale,
                           GradientBuffer& grad) {
  if (distance == 0.0 || scale == 0.0) return;
  const auto d = p.dim();
  const auto h = p.entity(tr.head);
  const auto r = p.relation(tr.relation);
  const auto t = p.entity(tr.tail);
  const double k = scale / distance;
  // head and tail rows may coincide; accumulation only, so aliasing is fine.
  auto gh = grad.entity(tr.head);
  auto gr = grad.relation(tr.relation);
  auto gt = grad.entity(tr.tail);
  switch (p.kind()) {
    case ModelKind::TransE:
      for (std::size_t i = 0; i < d; ++i) {
        const double v = k * (h[i] + r[i] - t[i]);
        gh[i] += v;
        gr[i] += v;
        gt[i] -= v;
      }
      break;
    case ModelKind::DistMult:
      for (std::size_t i = 0; i < d; ++i) {
        const double v = k * h[i] * r[i] * t[i];
        gh[i] += v * r[i] * t[i];
        gr[i] += v * h[i] * t[i];
        gt[i] += v * h[i] * r[i];
      }
      break;
    case ModelKind::RotatE:
      for (std::size_t i = 0; i < d; ++i) {
        const double a = h[i];
        const double b = h[d + i];
        const double c = std::cos(r[i]);
        const double s = std::sin(r[i]);
        const double re = a * c - b * s - t[i];
        const double im = a * s + b * c - t[d + i];
        gh[i] += k * (re * c + im * s);
        gh[d + i] += k * (im * c - re * s);
        gr[i] += k * (im * (a * c - b * s) - re * (a * s + b * c));
        gt[i] -= k * re;
        gt[d + i] -= k * im;
      }
      break;
  }
}

}  // namespace

double loss_and_gradient(const ModelParams& params, std::span<const Triple> positives,
                         std::span<const Triple> negatives, double margin, GradientBuffer* grad) {
  if (positives.empty()) {
    if (!negatives.empty()) throw ContractError("negatives given without positives");
    return 0.0;
  }
  if (negatives.empty() || negatives.size() % positives.size() != 0) {
    throw ContractError("batch mismatch: " + std::to_string(negatives.size()) + " negatives for " +
                        std::to_string(positives.size()) + " positives");
  }
  const std::size_t n = negatives.size() / positives.size();
  const bool rotate = params.kind() == ModelKind::RotatE;

  double total = 0.0;
  for (std::size_t i = 0; i < positives.size(); ++i) {
    const Triple& pos = positives[i];
    const double dp = model_distance(params, pos);
    if (rotate) {
      // d/dD of -log s(margin - D) is 1 - s(margin - D).
      total -= log_sigmoid(margin - dp);
      if (grad) add_distance_gradient(params, pos, dp, 1.0 - sigmoid(margin - dp), *grad);
      for (std::size_t j = 0; j < n; ++j) {
        const Triple& neg = negatives[i * n + j];
        const double dn = model_distance(params, neg);
        total -= log_sigmoid(dn - margin) / static_cast<double>(n);
        if (grad) add_distance_gradient(params, neg, dn, -(1.0 - sigmoid(dn - margin)) / static_cast<double>(n), *grad);
      }
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        const Triple& neg = negatives[i * n + j];
        const double dn = model_distance(params, neg);
        const double hinge = margin + dp - dn;
        if (hinge <= 0.0) continue;
        total += hinge;
        if (grad) {
          add_distance_gradient(params, pos, dp, 1.0, *grad);
          add_distance_gradient(params, neg, dn, -1.0, *grad);
        }
      }
    }
  }
  return total;
}

double loss_batch(const ModelParams& params, std::span<const Triple> positives, std::span<const Triple> negatives,
                  double margin) {
  return loss_and_gradient(params, positives, negatives, margin, nullptr);
}

}  // namespace kgr::embed
