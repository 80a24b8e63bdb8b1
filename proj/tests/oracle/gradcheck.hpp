#pragma once

// Central finite differences of the oracle loss, evaluated in long double so
// that round-off stays far below the step, against the analytic gradient.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kgr/embed/loss.hpp"
#include "oracle/embed_oracle.hpp"

namespace kgr::oracle {

struct GradCheck {
  double max_rel_error = 0.0;
  std::size_t compared = 0;
};

/// Relative error |a - n| / max(|a|, |n|), with the denominator floored at
/// 1e-7 so that two vanishing components do not divide by zero.
inline GradCheck finite_difference_check(embed::ModelKind kind, std::size_t dim, std::size_t points,
                                         std::uint64_t seed, double step = 1e-5) {
  GradCheck out;
  std::mt19937_64 rng(seed);
  const std::size_t ne = 6, nr = 3, npos = 3, nneg = 2;
  std::uniform_int_distribution<EntityId> ent(0, ne - 1);
  std::uniform_int_distribution<RelationId> rel(0, nr - 1);
  const double margin = kind == embed::ModelKind::RotatE ? 3.0 : 2.0;
  for (std::size_t p = 0; p < points; ++p) {
    embed::TrainingConfig cfg;
    cfg.dim = dim;
    cfg.seed = rng();
    auto params = embed::init_model(kind, ne, nr, cfg);
    std::vector<Triple> pos, neg;
    for (std::size_t i = 0; i < npos; ++i) pos.push_back({ent(rng), rel(rng), ent(rng)});
    for (std::size_t i = 0; i < npos * nneg; ++i) {
      const auto& q = pos[i / nneg];
      neg.push_back(i % 2 ? Triple{ent(rng), q.relation, q.tail} : Triple{q.head, q.relation, ent(rng)});
    }
    embed::GradientBuffer grad(params);
    embed::loss_and_gradient(params, pos, neg, margin, &grad);

    auto compare = [&](std::vector<double>& table, std::size_t index, double analytic) {
      const double saved = table[index];
      using LD = long double;
      const double x_up = saved + step, x_down = saved - step;
      table[index] = x_up;
      const LD up = oracle::loss_in<LD>(params, pos, neg, margin);
      table[index] = x_down;
      const LD down = oracle::loss_in<LD>(params, pos, neg, margin);
      table[index] = saved;
      const double numeric = static_cast<double>((up - down) / (LD(x_up) - LD(x_down)));
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-7});
      out.max_rel_error = std::max(out.max_rel_error, std::abs(analytic - numeric) / denom);
      ++out.compared;
    };
    const std::size_t ew = params.entity_width();
    for (EntityId e = 0; e < ne; ++e) {
      const auto g = grad.entity_view(e);
      for (std::size_t i = 0; i < ew; ++i) compare(params.entity_table(), e * ew + i, g[i]);
    }
    for (RelationId r = 0; r < nr; ++r) {
      const auto g = grad.relation_view(r);
      for (std::size_t i = 0; i < dim; ++i) compare(params.relation_table(), r * dim + i, g[i]);
    }
  }
  return out;
}

}  // namespace kgr::oracle
