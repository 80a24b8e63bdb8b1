#include "kgr/eval/ranking.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace kgr::eval {

std::string_view mode_name(RankingMode mode) { return mode == RankingMode::raw ? "raw" : "filtered"; }

RankingMode parse_mode(std::string_view name) {
  if (name == "raw") return RankingMode::raw;
  if (name == "filtered") return RankingMode::filtered;
  throw ConfigError("unknown ranking mode '" + std::string(name) + "' (expected raw or filtered)");
}

RankPair embed_rank(const embed::Scorer& scorer, const KnowledgeGraph& known, const Triple& test,
                    RankingMode mode) {
  const auto n = static_cast<EntityId>(scorer.params().entity_count());
  const bool filtered = mode == RankingMode::filtered;
  RankPair out;

  const double tail_score = scorer.score(test);
  std::size_t ahead = 0;
  for (EntityId e = 0; e < n; ++e) {
    if (e == test.tail) continue;
    const Triple c{test.head, test.relation, e};
    if (filtered && known.contains(c)) continue;
    const double s = scorer.score(c);
    if (s > tail_score || (s == tail_score && e < test.tail)) ++ahead;
  }
  out.tail = ahead + 1;

  const double head_score = tail_score;
  ahead = 0;
  for (EntityId e = 0; e < n; ++e) {
    if (e == test.head) continue;
    const Triple c{e, test.relation, test.tail};
    if (filtered && known.contains(c)) continue;
    const double s = scorer.score(c);
    if (s > head_score || (s == head_score && e < test.head)) ++ahead;
  }
  out.head = ahead + 1;
  return out;
}

EvalReport report_from_ranks(std::span<const RankPair> ranks, RankingMode mode) {
  EvalReport report;
  report.mode = mode;
  report.query_count = 2 * ranks.size();
  if (ranks.empty()) return report;
  double h1 = 0, h3 = 0, h10 = 0, rr = 0;
  auto add = [&](std::size_t rank) {
    if (rank == 0) return;
    h1 += rank <= 1;
    h3 += rank <= 3;
    h10 += rank <= 10;
    rr += 1.0 / static_cast<double>(rank);
  };
  for (const auto& r : ranks) {
    add(r.head);
    add(r.tail);
  }
  const double norm = static_cast<double>(report.query_count);
  report.hits1 = h1 / norm;
  report.hits3 = h3 / norm;
  report.hits10 = h10 / norm;
  report.mrr = rr / norm;
  return report;
}

EvalReport evaluate_embeddings(const embed::ModelParams& params, const DatasetSplit& split, RankingMode mode,
                               std::size_t workers) {
  if (split.test.empty()) throw ConfigError("cannot evaluate on an empty test set");
  const embed::Scorer scorer(params);
  const KnowledgeGraph known = mode == RankingMode::filtered ? split.all_known() : KnowledgeGraph();
  std::vector<RankPair> ranks(split.test.size());
  workers = std::max<std::size_t>(1, std::min(workers, ranks.size()));
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < ranks.size(); i += workers) ranks[i] = embed_rank(scorer, known, split.test[i], mode);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  return report_from_ranks(ranks, mode);
}

void write_report(std::ostream& out, const EvalReport& report) {
  char buf[64];
  auto line = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << '=' << buf << '\n';
  };
  line("hits@1", report.hits1);
  line("hits@3", report.hits3);
  line("hits@10", report.hits10);
  line("mrr", report.mrr);
  out << "mode=" << mode_name(report.mode) << '\n' << "n_queries=" << report.query_count << '\n';
}

}  // namespace kgr::eval
