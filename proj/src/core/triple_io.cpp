#include "kgr/core/triple_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "kgr/core/functionality.hpp"

namespace kgr {

std::vector<LabeledTriple> read_labeled_triples(std::istream& in, const std::string& source_name) {
  std::vector<LabeledTriple> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto first = line.find('\t');
    const auto second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
    if (second == std::string::npos || line.find('\t', second + 1) != std::string::npos) {
      throw ParseError(source_name, line_no, "expected 3 tab-separated fields");
    }
    rows.push_back({line.substr(0, first), line.substr(first + 1, second - first - 1), line.substr(second + 1)});
  }
  return rows;
}

std::vector<LabeledTriple> read_labeled_triples(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_labeled_triples(in, path.string());
}

std::vector<Triple> encode_triples(const std::vector<LabeledTriple>& rows, Vocabulary& vocab) {
  std::vector<Triple> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const auto h = vocab.intern_entity(row.head);
    const auto r = vocab.intern_relation(row.relation);
    const auto t = vocab.intern_entity(row.tail);
    out.push_back({h, r, t});
  }
  return out;
}

std::vector<Triple> encode_triples(const std::vector<LabeledTriple>& rows, const Vocabulary& vocab) {
  std::vector<Triple> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    out.push_back({vocab.entity_id(row.head), vocab.relation_id(row.relation), vocab.entity_id(row.tail)});
  }
  return out;
}

KnowledgeGraph load_triples(const std::filesystem::path& path, std::shared_ptr<const Vocabulary> vocab) {
  const auto rows = read_labeled_triples(path);
  if (vocab) {
    auto triples = encode_triples(rows, *vocab);
    return KnowledgeGraph(std::move(vocab), std::move(triples));
  }
  auto fresh = std::make_shared<Vocabulary>();
  auto triples = encode_triples(rows, *fresh);
  return KnowledgeGraph(std::move(fresh), std::move(triples));
}

void write_triples(std::ostream& out, std::span<const Triple> triples, const Vocabulary& vocab) {
  for (const auto& t : triples) {
    out << vocab.entity_label(t.head) << '\t' << vocab.relation_label(t.relation) << '\t'
        << vocab.entity_label(t.tail) << '\n';
  }
}

void save_triples(const std::filesystem::path& path, const KnowledgeGraph& kg) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_triples(out, kg.triples(), kg.vocab());
}

namespace {
void save_labels(const std::filesystem::path& path, const std::vector<std::string>& labels) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << '\t' << labels[i] << '\n';
}
}  // namespace

void save_entity_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab) {
  save_labels(path, vocab.entity_labels());
}

void save_relation_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab) {
  save_labels(path, vocab.relation_labels());
}

KnowledgeGraph DatasetSplit::all_known() const {
  std::vector<Triple> extra(valid);
  extra.insert(extra.end(), test.begin(), test.end());
  return train.merge(extra);
}

DatasetSplit make_split(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> train,
                        const std::vector<Triple>& valid, const std::vector<Triple>& test) {
  DatasetSplit split{KnowledgeGraph(vocab, std::move(train)), {}, {}, 0, 0};
  const auto& kg = split.train;

  std::vector<bool> seen_entity(kg.entity_count(), false);
  std::vector<bool> seen_relation(kg.relation_count(), false);
  for (const auto& t : kg.triples()) {
    seen_entity[t.head] = seen_entity[t.tail] = true;
    seen_relation[t.relation] = true;
  }

  std::unordered_set<Triple, TripleHash> used(kg.triples().begin(), kg.triples().end());
  auto admit = [&](const std::vector<Triple>& in, std::vector<Triple>& out) {
    for (const auto& t : in) {
      if (!seen_entity[t.head] || !seen_entity[t.tail] || !seen_relation[t.relation]) {
        ++split.dropped_unseen;
      } else if (!used.insert(t).second) {
        ++split.dropped_overlap;
      } else {
        out.push_back(t);
      }
    }
  };
  admit(valid, split.valid);
  admit(test, split.test);
  return split;
}

DatasetSplit load_split(const std::filesystem::path& train, const std::filesystem::path& valid,
                        const std::filesystem::path& test) {
  auto vocab = std::make_shared<Vocabulary>();
  auto train_ids = encode_triples(read_labeled_triples(train), *vocab);
  // Held-out rows never extend the vocabulary; unknown labels are dropped.
  std::size_t unseen = 0;
  auto encode_known = [&](const std::filesystem::path& path) {
    std::vector<Triple> out;
    if (path.empty()) return out;
    for (const auto& row : read_labeled_triples(path)) {
      const auto h = vocab->find_entity(row.head);
      const auto r = vocab->find_relation(row.relation);
      const auto t = vocab->find_entity(row.tail);
      if (h && r && t) {
        out.push_back({*h, *r, *t});
      } else {
        ++unseen;
      }
    }
    return out;
  };
  const auto valid_ids = encode_known(valid);
  const auto test_ids = encode_known(test);
  auto split = make_split(std::move(vocab), std::move(train_ids), valid_ids, test_ids);
  split.dropped_unseen += unseen;
  return split;
}

void write_graph_stats(std::ostream& out, const KnowledgeGraph& kg) {
  std::size_t used_relations = 0;
  for (RelationId r = 0; r < kg.relation_count(); ++r) used_relations += kg.relation_triples(r).empty() ? 0 : 1;
  out << "triples=" << kg.size() << '\n'
      << "entities=" << kg.entity_count() << '\n'
      << "relations=" << kg.relation_count() << '\n'
      << "relations_with_triples=" << used_relations << '\n';
  const auto fun = functionality(kg);
  for (RelationId r = 0; r < kg.relation_count(); ++r) {
    if (!fun.has(r)) continue;
    const auto& e = fun.at(r);
    const auto& label = kg.vocab().relation_label(r);
    out << "fun[" << label << "]=" << e.fun.to_double() << '\n'
        << "fun_inv[" << label << "]=" << e.fun_inv.to_double() << '\n';
  }
}

}  // namespace kgr
