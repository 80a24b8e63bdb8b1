#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "kgr/core/knowledge_graph.hpp"

namespace kgr {

/// One `head<TAB>relation<TAB>tail` line before encoding.
struct LabeledTriple {
  std::string head;
  std::string relation;
  std::string tail;
};

/// Reads a tab-separated triple file. Blank lines are skipped; any other
/// line without exactly three fields is a ParseError carrying the line number.
std::vector<LabeledTriple> read_labeled_triples(const std::filesystem::path& path);
std::vector<LabeledTriple> read_labeled_triples(std::istream& in, const std::string& source_name);

/// Interns every label into `vocab` (first-seen order).
std::vector<Triple> encode_triples(const std::vector<LabeledTriple>& rows, Vocabulary& vocab);
/// Encodes against a fixed vocabulary; unknown labels raise VocabularyError.
std::vector<Triple> encode_triples(const std::vector<LabeledTriple>& rows, const Vocabulary& vocab);

/// Loads a graph. With `vocab` the vocabulary is fixed and unseen labels are
/// an error; without it a fresh vocabulary is built.
KnowledgeGraph load_triples(const std::filesystem::path& path,
                            std::shared_ptr<const Vocabulary> vocab = nullptr);

void write_triples(std::ostream& out, std::span<const Triple> triples, const Vocabulary& vocab);
void save_triples(const std::filesystem::path& path, const KnowledgeGraph& kg);

/// `id<TAB>label` dumps.
void save_entity_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab);
void save_relation_vocabulary(const std::filesystem::path& path, const Vocabulary& vocab);

/// train/valid/test sharing one vocabulary.
struct DatasetSplit {
  KnowledgeGraph train;
  std::vector<Triple> valid;
  std::vector<Triple> test;
  /// valid/test rows dropped because they reuse a train triple, repeat, or
  /// mention entities/relations absent from train.
  std::size_t dropped_overlap = 0;
  std::size_t dropped_unseen = 0;

  /// train ∪ valid ∪ test, used for filtered ranking.
  KnowledgeGraph all_known() const;
};

/// The vocabulary is built from train alone, in first-seen order; valid/test
/// rows with a label absent from train are dropped and counted. Empty
/// valid/test paths are allowed.
DatasetSplit load_split(const std::filesystem::path& train, const std::filesystem::path& valid,
                        const std::filesystem::path& test);

/// Builds a split from already-encoded parts, enforcing the split invariants.
DatasetSplit make_split(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> train,
                        const std::vector<Triple>& valid, const std::vector<Triple>& test);

/// `key=value` statistics lines.
void write_graph_stats(std::ostream& out, const KnowledgeGraph& kg);

}  // namespace kgr
