#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgr/analysis/rule_diff.hpp"
#include "kgr/core/triple_io.hpp"
#include "kgr/embed/checkpoint.hpp"
#include "kgr/embed/trainer.hpp"
#include "kgr/eval/ranking.hpp"
#include "kgr/eval/rule_predict.hpp"
#include "kgr/linkpred/enrich.hpp"
#include "kgr/pipeline/config.hpp"
#include "kgr/pipeline/pipeline.hpp"
#include "kgr/pipeline/split.hpp"
#include "kgr/rules/miner.hpp"

namespace fs = std::filesystem;
using namespace kgr;

namespace {

// Config keys shared by the subcommands, exposed as --key-name flags.
const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"train", "training triples (TSV)"},
    {"valid", "validation triples (TSV)"},
    {"test", "test triples (TSV)"},
    {"out", "output directory"},
    {"model", "transe | distmult | rotate"},
    {"dim", "embedding dimension"},
    {"lr", "learning rate"},
    {"epochs", "training epochs"},
    {"margin", "margin (gamma for RotatE)"},
    {"negatives", "negatives per positive"},
    {"batch", "mini-batch size"},
    {"target_relations", "comma-separated relation labels to complete"},
    {"sample_entities", "entities sampled per side"},
    {"sample_relations", "relations sampled when no targets are given"},
    {"top_k", "comma-separated list of k"},
    {"max_body", "maximum body atoms"},
    {"min_support", "minimum support"},
    {"min_hc", "minimum head coverage"},
    {"min_pca", "minimum PCA confidence"},
    {"allow_constants", "allow instantiated body atoms"},
    {"forbid_head_echo", "reject bindings that reproduce the head fact in the body"},
    {"mode", "raw | filtered"},
    {"seed", "global seed"},
    {"workers", "thread cap (1 is bit-deterministic)"},
};

struct Settings {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool print_config = false;

  pipeline::PipelineConfig resolve() const {
    pipeline::PipelineConfig cfg;
    if (!config_file.empty()) pipeline::load_config(fs::path(config_file), cfg);
    for (const auto& [k, v] : values) cfg.set(k, v);
    cfg.finalize();
    return cfg;
  }
};

std::string flag_name(const std::string& key) {
  std::string out = "--" + key;
  for (auto& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

void add_settings(CLI::App* app, Settings& s, std::initializer_list<const char*> keys) {
  app->add_option("--config", s.config_file, "key=value configuration file");
  app->add_flag("--print-config", s.print_config, "print the effective configuration and exit");
  for (const char* key : keys) {
    std::string help;
    for (const auto& [k, h] : kKeys) {
      if (k == key) help = h;
    }
    app->add_option_function<std::string>(
        flag_name(key), [&s, k = std::string(key)](const std::string& v) { s.values[k] = v; }, help);
  }
}

// Returns true when the caller should stop after printing.
bool maybe_print(const Settings& s, const pipeline::PipelineConfig& cfg) {
  if (!s.print_config) return false;
  pipeline::print_config(std::cout, cfg);
  std::cout << "config_hash=" << pipeline::hex_hash(cfg.hash()) << '\n';
  return true;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
  } else {
    auto out = open_out(path);
    fn(out);
  }
}

void need(const fs::path& p, const char* what) {
  if (p.empty()) throw ConfigError(std::string("missing --") + what);
}

std::vector<rules::RuleRecord> load_rules(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rules file " + path);
  return rules::read_rules_tsv(in, vocab, path);
}

linkpred::EnrichmentConfig enrichment_config(const pipeline::PipelineConfig& cfg, const Vocabulary& vocab) {
  linkpred::EnrichmentConfig out;
  for (const auto& label : cfg.target_relations) out.target_relations.push_back(vocab.relation_id(label));
  out.sample_entities = cfg.sample_entities;
  out.sample_relations = cfg.sample_relations;
  out.top_k = cfg.top_k.front();
  out.seed = cfg.seed;
  out.workers = cfg.workers;
  return out;
}

embed::ModelParams load_checkpoint(const std::string& path, const pipeline::PipelineConfig& cfg,
                                   const KnowledgeGraph& kg) {
  return embed::load_model(fs::path(path), {cfg.model, kg.entity_count(), kg.relation_count(), std::nullopt});
}

int run(int argc, char** argv) {
  CLI::App app{"Knowledge graph embedding, enrichment and rule mining"};
  app.require_subcommand(1);

  // split
  auto* split_cmd = app.add_subcommand("split", "split a triple file into train/valid/test");
  std::string split_input, split_out = ".", split_ratios = "0.8,0.1,0.1";
  std::uint64_t split_seed = 42;
  split_cmd->add_option("--input", split_input, "triples (TSV)")->required();
  split_cmd->add_option("--ratios", split_ratios, "train,valid,test fractions summing to 1");
  split_cmd->add_option("--seed", split_seed, "shuffle seed");
  split_cmd->add_option("--out", split_out, "output directory");

  // pipeline
  Settings pipe;
  bool resume = false;
  auto* pipe_cmd = app.add_subcommand("pipeline", "train, enrich, mine, diff and evaluate");
  add_settings(pipe_cmd, pipe,
               {"train", "valid", "test", "out", "model", "dim", "lr", "epochs", "margin", "negatives", "batch",
                "target_relations", "sample_entities", "sample_relations", "top_k", "max_body", "min_support",
                "min_hc", "min_pca", "allow_constants", "forbid_head_echo", "mode", "seed", "workers"});
  pipe_cmd->add_flag("--resume", resume, "reuse model.ckpt if its header matches");

  // train
  Settings tr;
  std::string tr_ckpt, tr_loss;
  auto* train_cmd = app.add_subcommand("train", "train an embedding model");
  add_settings(train_cmd, tr,
               {"train", "model", "dim", "lr", "epochs", "margin", "negatives", "batch", "seed", "workers"});
  train_cmd->add_option("--checkpoint", tr_ckpt, "model output path");
  train_cmd->add_option("--loss-trace", tr_loss, "epoch,loss CSV output");

  // enrich
  Settings en;
  std::string en_ckpt, en_graph, en_manifest;
  auto* enrich_cmd = app.add_subcommand("enrich", "add the top-k predicted triples to a graph");
  add_settings(enrich_cmd, en,
               {"train", "model", "target_relations", "sample_entities", "sample_relations", "top_k", "seed",
                "workers"});
  enrich_cmd->add_option("--checkpoint", en_ckpt, "trained model")->required();
  enrich_cmd->add_option("--out-graph", en_graph, "enriched graph output (TSV)");
  enrich_cmd->add_option("--manifest", en_manifest, "added triples with scores (TSV)");

  // mine
  Settings mi;
  std::string mi_out;
  auto* mine_cmd = app.add_subcommand("mine", "mine closed Horn rules");
  add_settings(mine_cmd, mi,
               {"train", "max_body", "min_support", "min_hc", "min_pca", "allow_constants", "forbid_head_echo",
                "seed", "workers"});
  mine_cmd->add_option("--output", mi_out, "rules TSV (default stdout)");

  // eval
  Settings ev;
  std::string ev_ckpt, ev_rules, ev_body, ev_out;
  auto* eval_cmd = app.add_subcommand("eval", "Hits@k and MRR of a model or a rule set");
  add_settings(eval_cmd, ev, {"train", "valid", "test", "model", "mode", "seed", "workers"});
  auto* ev_ckpt_opt = eval_cmd->add_option("--checkpoint", ev_ckpt, "trained model");
  auto* ev_rules_opt = eval_cmd->add_option("--rules", ev_rules, "rules TSV");
  ev_ckpt_opt->excludes(ev_rules_opt);
  eval_cmd->add_option("--body-graph", ev_body, "graph the rule bodies are matched against (default: train)");
  eval_cmd->add_option("--output", ev_out, "report file (default stdout)");

  // diff
  std::string df_orig, df_enriched, df_before, df_after, df_out = ".";
  auto* diff_cmd = app.add_subcommand("diff", "compare rules mined before and after enrichment");
  diff_cmd->add_option("--original", df_orig, "original graph (TSV)")->required();
  diff_cmd->add_option("--enriched", df_enriched, "enriched graph (TSV)")->required();
  diff_cmd->add_option("--before", df_before, "rules mined on the original graph")->required();
  diff_cmd->add_option("--after", df_after, "rules mined on the enriched graph")->required();
  diff_cmd->add_option("--out", df_out, "output directory");

  // apply
  std::string ap_graph, ap_rules, ap_out;
  auto* apply_cmd = app.add_subcommand("apply", "list the new facts a rule set predicts");
  apply_cmd->add_option("--graph", ap_graph, "graph (TSV)")->required();
  apply_cmd->add_option("--rules", ap_rules, "rules TSV")->required();
  apply_cmd->add_option("--output", ap_out, "predictions TSV (default stdout)");

  // stats
  std::string st_graph;
  auto* stats_cmd = app.add_subcommand("stats", "graph statistics and relation functionality");
  stats_cmd->add_option("--graph", st_graph, "graph (TSV)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*split_cmd) {
    std::vector<double> r;
    std::stringstream ss(split_ratios);
    std::string item;
    try {
      while (std::getline(ss, item, ',')) r.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("--ratios: expected three numbers");
    }
    if (r.size() != 3) throw ConfigError("--ratios: expected three numbers");
    Vocabulary vocab;
    auto triples = encode_triples(read_labeled_triples(split_input), vocab);
    const auto parts = pipeline::split_triples(std::move(triples), {r[0], r[1], r[2]}, split_seed);
    fs::create_directories(split_out);
    for (const auto& [name, part] : {std::pair{"train.tsv", &parts.train}, std::pair{"valid.tsv", &parts.valid},
                                     std::pair{"test.tsv", &parts.test}}) {
      auto out = open_out(fs::path(split_out) / name);
      write_triples(out, *part, vocab);
    }
    std::cerr << "train=" << parts.train.size() << " valid=" << parts.valid.size() << " test=" << parts.test.size()
              << " moved_to_train=" << parts.moved_to_train << '\n';
    return 0;
  }

  if (*pipe_cmd) {
    const auto cfg = pipe.resolve();
    if (maybe_print(pipe, cfg)) return 0;
    const auto result = pipeline::run_pipeline(cfg, {resume, &std::cerr});
    std::cerr << "rules_before=" << result.rules_before << '\n';
    for (const auto& k : result.per_k) {
      const auto& s = k.summary;
      std::cerr << "top_k=" << k.k << " added=" << k.added_count << " after=" << s.after.count
                << " new=" << s.new_rules.count << " dropped=" << s.dropped.count << " same=" << s.same.count << '\n';
    }
    return 0;
  }

  if (*train_cmd) {
    const auto cfg = tr.resolve();
    if (maybe_print(tr, cfg)) return 0;
    need(cfg.train_path, "train");
    need(tr_ckpt, "checkpoint");
    const auto kg = load_triples(cfg.train_path);
    auto init = embed::init_model(cfg.model, kg.entity_count(), kg.relation_count(), cfg.training);
    auto result = embed::train(std::move(init), kg, cfg.training);
    embed::save_model(fs::path(tr_ckpt), result.params, cfg.training_hash());
    if (!tr_loss.empty()) {
      auto out = open_out(tr_loss);
      embed::write_loss_trace(out, result.epoch_loss);
    }
    if (!result.epoch_loss.empty()) std::cerr << "final_loss=" << result.epoch_loss.back() << '\n';
    return 0;
  }

  if (*enrich_cmd) {
    const auto cfg = en.resolve();
    if (maybe_print(en, cfg)) return 0;
    need(cfg.train_path, "train");
    const auto kg = load_triples(cfg.train_path);
    const auto params = load_checkpoint(en_ckpt, cfg, kg);
    const auto result = linkpred::enrich(kg, params, enrichment_config(cfg, kg.vocab()));
    if (!en_graph.empty()) {
      auto out = open_out(en_graph);
      write_triples(out, result.enriched.triples(), kg.vocab());
    }
    with_output(en_manifest, [&](std::ostream& out) { linkpred::write_manifest(out, result.added, kg.vocab()); });
    std::cerr << "candidates=" << result.candidate_count << " added=" << result.added.size() << '\n';
    return 0;
  }

  if (*mine_cmd) {
    const auto cfg = mi.resolve();
    if (maybe_print(mi, cfg)) return 0;
    need(cfg.train_path, "train");
    const auto kg = load_triples(cfg.train_path);
    std::vector<rules::RuleRecord> records;
    for (const auto& m : rules::mine_rules(kg, cfg.miner)) records.push_back(rules::to_record(m));
    const std::vector<std::string> header = {"config_hash=" + pipeline::hex_hash(cfg.hash())};
    with_output(mi_out, [&](std::ostream& out) { rules::write_rules_tsv(out, records, kg.vocab(), header); });
    std::cerr << "rules=" << records.size() << '\n';
    return 0;
  }

  if (*eval_cmd) {
    const auto cfg = ev.resolve();
    if (maybe_print(ev, cfg)) return 0;
    const auto split = pipeline::load_pipeline_data(cfg);
    eval::EvalReport report;
    if (!ev_ckpt.empty()) {
      const auto params = load_checkpoint(ev_ckpt, cfg, split.train);
      report = eval::evaluate_embeddings(params, split, cfg.mode, cfg.workers);
    } else if (!ev_rules.empty()) {
      const auto records = load_rules(ev_rules, split.train.vocab());
      if (records.empty()) std::cerr << "warning: no rules; reporting zeros\n";
      if (ev_body.empty()) {
        report = eval::evaluate_rules(records, split.train, split, cfg.mode, cfg.workers);
      } else {
        const auto body = load_triples(ev_body, split.train.shared_vocab());
        report = eval::evaluate_rules(records, body, split, cfg.mode, cfg.workers);
      }
    } else {
      throw ConfigError("eval needs --checkpoint or --rules");
    }
    with_output(ev_out, [&](std::ostream& out) { eval::write_report(out, report); });
    return 0;
  }

  if (*diff_cmd) {
    const auto original = load_triples(df_orig);
    const auto enriched = load_triples(df_enriched, original.shared_vocab());
    const auto before = load_rules(df_before, original.vocab());
    const auto after = load_rules(df_after, original.vocab());
    const auto diff = analysis::diff_rules(before, after, original.vocab());
    const auto summary = analysis::summarize_confidence(diff, original, enriched);
    fs::create_directories(df_out);
    const auto& vocab = original.vocab();
    for (const auto& [name, recs] : {std::pair{"rules_new.tsv", &summary.rescored.new_rules},
                                     std::pair{"rules_dropped.tsv", &summary.rescored.dropped},
                                     std::pair{"rules_same.tsv", &summary.rescored.same}}) {
      auto out = open_out(fs::path(df_out) / name);
      rules::write_rules_tsv(out, *recs, vocab);
    }
    auto out = open_out(fs::path(df_out) / "summary.txt");
    analysis::write_summary(out, summary);
    analysis::write_summary(std::cout, summary);
    return 0;
  }

  if (*apply_cmd) {
    const auto kg = load_triples(ap_graph);
    const auto records = load_rules(ap_rules, kg.vocab());
    const auto predictions = eval::apply_rules(records, kg);
    with_output(ap_out, [&](std::ostream& out) { eval::write_predictions(out, predictions, kg.vocab()); });
    return 0;
  }

  if (*stats_cmd) {
    write_graph_stats(std::cout, load_triples(st_graph));
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
