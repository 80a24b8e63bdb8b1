#include "kgr/pipeline/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include "kgr/embed/checkpoint.hpp"
#include "kgr/embed/trainer.hpp"
#include "kgr/eval/rule_predict.hpp"
#include "kgr/linkpred/enrich.hpp"
#include "kgr/rules/miner.hpp"
#include "kgr/simd/kernels.hpp"

namespace kgr::pipeline {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

class Runner {
 public:
  Runner(const PipelineConfig& config, const RunOptions& options, PipelineResult& result)
      : config_(config), options_(options), result_(result) {}

  template <typename Fn>
  void stage(const std::string& name, Fn&& fn) {
    if (options_.log) *options_.log << "[" << name << "]" << std::endl;
    const auto start = std::chrono::steady_clock::now();
    try {
      fn();
    } catch (const NumericalError& e) {
      fail(name, e);
      throw NumericalError("stage " + name + ": " + e.what());
    } catch (const ConfigError& e) {
      fail(name, e);
      throw ConfigError("stage " + name + ": " + e.what());
    } catch (const DataError& e) {
      fail(name, e);
      throw DataError("stage " + name + ": " + e.what());
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    result_.timings.push_back({name, dt.count()});
  }

  void write_manifest(const std::string& status) const {
    auto out = open_out(config_.output_dir / "manifest.txt");
    out << "config_hash=" << hex_hash(config_.hash()) << '\n'
        << "training_hash=" << hex_hash(config_.training_hash()) << '\n'
        << "seed=" << config_.seed << '\n'
        << "workers=" << config_.workers << '\n'
        << "isa=" << simd::isa_name(simd::kernels().isa) << '\n'
        << "resumed_model=" << (result_.resumed_model ? "true" : "false") << '\n'
        << "status=" << status << '\n';
    for (const auto& t : result_.timings) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", t.seconds);
      out << "time." << t.name << '=' << buf << '\n';
    }
  }

 private:
  void fail(const std::string& name, const std::exception& e) const {
    try {
      write_manifest("failed at " + name + ": " + e.what());
    } catch (const std::exception&) {
    }
  }

  const PipelineConfig& config_;
  const RunOptions& options_;
  PipelineResult& result_;
};

void write_report_file(const fs::path& path, const eval::EvalReport& report, const std::vector<std::string>& header) {
  auto out = open_out(path);
  for (const auto& h : header) out << "# " << h << '\n';
  eval::write_report(out, report);
}

void write_rules_file(const fs::path& path, std::span<const rules::RuleRecord> records, const Vocabulary& vocab,
                      const std::vector<std::string>& header) {
  auto out = open_out(path);
  rules::write_rules_tsv(out, records, vocab, header);
}

std::vector<rules::RuleRecord> mine_records(const KnowledgeGraph& kg, const rules::MinerConfig& cfg) {
  std::vector<rules::RuleRecord> out;
  for (const auto& m : rules::mine_rules(kg, cfg)) out.push_back(rules::to_record(m));
  return out;
}

}  // namespace

DatasetSplit load_pipeline_data(const PipelineConfig& config) {
  if (config.train_path.empty()) throw ConfigError("no training file given");
  if (config.test_path.empty()) throw ConfigError("no test file given");
  return load_split(config.train_path, config.valid_path, config.test_path);
}

std::vector<std::string> output_header(const PipelineConfig& config) {
  return {"config_hash=" + hex_hash(config.hash()), "seed=" + std::to_string(config.seed)};
}

PipelineResult run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  PipelineResult result;
  result.config_hash = config.hash();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw DataError("cannot create output directory " + config.output_dir.string() + ": " + ec.message());
  {
    auto out = open_out(config.output_dir / "config.txt");
    print_config(out, config);
  }

  Runner run(config, options, result);
  const auto header = output_header(config);
  const fs::path& dir = config.output_dir;

  DatasetSplit split;
  run.stage("load", [&] { split = load_pipeline_data(config); });
  const KnowledgeGraph& g = split.train;
  const Vocabulary& vocab = g.vocab();

  embed::ModelParams params;
  run.stage("train", [&] {
    const fs::path ckpt = dir / "model.ckpt";
    const embed::CheckpointExpectation expect{config.model, g.entity_count(), g.relation_count(),
                                              config.training_hash()};
    if (options.resume && fs::exists(ckpt)) {
      const auto h = embed::read_checkpoint_header(ckpt);
      if (h.config_hash == expect.config_hash && h.kind == config.model && h.entity_count == g.entity_count() &&
          h.relation_count == g.relation_count()) {
        params = embed::load_model(ckpt, expect);
        result.resumed_model = true;
        return;
      }
      if (options.log) *options.log << "checkpoint header does not match; retraining" << std::endl;
    }
    auto init = embed::init_model(config.model, g.entity_count(), g.relation_count(), config.training);
    auto trained = embed::train(std::move(init), g, config.training);
    params = std::move(trained.params);
    result.epoch_loss = std::move(trained.epoch_loss);
    embed::save_model(ckpt, params, config.training_hash());
    auto out = open_out(dir / "loss.csv");
    embed::write_loss_trace(out, result.epoch_loss);
  });

  linkpred::EnrichmentConfig enrich_cfg;
  for (const auto& label : config.target_relations) enrich_cfg.target_relations.push_back(vocab.relation_id(label));
  enrich_cfg.sample_entities = config.sample_entities;
  enrich_cfg.sample_relations = config.sample_relations;
  enrich_cfg.seed = config.seed;
  enrich_cfg.workers = config.workers;

  std::vector<KnowledgeGraph> enriched;
  for (std::size_t k : config.top_k) {
    const std::string tag = "topk-" + std::to_string(k);
    run.stage("enrich." + tag, [&] {
      fs::create_directories(dir / tag);
      enrich_cfg.top_k = k;
      auto er = linkpred::enrich(g, params, enrich_cfg);
      auto manifest = open_out(dir / tag / "added.tsv");
      linkpred::write_manifest(manifest, er.added, vocab);
      save_triples(dir / tag / "enriched_train.tsv", er.enriched);
      result.per_k.push_back({k, er.candidate_count, er.added.size(), {}, {}});
      enriched.push_back(std::move(er.enriched));
    });
  }

  std::vector<rules::RuleRecord> before;
  run.stage("mine.original", [&] {
    before = mine_records(g, config.miner);
    write_rules_file(dir / "rules_before.tsv", before, vocab, header);
    result.rules_before = before.size();
  });

  std::vector<std::vector<rules::RuleRecord>> after(config.top_k.size());
  for (std::size_t i = 0; i < config.top_k.size(); ++i) {
    const std::string tag = "topk-" + std::to_string(config.top_k[i]);
    run.stage("mine." + tag, [&] {
      after[i] = mine_records(enriched[i], config.miner);
      auto h = header;
      h.push_back("top_k=" + std::to_string(config.top_k[i]));
      write_rules_file(dir / tag / "rules_after.tsv", after[i], vocab, h);
    });
  }

  std::vector<analysis::RuleDiff> diffs(config.top_k.size());
  for (std::size_t i = 0; i < config.top_k.size(); ++i) {
    const std::string tag = "topk-" + std::to_string(config.top_k[i]);
    auto h = header;
    h.push_back("top_k=" + std::to_string(config.top_k[i]));
    run.stage("diff." + tag, [&] {
      diffs[i] = analysis::diff_rules(before, after[i], vocab);
      if (!diffs[i].identities_hold()) throw ContractError("rule diff partition identities violated");
    });
    run.stage("summary." + tag, [&] {
      auto& s = result.per_k[i].summary;
      s = analysis::summarize_confidence(diffs[i], g, enriched[i]);
      write_rules_file(dir / tag / "rules_new.tsv", s.rescored.new_rules, vocab, h);
      write_rules_file(dir / tag / "rules_dropped.tsv", s.rescored.dropped, vocab, h);
      write_rules_file(dir / tag / "rules_same.tsv", s.rescored.same, vocab, h);
      auto out = open_out(dir / tag / "summary.txt");
      analysis::write_summary(out, s, h);
    });
  }

  run.stage("eval.embeddings", [&] {
    result.embeddings = eval::evaluate_embeddings(params, split, config.mode, config.workers);
    write_report_file(dir / "eval_embeddings.txt", result.embeddings, header);
  });
  run.stage("eval.rules_before", [&] {
    result.rules_before_report = eval::evaluate_rules(before, g, split, config.mode, config.workers);
    write_report_file(dir / "eval_rules_before.txt", result.rules_before_report, header);
  });
  for (std::size_t i = 0; i < config.top_k.size(); ++i) {
    const std::string tag = "topk-" + std::to_string(config.top_k[i]);
    run.stage("eval.rules_after." + tag, [&] {
      auto& rep = result.per_k[i].rules_after;
      rep = eval::evaluate_rules(after[i], enriched[i], split, config.mode, config.workers);
      auto h = header;
      h.push_back("top_k=" + std::to_string(config.top_k[i]));
      write_report_file(dir / tag / "eval_rules_after.txt", rep, h);
    });
  }

  run.write_manifest("ok");
  return result;
}

}  // namespace kgr::pipeline
