#include "kgr/pipeline/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kgr/core/random.hpp"

namespace kgr::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int out{};
  const auto* end = value.data() + value.size();
  const auto [p, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || p != end) throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ConfigError(key + ": expected true/false, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_same_v<T, std::string>) {
      out += items[i];
    } else {
      out += std::to_string(items[i]);
    }
  }
  return out;
}

std::uint64_t hash_entries(const std::map<std::string, std::string>& entries) {
  std::uint64_t h = fnv1a64("");
  for (const auto& [k, v] : entries) {
    h = fnv1a64(k, h);
    h = fnv1a64("=", h);
    h = fnv1a64(v, h);
    h = fnv1a64("\n", h);
  }
  return h;
}

}  // namespace

void PipelineConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "train") {
    train_path = value;
  } else if (key == "valid") {
    valid_path = value;
  } else if (key == "test") {
    test_path = value;
  } else if (key == "out") {
    output_dir = value;
  } else if (key == "model") {
    model = embed::parse_model_kind(value);
  } else if (key == "dim") {
    training.dim = parse_int<std::size_t>(key, value);
  } else if (key == "lr") {
    training.learning_rate = parse_double(key, value);
  } else if (key == "epochs") {
    training.epochs = parse_int<std::size_t>(key, value);
  } else if (key == "margin") {
    training.margin = parse_double(key, value);
  } else if (key == "negatives") {
    training.negatives = parse_int<std::size_t>(key, value);
  } else if (key == "batch") {
    training.batch_size = parse_int<std::size_t>(key, value);
  } else if (key == "target_relations") {
    target_relations = split_list(value);
  } else if (key == "sample_entities") {
    sample_entities = parse_int<std::size_t>(key, value);
  } else if (key == "sample_relations") {
    sample_relations = parse_int<std::size_t>(key, value);
  } else if (key == "top_k") {
    top_k.clear();
    for (const auto& item : split_list(value)) top_k.push_back(parse_int<std::size_t>(key, item));
    if (top_k.empty()) throw ConfigError("top_k: empty list");
  } else if (key == "max_body") {
    miner.max_body_atoms = parse_int<std::size_t>(key, value);
  } else if (key == "min_support") {
    miner.min_support = parse_int<std::uint64_t>(key, value);
  } else if (key == "min_hc") {
    miner.min_head_coverage = parse_double(key, value);
  } else if (key == "min_pca") {
    miner.min_pca_confidence = parse_double(key, value);
  } else if (key == "allow_constants") {
    miner.allow_constants = parse_bool(key, value);
  } else if (key == "forbid_head_echo") {
    miner.forbid_head_echo = parse_bool(key, value);
  } else if (key == "mode") {
    mode = eval::parse_mode(value);
  } else if (key == "seed") {
    seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "workers") {
    workers = parse_int<std::size_t>(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void PipelineConfig::finalize() {
  if (workers == 0) throw ConfigError("workers must be >= 1");
  training.seed = seed;
  training.workers = workers;
  miner.workers = workers;
  training.validate();
  miner.validate();
  for (auto k : top_k) {
    if (k == 0) throw ConfigError("top_k entries must be >= 1");
  }
  if (sample_entities == 0) throw ConfigError("sample_entities must be >= 1");
  if (sample_relations == 0) throw ConfigError("sample_relations must be >= 1");
}

std::map<std::string, std::string> PipelineConfig::entries() const {
  return {
      {"train", train_path.string()},
      {"valid", valid_path.string()},
      {"test", test_path.string()},
      {"out", output_dir.string()},
      {"model", std::string(embed::model_name(model))},
      {"dim", std::to_string(training.dim)},
      {"lr", fmt_double(training.learning_rate)},
      {"epochs", std::to_string(training.epochs)},
      {"margin", fmt_double(training.margin)},
      {"negatives", std::to_string(training.negatives)},
      {"batch", std::to_string(training.batch_size)},
      {"target_relations", join(target_relations)},
      {"sample_entities", std::to_string(sample_entities)},
      {"sample_relations", std::to_string(sample_relations)},
      {"top_k", join(top_k)},
      {"max_body", std::to_string(miner.max_body_atoms)},
      {"min_support", std::to_string(miner.min_support)},
      {"min_hc", fmt_double(miner.min_head_coverage)},
      {"min_pca", fmt_double(miner.min_pca_confidence)},
      {"allow_constants", miner.allow_constants ? "true" : "false"},
      {"forbid_head_echo", miner.forbid_head_echo ? "true" : "false"},
      {"mode", std::string(eval::mode_name(mode))},
      {"seed", std::to_string(seed)},
      {"workers", std::to_string(workers)},
  };
}

std::uint64_t PipelineConfig::hash() const {
  auto e = entries();
  e.erase("out");
  return hash_entries(e);
}

std::uint64_t PipelineConfig::training_hash() const {
  const auto all = entries();
  std::map<std::string, std::string> e;
  for (const char* k : {"train", "model", "dim", "lr", "epochs", "margin", "negatives", "batch", "seed", "workers"}) {
    e.emplace(k, all.at(k));
  }
  return hash_entries(e);
}

void load_config(std::istream& in, PipelineConfig& config, const std::string& source_name) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source_name + ":" + std::to_string(lineno) + ": expected key=value");
    }
    try {
      config.set(t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source_name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void load_config(const std::filesystem::path& path, PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  load_config(in, config, path.string());
}

void print_config(std::ostream& out, const PipelineConfig& config) {
  for (const auto& [k, v] : config.entries()) out << k << '=' << v << '\n';
}

std::string hex_hash(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace kgr::pipeline
