#include "kgr/embed/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "kgr/core/random.hpp"

namespace kgr::embed {

namespace {

constexpr char kMagic[4] = {'K', 'G', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const char*>(p);
    buf_.insert(buf_.end(), c, c + n);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  const std::vector<char>& data() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> buf) : buf_(std::move(buf)) {}
  void need(std::size_t n) const {
    if (pos_ + n > buf_.size()) throw DataError("checkpoint truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
    pos_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view take(std::size_t n) {
    need(n);
    std::string_view v(buf_.data() + pos_, n);
    pos_ += n;
    return v;
  }
  std::size_t pos() const { return pos_; }
  std::size_t size() const { return buf_.size(); }
  std::string_view prefix(std::size_t n) const { return {buf_.data(), n}; }

 private:
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

CheckpointHeader read_header(Reader& r) {
  if (r.take(4) != std::string_view(kMagic, 4)) throw DataError("not a model checkpoint (bad magic)");
  CheckpointHeader h;
  h.version = r.u32();
  if (h.version != kVersion) throw DataError("unsupported checkpoint version " + std::to_string(h.version));
  const auto kind = r.u32();
  if (kind > static_cast<std::uint32_t>(ModelKind::RotatE)) throw DataError("unknown model kind in checkpoint");
  h.kind = static_cast<ModelKind>(kind);
  (void)r.u32();
  h.dim = r.u64();
  h.entity_count = r.u64();
  h.relation_count = r.u64();
  h.seed = r.u64();
  h.config_hash = r.u64();
  return h;
}

std::vector<char> slurp(std::istream& in) {
  return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

void save_model(std::ostream& out, const ModelParams& params, std::uint64_t config_hash) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kVersion);
  w.u32(static_cast<std::uint32_t>(params.kind()));
  w.u32(0);
  w.u64(params.dim());
  w.u64(params.entity_count());
  w.u64(params.relation_count());
  w.u64(params.seed());
  w.u64(config_hash);
  for (double v : params.entity_table()) w.f64(v);
  for (double v : params.relation_table()) w.f64(v);
  const auto checksum = fnv1a64(std::string_view(w.data().data(), w.data().size()));
  w.u64(checksum);
  out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
  if (!out) throw DataError("failed writing checkpoint");
}

void save_model(const std::filesystem::path& path, const ModelParams& params, std::uint64_t config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  save_model(out, params, config_hash);
}

ModelParams load_model(std::istream& in, const CheckpointExpectation& expect, CheckpointHeader* header_out) {
  Reader r(slurp(in));
  const auto h = read_header(r);

  auto mismatch = [](const char* what, auto want, auto got) {
    throw DataError(std::string("checkpoint ") + what + " mismatch: expected " + std::to_string(want) + ", found " +
                    std::to_string(got));
  };
  if (expect.kind && *expect.kind != h.kind) {
    throw DataError("checkpoint holds a " + std::string(model_name(h.kind)) + " model, expected " +
                    std::string(model_name(*expect.kind)));
  }
  if (expect.entity_count && *expect.entity_count != h.entity_count)
    mismatch("entity count", *expect.entity_count, h.entity_count);
  if (expect.relation_count && *expect.relation_count != h.relation_count)
    mismatch("relation count", *expect.relation_count, h.relation_count);
  if (expect.config_hash && *expect.config_hash != h.config_hash)
    mismatch("config hash", *expect.config_hash, h.config_hash);
  if (h.dim == 0) throw DataError("checkpoint has zero dimension");

  ModelParams params(h.kind, h.dim, h.entity_count, h.relation_count, h.seed);
  const std::size_t payload = (params.entity_table().size() + params.relation_table().size()) * 8;
  if (r.size() != r.pos() + payload + 8) throw DataError("checkpoint size does not match its header");
  for (auto& v : params.entity_table()) v = r.f64();
  for (auto& v : params.relation_table()) v = r.f64();
  const auto expected_sum = fnv1a64(r.prefix(r.pos()));
  if (r.u64() != expected_sum) throw DataError("checkpoint checksum mismatch");
  if (header_out) *header_out = h;
  return params;
}

ModelParams load_model(const std::filesystem::path& path, const CheckpointExpectation& expect,
                       CheckpointHeader* header_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return load_model(in, expect, header_out);
}

CheckpointHeader read_checkpoint_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<char> head(56);
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  if (in.gcount() != static_cast<std::streamsize>(head.size())) throw DataError("checkpoint truncated");
  Reader r(std::move(head));
  return read_header(r);
}

}  // namespace kgr::embed
