#include "dsnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "dsnn/error.hpp"

namespace dsnn {

namespace {

constexpr char kMagic[4] = {'S', 'N', 'N', 'W'};

class Writer {
 public:
  void bytes(const void* src, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(src);
    out_.insert(out_.end(), p, p + n);
  }
  template <typename T>
  void le(T value) {
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      out_.push_back(static_cast<std::uint8_t>(u & 0xff));
      u = static_cast<U>(u >> 8);
    }
  }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  void need(std::size_t n) const {
    if (pos_ + n > in_.size()) {
      throw LengthError("checkpoint truncated at byte " + std::to_string(pos_));
    }
  }
  template <typename T>
  T le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  double f64() { return std::bit_cast<double>(le<std::uint64_t>()); }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(std::span<const SparseLayer> layers) {
  if (layers.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw ArgumentError("too many layers for checkpoint format");
  }
  Writer w;
  w.bytes(kMagic, 4);
  w.le<std::uint16_t>(kCheckpointVersion);
  w.le<std::uint16_t>(static_cast<std::uint16_t>(layers.size()));
  for (const SparseLayer& layer : layers) {
    const std::size_t n = layer.mask.size();
    w.le<std::uint32_t>(static_cast<std::uint32_t>(layer.n_post()));
    w.le<std::uint32_t>(static_cast<std::uint32_t>(layer.n_pre()));
    for (double v : layer.weights.data()) w.f64(v);
    std::vector<std::uint8_t> packed((n + 7) / 8, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (layer.mask.active(i)) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    }
    w.bytes(packed.data(), packed.size());
    for (double v : layer.momentum.data()) w.f64(v);
  }
  return w.take();
}

std::vector<SparseLayer> decode_checkpoint(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) throw FormatError("not an SNNW checkpoint");
  const auto version = r.le<std::uint16_t>();
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto count = r.le<std::uint16_t>();
  std::vector<SparseLayer> layers;
  layers.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    const std::size_t n_post = r.le<std::uint32_t>();
    const std::size_t n_pre = r.le<std::uint32_t>();
    const std::size_t n = n_post * n_pre;
    r.need(n * 8);
    Tensor weights({n_post, n_pre});
    for (auto& v : weights.data()) v = r.f64();
    const auto packed = r.take((n + 7) / 8);
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = (packed[i / 8] >> (i % 8)) & 1u;
    r.need(n * 8);
    Tensor momentum({n_post, n_pre});
    for (auto& v : momentum.data()) v = r.f64();
    layers.emplace_back(std::move(weights), Mask(n_post, n_pre, std::move(bits)),
                        std::move(momentum));
  }
  if (!r.done()) throw FormatError("trailing bytes after checkpoint payload");
  return layers;
}

void save_checkpoint(std::span<const SparseLayer> layers, const std::filesystem::path& path) {
  const auto bytes = encode_checkpoint(layers);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SparseLayer> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes(std::istreambuf_iterator<char>(in), {});
  return decode_checkpoint(bytes);
}

}  // namespace dsnn
