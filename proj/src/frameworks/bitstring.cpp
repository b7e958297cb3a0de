#include "skillcompat/frameworks/bitstring.hpp"

#include <fstream>
#include <sstream>

#include "skillcompat/util/error.hpp"
#include "skillcompat/util/random.hpp"

namespace skillcompat::frameworks {

namespace {

constexpr const char* kPoolMagic = "skillcompat-pool";
constexpr const char* kPoolVersion = "v1";

std::string hex64(uint64_t v) {
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << v;
  return out.str();
}

}  // namespace

Bitstring::Bitstring(std::string id, uint64_t seed, std::vector<uint8_t> bits)
    : id_(std::move(id)), seed_(seed), bits_(std::move(bits)) {
  for (uint8_t b : bits_) {
    if (b > 1) throw ConfigError("bitstring '" + id_ + "' has a non-binary entry");
  }
}

Bitstring Bitstring::generate(std::string id, uint64_t seed, size_t length) {
  Rng rng(seed);
  std::vector<uint8_t> bits(length);
  for (auto& b : bits) b = rng.coin() ? 1 : 0;
  return Bitstring(std::move(id), seed, std::move(bits));
}

Bitstring Bitstring::from_string(std::string id, uint64_t seed, const std::string& text) {
  std::vector<uint8_t> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("bitstring '" + id + "': unexpected character '" + c + "'");
    bits.push_back(c == '1' ? 1 : 0);
  }
  return Bitstring(std::move(id), seed, std::move(bits));
}

bool Bitstring::senior_at(size_t ply) const {
  if (ply >= bits_.size()) throw ConfigError("bitstring '" + id_ + "' is shorter than the game");
  return bits_[ply] != 0;
}

std::string Bitstring::to_string(size_t n) const {
  std::string out;
  n = std::min(n, bits_.size());
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(bits_[i] ? '1' : '0');
  return out;
}

BitstringPool::BitstringPool(uint64_t seed, size_t length, std::vector<Bitstring> bitstrings)
    : seed_(seed), length_(length), bitstrings_(std::move(bitstrings)) {
  for (const auto& b : bitstrings_) {
    if (b.size() != length_) throw ConfigError("bitstring '" + b.id() + "' has the wrong length");
  }
}

BitstringPool BitstringPool::generate(uint64_t seed, size_t count, size_t length) {
  std::vector<Bitstring> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    out.push_back(Bitstring::generate("b" + std::to_string(i), derive_seed(seed, i), length));
  }
  return BitstringPool(seed, length, std::move(out));
}

BitstringPool BitstringPool::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bitstring pool '" + path + "'");
  std::string magic, version;
  uint64_t seed = 0;
  size_t length = 0, count = 0;
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  if (!(hs >> magic >> version >> seed >> length >> count) || magic != kPoolMagic || version != kPoolVersion) {
    throw ParseError(path + ":1: not a bitstring pool file");
  }
  std::vector<Bitstring> bits;
  std::string line;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string id, text;
    uint64_t bseed = 0;
    if (!(ls >> id >> bseed >> text)) throw ParseError(path + ":" + std::to_string(line_no) + ": malformed entry");
    bits.push_back(Bitstring::from_string(id, bseed, text));
  }
  if (bits.size() != count) throw ParseError(path + ": expected " + std::to_string(count) + " bitstrings");
  return BitstringPool(seed, length, std::move(bits));
}

void BitstringPool::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write bitstring pool '" + path + "'");
  out << kPoolMagic << ' ' << kPoolVersion << ' ' << seed_ << ' ' << length_ << ' ' << bitstrings_.size() << '\n';
  for (const auto& b : bitstrings_) out << b.id() << ' ' << b.seed() << ' ' << b.to_string() << '\n';
  if (!out) throw ConfigError("failed writing bitstring pool '" + path + "'");
}

const Bitstring& BitstringPool::at(size_t i) const {
  if (i >= bitstrings_.size()) throw ConfigError("bitstring pool has only " + std::to_string(size()) + " entries");
  return bitstrings_[i];
}

std::string BitstringPool::id() const {
  uint64_t h = fnv1a(std::to_string(seed_) + ":" + std::to_string(length_));
  for (const auto& b : bitstrings_) h = fnv1a(b.id() + "=" + b.to_string() + ";", h);
  return hex64(h);
}

}  // namespace skillcompat::frameworks
