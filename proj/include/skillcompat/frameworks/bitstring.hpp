#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skillcompat::frameworks {

// Per-ply senior (1) / junior (0) schedule for one STT game.
class Bitstring {
 public:
  Bitstring(std::string id, uint64_t seed, std::vector<uint8_t> bits);

  // Fair coin per ply, drawn from `seed`.
  static Bitstring generate(std::string id, uint64_t seed, size_t length);
  static Bitstring from_string(std::string id, uint64_t seed, const std::string& bits);

  const std::string& id() const { return id_; }
  uint64_t seed() const { return seed_; }
  size_t size() const { return bits_.size(); }
  bool senior_at(size_t ply) const;
  std::string to_string(size_t n) const;
  std::string to_string() const { return to_string(bits_.size()); }

 private:
  std::string id_;
  uint64_t seed_;
  std::vector<uint8_t> bits_;
};

// Fixed set of bitstrings shared by every matchup in a suite.
class BitstringPool {
 public:
  BitstringPool() = default;
  BitstringPool(uint64_t seed, size_t length, std::vector<Bitstring> bitstrings);

  static BitstringPool generate(uint64_t seed, size_t count, size_t length);

  // Text format: header line "skillcompat-pool v1 <seed> <length> <count>",
  // then one "<id> <seed> <bits>" line per bitstring.
  static BitstringPool load(const std::string& path);
  void save(const std::string& path) const;

  uint64_t seed() const { return seed_; }
  size_t length() const { return length_; }
  size_t size() const { return bitstrings_.size(); }
  const Bitstring& at(size_t i) const;

  // Content hash in hex; identical pools have identical ids.
  std::string id() const;

 private:
  uint64_t seed_ = 0;
  size_t length_ = 0;
  std::vector<Bitstring> bitstrings_;
};

}  // namespace skillcompat::frameworks
