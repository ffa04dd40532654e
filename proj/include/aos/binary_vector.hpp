#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aos {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fixed-length bit string, packed into 64-bit words. Bits past size() in the
// last word are always zero so word-level popcounts stay exact.
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(std::size_t size, bool value = false);

  static BinaryVector from_string(std::string_view bits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  std::size_t count() const;
  std::string to_string() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BinaryVector&, const BinaryVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Number of positions where x and y differ. Throws DimensionError on length
// mismatch.
std::size_t hamming(const BinaryVector& x, const BinaryVector& y);

// Indices of positions where x and y differ, ascending.
std::vector<std::size_t> differing_positions(const BinaryVector& x, const BinaryVector& y);

}  // namespace aos
