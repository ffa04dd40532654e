#include "aos/binary_vector.hpp"

namespace aos {

BinaryVector::BinaryVector(std::size_t size, bool value)
    : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  if (value && (size & 63) != 0) {
    words_.back() &= (std::uint64_t{1} << (size & 63)) - 1;
  }
}

BinaryVector BinaryVector::from_string(std::string_view bits) {
  BinaryVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("binary string may only contain '0' and '1'");
    }
  }
  return v;
}

std::size_t BinaryVector::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::string BinaryVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::size_t hamming(const BinaryVector& x, const BinaryVector& y) {
  if (x.size() != y.size()) {
    throw DimensionError("hamming: length mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  const auto& a = x.words();
  const auto& b = y.words();
  std::size_t total = 0;
  for (std::size_t w = 0; w < a.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  }
  return total;
}

std::vector<std::size_t> differing_positions(const BinaryVector& x, const BinaryVector& y) {
  if (x.size() != y.size()) throw DimensionError("differing_positions: length mismatch");
  std::vector<std::size_t> out;
  const auto& a = x.words();
  const auto& b = y.words();
  for (std::size_t w = 0; w < a.size(); ++w) {
    std::uint64_t diff = a[w] ^ b[w];
    while (diff != 0) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(diff)));
      diff &= diff - 1;
    }
  }
  return out;
}

}  // namespace aos
