#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace secres::detail {

// Open-addressing map from packed 64-bit keys to summed values. Keys equal to
// `empty_key` are reserved. Iteration order of `drain` is sorted by key, so
// results do not depend on the hash layout.
template <class Value>
class KeyAccumulator {
 public:
  static constexpr std::uint64_t empty_key = ~std::uint64_t{0};

  explicit KeyAccumulator(std::size_t expected = 64) { rehash(capacity_for(expected)); }

  void add(std::uint64_t key, const Value& v) {
    if ((size_ + 1) * 10 > keys_.size() * 7) rehash(keys_.size() * 2);
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == key) {
        values_[i] += v;
        return;
      }
      if (keys_[i] == empty_key) {
        keys_[i] = key;
        values_[i] = v;
        ++size_;
        return;
      }
      i = (i + 1) & mask_;
    }
  }

  std::size_t size() const { return size_; }

  // Entries with value exactly zero are dropped.
  std::vector<std::pair<std::uint64_t, Value>> drain() {
    std::vector<std::pair<std::uint64_t, Value>> out;
    out.reserve(size_);
    for (std::size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != empty_key && values_[i] != Value{}) out.emplace_back(keys_[i], values_[i]);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    keys_.assign(keys_.size(), empty_key);
    size_ = 0;
    return out;
  }

 private:
  static std::size_t capacity_for(std::size_t n) {
    std::size_t c = 16;
    while (c * 7 < n * 10) c <<= 1;
    return c;
  }

  std::size_t slot(std::uint64_t key) const {
    key ^= key >> 33;
    key *= 0xff51afd7ed558ccdULL;
    key ^= key >> 33;
    key *= 0xc4ceb9fe1a85ec53ULL;
    key ^= key >> 33;
    return static_cast<std::size_t>(key) & mask_;
  }

  void rehash(std::size_t cap) {
    std::vector<std::uint64_t> old_keys(cap, empty_key);
    std::vector<Value> old_values(cap);
    old_keys.swap(keys_);
    old_values.swap(values_);
    mask_ = cap - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i)
      if (old_keys[i] != empty_key) add(old_keys[i], old_values[i]);
  }

  std::vector<std::uint64_t> keys_;
  std::vector<Value> values_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace secres::detail
