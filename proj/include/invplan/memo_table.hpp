#pragma once

#include <cstdint>
#include <deque>
#include <vector>

namespace invplan {

// Insert-only map from 64-bit keys to values. Values live in a deque, so
// references returned by find/insert stay valid while the table grows.
template <typename Value>
class MemoTable {
 public:
  explicit MemoTable(std::size_t capacity = 1024) {
    std::size_t c = 16;
    while (c < capacity * 2) c *= 2;
    slots_.assign(c, Slot{});
  }

  Value* find(std::uint64_t key) {
    for (std::size_t i = hash(key) & mask();; i = (i + 1) & mask()) {
      const Slot& s = slots_[i];
      if (s.index == 0) return nullptr;
      if (s.key == key) return &values_[s.index - 1];
    }
  }

  // `key` must not be present.
  Value& insert(std::uint64_t key, Value value) {
    if ((values_.size() + 1) * 2 > slots_.size()) grow();
    values_.push_back(std::move(value));
    place(key, static_cast<std::uint32_t>(values_.size()));
    return values_.back();
  }

  std::size_t size() const { return values_.size(); }

 private:
  struct Slot {
    std::uint64_t key = 0;
    std::uint32_t index = 0;  // 1-based into values_, 0 = empty
  };

  static std::size_t hash(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
  }
  std::size_t mask() const { return slots_.size() - 1; }

  void place(std::uint64_t key, std::uint32_t index) {
    std::size_t i = hash(key) & mask();
    while (slots_[i].index != 0) i = (i + 1) & mask();
    slots_[i] = Slot{key, index};
  }

  void grow() {
    std::vector<Slot> old(slots_.size() * 2);
    old.swap(slots_);
    for (const Slot& s : old) {
      if (s.index != 0) place(s.key, s.index);
    }
  }

  std::vector<Slot> slots_;
  std::deque<Value> values_;
};

}  // namespace invplan
