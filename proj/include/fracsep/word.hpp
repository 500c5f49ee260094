#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace fracsep {

/// Finite sequence of 1-based map indices. Serialized as "2,1"; the empty
/// word serializes as "".
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> indices);
  explicit Word(std::vector<std::uint8_t> indices) : idx_(std::move(indices)) {}

  static Word parse(std::string_view text);

  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }
  int operator[](std::size_t i) const { return idx_[i]; }
  int back() const { return idx_.back(); }

  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  /// Drops the last index. The parent of a length-1 word is the empty word.
  Word parent() const;
  Word child(int index) const;
  Word concat(const Word& tail) const;
  bool is_prefix_of(const Word& other) const;

  std::string str() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<std::uint8_t> idx_;
};

}  // namespace fracsep
