#include "fracsep/word.hpp"

#include <algorithm>
#include <charconv>

#include "fracsep/error.hpp"

namespace fracsep {

Word::Word(std::initializer_list<int> indices) {
  idx_.reserve(indices.size());
  for (int i : indices) {
    if (i < 1 || i > 255) fail(ErrorKind::InvalidWord, "word index " + std::to_string(i) + " outside 1..255");
    idx_.push_back(static_cast<std::uint8_t>(i));
  }
}

Word Word::parse(std::string_view text) {
  std::vector<std::uint8_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto comma = text.find(',', pos);
    auto token = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    int v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v < 1 || v > 255) {
      fail(ErrorKind::Parse, "malformed word '" + std::string(text) + "'");
    }
    out.push_back(static_cast<std::uint8_t>(v));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Word(std::move(out));
}

Word Word::parent() const {
  if (idx_.empty()) fail(ErrorKind::InvalidWord, "the empty word has no parent");
  return Word(std::vector<std::uint8_t>(idx_.begin(), idx_.end() - 1));
}

Word Word::child(int index) const {
  if (index < 1 || index > 255) fail(ErrorKind::InvalidWord, "word index outside 1..255");
  auto v = idx_;
  v.push_back(static_cast<std::uint8_t>(index));
  return Word(std::move(v));
}

Word Word::concat(const Word& tail) const {
  auto v = idx_;
  v.insert(v.end(), tail.idx_.begin(), tail.idx_.end());
  return Word(std::move(v));
}

bool Word::is_prefix_of(const Word& other) const {
  return idx_.size() <= other.idx_.size() && std::equal(idx_.begin(), idx_.end(), other.idx_.begin());
}

std::string Word::str() const {
  std::string s;
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(idx_[i]);
  }
  return s;
}

}  // namespace fracsep
