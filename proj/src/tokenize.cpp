#include "lvsie/tokenize.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace lvsie {

namespace {

bool is_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_word(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }
bool is_joiner(unsigned char c) { return c == '-' || c == '.' || c == '\'' || c == '/'; }

// Length of a UTF-8 punctuation or space sequence starting at i, or 0.
std::size_t unicode_punct_len(std::string_view text, std::size_t i) {
  const auto b = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
  if (i + 1 < text.size() && b(i) == 0xC2 && (b(i + 1) == 0xA0 || b(i + 1) == 0xAB ||
                                              b(i + 1) == 0xBB || b(i + 1) == 0xB7))
    return 2;
  // U+2000..U+206F general punctuation block.
  if (i + 2 < text.size() && b(i) == 0xE2 && (b(i + 1) == 0x80 || b(i + 1) == 0x81)) return 3;
  return 0;
}

}  // namespace

std::vector<Token> tokenize(std::string_view text, std::vector<std::size_t> forced_breaks) {
  std::sort(forced_breaks.begin(), forced_breaks.end());
  auto is_break = [&](std::size_t pos) {
    return std::binary_search(forced_breaks.begin(), forced_breaks.end(), pos);
  };

  std::vector<Token> tokens;
  auto emit = [&](std::size_t b, std::size_t e) {
    Token t;
    t.index = tokens.size();
    t.text = std::string(text.substr(b, e - b));
    t.char_start = b;
    t.char_end = e;
    tokens.push_back(std::move(t));
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (std::size_t len = unicode_punct_len(text, i); len > 0) {
      // Non-breaking space is whitespace; the rest are punctuation tokens.
      if (!(len == 2 && static_cast<unsigned char>(text[i + 1]) == 0xA0)) emit(i, i + len);
      i += len;
      continue;
    }
    if (!is_word(c)) {
      emit(i, i + 1);
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < n && !is_break(j)) {
      const auto cj = static_cast<unsigned char>(text[j]);
      if (unicode_punct_len(text, j) > 0) break;
      if (is_word(cj)) {
        ++j;
        continue;
      }
      if (is_joiner(cj) && j + 1 < n && is_word(static_cast<unsigned char>(text[j + 1])) &&
          !is_break(j + 1) && unicode_punct_len(text, j + 1) == 0) {
        j += 2;
        continue;
      }
      break;
    }
    emit(i, j);
    i = j;
  }
  return tokens;
}

std::vector<SentenceBounds> rule_segmenter(
    std::string_view text, const std::vector<Token>& tokens,
    const std::vector<std::pair<std::size_t, std::size_t>>& protected_ranges) {
  (void)text;
  static constexpr std::array<std::string_view, 14> kAbbrev{
      "e.g", "i.e", "al", "vs", "cf", "etc", "Fig", "fig", "Eq", "eq", "Dr", "Mr", "No", "approx"};

  auto inside_protected = [&](std::size_t pos) {
    return std::any_of(protected_ranges.begin(), protected_ranges.end(),
                       [&](const auto& r) { return r.first < pos && pos < r.second; });
  };

  std::vector<SentenceBounds> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i].text;
    if (t != "." && t != "!" && t != "?") continue;
    if (i + 1 >= tokens.size()) break;
    if (t == "." && i > 0 &&
        std::find(kAbbrev.begin(), kAbbrev.end(), tokens[i - 1].text) != kAbbrev.end())
      continue;
    const auto next = static_cast<unsigned char>(tokens[i + 1].text.front());
    const bool opens = std::isupper(next) || std::isdigit(next) || next == '(' || next == '[' ||
                       next == '"' || next >= 0x80;
    if (!opens) continue;
    if (inside_protected(tokens[i].char_end)) continue;
    out.emplace_back(start, i + 1);
    start = i + 1;
  }
  if (start < tokens.size()) out.emplace_back(start, tokens.size());
  return out;
}

std::string normalize_for_matching(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::size_t len = unicode_punct_len(text, i); len > 0) {
      i += len;
      continue;
    }
    const auto c = static_cast<unsigned char>(text[i]);
    if (c >= 0x80 || std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
    ++i;
  }
  return out;
}

std::vector<std::size_t> skeleton_offsets(std::string_view text) {
  std::vector<std::size_t> offsets(text.size() + 1, 0);
  std::size_t k = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::size_t len = unicode_punct_len(text, i); len > 0) {
      for (std::size_t j = 0; j < len; ++j) offsets[i + j] = k;
      i += len;
      continue;
    }
    offsets[i] = k;
    const auto c = static_cast<unsigned char>(text[i]);
    if (c >= 0x80 || std::isalnum(c)) ++k;
    ++i;
  }
  offsets[text.size()] = k;
  return offsets;
}

}  // namespace lvsie
