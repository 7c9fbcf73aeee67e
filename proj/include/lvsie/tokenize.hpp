#ifndef LVSIE_TOKENIZE_HPP
#define LVSIE_TOKENIZE_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lvsie/corpus.hpp"

namespace lvsie {

// Whitespace-plus-punctuation tokenizer. Word characters (alphanumerics and
// any non-ASCII byte) form runs; '-', '.', '\'' and '/' are kept inside a run
// when flanked by word characters. Every other printable byte is its own
// token. `forced_breaks` are character offsets at which a token must end, so
// annotation boundaries always coincide with token boundaries.
std::vector<Token> tokenize(std::string_view text, std::vector<std::size_t> forced_breaks = {});

// Half-open token index range of one sentence.
using SentenceBounds = std::pair<std::size_t, std::size_t>;

// Splits a token stream into sentences. `protected_ranges` are character
// ranges (e.g. entity mentions) that must not be split.
using SentenceSegmenter = std::function<std::vector<SentenceBounds>(
    std::string_view text, const std::vector<Token>& tokens,
    const std::vector<std::pair<std::size_t, std::size_t>>& protected_ranges)>;

// Rule-based default: break after '.', '!' or '?' when the next token starts
// with an uppercase letter, a digit or an opening bracket, unless the
// terminator follows a known abbreviation or sits inside a protected range.
std::vector<SentenceBounds> rule_segmenter(
    std::string_view text, const std::vector<Token>& tokens,
    const std::vector<std::pair<std::size_t, std::size_t>>& protected_ranges);

// Lowercased alphanumeric skeleton of a text; used to compare documents whose
// tokenization and punctuation differ.
std::string normalize_for_matching(std::string_view text);

// For each byte of `text`, the offset into normalize_for_matching(text) of the
// next skeleton character at or after it.
std::vector<std::size_t> skeleton_offsets(std::string_view text);

}  // namespace lvsie

#endif  // LVSIE_TOKENIZE_HPP
