#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace smapi::text {

// Word characters are ASCII alphanumerics, '_' and every non-ASCII byte
// (UTF-8 continuation bytes included, so multi-byte letters stay inside one
// token). Everything else separates words.
bool is_word_byte(unsigned char c);

// ASCII-only case fold; non-ASCII bytes pass through untouched.
std::string ascii_lower(std::string_view s);

std::size_t utf8_codepoints(std::string_view s);

// Decoded code points; malformed bytes decode as themselves.
std::vector<std::uint32_t> utf8_decode(std::string_view s);

// Maximal runs of word bytes, lowercased.
std::vector<std::string> word_tokens(std::string_view s);

// Split on ASCII whitespace, tokens kept verbatim.
std::vector<std::string_view> whitespace_tokens(std::string_view s);

// Occurrences of `term` in `hay`, case-insensitive, where the match is not
// adjacent to word bytes on either side.
std::size_t count_term_matches(std::string_view hay, std::string_view term);
bool contains_term(std::string_view hay, std::string_view term);

// Case-insensitive substring match with word-boundary checks at both ends
// of the span; interior spacing/punctuation must match exactly.
bool contains_phrase(std::string_view hay, std::string_view phrase);

} // namespace smapi::text
