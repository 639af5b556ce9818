#include "smapi/text.hpp"

#include <cctype>

namespace smapi::text {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u < 0x80) c = static_cast<char>(std::tolower(u));
    }
    return out;
}

std::size_t utf8_codepoints(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        // count every byte that is not a continuation byte
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::vector<std::uint32_t> utf8_decode(std::string_view s) {
    std::vector<std::uint32_t> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char lead = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        std::uint32_t cp = lead;
        if ((lead & 0xE0) == 0xC0) {
            len = 2;
            cp = lead & 0x1F;
        } else if ((lead & 0xF0) == 0xE0) {
            len = 3;
            cp = lead & 0x0F;
        } else if ((lead & 0xF8) == 0xF0) {
            len = 4;
            cp = lead & 0x07;
        }
        if (len > 1) {
            if (i + len > s.size()) {
                out.push_back(lead);
                ++i;
                continue;
            }
            bool valid = true;
            std::uint32_t acc = cp;
            for (std::size_t k = 1; k < len; ++k) {
                unsigned char c = static_cast<unsigned char>(s[i + k]);
                if ((c & 0xC0) != 0x80) {
                    valid = false;
                    break;
                }
                acc = (acc << 6) | (c & 0x3F);
            }
            if (!valid) {
                out.push_back(lead);
                ++i;
                continue;
            }
            cp = acc;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && !is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && is_word_byte(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) tokens.push_back(ascii_lower(s.substr(start, i - start)));
    }
    return tokens;
}

std::vector<std::string_view> whitespace_tokens(std::string_view s) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) tokens.push_back(s.substr(start, i - start));
    }
    return tokens;
}

namespace {

// Boundary holds if the match edge does not butt a word byte against
// another word byte.
bool boundary_ok(std::string_view hay, std::size_t pos, std::size_t len,
                 std::string_view needle) {
    if (needle.empty()) return false;
    bool needle_starts_word = is_word_byte(static_cast<unsigned char>(needle.front()));
    bool needle_ends_word = is_word_byte(static_cast<unsigned char>(needle.back()));
    if (needle_starts_word && pos > 0 &&
        is_word_byte(static_cast<unsigned char>(hay[pos - 1]))) {
        return false;
    }
    if (needle_ends_word && pos + len < hay.size() &&
        is_word_byte(static_cast<unsigned char>(hay[pos + len]))) {
        return false;
    }
    return true;
}

std::size_t count_bounded(std::string_view hay_raw, std::string_view needle_raw,
                          bool stop_at_first) {
    if (needle_raw.empty()) return 0;
    std::string hay = ascii_lower(hay_raw);
    std::string needle = ascii_lower(needle_raw);
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        if (boundary_ok(hay, pos, needle.size(), needle)) {
            ++count;
            if (stop_at_first) return count;
        }
        ++pos;
    }
    return count;
}

} // namespace

std::size_t count_term_matches(std::string_view hay, std::string_view term) {
    return count_bounded(hay, term, false);
}

bool contains_term(std::string_view hay, std::string_view term) {
    return count_bounded(hay, term, true) > 0;
}

bool contains_phrase(std::string_view hay, std::string_view phrase) {
    return count_bounded(hay, phrase, true) > 0;
}

} // namespace smapi::text
