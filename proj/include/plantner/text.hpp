#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace plantner {

// Decodes UTF-8 into code points. Invalid sequences decode to U+FFFD, one
// per offending byte.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Byte offsets of each code point start, plus a final entry equal to
// text.size().
std::vector<std::size_t> code_point_offsets(std::string_view text);

// Splits on ASCII whitespace; empty fields are dropped.
std::vector<std::string> split_whitespace(std::string_view text);

// Lexicon normal form: lowercase, Latin diacritics folded to their base
// letters (ligatures expanded), combining marks removed, whitespace runs
// collapsed to one space and trimmed. "Oïdium" -> "oidium".
std::string normalize_term(std::string_view text);

}  // namespace plantner
