#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace revsent::text {

// Decodes UTF-8; malformed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view code_points);
void append_utf8(std::string& out, char32_t cp);

inline bool is_bangla_block(char32_t cp) { return cp >= 0x0980 && cp <= 0x09FF; }

// Latin letters: ASCII, Latin-1 Supplement letters, Latin Extended-A/B.
bool is_latin_letter(char32_t cp);

// Letter for tokenization purposes: Latin letter or a Bangla-block letter/sign
// (Bangla digits excluded).
bool is_token_letter(char32_t cp);

bool is_whitespace(char32_t cp);
bool is_punctuation(char32_t cp);

// Emoji, pictographs, dingbats, regional indicators, keycap and tag characters.
bool is_emoji(char32_t cp);
// Joiners and variation selectors that glue emoji sequences together.
bool is_emoji_joiner(char32_t cp);

// Simple one-to-one lowercase mapping covering Latin, Greek, Cyrillic and
// fullwidth ASCII. Idempotent; caseless scripts map to themselves.
char32_t to_lower(char32_t cp);
std::u32string to_lower(std::u32string_view s);

// Splits on whitespace and punctuation; keeps pieces with at least one token
// letter, in order.
std::vector<std::string> split_tokens(std::string_view utf8);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace revsent::text
