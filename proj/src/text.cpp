#include "revsent/text.hpp"

namespace revsent::text {

std::u32string decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        char32_t min_cp = 0;
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F; len = 2; min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F; len = 3; min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07; len = 4; min_cp = 0x10000;
        } else {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        if (i + len > n) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode_utf8(std::u32string_view code_points) {
    std::string out;
    out.reserve(code_points.size());
    for (char32_t cp : code_points) append_utf8(out, cp);
    return out;
}

bool is_latin_letter(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    if (cp >= 0x00C0 && cp <= 0x00FF) return cp != 0x00D7 && cp != 0x00F7;
    return cp >= 0x0100 && cp <= 0x024F;
}

bool is_token_letter(char32_t cp) {
    if (is_latin_letter(cp)) return true;
    // Bangla block minus digits (U+09E6..U+09EF) and currency/number signs.
    return is_bangla_block(cp) && !(cp >= 0x09E6 && cp <= 0x09EF) && !(cp >= 0x09F2 && cp <= 0x09FB);
}

bool is_whitespace(char32_t cp) {
    switch (cp) {
        case ' ': case '\t': case '\n': case '\r': case '\v': case '\f':
        case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punctuation(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E) || cp < 0x20 || cp == 0x7F;
    }
    if (cp >= 0x00A1 && cp <= 0x00BF) return true;  // Latin-1 punctuation and symbols
    if (cp == 0x00D7 || cp == 0x00F7) return true;
    if (cp == 0x0964 || cp == 0x0965) return true;  // danda, double danda
    if (cp >= 0x2010 && cp <= 0x2027) return true;  // dashes, quotes, ellipsis
    if (cp >= 0x2030 && cp <= 0x205E) return true;
    if (cp >= 0x20A0 && cp <= 0x20CF) return true;  // currency signs
    if (cp >= 0x3001 && cp <= 0x3003) return true;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
    return cp == 0xFFFD;
}

bool is_emoji(char32_t cp) {
    return (cp >= 0x1F300 && cp <= 0x1F5FF) ||  // symbols and pictographs
           (cp >= 0x1F600 && cp <= 0x1F64F) ||  // emoticons
           (cp >= 0x1F680 && cp <= 0x1F6FF) ||  // transport and map
           (cp >= 0x1F700 && cp <= 0x1F7FF) ||
           (cp >= 0x1F900 && cp <= 0x1F9FF) ||  // supplemental symbols and pictographs
           (cp >= 0x1FA70 && cp <= 0x1FAFF) ||
           (cp >= 0x1F1E6 && cp <= 0x1F1FF) ||  // regional indicators
           (cp >= 0x2600 && cp <= 0x26FF) ||    // misc symbols
           (cp >= 0x2700 && cp <= 0x27BF) ||    // dingbats
           (cp >= 0x2B00 && cp <= 0x2BFF) ||
           cp == 0x20E3 || (cp >= 0xE0020 && cp <= 0xE007F);
}

bool is_emoji_joiner(char32_t cp) {
    return cp == 0x200D || (cp >= 0xFE00 && cp <= 0xFE0F);
}

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
    if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
    if (cp >= 0x0100 && cp <= 0x017F) {
        if (cp == 0x0130) return 'i';
        if (cp == 0x0178) return 0x00FF;
        if ((cp >= 0x0100 && cp <= 0x012F) || (cp >= 0x0132 && cp <= 0x0137) ||
            (cp >= 0x014A && cp <= 0x0177)) {
            return (cp % 2 == 0) ? cp + 1 : cp;
        }
        if ((cp >= 0x0139 && cp <= 0x0148) || (cp >= 0x0179 && cp <= 0x017E)) {
            return (cp % 2 == 1) ? cp + 1 : cp;
        }
        return cp;
    }
    if (cp >= 0x0391 && cp <= 0x03AB && cp != 0x03A2) return cp + 32;
    if (cp == 0x0386) return 0x03AC;
    if (cp >= 0x0388 && cp <= 0x038A) return cp + 37;
    if (cp == 0x038C) return 0x03CC;
    if (cp == 0x038E || cp == 0x038F) return cp + 63;
    if (cp >= 0x0410 && cp <= 0x042F) return cp + 32;
    if (cp >= 0x0400 && cp <= 0x040F) return cp + 80;
    if (cp >= 0xFF21 && cp <= 0xFF3A) return cp + 32;
    return cp;
}

std::u32string to_lower(std::u32string_view s) {
    std::u32string out(s);
    for (auto& cp : out) cp = to_lower(cp);
    return out;
}

std::vector<std::string> split_tokens(std::string_view utf8) {
    std::vector<std::string> tokens;
    std::string current;
    bool has_letter = false;
    auto flush = [&] {
        if (has_letter) tokens.push_back(current);
        current.clear();
        has_letter = false;
    };
    for (char32_t cp : decode_utf8(utf8)) {
        if (is_whitespace(cp) || is_punctuation(cp)) {
            flush();
            continue;
        }
        append_utf8(current, cp);
        has_letter = has_letter || is_token_letter(cp);
    }
    flush();
    return tokens;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

}  // namespace revsent::text
