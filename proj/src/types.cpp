#include "revsent/types.hpp"

#include <charconv>
#include <cstdio>

namespace revsent {

std::string_view to_string(LanguageTag tag) {
    switch (tag) {
        case LanguageTag::English: return "english";
        case LanguageTag::Bangla: return "bangla";
        case LanguageTag::Other: return "other";
    }
    return "other";
}

std::optional<LanguageTag> parse_language(std::string_view s) {
    if (s == "english") return LanguageTag::English;
    if (s == "bangla") return LanguageTag::Bangla;
    if (s == "other") return LanguageTag::Other;
    return std::nullopt;
}

std::string_view to_string(SentimentLabel label) {
    switch (label) {
        case SentimentLabel::Negative: return "negative";
        case SentimentLabel::Neutral: return "neutral";
        case SentimentLabel::Positive: return "positive";
    }
    return "neutral";
}

std::optional<SentimentLabel> parse_label(std::string_view s) {
    if (s == "negative") return SentimentLabel::Negative;
    if (s == "neutral") return SentimentLabel::Neutral;
    if (s == "positive") return SentimentLabel::Positive;
    return std::nullopt;
}

std::string_view to_string(Aspect aspect) {
    switch (aspect) {
        case Aspect::UiUx: return "UI/UX";
        case Aspect::Security: return "Security";
        case Aspect::SpeedPerformance: return "Speed/Performance";
        case Aspect::CustomerService: return "Customer Service";
        case Aspect::Features: return "Features";
        case Aspect::TransactionProcessing: return "Transaction Processing";
    }
    return "";
}

std::string_view aspect_slug(Aspect aspect) {
    switch (aspect) {
        case Aspect::UiUx: return "ui_ux";
        case Aspect::Security: return "security";
        case Aspect::SpeedPerformance: return "speed_performance";
        case Aspect::CustomerService: return "customer_service";
        case Aspect::Features: return "features";
        case Aspect::TransactionProcessing: return "transaction_processing";
    }
    return "";
}

std::optional<Aspect> parse_aspect(std::string_view s) {
    for (Aspect a : kAllAspects) {
        if (s == to_string(a) || s == aspect_slug(a)) return a;
    }
    return std::nullopt;
}

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return ec == std::errc{};
}

}  // namespace

std::optional<Timestamp> parse_rfc3339(std::string_view s) {
    using namespace std::chrono;
    int y, mo, d, h, mi, sec;
    if (s.size() < 20) return std::nullopt;
    if (!read_int(s, 0, 4, y) || s[4] != '-' || !read_int(s, 5, 2, mo) || s[7] != '-' ||
        !read_int(s, 8, 2, d) || (s[10] != 'T' && s[10] != 't' && s[10] != ' ') ||
        !read_int(s, 11, 2, h) || s[13] != ':' || !read_int(s, 14, 2, mi) || s[16] != ':' ||
        !read_int(s, 17, 2, sec)) {
        return std::nullopt;
    }
    std::size_t pos = 19;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        if (pos == start) return std::nullopt;
    }
    if (pos >= s.size()) return std::nullopt;
    int offset_minutes = 0;
    if (s[pos] == 'Z' || s[pos] == 'z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int oh, om;
        if (!read_int(s, pos + 1, 2, oh) || pos + 3 >= s.size() || s[pos + 3] != ':' ||
            !read_int(s, pos + 4, 2, om)) {
            return std::nullopt;
        }
        offset_minutes = (s[pos] == '+' ? 1 : -1) * (oh * 60 + om);
        pos += 6;
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    const sys_seconds t = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
    return t - minutes{offset_minutes};
}

std::string format_rfc3339(Timestamp t) {
    using namespace std::chrono;
    const sys_days days = floor<std::chrono::days>(t);
    const year_month_day ymd{days};
    const hh_mm_ss<seconds> tod{t - days};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
    return buf;
}

std::string YearMonth::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u", year, month);
    return buf;
}

YearMonth year_month_of(Timestamp t) {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(t)};
    return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
}

}  // namespace revsent
