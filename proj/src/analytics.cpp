#include "revsent/analytics.hpp"

#include "revsent/error.hpp"
#include "revsent/features.hpp"
#include "revsent/io.hpp"
#include "revsent/text.hpp"

#include <algorithm>
#include <sstream>

namespace revsent::analytics {

using nlohmann::json;

AppSentimentProfile weighted_scores(std::span<const ScoredReview> reviews) {
    require(!reviews.empty(), "weighted_scores: empty review set");
    AppSentimentProfile p;
    p.app_id = reviews.front().app_id;
    std::array<std::uint64_t, kNumClasses> weight{};
    double rating_sum = 0.0;
    for (const auto& r : reviews) {
        require(r.app_id == p.app_id, "weighted_scores: reviews from more than one app");
        weight[index_of(r.label)] += r.thumbs_up;
        p.total_weight += r.thumbs_up;
        rating_sum += r.rating;
    }
    p.n_reviews = reviews.size();
    p.avg_rating = rating_sum / static_cast<double>(reviews.size());
    if (p.total_weight == 0) {
        p.degenerate = true;
        return p;
    }
    const double total = static_cast<double>(p.total_weight);
    p.pss = 100.0 * static_cast<double>(weight[index_of(SentimentLabel::Positive)]) / total;
    p.nss = 100.0 * static_cast<double>(weight[index_of(SentimentLabel::Negative)]) / total;
    p.neutral_share = 100.0 - *p.pss - *p.nss;
    return p;
}

std::vector<AppSentimentProfile> profiles_by_app(std::span<const ScoredReview> reviews) {
    std::map<std::string, std::vector<ScoredReview>> groups;
    for (const auto& r : reviews) groups[r.app_id].push_back(r);
    std::vector<AppSentimentProfile> out;
    for (const auto& [app, rs] : groups) out.push_back(weighted_scores(rs));
    return out;
}

std::vector<AppSentimentProfile> rank_apps(std::vector<AppSentimentProfile> profiles) {
    std::stable_sort(profiles.begin(), profiles.end(), [](const auto& a, const auto& b) {
        if (a.pss.has_value() != b.pss.has_value()) return a.pss.has_value();
        if (a.pss) {
            if (*a.pss != *b.pss) return *a.pss > *b.pss;
        } else if (a.avg_rating != b.avg_rating) {
            return a.avg_rating > b.avg_rating;
        }
        return a.app_id < b.app_id;
    });
    return profiles;
}

void AspectLexicon::add(Aspect aspect, std::string_view cue) {
    // Same surface cleanup as review text so cues and tokens compare equal.
    for (auto& tok : features::tokenize(corpus::clean_surface(cue))) {
        cues_[static_cast<std::size_t>(aspect)].insert(std::move(tok));
    }
}

AspectLexicon AspectLexicon::load(const std::filesystem::path& dir) {
    AspectLexicon lex;
    for (const char* language : {"english", "bangla"}) {
        for (Aspect a : kAllAspects) {
            const auto path = dir / language / (std::string(aspect_slug(a)) + ".txt");
            if (!std::filesystem::exists(path)) continue;
            for (const auto& line : io::read_lines(path)) {
                const std::string cue = io::trim(line);
                if (cue.empty() || cue[0] == '#') continue;
                lex.add(a, cue);
            }
        }
    }
    return lex;
}

std::vector<Aspect> detect_aspect_cues(const corpus::CleanReview& review, const AspectLexicon& lexicon) {
    const auto tokens = features::tokenize(review.normalized_text);
    std::vector<Aspect> hits;
    for (Aspect a : kAllAspects) {
        const auto& cues = lexicon.cues(a);
        if (std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) { return cues.count(t) > 0; })) {
            hits.push_back(a);
        }
    }
    return hits;
}

AspectTable aggregate_absa(std::span<const AspectPolarityRecord> records, const ReviewIndex& reviews) {
    AspectTable table;
    std::map<std::pair<std::string, Aspect>, AspectRow> rows;
    std::set<std::pair<std::string, Aspect>> seen;
    std::map<std::pair<std::string, Aspect>, double> confidence_sum;
    for (const auto& rec : records) {
        const std::string aspect_name(to_string(rec.aspect));
        auto it = reviews.find(rec.review_id);
        if (it == reviews.end()) {
            table.rejects.push_back({rec.review_id, aspect_name, "unknown review_id"});
            continue;
        }
        if (!seen.insert({rec.review_id, rec.aspect}).second) {
            table.rejects.push_back({rec.review_id, aspect_name, "duplicate (review, aspect) record"});
            continue;
        }
        const auto key = std::make_pair(it->second.app_id, rec.aspect);
        auto& row = rows[key];
        row.app_id = it->second.app_id;
        row.aspect = rec.aspect;
        ++row.mentions;
        ++row.counts[index_of(rec.polarity)];
        row.salience += it->second.thumbs_up;
        confidence_sum[key] += rec.confidence;
    }
    for (auto& [key, row] : rows) {
        const double m = static_cast<double>(row.mentions);
        for (std::size_t c = 0; c < kNumClasses; ++c) row.shares[c] = 100.0 * static_cast<double>(row.counts[c]) / m;
        row.mean_confidence = confidence_sum[key] / m;
        table.rows.push_back(row);
    }
    return table;
}

TrendReport monthly_trends(std::span<const TrendReview> reviews) {
    TrendReport report;
    if (reviews.empty()) return report;

    YearMonth first = year_month_of(reviews.front().posted_at);
    YearMonth last = first;
    std::map<std::string, std::map<YearMonth, std::vector<const TrendReview*>>> by_app;
    for (const auto& r : reviews) {
        const YearMonth ym = year_month_of(r.posted_at);
        first = std::min(first, ym);
        last = std::max(last, ym);
        by_app[r.app_id][ym].push_back(&r);
    }
    std::vector<YearMonth> months;
    for (YearMonth m = first; m <= last; m = m.next()) months.push_back(m);

    auto finish_point = [](MonthlyPoint& p) {
        for (auto c : p.counts) p.total += c;
        if (p.total == 0) return;
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            p.proportions[c] = static_cast<double>(p.counts[c]) / static_cast<double>(p.total);
        }
    };

    TrendSeries overall{"overall", {}};
    for (const auto& m : months) overall.points.push_back({m});
    std::vector<TrendSeries> apps;
    for (const auto& [app, buckets] : by_app) {
        TrendSeries s{app, {}};
        std::set<std::string> versions_seen;
        for (std::size_t k = 0; k < months.size(); ++k) {
            MonthlyPoint p{months[k]};
            auto it = buckets.find(months[k]);
            if (it != buckets.end()) {
                std::set<std::string> new_versions;
                for (const TrendReview* r : it->second) {
                    ++p.counts[index_of(r->label)];
                    if (r->app_version && !versions_seen.count(*r->app_version)) {
                        p.version_change = true;
                        new_versions.insert(*r->app_version);
                    }
                }
                versions_seen.insert(new_versions.begin(), new_versions.end());
            }
            for (std::size_t c = 0; c < kNumClasses; ++c) overall.points[k].counts[c] += p.counts[c];
            overall.points[k].version_change = overall.points[k].version_change || p.version_change;
            finish_point(p);
            s.points.push_back(p);
        }
        apps.push_back(std::move(s));
    }
    for (auto& p : overall.points) finish_point(p);
    report.series.push_back(std::move(overall));
    for (auto& s : apps) report.series.push_back(std::move(s));
    return report;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json label_array(const std::array<double, kNumClasses>& v) {
    return json{{"negative", v[0]}, {"neutral", v[1]}, {"positive", v[2]}};
}

json label_array(const std::array<std::size_t, kNumClasses>& v) {
    return json{{"negative", v[0]}, {"neutral", v[1]}, {"positive", v[2]}};
}

}  // namespace

json to_json(const AppSentimentProfile& p) {
    return json{{"app_id", p.app_id},       {"pss", opt(p.pss)},
                {"nss", opt(p.nss)},        {"neutral_share", opt(p.neutral_share)},
                {"avg_rating", p.avg_rating}, {"total_weight", p.total_weight},
                {"n_reviews", p.n_reviews}, {"degenerate", p.degenerate}};
}

json to_json(const AspectTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"app_id", r.app_id},
                        {"aspect", std::string(to_string(r.aspect))},
                        {"mentions", r.mentions},
                        {"counts", label_array(r.counts)},
                        {"shares_percent", label_array(r.shares)},
                        {"salience_thumbs_up", r.salience},
                        {"mean_confidence", r.mean_confidence}});
    }
    json rejects = json::array();
    for (const auto& r : t.rejects) {
        rejects.push_back({{"review_id", r.review_id}, {"aspect", r.aspect}, {"reason", r.reason}});
    }
    return json{{"rows", rows}, {"rejects", rejects}};
}

json to_json(const TrendReport& t) {
    json series = json::array();
    for (const auto& s : t.series) {
        json points = json::array();
        for (const auto& p : s.points) {
            points.push_back({{"month", p.month.str()},
                              {"total", p.total},
                              {"counts", label_array(p.counts)},
                              {"proportions", label_array(p.proportions)},
                              {"version_change", p.version_change}});
        }
        series.push_back({{"name", s.name}, {"points", points}});
    }
    return json{{"series", series}};
}

std::string format_ranking_table(std::span<const AppSentimentProfile> ranked,
                                 const std::map<std::string, double>& corpus_avg_rating) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-20s %8s %8s %9s %12s %12s %8s\n", "Rank", "Application", "PSS(%)",
                  "NSS(%)", "Neutral(%)", "Avg.Rating", "Corpus.Avg", "Weight");
    out << line;
    std::size_t rank = 1;
    for (const auto& p : ranked) {
        auto pct = [](const std::optional<double>& v) { return v ? io::fixed(*v, 2) : std::string("null"); };
        auto corpus = corpus_avg_rating.find(p.app_id);
        std::snprintf(line, sizeof line, "%-4zu %-20s %8s %8s %9s %12s %12s %8llu\n", rank++, p.app_id.c_str(),
                      pct(p.pss).c_str(), pct(p.nss).c_str(), pct(p.neutral_share).c_str(),
                      io::fixed(p.avg_rating, 2).c_str(),
                      corpus != corpus_avg_rating.end() ? io::fixed(corpus->second, 2).c_str() : "-",
                      static_cast<unsigned long long>(p.total_weight));
        out << line;
    }
    out << "Avg.Rating: consensus subset mean; Corpus.Avg: mean over the full clean corpus.\n";
    return out.str();
}

std::string format_aspect_table(const AspectTable& t) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-24s %9s %8s %8s %8s %10s\n", "Application", "Aspect", "Mentions",
                  "Neg(%)", "Neu(%)", "Pos(%)", "Salience");
    out << line;
    for (const auto& r : t.rows) {
        std::snprintf(line, sizeof line, "%-20s %-24s %9zu %8s %8s %8s %10llu\n", r.app_id.c_str(),
                      std::string(to_string(r.aspect)).c_str(), r.mentions, io::fixed(r.shares[0], 2).c_str(),
                      io::fixed(r.shares[1], 2).c_str(), io::fixed(r.shares[2], 2).c_str(),
                      static_cast<unsigned long long>(r.salience));
        out << line;
    }
    return out.str();
}

std::string aspect_tsv(const AspectTable& t) {
    std::ostringstream out;
    out << "app_id\taspect\tmetric\tvalue\n";
    for (const auto& r : t.rows) {
        const std::string prefix = r.app_id + '\t' + std::string(to_string(r.aspect)) + '\t';
        out << prefix << "mentions\t" << r.mentions << '\n';
        for (std::size_t c = 0; c < kNumClasses; ++c) {
            out << prefix << to_string(label_at(c)) << "_share\t" << io::format_double(r.shares[c]) << '\n';
        }
        out << prefix << "salience\t" << r.salience << '\n';
    }
    return out.str();
}

std::string trend_tsv(const TrendReport& t) {
    std::ostringstream out;
    out << "month\tseries\tvalue\n";
    for (const auto& s : t.series) {
        for (const auto& p : s.points) {
            for (std::size_t c = 0; c < kNumClasses; ++c) {
                out << p.month.str() << '\t' << s.name << ':' << to_string(label_at(c)) << '\t'
                    << io::format_double(p.proportions[c]) << '\n';
            }
            out << p.month.str() << '\t' << s.name << ":count\t" << p.total << '\n';
            out << p.month.str() << '\t' << s.name << ":version_change\t" << (p.version_change ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

}  // namespace revsent::analytics
