#include "revsent/pipeline.hpp"

#include "revsent/analytics.hpp"
#include "revsent/corpus.hpp"
#include "revsent/error.hpp"
#include "revsent/features.hpp"
#include "revsent/io.hpp"
#include "revsent/labeling.hpp"
#include "revsent/model_client.hpp"
#include "revsent/models.hpp"
#include "revsent/rng.hpp"
#include "revsent/stats.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <map>
#include <set>
#include <sstream>

namespace revsent::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string dump(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::strict) + "\n"; }

void write_json(const fs::path& path, const json& j) { io::write_file(path, dump(j)); }

template <typename Range, typename ToJson>
void write_jsonl(const fs::path& path, const Range& items, ToJson&& to) {
    std::string out;
    for (const auto& item : items) {
        out += json(to(item)).dump(-1, ' ', false, json::error_handler_t::strict);
        out += '\n';
    }
    io::write_file(path, out);
}

std::vector<json> read_jsonl(const fs::path& path, const std::string& needed_by) {
    if (!fs::exists(path)) {
        throw IoError(path.filename().string() + " not found in run directory (needed by " + needed_by + ")");
    }
    std::vector<json> out;
    std::size_t line_no = 0;
    for (const auto& line : io::read_lines(path)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ValidationError(path.filename().string() + " line " + std::to_string(line_no) + ": malformed JSON");
        }
        out.push_back(std::move(j));
    }
    return out;
}

json report_header(const RunConfig& config, std::string_view kind) {
    return json{{"report", kind}, {"version", version_string()}, {"config", to_json(config)}};
}

std::string text_header(const RunConfig& config, std::string_view title) {
    std::string s(title);
    s += "\n";
    s += std::string(title.size(), '=') + "\n";
    s += "version: " + version_string() + "\n";
    s += "seed: " + std::to_string(config.seed) + "\n\n";
    return s;
}

std::string config_footer(const RunConfig& config) { return "\nconfig echo:\n" + dump(to_json(config)); }

json reject_json(const corpus::Reject& r) {
    return json{{"line", r.line}, {"review_id", r.review_id}, {"reason", r.reason}};
}

std::vector<corpus::CleanReview> read_corpus(const fs::path& run_dir, const std::string& stage) {
    std::vector<corpus::CleanReview> out;
    for (const auto& j : read_jsonl(run_dir / files::kCorpus, stage)) out.push_back(corpus::clean_review_from_json(j));
    return out;
}

std::vector<labeling::LabeledReview> read_labeled(const fs::path& path, const std::string& stage) {
    std::vector<labeling::LabeledReview> out;
    for (const auto& j : read_jsonl(path, stage)) out.push_back(labeling::labeled_review_from_json(j));
    return out;
}

std::array<std::size_t, kNumClasses> class_counts(std::span<const SentimentLabel> labels) {
    std::array<std::size_t, kNumClasses> counts{};
    for (auto l : labels) ++counts[index_of(l)];
    return counts;
}

json counts_json(const std::array<std::size_t, kNumClasses>& counts) {
    json j = json::object();
    for (auto l : kAllLabels) j[std::string(to_string(l))] = counts[index_of(l)];
    return j;
}

std::string model_text(const RunConfig& config, const corpus::CleanReview& r) {
    return config.model_text == "normalized" ? r.normalized_text : r.raw.text;
}

std::string batch_errors_text(const std::vector<client::BatchError>& errors) {
    std::string s;
    for (const auto& e : errors) {
        s += "  batch at " + std::to_string(e.first) + " (" + std::to_string(e.count) + " items) failed after " +
             std::to_string(e.attempts) + " attempts: " + e.message + "\n";
    }
    return s;
}

json batch_errors_json(const std::vector<client::BatchError>& errors) {
    json arr = json::array();
    for (const auto& e : errors) {
        arr.push_back({{"first", e.first}, {"count", e.count}, {"attempts", e.attempts}, {"message", e.message}});
    }
    return arr;
}

}  // namespace

fs::path default_run_dir(const RunConfig& config, Timestamp now) {
    std::string stamp = format_rfc3339(now);  // YYYY-MM-DDTHH:MM:SSZ
    std::erase(stamp, '-');
    std::erase(stamp, ':');
    return fs::path(config.out_dir) / (stamp + "-seed" + std::to_string(config.seed));
}

// ---------------------------------------------------------------- ingest

Summary ingest(const RunConfig& config, const fs::path& run_dir) {
    validate(config);
    if (config.reviews_path.empty()) throw ValidationError("ingest needs an input dump (inputs.reviews)");
    auto parsed = corpus::parse_reviews_file(config.reviews_path, config.apps);
    const auto stop_words = corpus::StopWords::load(fs::path(config.data_dir) / "stopwords");

    fs::create_directories(run_dir);
    write_jsonl(run_dir / files::kRejects, parsed.rejects, reject_json);
    if (parsed.reviews.empty()) {
        throw ValidationError("no valid records in " + config.reviews_path + " (" + std::to_string(parsed.rejects.size()) +
                              " rejected lines)");
    }

    const auto build = corpus::build_corpus(parsed.reviews, config.corpus, stop_words);
    write_jsonl(run_dir / files::kCorpus, build.reviews, [](const auto& r) { return corpus::to_json(r); });
    write_jsonl(run_dir / files::kDrops, build.drops, [](const auto& d) { return corpus::to_json(d); });

    std::map<std::string, std::size_t> drops_by_stage;
    for (const auto& d : build.drops) ++drops_by_stage[d.stage];

    json report = report_header(config, "ingest");
    report["stats"] = corpus::to_json(build.stats);
    report["rejected_lines"] = parsed.rejects.size();
    report["drops_by_stage"] = drops_by_stage;
    write_json(run_dir / files::kStatsJson, report);

    std::string text = text_header(config, "Dataset statistics");
    text += corpus::format_stats_table(build.stats);
    text += "\nrejected input lines: " + std::to_string(parsed.rejects.size()) + "\n";
    for (const auto& [stage, n] : drops_by_stage) text += "dropped at " + stage + ": " + std::to_string(n) + "\n";
    text += config_footer(config);
    io::write_file(run_dir / files::kStatsText, text);

    Summary s;
    s.lines.push_back("parsed " + std::to_string(parsed.reviews.size()) + " records, rejected " +
                      std::to_string(parsed.rejects.size()) + " lines");
    s.lines.push_back("clean corpus: " + std::to_string(build.reviews.size()) + " reviews");
    if (!parsed.rejects.empty()) {
        s.warnings.push_back(std::to_string(parsed.rejects.size()) + " input lines rejected, see " + files::kRejects);
        if (config.strict) throw ValidationError("strict mode: " + s.warnings.back());
    }
    return s;
}

// ----------------------------------------------------------------- label

Summary label(const RunConfig& config, const fs::path& run_dir) {
    validate(config);
    const auto corpus_reviews = read_corpus(run_dir, "label");
    if (corpus_reviews.empty()) throw ValidationError("corpus is empty");

    const auto star = labeling::star_labeled(corpus_reviews);
    std::vector<SentimentLabel> star_labels;
    for (const auto& r : star) star_labels.push_back(r.star_label);
    const auto split = stats::stratified_split(star_labels, config.split_ratio, config.seed);

    std::vector<ModelLabelRecord> records;
    std::vector<corpus::Reject> label_rejects;
    std::vector<client::BatchError> batch_errors;
    if (config.use_endpoint) {
        if (config.endpoint.base_url.empty()) throw ValidationError("endpoint.base_url is empty");
        std::vector<client::SentimentItem> items;
        for (const auto& r : corpus_reviews) items.push_back({r.raw.review_id, model_text(config, r)});
        auto fetched = client::ModelClient(config.endpoint).fetch_sentiment(items);
        records = std::move(fetched.records);
        batch_errors = std::move(fetched.errors);
    } else if (!config.labels_file.empty()) {
        auto file = client::read_label_file(config.labels_file, config.default_model_id);
        records = std::move(file.records);
        label_rejects = std::move(file.rejects);
    } else {
        throw ValidationError("label needs a label source (--labels-file or --endpoint)");
    }

    const auto joined = labeling::join_model_labels(corpus_reviews, records);
    std::map<std::string, const ModelLabelRecord*, std::less<>> by_id;
    for (const auto& r : records) by_id.emplace(r.review_id, &r);

    std::vector<labeling::LabeledReview> train, test;
    for (auto i : split.train) train.push_back(joined.labeled[i]);
    for (auto i : split.test) test.push_back(joined.labeled[i]);

    std::vector<labeling::LabeledReview> train_with_model;
    std::size_t missing_train = 0;
    for (const auto& r : train) {
        if (r.model_label) {
            train_with_model.push_back(r);
        } else {
            ++missing_train;
        }
    }
    std::size_t missing_test = 0;
    for (const auto& r : test) missing_test += r.model_label ? 0 : 1;
    if (train_with_model.empty()) throw ValidationError("no training review has a model label");

    const auto consensus = labeling::consensus_filter(train_with_model);
    std::vector<SentimentLabel> a, b;
    for (const auto& r : train_with_model) {
        a.push_back(r.star_label);
        b.push_back(*r.model_label);
    }
    const auto kappa = labeling::cohens_kappa(a, b);

    std::vector<std::string> warnings;
    const double missing_ratio = static_cast<double>(missing_train) / static_cast<double>(train.size());
    if (missing_ratio > config.missing_label_warn_ratio) {
        warnings.push_back(fmt::format("WARNING: {} of {} training reviews ({}%) have no model label", missing_train,
                                       train.size(), io::fixed(100.0 * missing_ratio, 1)));
    }
    if (!batch_errors.empty()) {
        warnings.push_back(std::to_string(batch_errors.size()) + " endpoint batches failed; their reviews stay unlabeled");
    }
    if (!label_rejects.empty()) {
        warnings.push_back(std::to_string(label_rejects.size()) + " label records rejected, see " + files::kLabelRejects);
    }
    if (!joined.unknown_ids.empty()) {
        warnings.push_back(std::to_string(joined.unknown_ids.size()) + " label records match no corpus review");
    }

    fs::create_directories(run_dir);
    auto ids_of = [&](const std::vector<std::size_t>& idx) {
        json arr = json::array();
        for (auto i : idx) arr.push_back(corpus_reviews[i].raw.review_id);
        return arr;
    };
    json split_json = report_header(config, "split");
    split_json["ratio"] = split.ratio;
    split_json["seed"] = split.seed;
    split_json["train"] = ids_of(split.train);
    split_json["test"] = ids_of(split.test);
    write_json(run_dir / files::kSplit, split_json);

    auto labeled_json = [](const labeling::LabeledReview& r) { return labeling::to_json(r); };
    write_jsonl(run_dir / files::kTrainLabeled, train, labeled_json);
    write_jsonl(run_dir / files::kConsensus, consensus.kept, labeled_json);
    write_jsonl(run_dir / files::kTest, test, labeled_json);
    std::vector<ModelLabelRecord> used;
    for (const auto& r : joined.labeled) {
        if (auto it = by_id.find(r.review.raw.review_id); it != by_id.end()) used.push_back(*it->second);
    }
    write_jsonl(run_dir / files::kModelLabels, used, [](const auto& r) { return client::to_json(r); });
    write_jsonl(run_dir / files::kLabelRejects, label_rejects, reject_json);

    std::vector<SentimentLabel> train_star, test_star, kept_labels;
    for (const auto& r : train) train_star.push_back(r.star_label);
    for (const auto& r : test) test_star.push_back(r.star_label);
    for (const auto& r : consensus.kept) kept_labels.push_back(r.star_label);
    std::set<std::string> model_ids;
    for (const auto& r : used) model_ids.insert(r.model_id);

    json breakdown = json::array();
    for (const auto& row : labeling::breakdown_by_language(consensus)) {
        breakdown.push_back({{"language", std::string(to_string(row.language))},
                             {"labeled", row.labeled},
                             {"kept", row.kept},
                             {"dropped", row.dropped}});
    }

    json report = report_header(config, "labeling");
    report["split"] = {{"ratio", split.ratio},
                       {"seed", split.seed},
                       {"n_train", train.size()},
                       {"n_test", test.size()},
                       {"train_classes", counts_json(class_counts(train_star))},
                       {"test_classes", counts_json(class_counts(test_star))}};
    report["model_labels"] = {{"records", records.size()},
                              {"used", used.size()},
                              {"model_ids", model_ids},
                              {"rejected", label_rejects.size()},
                              {"unknown_ids", joined.unknown_ids.size()},
                              {"missing_train", missing_train},
                              {"missing_test", missing_test},
                              {"batch_errors", batch_errors_json(batch_errors)}};
    report["kappa"] = labeling::to_json(kappa);
    report["consensus"] = {{"kept", consensus.kept.size()},
                           {"dropped", consensus.dropped.size()},
                           {"kept_classes", counts_json(class_counts(kept_labels))},
                           {"by_language", breakdown}};
    report["warnings"] = warnings;
    write_json(run_dir / files::kLabelingJson, report);

    std::string text = text_header(config, "Labeling and consensus");
    for (const auto& w : warnings) text += "!! " + w + "\n";
    if (!warnings.empty()) text += "\n";
    text += fmt::format("split: {} train / {} test (ratio {}, seed {})\n", train.size(), test.size(),
                        io::format_double(split.ratio), split.seed);
    text += fmt::format("model labels: {} records, {} rejected, {} unknown ids, {} train reviews unlabeled\n",
                        records.size(), label_rejects.size(), joined.unknown_ids.size(), missing_train);
    text += batch_errors_text(batch_errors);
    text += fmt::format("Cohen's kappa (star vs model, n = {}): {}  (p_o = {}, p_e = {}){}\n", kappa.n,
                        io::fixed(kappa.kappa, 3), io::fixed(kappa.p_o, 3), io::fixed(kappa.p_e, 3),
                        kappa.degenerate ? "  [degenerate: single shared class]" : "");
    text += fmt::format("consensus set: {} kept, {} dropped\n", consensus.kept.size(), consensus.dropped.size());
    for (const auto& row : labeling::breakdown_by_language(consensus)) {
        text += fmt::format("  {:<8} labeled {:>6}  kept {:>6}  dropped {:>6}\n", to_string(row.language), row.labeled,
                            row.kept, row.dropped);
    }
    text += config_footer(config);
    io::write_file(run_dir / files::kLabelingText, text);

    Summary s;
    s.lines.push_back(fmt::format("split {} / {}; consensus kept {} of {}; kappa {}", train.size(), test.size(),
                                  consensus.kept.size(), train_with_model.size(), io::fixed(kappa.kappa, 3)));
    s.warnings = warnings;
    if (config.strict && (!label_rejects.empty() || !batch_errors.empty() || !joined.unknown_ids.empty())) {
        throw ValidationError("strict mode: label source had rejected, unknown or failed records");
    }
    return s;
}

// ------------------------------------------------------------ train-eval

namespace {

struct EvaluatedModel {
    std::string name;
    bool external = false;
    std::vector<std::size_t> covered;           // test indices with a prediction
    std::vector<std::optional<SentimentLabel>> predictions;  // per test review
};

std::string ci_text(const stats::BootstrapCI& ci) {
    auto trim_zero = [](double v) {
        std::string s = io::fixed(v, 3);
        if (s.rfind("0.", 0) == 0) s.erase(0, 1);
        return s;
    };
    return "[" + trim_zero(ci.lower) + ", " + trim_zero(ci.upper) + "]";
}

}  // namespace

Summary train_eval(const RunConfig& config, const fs::path& run_dir) {
    validate(config);
    const auto train = read_labeled(run_dir / files::kConsensus, "train-eval");
    const auto test = read_labeled(run_dir / files::kTest, "train-eval");
    if (train.empty()) throw ValidationError("consensus training set is empty");
    if (test.empty()) throw ValidationError("test set is empty");

    std::vector<features::TokenList> train_tokens, test_tokens;
    std::vector<SentimentLabel> y_train, y_test;
    std::vector<LanguageTag> test_lang;
    for (const auto& r : train) {
        train_tokens.push_back(features::tokenize(r.review.normalized_text));
        y_train.push_back(r.star_label);
    }
    for (const auto& r : test) {
        test_tokens.push_back(features::tokenize(r.review.normalized_text));
        y_test.push_back(r.star_label);
        test_lang.push_back(r.review.language);
    }
    const auto vocab = features::fit_vocabulary(train_tokens, config.features);
    const auto X_train = features::transform_all(train_tokens, vocab);
    const auto X_test = features::transform_all(test_tokens, vocab);
    vocab.save(run_dir / files::kVocabulary);

    std::vector<EvaluatedModel> evaluated;
    json grid_json = report_header(config, "grid_search");
    grid_json["families"] = json::array();
    std::vector<std::string> warnings;
    fs::create_directories(run_dir / files::kModelsDir);
    for (auto family : config.families) {
        const auto grid = grid_for(config, family);
        const auto gs = models::grid_search(grid, X_train, y_train, config.cv_folds, config.seed);
        for (const auto& w : gs.warnings) {
            if (std::find(warnings.begin(), warnings.end(), w) == warnings.end()) warnings.push_back(w);
        }
        const auto& best = gs.candidates[gs.winner].params;
        const auto model = models::train(best, X_train, y_train);
        models::save(model, run_dir / files::kModelsDir / (std::string(models::to_string(family)) + ".model"));
        const auto pred = models::predict(model, X_test);

        EvaluatedModel em;
        em.name = std::string(models::display_name(family));
        for (std::size_t i = 0; i < test.size(); ++i) {
            em.covered.push_back(i);
            em.predictions.push_back(pred.labels[i]);
        }
        evaluated.push_back(std::move(em));
        json fj = models::to_json(gs);
        fj["selected"] = models::to_json(best);
        grid_json["families"].push_back(std::move(fj));
    }
    write_json(run_dir / files::kGridSearch, grid_json);

    // External predictions: model labels carried on the test split, plus an
    // optional predictions file.
    std::map<std::string, std::size_t> test_index;
    for (std::size_t i = 0; i < test.size(); ++i) test_index.emplace(test[i].review.raw.review_id, i);
    std::map<std::string, std::vector<std::pair<std::size_t, SentimentLabel>>> external;
    std::vector<std::string> external_order;
    auto add_external = [&](const ModelLabelRecord& rec) {
        auto it = test_index.find(rec.review_id);
        if (it == test_index.end()) return false;
        if (!external.count(rec.model_id)) external_order.push_back(rec.model_id);
        external[rec.model_id].push_back({it->second, rec.label});
        return true;
    };
    if (fs::exists(run_dir / files::kModelLabels)) {
        for (const auto& r : client::read_label_file(run_dir / files::kModelLabels, config.default_model_id).records) {
            add_external(r);
        }
    }
    std::size_t prediction_rejects = 0;
    if (!config.predictions_file.empty()) {
        auto file = client::read_label_file(config.predictions_file, config.default_model_id);
        prediction_rejects = file.rejects.size();
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& r : file.records) {
            if (!seen.insert({r.model_id, r.review_id}).second) {
                throw ValidationError("predictions file repeats review " + r.review_id + " for model " + r.model_id);
            }
            add_external(r);
        }
        if (prediction_rejects > 0) warnings.push_back(std::to_string(prediction_rejects) + " prediction records rejected");
    }
    for (const auto& id : external_order) {
        EvaluatedModel em;
        em.name = id;
        em.external = true;
        em.predictions.assign(test.size(), std::nullopt);
        for (const auto& [i, l] : external[id]) {
            if (em.predictions[i]) throw ValidationError("model " + id + " has two predictions for a test review");
            em.predictions[i] = l;
        }
        for (std::size_t i = 0; i < test.size(); ++i) {
            if (em.predictions[i]) em.covered.push_back(i);
        }
        if (em.covered.size() < test.size()) {
            warnings.push_back(fmt::format("{} covers {} of {} test reviews; its rows use that subset", id,
                                           em.covered.size(), test.size()));
        }
        evaluated.push_back(std::move(em));
    }

    // Table II
    json model_rows = json::array();
    std::string table2 = "Model performance on the test set\n";
    table2 += fmt::format("{:<22} {:>6} {:>6} {:>6} {:>6} {:>6}  {}\n", "Model", "n", "Acc.", "Prec.", "Rec.", "W-F1",
                          fmt::format("W-F1 {}% CI", io::fixed(100.0 * config.bootstrap_level, 0)));
    for (std::size_t m = 0; m < evaluated.size(); ++m) {
        const auto& em = evaluated[m];
        std::vector<SentimentLabel> t, p;
        for (auto i : em.covered) {
            t.push_back(y_test[i]);
            p.push_back(*em.predictions[i]);
        }
        if (t.empty()) continue;
        const auto ev = stats::classification_metrics(t, p);
        const auto ci = stats::bootstrap_ci(t, p, stats::MetricKind::WeightedF1, config.bootstrap_resamples,
                                            config.bootstrap_level, derive_seed(config.seed, 100 + m));
        model_rows.push_back({{"model", em.name},
                              {"external", em.external},
                              {"n", t.size()},
                              {"metrics", stats::to_json(ev.metrics)},
                              {"confusion", stats::to_json(ev.confusion)},
                              {"weighted_f1_ci", stats::to_json(ci)}});
        table2 += fmt::format("{:<22} {:>6} {:>6} {:>6} {:>6} {:>6}  {}\n", em.name, t.size(),
                              io::fixed(ev.metrics.accuracy, 3), io::fixed(ev.metrics.weighted_precision, 3),
                              io::fixed(ev.metrics.weighted_recall, 3), io::fixed(ev.metrics.weighted_f1, 3), ci_text(ci));
    }

    // Table III: every pair, on the reviews both models cover.
    json mcnemar_rows = json::array();
    std::string table3 = "McNemar's test (continuity corrected)\n";
    table3 += fmt::format("{:<46} {:>5} {:>5} {:>9} {:>8}  {}\n", "Comparison", "b", "c", "chi2", "p-value", "Sig.");
    for (std::size_t i = 0; i < evaluated.size(); ++i) {
        for (std::size_t j = i + 1; j < evaluated.size(); ++j) {
            std::vector<SentimentLabel> t, pa, pb;
            for (std::size_t k = 0; k < test.size(); ++k) {
                if (evaluated[i].predictions[k] && evaluated[j].predictions[k]) {
                    t.push_back(y_test[k]);
                    pa.push_back(*evaluated[i].predictions[k]);
                    pb.push_back(*evaluated[j].predictions[k]);
                }
            }
            if (t.empty()) continue;
            const auto r = stats::mcnemar(t, pa, pb);
            const std::string label = evaluated[i].name + " vs. " + evaluated[j].name;
            json row = stats::to_json(r);
            row["a"] = evaluated[i].name;
            row["b_model"] = evaluated[j].name;
            row["n"] = t.size();
            mcnemar_rows.push_back(std::move(row));
            table3 += fmt::format("{:<46} {:>5} {:>5} {:>9} {:>8}  {}\n", label, r.b, r.c, io::fixed(r.chi2, 2),
                                  stats::format_p_value(r.p_value), r.significant ? "Yes" : "No");
        }
    }

    // Table V
    json language_rows = json::array();
    std::string table5 = "Language-stratified evaluation\n";
    for (std::size_t m = 0; m < evaluated.size(); ++m) {
        const auto& em = evaluated[m];
        std::vector<SentimentLabel> t, p;
        std::vector<LanguageTag> langs;
        for (auto i : em.covered) {
            t.push_back(y_test[i]);
            p.push_back(*em.predictions[i]);
            langs.push_back(test_lang[i]);
        }
        if (t.empty()) continue;
        const auto le = stats::language_stratified_eval(langs, t, p, config.bootstrap_resamples,
                                                        config.bootstrap_level, derive_seed(config.seed, 200 + m));
        json lj = stats::to_json(le);
        lj["model"] = em.name;
        language_rows.push_back(std::move(lj));
        table5 += "\n" + em.name + "\n";
        table5 += fmt::format("  {:<10} {:>6} {:>6} {:>6} {:>6}  {}\n", "Language", "n", "Acc.", "W-F1", "M-F1", "F1 CI");
        for (const auto& row : le.rows) {
            table5 += fmt::format("  {:<10} {:>6} {:>6} {:>6} {:>6}  {}\n", to_string(row.language), row.metrics.n,
                                  io::fixed(row.metrics.accuracy, 3), io::fixed(row.metrics.weighted_f1, 3),
                                  io::fixed(row.metrics.macro_f1, 3), ci_text(row.weighted_f1_ci));
        }
        if (le.gap) {
            table5 += fmt::format("  {:<10} {:>6} {:>6} {:>6} {:>6}  {}\n", "Gap", "", io::fixed(le.gap->accuracy, 3),
                                  io::fixed(le.gap->weighted_f1, 3), io::fixed(le.gap->macro_f1, 3), "---");
        }
        for (const auto& w : le.warnings) table5 += "  note: " + w + "\n";
    }

    // predictions.jsonl
    std::vector<json> pred_lines;
    for (std::size_t i = 0; i < test.size(); ++i) {
        json preds = json::object();
        for (const auto& em : evaluated) {
            preds[em.name] = em.predictions[i] ? json(std::string(to_string(*em.predictions[i]))) : json(nullptr);
        }
        pred_lines.push_back({{"review_id", test[i].review.raw.review_id},
                              {"language", std::string(to_string(test_lang[i]))},
                              {"true", std::string(to_string(y_test[i]))},
                              {"predictions", preds}});
    }
    write_jsonl(run_dir / files::kPredictions, pred_lines, [](const json& j) { return j; });

    json report = report_header(config, "evaluation");
    report["vocabulary"] = {{"size", vocab.size()}, {"n_docs", vocab.n_docs()}};
    report["train"] = {{"n", train.size()}, {"classes", counts_json(class_counts(y_train))}};
    report["test"] = {{"n", test.size()}, {"classes", counts_json(class_counts(y_test))}};
    report["models"] = model_rows;
    report["mcnemar"] = mcnemar_rows;
    report["language"] = language_rows;
    report["warnings"] = warnings;
    write_json(run_dir / files::kEvalJson, report);

    std::string text = text_header(config, "Model evaluation");
    for (const auto& w : warnings) text += "!! " + w + "\n";
    if (!warnings.empty()) text += "\n";
    text += fmt::format("train {} (consensus), test {} (star labels), vocabulary {} terms\n\n", train.size(), test.size(),
                        vocab.size());
    text += table2 + "\n" + table3 + "\n" + table5;
    text += config_footer(config);
    io::write_file(run_dir / files::kEvalText, text);

    Summary s;
    for (const auto& row : model_rows) {
        s.lines.push_back(fmt::format("{}: accuracy {}", row["model"].get<std::string>(),
                                      io::fixed(row["metrics"]["accuracy"].get<double>(), 3)));
    }
    s.warnings = warnings;
    if (config.strict && prediction_rejects > 0) throw ValidationError("strict mode: prediction records rejected");
    return s;
}

// --------------------------------------------------------------- analyze

Summary analyze(const RunConfig& config, const fs::path& run_dir) {
    validate(config);
    const auto corpus_reviews = read_corpus(run_dir, "analyze");
    const auto consensus = read_labeled(run_dir / files::kConsensus, "analyze");
    Summary s;
    std::vector<std::string> notices;

    // Ranking over the consensus set.
    std::vector<analytics::ScoredReview> scored;
    for (const auto& r : consensus) {
        scored.push_back({r.review.raw.app_id, r.star_label, r.review.raw.thumbs_up, r.review.raw.rating});
    }
    std::map<std::string, std::pair<double, std::size_t>> rating_sum;
    for (const auto& r : corpus_reviews) {
        auto& [sum, n] = rating_sum[r.raw.app_id];
        sum += r.raw.rating;
        ++n;
    }
    std::map<std::string, double> corpus_avg;
    for (const auto& [app, sn] : rating_sum) corpus_avg[app] = sn.first / static_cast<double>(sn.second);

    std::vector<analytics::AppSentimentProfile> ranked;
    if (!scored.empty()) ranked = analytics::rank_apps(analytics::profiles_by_app(scored));
    json ranking = report_header(config, "ranking");
    ranking["profiles"] = json::array();
    for (const auto& p : ranked) {
        json pj = analytics::to_json(p);
        if (auto it = corpus_avg.find(p.app_id); it != corpus_avg.end()) pj["corpus_avg_rating"] = it->second;
        ranking["profiles"].push_back(std::move(pj));
    }
    write_json(run_dir / files::kRankingJson, ranking);
    std::string ranking_text = text_header(config, "Cross-application sentiment rankings (thumbsUp-weighted)");
    ranking_text += analytics::format_ranking_table(ranked, corpus_avg);
    ranking_text += config_footer(config);
    io::write_file(run_dir / files::kRankingText, ranking_text);
    s.lines.push_back("ranked " + std::to_string(ranked.size()) + " apps");

    // Aspects over the clean corpus, gated by lexicon cues.
    const auto lexicon = analytics::AspectLexicon::load(fs::path(config.data_dir) / "aspects");
    analytics::ReviewIndex index;
    std::set<std::pair<std::string, Aspect>> cue_pairs;
    std::vector<client::AbsaItem> absa_items;
    for (const auto& r : corpus_reviews) {
        index.emplace(r.raw.review_id, analytics::ReviewRef{r.raw.app_id, r.raw.thumbs_up});
        for (Aspect a : analytics::detect_aspect_cues(r, lexicon)) {
            cue_pairs.insert({r.raw.review_id, a});
            absa_items.push_back({r.raw.review_id, model_text(config, r), a});
        }
    }
    std::vector<AspectPolarityRecord> absa_records;
    std::size_t absa_rejects = 0, ungated = 0;
    std::vector<client::BatchError> absa_errors;
    bool have_source = true;
    if (config.use_endpoint) {
        if (config.endpoint.base_url.empty()) throw ValidationError("endpoint.base_url is empty");
        auto fetched = client::ModelClient(config.endpoint).fetch_absa(absa_items);
        absa_records = std::move(fetched.records);
        absa_errors = std::move(fetched.errors);
    } else if (!config.absa_file.empty()) {
        auto file = client::read_absa_file(config.absa_file);
        absa_rejects = file.rejects.size();
        for (auto& rec : file.records) {
            if (cue_pairs.count({rec.review_id, rec.aspect})) {
                absa_records.push_back(std::move(rec));
            } else {
                ++ungated;
            }
        }
    } else {
        have_source = false;
    }

    json analysis = report_header(config, "analysis");
    analysis["ranking"] = {{"apps", ranked.size()}, {"consensus_reviews", consensus.size()}};
    analysis["aspect_cue_pairs"] = cue_pairs.size();
    if (absa_records.empty()) {
        notices.push_back(have_source ? "aspect report omitted: no aspect polarity records survived validation"
                                      : "aspect report omitted: no aspect polarity source configured");
        fs::remove(run_dir / files::kAspectsJson);
        fs::remove(run_dir / files::kAspectsTsv);
        fs::remove(run_dir / files::kAspectsText);
        analysis["aspects"] = nullptr;
    } else {
        const auto table = analytics::aggregate_absa(absa_records, index);
        json aj = report_header(config, "aspects");
        aj["table"] = analytics::to_json(table);
        write_json(run_dir / files::kAspectsJson, aj);
        io::write_file(run_dir / files::kAspectsTsv, analytics::aspect_tsv(table));
        std::string at = text_header(config, "Aspect-based sentiment");
        at += analytics::format_aspect_table(table);
        at += config_footer(config);
        io::write_file(run_dir / files::kAspectsText, at);
        analysis["aspects"] = {{"records", absa_records.size()},
                               {"rows", table.rows.size()},
                               {"rejected", table.rejects.size()}};
        s.lines.push_back("aggregated " + std::to_string(absa_records.size()) + " aspect records");
    }
    analysis["aspect_source"] = {{"rejected_lines", absa_rejects},
                                 {"without_cue", ungated},
                                 {"batch_errors", batch_errors_json(absa_errors)}};
    if (ungated > 0) notices.push_back(std::to_string(ungated) + " aspect records skipped: no matching cue in the review");
    if (absa_rejects > 0) notices.push_back(std::to_string(absa_rejects) + " aspect file lines rejected");

    // Monthly trends over the clean corpus with star labels.
    std::vector<analytics::TrendReview> trend_input;
    for (const auto& r : corpus_reviews) {
        trend_input.push_back({r.raw.app_id, r.raw.posted_at, labeling::star_to_sentiment(r.raw.rating), r.raw.app_version});
    }
    json tj = report_header(config, "trends");
    if (!trend_input.empty()) {
        const auto trends = analytics::monthly_trends(trend_input);
        tj["trends"] = analytics::to_json(trends);
        io::write_file(run_dir / files::kTrendsTsv, analytics::trend_tsv(trends));
        const auto& overall = trends.series.front().points;
        analysis["trends"] = {{"months", overall.size()},
                              {"first", overall.front().month.str()},
                              {"last", overall.back().month.str()}};
    } else {
        tj["trends"] = nullptr;
        io::write_file(run_dir / files::kTrendsTsv, "");
        analysis["trends"] = nullptr;
    }
    write_json(run_dir / files::kTrendsJson, tj);

    analysis["notices"] = notices;
    write_json(run_dir / files::kAnalysisJson, analysis);
    std::string text = text_header(config, "Analysis");
    for (const auto& n : notices) text += "note: " + n + "\n";
    text += fmt::format("consensus reviews ranked: {}\naspect cue pairs: {}\n", consensus.size(), cue_pairs.size());
    if (analysis["trends"].is_object()) {
        text += fmt::format("trend months: {} ({} to {})\n", analysis["trends"]["months"].get<std::size_t>(),
                            analysis["trends"]["first"].get<std::string>(), analysis["trends"]["last"].get<std::string>());
    }
    text += batch_errors_text(absa_errors);
    text += config_footer(config);
    io::write_file(run_dir / files::kAnalysisText, text);

    s.warnings = notices;
    if (config.strict && (absa_rejects > 0 || !absa_errors.empty())) {
        throw ValidationError("strict mode: aspect source had rejected or failed records");
    }
    return s;
}

// ---------------------------------------------------------------- report

Summary report(const RunConfig& config, const fs::path& run_dir) {
    if (!fs::is_directory(run_dir)) throw IoError("run directory not found: " + run_dir.string());
    struct Section {
        const char* key;
        const char* title;
        const char* json_file;
        const char* text_file;
    };
    const Section sections[] = {
        {"dataset", "Dataset statistics", files::kStatsJson, files::kStatsText},
        {"labeling", "Labeling and consensus", files::kLabelingJson, files::kLabelingText},
        {"evaluation", "Model evaluation", files::kEvalJson, files::kEvalText},
        {"ranking", "Sentiment rankings", files::kRankingJson, files::kRankingText},
        {"aspects", "Aspect-based sentiment", files::kAspectsJson, files::kAspectsText},
        {"analysis", "Analysis", files::kAnalysisJson, files::kAnalysisText},
    };
    json bundle = report_header(config, "bundle");
    bundle["sections"] = json::object();
    std::string md = "# Review sentiment report\n\nversion: " + version_string() + "\n";
    Summary s;
    for (const auto& sec : sections) {
        md += "\n## " + std::string(sec.title) + "\n\n";
        const auto jp = run_dir / sec.json_file;
        if (!fs::exists(jp)) {
            md += "_not available in this run_\n";
            bundle["sections"][sec.key] = nullptr;
            continue;
        }
        json j = json::parse(io::read_file(jp), nullptr, false);
        if (j.is_discarded()) throw ValidationError(std::string(sec.json_file) + " is not valid JSON");
        bundle["sections"][sec.key] = std::move(j);
        const auto tp = run_dir / sec.text_file;
        md += "```\n" + (fs::exists(tp) ? io::read_file(tp) : std::string()) + "```\n";
        s.lines.push_back(std::string("included ") + sec.title);
    }
    md += "\n## Config echo\n\n```json\n" + dump(to_json(config)) + "```\n";
    write_json(run_dir / files::kReportJson, bundle);
    io::write_file(run_dir / files::kReportText, md);
    return s;
}

}  // namespace revsent::pipeline
