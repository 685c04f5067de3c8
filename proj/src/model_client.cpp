#include "revsent/model_client.hpp"

#include "revsent/error.hpp"
#include "revsent/io.hpp"

#include <chrono>
#include <future>
#include <optional>
#include <thread>

#include <httplib.h>

namespace revsent::client {

using nlohmann::json;

namespace {

std::string excerpt(std::string_view body) {
    constexpr std::size_t kMax = 200;
    if (body.size() <= kMax) return std::string(body);
    return std::string(body.substr(0, kMax)) + "...";
}

std::optional<double> confidence_of(const json& j) {
    auto it = j.find("confidence");
    if (it == j.end() || !it->is_number()) return std::nullopt;
    return it->get<double>();
}

template <typename Parse>
void read_jsonl(const std::filesystem::path& path, std::vector<corpus::Reject>& rejects, Parse&& parse) {
    if (!std::filesystem::exists(path)) throw IoError("label file not found: " + path.string());
    std::size_t line_no = 0;
    for (const auto& line : io::read_lines(path)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            rejects.push_back({line_no, {}, "malformed JSON"});
            continue;
        }
        std::string id;
        if (auto it = j.find("review_id"); it != j.end() && it->is_string()) id = it->get<std::string>();
        if (id.empty()) {
            rejects.push_back({line_no, {}, "missing review_id"});
            continue;
        }
        if (auto reason = parse(j, id); !reason.empty()) rejects.push_back({line_no, id, reason});
    }
}

// Shared label/confidence validation; empty string on success.
std::string check_label(const json& j, SentimentLabel& label, double& confidence) {
    auto it = j.find("label");
    if (it == j.end() || !it->is_string()) return "missing label";
    auto parsed = parse_label(it->get<std::string>());
    if (!parsed) return "label outside {negative, neutral, positive}";
    auto conf = confidence_of(j);
    if (!conf) return "missing confidence";
    if (!(*conf >= 0.0 && *conf <= 1.0)) return "confidence out of range";
    label = *parsed;
    confidence = *conf;
    return {};
}

}  // namespace

LabelFileResult read_label_file(const std::filesystem::path& path, std::string_view default_model_id) {
    LabelFileResult result;
    read_jsonl(path, result.rejects, [&](const json& j, const std::string& id) -> std::string {
        ModelLabelRecord rec;
        rec.review_id = id;
        if (auto reason = check_label(j, rec.label, rec.confidence); !reason.empty()) return reason;
        rec.model_id = std::string(default_model_id);
        if (auto it = j.find("model_id"); it != j.end()) {
            if (!it->is_string()) return "model_id is not a string";
            rec.model_id = it->get<std::string>();
        }
        result.records.push_back(std::move(rec));
        return {};
    });
    return result;
}

AbsaFileResult read_absa_file(const std::filesystem::path& path) {
    AbsaFileResult result;
    read_jsonl(path, result.rejects, [&](const json& j, const std::string& id) -> std::string {
        AspectPolarityRecord rec;
        rec.review_id = id;
        auto it = j.find("aspect");
        if (it == j.end() || !it->is_string()) return "missing aspect";
        auto aspect = parse_aspect(it->get<std::string>());
        if (!aspect) return "unknown aspect";
        rec.aspect = *aspect;
        if (auto reason = check_label(j, rec.polarity, rec.confidence); !reason.empty()) return reason;
        result.records.push_back(std::move(rec));
        return {};
    });
    return result;
}

json to_json(const ModelLabelRecord& r) {
    return json{{"review_id", r.review_id}, {"label", std::string(to_string(r.label))},
                {"confidence", r.confidence}, {"model_id", r.model_id}};
}

json to_json(const AspectPolarityRecord& r) {
    return json{{"review_id", r.review_id}, {"aspect", std::string(to_string(r.aspect))},
                {"label", std::string(to_string(r.polarity))}, {"confidence", r.confidence}};
}

ModelClient::ModelClient(ModelEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    require(endpoint_.batch_size >= 1, "ModelEndpoint: batch_size must be at least 1");
    require(endpoint_.max_in_flight >= 1, "ModelEndpoint: max_in_flight must be at least 1");
    const auto scheme = endpoint_.base_url.find("://");
    if (scheme == std::string::npos) throw ValidationError("endpoint URL needs a scheme: " + endpoint_.base_url);
    const auto path = endpoint_.base_url.find('/', scheme + 3);
    host_ = endpoint_.base_url.substr(0, path);
    if (path != std::string::npos) {
        path_prefix_ = endpoint_.base_url.substr(path);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
}

namespace {

enum class Outcome { Ok, Retry };

struct Attempt {
    Outcome outcome = Outcome::Ok;
    std::string message;
};

// Posts body, returns the parsed JSON object or a retryable failure.
// Protocol violations throw.
Attempt post_json(const std::string& host, const std::string& path, int timeout_ms, const json& body,
                  json& response) {
    httplib::Client cli(host);
    const auto secs = timeout_ms / 1000;
    const auto usecs = (timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    auto res = cli.Post(path, body.dump(), "application/json");
    if (!res) return {Outcome::Retry, "transport failure: " + httplib::to_string(res.error())};
    if (res->status >= 500 || res->status == 429) {
        return {Outcome::Retry, "server status " + std::to_string(res->status)};
    }
    if (res->status != 200) {
        throw ProtocolError("POST " + path + " returned status " + std::to_string(res->status) + ": " +
                            excerpt(res->body));
    }
    response = json::parse(res->body, nullptr, false);
    if (response.is_discarded() || !response.is_object()) {
        throw ProtocolError("POST " + path + " returned malformed JSON: " + excerpt(res->body));
    }
    if (auto v = response.find("version"); v != response.end() && *v != "v1") {
        throw ProtocolError("POST " + path + " answered with unsupported protocol version: " + excerpt(res->body));
    }
    auto items = response.find("items");
    if (items == response.end() || !items->is_array()) {
        throw ProtocolError("POST " + path + " response lacks an items array: " + excerpt(res->body));
    }
    return {};
}

// Runs each batch through `attempt_batch` with retries, keeping input order.
template <typename Record, typename AttemptFn>
void run_batches(const ModelEndpoint& ep, std::size_t n_items, std::vector<Record>& records,
                 std::vector<BatchError>& errors, AttemptFn&& attempt_batch) {
    struct BatchResult {
        std::vector<Record> records;
        std::optional<BatchError> error;
    };
    auto run_one = [&](std::size_t first) {
        const std::size_t count = std::min(ep.batch_size, n_items - first);
        BatchResult out;
        std::string last_message;
        for (std::size_t attempt = 0; attempt <= ep.max_retries; ++attempt) {
            if (attempt > 0 && ep.backoff_ms > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(ep.backoff_ms) * (1LL << (attempt - 1)));
            }
            std::vector<Record> batch;
            const Attempt a = attempt_batch(first, count, batch);
            if (a.outcome == Outcome::Ok) {
                out.records = std::move(batch);
                return out;
            }
            last_message = a.message;
        }
        out.error = BatchError{first, count, ep.max_retries + 1, last_message};
        return out;
    };

    std::vector<std::size_t> starts;
    for (std::size_t first = 0; first < n_items; first += ep.batch_size) starts.push_back(first);
    for (std::size_t w = 0; w < starts.size(); w += ep.max_in_flight) {
        const std::size_t end = std::min(starts.size(), w + ep.max_in_flight);
        std::vector<std::future<BatchResult>> inflight;
        for (std::size_t b = w; b < end; ++b) inflight.push_back(std::async(std::launch::async, run_one, starts[b]));
        for (auto& f : inflight) {
            BatchResult r = f.get();
            if (r.error) {
                errors.push_back(*r.error);
            } else {
                for (auto& rec : r.records) records.push_back(std::move(rec));
            }
        }
    }
}

}  // namespace

SentimentFetch ModelClient::fetch_sentiment(std::span<const SentimentItem> items) const {
    SentimentFetch result;
    const std::string path = path_prefix_ + "/v1/sentiment";
    run_batches(endpoint_, items.size(), result.records, result.errors,
                [&](std::size_t first, std::size_t count, std::vector<ModelLabelRecord>& out) -> Attempt {
                    json body{{"items", json::array()}};
                    for (std::size_t i = first; i < first + count; ++i) {
                        body["items"].push_back({{"id", items[i].id}, {"text", items[i].text}});
                    }
                    json response;
                    if (Attempt a = post_json(host_, path, endpoint_.timeout_ms, body, response);
                        a.outcome != Outcome::Ok) {
                        return a;
                    }
                    const auto& got = response["items"];
                    if (got.size() != count) {
                        throw ProtocolError("sentiment response has " + std::to_string(got.size()) + " items for " +
                                            std::to_string(count) + " inputs: " + excerpt(response.dump()));
                    }
                    for (std::size_t k = 0; k < count; ++k) {
                        const auto& item = got[k];
                        const auto& expected = items[first + k].id;
                        if (!item.is_object() || item.value("id", std::string{}) != expected) {
                            throw ProtocolError("sentiment response item " + std::to_string(k) +
                                                " does not echo id " + expected + ": " + excerpt(item.dump()));
                        }
                        if (item.contains("error")) {
                            return {Outcome::Retry, "item error for " + expected + ": " + excerpt(item["error"].dump())};
                        }
                        ModelLabelRecord rec{expected, SentimentLabel::Neutral, 0.0, endpoint_.model_id};
                        if (auto reason = check_label(item, rec.label, rec.confidence); !reason.empty()) {
                            throw ProtocolError("sentiment response item for " + expected + ": " + reason);
                        }
                        out.push_back(std::move(rec));
                    }
                    return {};
                });
    return result;
}

AbsaFetch ModelClient::fetch_absa(std::span<const AbsaItem> items) const {
    AbsaFetch result;
    const std::string path = path_prefix_ + "/v1/absa";
    run_batches(endpoint_, items.size(), result.records, result.errors,
                [&](std::size_t first, std::size_t count, std::vector<AspectPolarityRecord>& out) -> Attempt {
                    json body{{"items", json::array()}};
                    for (std::size_t i = first; i < first + count; ++i) {
                        body["items"].push_back({{"id", items[i].id},
                                                 {"text", items[i].text},
                                                 {"aspect", std::string(to_string(items[i].aspect))}});
                    }
                    json response;
                    if (Attempt a = post_json(host_, path, endpoint_.timeout_ms, body, response);
                        a.outcome != Outcome::Ok) {
                        return a;
                    }
                    const auto& got = response["items"];
                    if (got.size() != count) {
                        throw ProtocolError("absa response has " + std::to_string(got.size()) + " items for " +
                                            std::to_string(count) + " inputs: " + excerpt(response.dump()));
                    }
                    for (std::size_t k = 0; k < count; ++k) {
                        const auto& item = got[k];
                        const auto& expected = items[first + k];
                        const std::string aspect_name(to_string(expected.aspect));
                        if (!item.is_object() || item.value("id", std::string{}) != expected.id ||
                            item.value("aspect", std::string{}) != aspect_name) {
                            throw ProtocolError("absa response item " + std::to_string(k) + " does not echo (" +
                                                expected.id + ", " + aspect_name + "): " + excerpt(item.dump()));
                        }
                        if (item.contains("error")) {
                            return {Outcome::Retry, "item error for " + expected.id + ": " + excerpt(item["error"].dump())};
                        }
                        AspectPolarityRecord rec{expected.id, expected.aspect, SentimentLabel::Neutral, 0.0};
                        if (auto reason = check_label(item, rec.polarity, rec.confidence); !reason.empty()) {
                            throw ProtocolError("absa response item for " + expected.id + ": " + reason);
                        }
                        out.push_back(std::move(rec));
                    }
                    return {};
                });
    return result;
}

HealthStatus ModelClient::health() const {
    httplib::Client cli(host_);
    const auto secs = endpoint_.timeout_ms / 1000;
    const auto usecs = (endpoint_.timeout_ms % 1000) * 1000;
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    auto res = cli.Get(path_prefix_ + "/healthz");
    if (!res) throw IoError("healthz: transport failure: " + httplib::to_string(res.error()));
    if (res->status != 200) throw ProtocolError("healthz returned status " + std::to_string(res->status));
    const json j = json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("status") || !j["status"].is_string() ||
        !j.contains("models") || !j["models"].is_array()) {
        throw ProtocolError("healthz returned malformed JSON: " + excerpt(res->body));
    }
    HealthStatus h;
    h.status = j["status"].get<std::string>();
    for (const auto& m : j["models"]) {
        if (!m.is_string()) throw ProtocolError("healthz: model ids must be strings");
        h.models.push_back(m.get<std::string>());
    }
    return h;
}

}  // namespace revsent::client
