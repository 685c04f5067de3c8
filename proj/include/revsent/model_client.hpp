#pragma once

#include "revsent/corpus.hpp"
#include "revsent/types.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace revsent::client {

struct LabelFileResult {
    std::vector<ModelLabelRecord> records;
    std::vector<corpus::Reject> rejects;
};

// Line-delimited {review_id, label, confidence[, model_id]}. Throws IoError
// when the file is missing; bad lines land in rejects.
LabelFileResult read_label_file(const std::filesystem::path& path, std::string_view default_model_id = "external");

struct AbsaFileResult {
    std::vector<AspectPolarityRecord> records;
    std::vector<corpus::Reject> rejects;
};

// Line-delimited {review_id, aspect, label, confidence}.
AbsaFileResult read_absa_file(const std::filesystem::path& path);

nlohmann::json to_json(const ModelLabelRecord& r);
nlohmann::json to_json(const AspectPolarityRecord& r);

struct ModelEndpoint {
    std::string base_url;          // e.g. "http://127.0.0.1:8765"
    int timeout_ms = 10000;
    std::size_t max_retries = 2;   // attempts = max_retries + 1
    std::size_t batch_size = 32;
    std::size_t max_in_flight = 1;
    int backoff_ms = 100;          // doubled after each failed attempt
    std::string model_id = "xlmr-ots";
};

struct SentimentItem {
    std::string id;
    std::string text;
};

struct AbsaItem {
    std::string id;
    std::string text;
    Aspect aspect = Aspect::UiUx;
};

// A batch that still failed after every retry; its items stay unlabeled.
struct BatchError {
    std::size_t first = 0;  // index of the batch's first item in the input
    std::size_t count = 0;
    std::size_t attempts = 0;
    std::string message;
};

struct SentimentFetch {
    std::vector<ModelLabelRecord> records;  // input order, failed batches skipped
    std::vector<BatchError> errors;
};

struct AbsaFetch {
    std::vector<AspectPolarityRecord> records;
    std::vector<BatchError> errors;
};

struct HealthStatus {
    std::string status;
    std::vector<std::string> models;
};

// Synchronous client for the v1 inference protocol. Transport failures and
// item-level errors are retried with exponential backoff; responses that
// break the protocol raise ProtocolError immediately.
class ModelClient {
public:
    explicit ModelClient(ModelEndpoint endpoint);

    SentimentFetch fetch_sentiment(std::span<const SentimentItem> items) const;
    AbsaFetch fetch_absa(std::span<const AbsaItem> items) const;
    HealthStatus health() const;

    const ModelEndpoint& endpoint() const { return endpoint_; }

private:
    ModelEndpoint endpoint_;
    std::string host_;         // scheme://host[:port]
    std::string path_prefix_;  // "" or "/prefix"
};

}  // namespace revsent::client
