#pragma once

#include "revsent/corpus.hpp"
#include "revsent/features.hpp"
#include "revsent/model_client.hpp"
#include "revsent/models.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace revsent {

// "revsent <major.minor.patch>", stamped into every report.
std::string version_string();

struct GridConfig {
    std::vector<double> nb_alpha{0.1, 0.5, 1.0};
    std::vector<double> lr_lambda{1e-4, 1e-3, 1e-2};
    std::size_t lr_max_iters = 1000;
    double lr_tol = 1e-6;
    std::vector<double> svm_lambda{1e-4, 1e-3, 1e-2};
    std::vector<std::size_t> svm_epochs{20, 50};
    std::vector<std::size_t> rf_n_trees{100, 200};
    std::vector<std::size_t> rf_max_depth{16, 32};
    std::vector<std::size_t> rf_min_leaf{2};
    std::size_t rf_features_per_split = 0;  // 0: floor(sqrt(d))
};

struct RunConfig {
    std::string reviews_path;
    std::string labels_file;       // model sentiment labels, file source
    std::string absa_file;         // aspect polarity records, file source
    std::string predictions_file;  // extra external predictions on the test set
    bool use_endpoint = false;     // fetch labels and aspects over HTTP instead
    client::ModelEndpoint endpoint;

    std::vector<std::string> apps;  // empty: accept any app_id
    std::uint64_t seed = 42;
    double split_ratio = 0.2;
    corpus::CorpusConfig corpus;
    features::FeatureConfig features;
    GridConfig grids;
    std::vector<models::Family> families{models::Family::NaiveBayes, models::Family::LogisticRegression,
                                         models::Family::LinearSvm, models::Family::RandomForest};
    std::size_t cv_folds = 5;
    std::size_t bootstrap_resamples = 2000;
    double bootstrap_level = 0.95;
    double missing_label_warn_ratio = 0.5;
    std::string default_model_id = "external";
    std::string model_text = "raw";  // text sent to the external model
    std::string data_dir;
    std::string out_dir = "runs";
    bool strict = false;
};

RunConfig default_run_config();

// Unknown keys and ill-typed values throw ValidationError.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = default_run_config());
RunConfig load_run_config(const std::filesystem::path& path);
void validate(const RunConfig& config);

// Canonical serialization; this is the config echo embedded in reports.
nlohmann::json to_json(const RunConfig& config);

std::vector<models::Params> grid_for(const RunConfig& config, models::Family family);

}  // namespace revsent
