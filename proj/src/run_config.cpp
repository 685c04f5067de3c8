#include "revsent/run_config.hpp"

#include "revsent/error.hpp"

#include <fstream>
#include <set>

#ifndef REVSENT_VERSION
#define REVSENT_VERSION "0.0.0"
#endif
#ifndef REVSENT_DATA_DIR
#define REVSENT_DATA_DIR "data"
#endif

namespace revsent {

using nlohmann::json;

std::string version_string() { return std::string("revsent ") + REVSENT_VERSION; }

RunConfig default_run_config() {
    RunConfig c;
    c.data_dir = REVSENT_DATA_DIR;
    return c;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw ValidationError("config key '" + key + "': " + what);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(where, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : j.items()) {
        if (!ok.count(k)) bad(where.empty() ? k : where + "." + k, "unknown key");
    }
}

template <typename T>
void read(const json& j, const char* key, const std::string& where, T& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    const std::string name = where.empty() ? key : where + "." + key;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) bad(name, "expected a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) bad(name, "expected a string");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) bad(name, "expected a number");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_integer()) bad(name, "expected an integer");
            if (std::is_unsigned_v<T> && it->is_number_integer() && !it->is_number_unsigned()) {
                bad(name, "expected a non-negative integer");
            }
        }
        out = it->get<T>();
    } catch (const json::exception& e) {
        bad(name, e.what());
    }
}

template <typename T>
void read_list(const json& j, const char* key, const std::string& where, std::vector<T>& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    const std::string name = where + "." + key;
    if (!it->is_array()) bad(name, "expected an array");
    std::vector<T> values;
    for (const auto& v : *it) {
        if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) bad(name, "expected numbers");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_unsigned()) bad(name, "expected non-negative integers");
        } else {
            if (!v.is_string()) bad(name, "expected strings");
        }
        values.push_back(v.get<T>());
    }
    out = std::move(values);
}

}  // namespace

RunConfig run_config_from_json(const json& j, RunConfig c) {
    check_keys(j, "", {"inputs", "apps", "seed", "split_ratio", "corpus", "features", "grids", "families",
                       "cv_folds", "bootstrap", "endpoint", "missing_label_warn_ratio", "default_model_id",
                       "model_text", "data_dir", "out", "strict"});
    if (auto it = j.find("inputs"); it != j.end()) {
        check_keys(*it, "inputs", {"reviews", "labels_file", "absa_file", "predictions_file", "use_endpoint"});
        read(*it, "reviews", "inputs", c.reviews_path);
        read(*it, "labels_file", "inputs", c.labels_file);
        read(*it, "absa_file", "inputs", c.absa_file);
        read(*it, "predictions_file", "inputs", c.predictions_file);
        read(*it, "use_endpoint", "inputs", c.use_endpoint);
    }
    read_list(j, "apps", "", c.apps);
    read(j, "seed", "", c.seed);
    read(j, "split_ratio", "", c.split_ratio);
    if (auto it = j.find("corpus"); it != j.end()) {
        check_keys(*it, "corpus", {"bangla_threshold", "english_threshold", "noise_min_tokens"});
        read(*it, "bangla_threshold", "corpus", c.corpus.bangla_threshold);
        read(*it, "english_threshold", "corpus", c.corpus.english_threshold);
        read(*it, "noise_min_tokens", "corpus", c.corpus.noise_min_tokens);
    }
    if (auto it = j.find("features"); it != j.end()) {
        check_keys(*it, "features", {"ngram_min", "ngram_max", "max_features"});
        read(*it, "ngram_min", "features", c.features.ngram_min);
        read(*it, "ngram_max", "features", c.features.ngram_max);
        read(*it, "max_features", "features", c.features.max_features);
    }
    if (auto it = j.find("grids"); it != j.end()) {
        check_keys(*it, "grids", {"nb", "lr", "svm", "rf"});
        auto& g = c.grids;
        if (auto nb = it->find("nb"); nb != it->end()) {
            check_keys(*nb, "grids.nb", {"alpha"});
            read_list(*nb, "alpha", "grids.nb", g.nb_alpha);
        }
        if (auto lr = it->find("lr"); lr != it->end()) {
            check_keys(*lr, "grids.lr", {"lambda", "max_iters", "tol"});
            read_list(*lr, "lambda", "grids.lr", g.lr_lambda);
            read(*lr, "max_iters", "grids.lr", g.lr_max_iters);
            read(*lr, "tol", "grids.lr", g.lr_tol);
        }
        if (auto svm = it->find("svm"); svm != it->end()) {
            check_keys(*svm, "grids.svm", {"lambda", "epochs"});
            read_list(*svm, "lambda", "grids.svm", g.svm_lambda);
            read_list(*svm, "epochs", "grids.svm", g.svm_epochs);
        }
        if (auto rf = it->find("rf"); rf != it->end()) {
            check_keys(*rf, "grids.rf", {"n_trees", "max_depth", "min_leaf", "features_per_split"});
            read_list(*rf, "n_trees", "grids.rf", g.rf_n_trees);
            read_list(*rf, "max_depth", "grids.rf", g.rf_max_depth);
            read_list(*rf, "min_leaf", "grids.rf", g.rf_min_leaf);
            read(*rf, "features_per_split", "grids.rf", g.rf_features_per_split);
        }
    }
    if (auto it = j.find("families"); it != j.end()) {
        std::vector<std::string> names;
        read_list(j, "families", "", names);
        c.families.clear();
        for (const auto& n : names) {
            auto f = models::parse_family(n);
            if (!f) bad("families", "unknown family '" + n + "'");
            c.families.push_back(*f);
        }
    }
    read(j, "cv_folds", "", c.cv_folds);
    if (auto it = j.find("bootstrap"); it != j.end()) {
        check_keys(*it, "bootstrap", {"resamples", "level"});
        read(*it, "resamples", "bootstrap", c.bootstrap_resamples);
        read(*it, "level", "bootstrap", c.bootstrap_level);
    }
    if (auto it = j.find("endpoint"); it != j.end()) {
        check_keys(*it, "endpoint",
                   {"base_url", "timeout_ms", "max_retries", "batch_size", "max_in_flight", "backoff_ms", "model_id"});
        auto& e = c.endpoint;
        read(*it, "base_url", "endpoint", e.base_url);
        read(*it, "timeout_ms", "endpoint", e.timeout_ms);
        read(*it, "max_retries", "endpoint", e.max_retries);
        read(*it, "batch_size", "endpoint", e.batch_size);
        read(*it, "max_in_flight", "endpoint", e.max_in_flight);
        read(*it, "backoff_ms", "endpoint", e.backoff_ms);
        read(*it, "model_id", "endpoint", e.model_id);
    }
    read(j, "missing_label_warn_ratio", "", c.missing_label_warn_ratio);
    read(j, "default_model_id", "", c.default_model_id);
    read(j, "model_text", "", c.model_text);
    read(j, "data_dir", "", c.data_dir);
    read(j, "out", "", c.out_dir);
    read(j, "strict", "", c.strict);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("config file not found: " + path.string());
    std::ifstream in(path);
    const json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ValidationError("config file is not valid JSON: " + path.string());
    return run_config_from_json(j);
}

void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& msg) {
        if (!ok) throw ValidationError("config: " + msg);
    };
    need(c.split_ratio > 0.0 && c.split_ratio < 1.0, "split_ratio must lie in (0, 1)");
    need(c.corpus.bangla_threshold >= 0.0 && c.corpus.bangla_threshold <= 1.0, "bangla_threshold must lie in [0, 1]");
    need(c.corpus.english_threshold >= 0.0 && c.corpus.english_threshold <= 1.0,
         "english_threshold must lie in [0, 1]");
    need(c.features.ngram_min >= 1 && c.features.ngram_min <= c.features.ngram_max, "need 1 <= ngram_min <= ngram_max");
    need(c.cv_folds >= 2, "cv_folds must be at least 2");
    need(c.bootstrap_resamples >= 100, "bootstrap.resamples must be at least 100");
    need(c.bootstrap_level > 0.0 && c.bootstrap_level < 1.0, "bootstrap.level must lie in (0, 1)");
    need(!c.families.empty(), "families must not be empty");
    need(c.endpoint.batch_size >= 1, "endpoint.batch_size must be at least 1");
    need(c.endpoint.max_in_flight >= 1, "endpoint.max_in_flight must be at least 1");
    need(c.endpoint.timeout_ms > 0, "endpoint.timeout_ms must be positive");
    need(c.endpoint.backoff_ms >= 0, "endpoint.backoff_ms must be non-negative");
    need(c.model_text == "raw" || c.model_text == "normalized", "model_text must be 'raw' or 'normalized'");
    need(c.missing_label_warn_ratio >= 0.0 && c.missing_label_warn_ratio <= 1.0,
         "missing_label_warn_ratio must lie in [0, 1]");
    const auto& g = c.grids;
    need(!g.nb_alpha.empty() && !g.lr_lambda.empty() && !g.svm_lambda.empty() && !g.svm_epochs.empty() &&
             !g.rf_n_trees.empty() && !g.rf_max_depth.empty() && !g.rf_min_leaf.empty(),
         "grid value lists must not be empty");
    for (double a : g.nb_alpha) need(a > 0.0, "grids.nb.alpha values must be positive");
    for (double l : g.lr_lambda) need(l >= 0.0, "grids.lr.lambda values must be non-negative");
    for (double l : g.svm_lambda) need(l > 0.0, "grids.svm.lambda values must be positive");
    for (auto e : g.svm_epochs) need(e >= 1, "grids.svm.epochs values must be at least 1");
    for (auto t : g.rf_n_trees) need(t >= 1, "grids.rf.n_trees values must be at least 1");
    for (auto m : g.rf_min_leaf) need(m >= 1, "grids.rf.min_leaf values must be at least 1");
}

json to_json(const RunConfig& c) {
    json families = json::array();
    for (auto f : c.families) families.push_back(std::string(models::to_string(f)));
    const auto& g = c.grids;
    return json{
        {"inputs",
         {{"reviews", c.reviews_path},
          {"labels_file", c.labels_file},
          {"absa_file", c.absa_file},
          {"predictions_file", c.predictions_file},
          {"use_endpoint", c.use_endpoint}}},
        {"apps", c.apps},
        {"seed", c.seed},
        {"split_ratio", c.split_ratio},
        {"corpus",
         {{"bangla_threshold", c.corpus.bangla_threshold},
          {"english_threshold", c.corpus.english_threshold},
          {"noise_min_tokens", c.corpus.noise_min_tokens}}},
        {"features",
         {{"ngram_min", c.features.ngram_min},
          {"ngram_max", c.features.ngram_max},
          {"max_features", c.features.max_features}}},
        {"grids",
         {{"nb", {{"alpha", g.nb_alpha}}},
          {"lr", {{"lambda", g.lr_lambda}, {"max_iters", g.lr_max_iters}, {"tol", g.lr_tol}}},
          {"svm", {{"lambda", g.svm_lambda}, {"epochs", g.svm_epochs}}},
          {"rf",
           {{"n_trees", g.rf_n_trees},
            {"max_depth", g.rf_max_depth},
            {"min_leaf", g.rf_min_leaf},
            {"features_per_split", g.rf_features_per_split}}}}},
        {"families", families},
        {"cv_folds", c.cv_folds},
        {"bootstrap", {{"resamples", c.bootstrap_resamples}, {"level", c.bootstrap_level}}},
        {"endpoint",
         {{"base_url", c.endpoint.base_url},
          {"timeout_ms", c.endpoint.timeout_ms},
          {"max_retries", c.endpoint.max_retries},
          {"batch_size", c.endpoint.batch_size},
          {"max_in_flight", c.endpoint.max_in_flight},
          {"backoff_ms", c.endpoint.backoff_ms},
          {"model_id", c.endpoint.model_id}}},
        {"missing_label_warn_ratio", c.missing_label_warn_ratio},
        {"default_model_id", c.default_model_id},
        {"model_text", c.model_text},
        {"data_dir", c.data_dir},
        {"out", c.out_dir},
        {"strict", c.strict},
    };
}

std::vector<models::Params> grid_for(const RunConfig& c, models::Family family) {
    using namespace models;
    const auto& g = c.grids;
    std::vector<Params> grid;
    switch (family) {
        case Family::NaiveBayes:
            for (double a : g.nb_alpha) grid.push_back(NBParams{a});
            break;
        case Family::LogisticRegression:
            for (double l : g.lr_lambda) {
                LRParams p;
                p.lambda = l;
                p.max_iters = g.lr_max_iters;
                p.tol = g.lr_tol;
                grid.push_back(p);
            }
            break;
        case Family::LinearSvm:
            for (double l : g.svm_lambda) {
                for (auto e : g.svm_epochs) {
                    SVMParams p;
                    p.lambda = l;
                    p.epochs = e;
                    p.seed = c.seed;
                    grid.push_back(p);
                }
            }
            break;
        case Family::RandomForest:
            for (auto t : g.rf_n_trees) {
                for (auto d : g.rf_max_depth) {
                    for (auto m : g.rf_min_leaf) {
                        RFParams p;
                        p.n_trees = t;
                        p.max_depth = d;
                        p.min_leaf = m;
                        p.features_per_split = g.rf_features_per_split;
                        p.seed = c.seed;
                        grid.push_back(p);
                    }
                }
            }
            break;
    }
    return grid;
}

}  // namespace revsent
