#include "revsent/error.hpp"
#include "revsent/parallel.hpp"
#include "revsent/pipeline.hpp"
#include "revsent/run_config.hpp"

#include <chrono>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

namespace fs = std::filesystem;
using namespace revsent;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kProtocol = 3 };

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string run_dir;
    std::string input;
    std::string labels_file;
    std::string endpoint;
    std::string absa_file;
    std::string predictions;
    bool strict = false;
    std::size_t threads = 0;
};

RunConfig effective_config(const Options& o) {
    RunConfig c = o.config_path.empty() ? default_run_config() : load_run_config(o.config_path);
    if (o.seed) c.seed = *o.seed;
    if (!o.out.empty()) c.out_dir = o.out;
    if (!o.input.empty()) c.reviews_path = o.input;
    if (!o.labels_file.empty()) {
        c.labels_file = o.labels_file;
        c.use_endpoint = false;
    }
    if (!o.endpoint.empty()) {
        c.endpoint.base_url = o.endpoint;
        c.use_endpoint = true;
    }
    if (!o.absa_file.empty()) c.absa_file = o.absa_file;
    if (!o.predictions.empty()) c.predictions_file = o.predictions;
    if (o.strict) c.strict = true;
    validate(c);
    return c;
}

fs::path resolve_run_dir(const Options& o, const RunConfig& c, bool may_create) {
    if (!o.run_dir.empty()) return o.run_dir;
    if (!may_create) throw ValidationError("this command needs --run-dir pointing at an existing run");
    const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    fs::path dir = pipeline::default_run_dir(c, now);
    for (int n = 2; fs::exists(dir); ++n) dir = pipeline::default_run_dir(c, now).string() + "-" + std::to_string(n);
    return dir;
}

void print(const pipeline::Summary& s) {
    for (const auto& l : s.lines) std::cout << l << "\n";
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << "\n";
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return kOk;
    } catch (const ProtocolError& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kProtocol;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilingual app-review sentiment pipeline"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config_path, "Run config (JSON)");
    app.add_option("--seed", o.seed, "Seed for splits, folds, models and bootstrap");
    app.add_option("--out", o.out, "Parent directory for new run directories");
    app.add_option("--run-dir", o.run_dir, "Use this run directory instead of creating one");
    app.add_option("--labels-file", o.labels_file, "Model sentiment labels (line-delimited JSON)");
    app.add_option("--endpoint", o.endpoint, "Inference sidecar base URL");
    app.add_option("--absa-file", o.absa_file, "Aspect polarity records (line-delimited JSON)");
    app.add_option("--predictions", o.predictions, "Extra external predictions on the test split");
    app.add_flag("--strict", o.strict, "Treat rejected records as failures");
    app.add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)");

    auto* ingest = app.add_subcommand("ingest", "Parse, deduplicate, filter and normalize a review dump");
    ingest->add_option("input", o.input, "Review dump (line-delimited JSON)");
    auto* label = app.add_subcommand("label", "Split, join model labels and build the consensus set");
    auto* train = app.add_subcommand("train-eval", "Grid-search, train and evaluate the classical models");
    auto* analyze = app.add_subcommand("analyze", "Rankings, aspect tables and monthly trends");
    auto* report = app.add_subcommand("report", "Bundle every report of a run into one document");
    auto* run = app.add_subcommand("run", "All stages in one run directory");
    run->add_option("input", o.input, "Review dump (line-delimited JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    int status = kOk;
    status = guarded([&] {
        if (o.threads > 0) set_max_threads(o.threads);
        const RunConfig config = effective_config(o);
        const bool creates = ingest->parsed() || run->parsed();
        const fs::path dir = resolve_run_dir(o, config, creates);
        if (ingest->parsed() || run->parsed()) print(pipeline::ingest(config, dir));
        if (label->parsed() || run->parsed()) print(pipeline::label(config, dir));
        if (train->parsed() || run->parsed()) print(pipeline::train_eval(config, dir));
        if (analyze->parsed() || run->parsed()) print(pipeline::analyze(config, dir));
        if (report->parsed() || run->parsed()) print(pipeline::report(config, dir));
        std::cout << "run directory: " << dir.string() << "\n";
    });
    return status;
}
