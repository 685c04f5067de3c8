#pragma once

#include "revsent/run_config.hpp"
#include "revsent/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace revsent::pipeline {

// Stable file names inside a run directory.
namespace files {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kStatsJson = "stats.json";
inline constexpr const char* kStatsText = "stats.txt";
inline constexpr const char* kDrops = "drops.jsonl";
inline constexpr const char* kRejects = "rejects.jsonl";
inline constexpr const char* kSplit = "split.json";
inline constexpr const char* kTrainLabeled = "train_labeled.jsonl";
inline constexpr const char* kConsensus = "consensus.jsonl";
inline constexpr const char* kTest = "test.jsonl";
inline constexpr const char* kModelLabels = "model_labels.jsonl";
inline constexpr const char* kLabelRejects = "label_rejects.jsonl";
inline constexpr const char* kLabelingJson = "labeling_report.json";
inline constexpr const char* kLabelingText = "labeling_report.txt";
inline constexpr const char* kVocabulary = "vocab.txt";
inline constexpr const char* kModelsDir = "models";
inline constexpr const char* kPredictions = "predictions.jsonl";
inline constexpr const char* kGridSearch = "grid_search.json";
inline constexpr const char* kEvalJson = "eval_report.json";
inline constexpr const char* kEvalText = "eval_report.txt";
inline constexpr const char* kRankingJson = "ranking.json";
inline constexpr const char* kRankingText = "ranking.txt";
inline constexpr const char* kAspectsJson = "aspects.json";
inline constexpr const char* kAspectsTsv = "aspects.tsv";
inline constexpr const char* kAspectsText = "aspects.txt";
inline constexpr const char* kTrendsJson = "trends.json";
inline constexpr const char* kTrendsTsv = "trends.tsv";
inline constexpr const char* kAnalysisJson = "analysis_report.json";
inline constexpr const char* kAnalysisText = "analysis_report.txt";
inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportText = "report.md";
}  // namespace files

// Human-readable lines for the console; artifacts live in the run directory.
struct Summary {
    std::vector<std::string> lines;
    std::vector<std::string> warnings;
};

// <out>/<YYYYMMDDTHHMMSSZ>-seed<N>
std::filesystem::path default_run_dir(const RunConfig& config, Timestamp now);

// Each stage reads what earlier stages left in run_dir. Validation problems
// throw ValidationError, missing files IoError, endpoint misbehaviour
// ProtocolError. With config.strict, rejected input records are failures
// too (raised after the stage's files are written).
Summary ingest(const RunConfig& config, const std::filesystem::path& run_dir);
Summary label(const RunConfig& config, const std::filesystem::path& run_dir);
Summary train_eval(const RunConfig& config, const std::filesystem::path& run_dir);
Summary analyze(const RunConfig& config, const std::filesystem::path& run_dir);
Summary report(const RunConfig& config, const std::filesystem::path& run_dir);

}  // namespace revsent::pipeline
