#pragma once

// Subcommand implementations behind the kbqe executable.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kbqe/corpus.hpp"
#include "kbqe/evaluation.hpp"
#include "kbqe/index.hpp"
#include "kbqe/knowledge.hpp"
#include "kbqe/pipeline.hpp"

namespace kbqe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Bad flags or flag combinations.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// "MAX" (any case) or a non-negative integer.
std::size_t parse_k(std::string_view text);
std::string format_k(std::size_t k);

struct IndexOptions {
    std::filesystem::path corpus;
    std::filesystem::path out;
    std::optional<std::filesystem::path> stopwords;
    EnglishFilter english_filter = EnglishFilter::off;
    bool merge_url_titles = true;
    std::string retweet_prefix = "RT";
};

struct IndexSummary {
    CorpusStats corpus;
    std::size_t vocabulary = 0;
};

/// Builds and saves an index snapshot, printing one stats line.
IndexSummary cmd_index(const IndexOptions& opts, std::ostream& out);

struct RunInputs {
    std::filesystem::path index;
    std::optional<std::filesystem::path> store;
    std::filesystem::path topics;
    std::optional<std::filesystem::path> lexicon;
    std::size_t threads = 1;
};

/// Everything a batch of topics needs, loaded once.
struct Workspace {
    IndexSnapshot snapshot;
    TextAnalyzer analyzer;
    std::optional<ConceptStore> store;
    LexiconTagger tagger;
    std::optional<ConceptOverrides> overrides;
    std::vector<Topic> topics;

    PipelineContext context() const;
};

/// Loads the inputs; throws UsageError when a knowledge variant has no store.
Workspace load_workspace(const RunInputs& inputs, const SystemConfig& cfg);

void write_runs(std::ostream& out, const std::vector<RankedList>& runs, std::string_view tag);

struct RunOptions {
    RunInputs inputs;
    SystemConfig config;
    std::string tag;  // defaults to the variant name
    std::optional<std::filesystem::path> debug_dump;
};

/// Runs every topic and writes the TREC run to `out`.
std::vector<RankedList> cmd_run(const RunOptions& opts, std::ostream& out);

struct EvalOptions {
    std::filesystem::path run;
    std::filesystem::path qrels;
    RelevanceMode mode = RelevanceMode::allrel;
    std::vector<std::size_t> cutoffs = kDefaultCutoffs;
    std::optional<std::filesystem::path> compare;
    bool json = false;
};

EvalReport cmd_eval(const EvalOptions& opts, std::ostream& out);

inline const std::vector<std::string> kSweepParameters{"alpha", "beta", "K", "N", "r"};

struct SweepOptions {
    RunInputs inputs;
    SystemConfig config;
    bool variant_given = false;  // otherwise qefb, or qefb_smm for a beta sweep
    std::filesystem::path qrels;
    std::string parameter;
    std::vector<std::string> values;
    RelevanceMode mode = RelevanceMode::allrel;
    bool json = false;
};

struct SweepRow {
    std::string value;
    double map = 0.0;
    std::vector<std::size_t> cutoffs;
    std::vector<double> precision;
};

/// Precision cutoffs reported by a sweep of `parameter`.
std::vector<std::size_t> sweep_cutoffs(std::string_view parameter);

/// Applies `value` to the named field; throws UsageError on bad names or values.
void apply_parameter(SystemConfig& cfg, std::string_view parameter, std::string_view value);

/// One run + evaluation per value; prints a table, or JSON lines with `json`.
std::vector<SweepRow> cmd_sweep(const SweepOptions& opts, std::ostream& out);

/// Command-line entry point: parses argv, dispatches, maps errors to exit codes.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace kbqe::cli
