#pragma once

// TREC-style evaluation: qrels, run files, AP / P@N and paired t-tests.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kbqe/retrieval.hpp"

namespace kbqe {

enum class RelevanceMode { allrel, highrel };

/// Minimum grade counted as relevant: 1 for allrel, 2 for highrel.
int relevance_threshold(RelevanceMode mode);
std::string_view relevance_mode_name(RelevanceMode mode);
/// Throws std::invalid_argument for anything but "allrel" / "highrel".
RelevanceMode parse_relevance_mode(std::string_view name);

inline constexpr std::size_t kApCutoff = 1000;

/// Graded judgments. Unjudged documents have grade 0.
class Qrels {
  public:
    void add(std::string topic, std::string doc, int grade);
    int grade(std::string_view topic, std::string_view doc) const;
    std::size_t relevant_count(std::string_view topic, int threshold) const;
    std::vector<std::string> topics() const;
    bool empty() const { return judgments_.empty(); }

  private:
    std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>> judgments_;
};

/// `topic iter doc grade` lines. Throws DataError naming the line on bad input.
Qrels load_qrels(const std::filesystem::path& path);

/// Runs keyed by topic id, entries re-sorted by descending score then
/// ascending doc id. Throws DataError naming the line on bad input.
std::map<std::string, RankedList> read_run(std::istream& in, std::string_view source = "run");
std::map<std::string, RankedList> load_run(const std::filesystem::path& path);

/// Non-interpolated AP over the first `cutoff` entries, with R from the
/// qrels. nullopt when the topic has no relevant documents.
std::optional<double> average_precision(const RankedList& ranked, const Qrels& qrels,
                                        int threshold = 1, std::size_t cutoff = kApCutoff);

/// Relevant documents among the first n, divided by n (short lists count
/// missing ranks as non-relevant). Throws std::invalid_argument for n = 0.
double precision_at_n(const RankedList& ranked, const Qrels& qrels, std::size_t n,
                      int threshold = 1);

struct TTestResult {
    double t = 0.0;
    double p = 1.0;  // two-sided
    std::size_t df = 0;
    double mean_difference = 0.0;
};

/// Two-sided paired t-test of a against b. Throws std::invalid_argument on
/// mismatched sizes or fewer than two pairs. Identical samples give t = 0,
/// p = 1; a constant nonzero difference gives t = +-inf, p = 0.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct TopicMetrics {
    std::string topic;
    double ap = 0.0;
    std::vector<double> precision;  // one per cutoff in EvalReport::cutoffs
};

struct EvalReport {
    RelevanceMode mode = RelevanceMode::allrel;
    std::vector<std::size_t> cutoffs;
    std::vector<TopicMetrics> topics;  // evaluated topics, by id
    std::vector<std::string> excluded; // run topics without relevant documents
    double map = 0.0;
    std::vector<double> mean_precision;
};

inline const std::vector<std::size_t> kDefaultCutoffs{1, 5, 10, 30};

/// Evaluates every run topic that has at least one relevant document.
/// Judged topics absent from the run are ignored.
EvalReport evaluate(const std::map<std::string, RankedList>& run, const Qrels& qrels,
                    RelevanceMode mode, std::span<const std::size_t> cutoffs = kDefaultCutoffs);

void write_report(std::ostream& out, const EvalReport& report);
nlohmann::json report_to_json(const EvalReport& report);

struct Comparison {
    std::vector<std::string> topics;  // evaluated in both reports
    TTestResult map;
    std::vector<TTestResult> precision;
};

/// Paired tests of `a` against `b` over their common topics.
Comparison compare_reports(const EvalReport& a, const EvalReport& b);
void write_comparison(std::ostream& out, const EvalReport& a, const EvalReport& b,
                      const Comparison& cmp);
nlohmann::json comparison_to_json(const Comparison& cmp);

}  // namespace kbqe
