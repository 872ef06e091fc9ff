#pragma once

// Query language models and negative KL-divergence ranking.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbqe/index.hpp"

namespace kbqe {

/// Sparse probability distribution over terms. All stored probabilities
/// are positive and sum to 1 within 1e-9.
class LanguageModel {
  public:
    using Map = std::map<std::string, double, std::less<>>;

    LanguageModel() = default;

    /// Validates the invariants; throws std::invalid_argument when violated.
    static LanguageModel from_probs(Map probs);
    /// Uniform over the given distinct terms.
    static LanguageModel uniform(const std::set<std::string>& terms);

    const Map& probs() const { return probs_; }
    double prob(std::string_view term) const;
    std::size_t size() const { return probs_.size(); }
    bool empty() const { return probs_.empty(); }
    double total() const;

    friend bool operator==(const LanguageModel&, const LanguageModel&) = default;

  private:
    explicit LanguageModel(Map probs) : probs_(std::move(probs)) {}
    Map probs_;
};

inline constexpr double kProbabilitySumTolerance = 1e-9;

/// (1 - weight) * base + weight * other; zero-probability terms dropped.
/// weight = 0 returns `base` exactly. Throws unless weight is in [0, 1].
LanguageModel interpolate(const LanguageModel& base, const LanguageModel& other, double weight);

struct Topic {
    std::string id;
    std::string query_text;
    double query_time = 0.0;  // T_Q, fractional days
};

/// Reads a JSON-lines topics file (`id`, `query`, `query_time`). Throws
/// DataError naming the offending line.
std::vector<Topic> load_topics(const std::filesystem::path& path);

struct RankedEntry {
    std::string doc_id;
    double score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Descending score, ties by ascending doc id.
struct RankedList {
    std::string topic_id;
    double query_time = 0.0;
    std::vector<RankedEntry> entries;
    /// Query terms ignored because the collection never saw them.
    std::vector<std::string> skipped_terms;
};

inline constexpr std::size_t kDefaultDepth = 1000;

/// P(w) = count(w) / |terms|. Throws std::invalid_argument on empty input.
LanguageModel mle_query_model(std::span<const std::string> terms);

/// sum over w with qm(w) > 0 and P(w|C) > 0 of qm(w) * log P(w|D).
/// Terms unseen in the collection are skipped and appended to `skipped`
/// when provided. Throws std::out_of_range for unknown documents.
double kl_score(const LanguageModel& qm, std::string_view doc_id, const Index& index,
                const SmoothingParams& s, std::vector<std::string>* skipped = nullptr);
double kl_score(const LanguageModel& qm, DocIndex doc, const Index& index,
                const SmoothingParams& s, std::vector<std::string>* skipped = nullptr);

/// prod_i P(q_i|D), accumulated in log space.
double query_likelihood(std::span<const std::string> query_terms, std::string_view doc_id,
                        const Index& index, const SmoothingParams& s);
double query_likelihood(std::span<const std::string> query_terms, DocIndex doc,
                        const Index& index, const SmoothingParams& s);

/// Ranks documents posted strictly before `query_time` that contain at least
/// one scorable query term. Documents matching no query term would all get
/// the same background score and are left out.
RankedList search(const Index& index, const LanguageModel& qm, double query_time,
                  std::size_t depth, const SmoothingParams& s);

/// `<topic_id> Q0 <doc_id> <rank> <score> <tag>` per entry.
void write_run(std::ostream& out, const RankedList& ranked, std::string_view tag);

}  // namespace kbqe
