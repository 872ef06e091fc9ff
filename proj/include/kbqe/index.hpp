#pragma once

// Immutable inverted index with collection statistics, Dirichlet-smoothed
// document models and the exponential recency prior.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "kbqe/corpus.hpp"

namespace kbqe {

using TermId = std::uint32_t;
using DocIndex = std::uint32_t;

struct SmoothingParams {
    double mu = 100.0;
};

struct Posting {
    DocIndex doc;
    std::uint32_t count;

    friend bool operator==(const Posting&, const Posting&) = default;
};

struct TermCount {
    TermId term;
    std::uint32_t count;
};

struct DocEntry {
    std::string id;
    std::uint64_t length = 0;
    double post_time = 0.0;
    std::vector<TermCount> terms;  // sorted by term id
};

class Index {
  public:
    Index() = default;

    /// Builds the index. Throws DataError on duplicate document ids or
    /// documents that violate the length/count invariants.
    static Index build(std::vector<Document> docs);

    std::size_t num_docs() const { return docs_.size(); }
    std::size_t vocabulary_size() const { return vocabulary_.size(); }
    std::uint64_t collection_length() const { return collection_length_; }
    bool empty() const { return collection_length_ == 0; }

    /// Sorted vocabulary; TermId is the position in this list.
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    std::optional<TermId> term_id(std::string_view term) const;
    const std::string& term(TermId id) const { return vocabulary_[id]; }

    /// Documents ordered by ascending id; DocIndex is the position here.
    const DocEntry& doc(DocIndex d) const { return docs_[d]; }
    std::optional<DocIndex> find_doc(std::string_view id) const;
    /// Like find_doc but throws std::out_of_range for unknown ids.
    DocIndex doc_index(std::string_view id) const;

    std::span<const Posting> postings(TermId t) const { return postings_[t]; }
    std::uint64_t collection_count(TermId t) const { return collection_counts_[t]; }
    std::uint64_t collection_count(std::string_view term) const;

    /// c(term, D); 0 when absent.
    std::uint32_t count(DocIndex d, TermId t) const;

    /// collection_counts[term] / collection_length; 0 for unseen terms.
    /// Throws std::logic_error on an empty index.
    double collection_prob(std::string_view term) const;
    double collection_prob(TermId t) const;
    /// Dense collection model indexed by TermId.
    std::span<const double> collection_probs() const { return collection_probs_; }

    /// (c(term, D) + mu * P(term|C)) / (|D| + mu). Throws std::out_of_range
    /// for unknown documents.
    double doc_prob(std::string_view doc_id, std::string_view term,
                    const SmoothingParams& s) const;
    double doc_prob(DocIndex d, std::optional<TermId> t, const SmoothingParams& s) const;

    /// Dense smoothed document model over the whole vocabulary.
    std::vector<double> doc_distribution(DocIndex d, const SmoothingParams& s) const;

  private:
    std::vector<std::string> vocabulary_;
    std::unordered_map<std::string, TermId> term_ids_;
    std::vector<DocEntry> docs_;
    std::unordered_map<std::string, DocIndex> doc_ids_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<std::uint64_t> collection_counts_;
    std::vector<double> collection_probs_;
    std::uint64_t collection_length_ = 0;
};

/// Reconstructs the Document records held by an index (ascending id).
std::vector<Document> export_documents(const Index& index);

/// r * exp(-r * (query_time - doc_time)). Requires doc_time < query_time and
/// r > 0; throws std::invalid_argument otherwise.
double temporal_prior(double query_time, double doc_time, double rate);

/// Text snapshot of an index plus the stopword list used to build it.
struct IndexSnapshot {
    Index index;
    std::unordered_set<std::string> stopwords;
};

void save_index(const std::filesystem::path& path, const Index& index,
                const std::unordered_set<std::string>& stopwords);
IndexSnapshot load_index(const std::filesystem::path& path);

}  // namespace kbqe
