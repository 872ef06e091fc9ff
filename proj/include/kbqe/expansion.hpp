#pragma once

// Knowledge query construction: meta-property terms plus association-scored
// terms from long-text properties, weighted over pseudo-relevant documents
// with a recency prior.

#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "kbqe/corpus.hpp"
#include "kbqe/index.hpp"
#include "kbqe/knowledge.hpp"
#include "kbqe/retrieval.hpp"

namespace kbqe {

/// K value meaning "every candidate with a positive score".
inline constexpr std::size_t kAllPositiveTerms = std::numeric_limits<std::size_t>::max();

struct ExpansionParams {
    double alpha = 0.5;     // weight of the knowledge query
    std::size_t K = 5;      // selected long-text terms, pooled over concepts
    std::size_t N = 100;    // pseudo-relevant documents
    double r = 0.1;         // recency rate, per day
};

enum class DocumentPrior { temporal, uniform };

struct ScoredTerm {
    std::string term;
    double score = 0.0;

    friend bool operator==(const ScoredTerm&, const ScoredTerm&) = default;
};

/// Analyzed name, aliases, notable_for and notable_types (with multiplicity).
std::vector<std::string> meta_terms(const Concept& c, const TextAnalyzer& analyzer);

/// Analyzed description and domain-specific property texts (with multiplicity).
std::vector<std::string> candidate_terms(const Concept& c, const TextAnalyzer& analyzer);

/// Document priors over the PRD, normalized to sum to 1. The temporal prior
/// r*exp(-r*(T_Q - T_D)) is evaluated relative to the most recent document
/// so that large ages do not underflow; normalization cancels the shift.
/// Throws std::invalid_argument when a document is not older than T_Q.
std::vector<double> prd_priors(const RankedList& prd, const Index& index, DocumentPrior prior,
                               double r);

/// Score(w) = sum_D P(D) * P(w|D) * prod_i P(q_i|D) over the PRD, sorted by
/// descending score then ascending term. Throws std::invalid_argument on an
/// empty PRD.
std::vector<ScoredTerm> score_candidates(const std::set<std::string>& candidates,
                                         std::span<const std::string> query_terms,
                                         const RankedList& prd, const Index& index,
                                         DocumentPrior prior, double r, const SmoothingParams& s);

struct KnowledgeQuery {
    std::vector<std::string> meta;       // distinct, sorted
    std::vector<ScoredTerm> selected;    // top-K long-text terms
    std::optional<LanguageModel> model;  // uniform over meta U selected
};

/// Builds the knowledge query model. `model` is empty when no concept was
/// matched or no term survived. An empty PRD falls back to meta terms.
KnowledgeQuery build_knowledge_query(const ConceptSet& concepts,
                                     std::span<const std::string> query_terms,
                                     const RankedList& prd, const Index& index,
                                     const ExpansionParams& params, DocumentPrior prior,
                                     const SmoothingParams& s, const TextAnalyzer& analyzer);

}  // namespace kbqe
