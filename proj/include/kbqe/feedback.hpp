#pragma once

// Simple mixture model feedback: the feedback documents are modeled as a
// mixture of a topic model and the collection background; the topic model is
// fit by EM and interpolated into the query model.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kbqe/index.hpp"
#include "kbqe/retrieval.hpp"

namespace kbqe {

struct FeedbackParams {
    double beta = 0.6;        // weight of the feedback model
    double lambda = 0.5;      // background noise in the mixture
    std::size_t fb_docs = 7;  // top-ranked documents used as feedback
    std::size_t fb_terms = 5; // terms kept in the feedback model
    std::size_t max_iters = 50;
    double tol = 1e-6;        // stop when the log-likelihood moves less than this
};

/// Summed term counts over the feedback documents.
using FeedbackCounts = std::map<std::string, std::uint64_t, std::less<>>;
/// Background probabilities P(w|C) for (at least) the terms of F.
using TermProbs = std::map<std::string, double, std::less<>>;

/// log p(F) = sum_w c(w;F) log((1 - lambda) theta_F(w) + lambda theta_C(w)).
/// Accepts lambda in [0, 1]; lambda = 1 gives the pure background likelihood.
/// Throws std::invalid_argument for a term missing from both models.
double feedback_loglik(const LanguageModel& theta_f, const FeedbackCounts& counts,
                       const TermProbs& background, double lambda);

struct EmTrace {
    std::vector<double> loglik;  // after initialization, then after each iteration
    std::size_t iterations = 0;
    bool converged = false;
    LanguageModel fitted;  // before truncation
};

/// Fits theta_F by EM from a uniform start and truncates it to the fb_terms
/// most probable terms (ties by term), renormalized. Throws
/// std::invalid_argument on empty counts, lambda outside (0, 1), or a term
/// with zero background probability.
LanguageModel em_fit(const FeedbackCounts& counts, const TermProbs& background,
                     const FeedbackParams& params, EmTrace* trace = nullptr);

struct FeedbackTrace {
    std::vector<std::string> docs;  // feedback documents, in rank order
    FeedbackCounts counts;
    EmTrace em;
    LanguageModel theta_f;
};

/// Sums the counts of the top fb_docs documents of `ranked`. Throws
/// std::logic_error if one of them is not older than the query.
FeedbackCounts feedback_counts(const RankedList& ranked, const Index& index, std::size_t fb_docs,
                               std::vector<std::string>* docs = nullptr);

/// theta_Q2 = (1 - beta) theta_Q1 + beta theta_F; returns theta_Q1 unchanged
/// when `ranked` is empty.
LanguageModel apply_feedback(const LanguageModel& theta_q1, const RankedList& ranked,
                             const Index& index, const FeedbackParams& params,
                             FeedbackTrace* trace = nullptr);

}  // namespace kbqe
