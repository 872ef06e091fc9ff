#include "kbqe/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kbqe/kernels.hpp"

namespace kbqe {
namespace {

void append_analyzed(std::vector<std::string>& out, std::string_view text,
                     const TextAnalyzer& analyzer) {
    auto terms = analyzer.analyze(text);
    out.insert(out.end(), std::make_move_iterator(terms.begin()),
               std::make_move_iterator(terms.end()));
}

}  // namespace

std::vector<std::string> meta_terms(const Concept& c, const TextAnalyzer& analyzer) {
    std::vector<std::string> out;
    append_analyzed(out, c.name, analyzer);
    for (const auto& alias : c.aliases) {
        append_analyzed(out, alias, analyzer);
    }
    for (const auto& text : c.notable_for) {
        append_analyzed(out, text, analyzer);
    }
    for (const auto& text : c.notable_types) {
        append_analyzed(out, text, analyzer);
    }
    return out;
}

std::vector<std::string> candidate_terms(const Concept& c, const TextAnalyzer& analyzer) {
    std::vector<std::string> out;
    append_analyzed(out, c.description, analyzer);
    for (const auto& [domain, text] : c.domain_properties) {
        append_analyzed(out, text, analyzer);
    }
    return out;
}

std::vector<double> prd_priors(const RankedList& prd, const Index& index, DocumentPrior prior,
                               double r) {
    const std::size_t n = prd.entries.size();
    std::vector<double> priors(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
    if (prior == DocumentPrior::uniform || n == 0) {
        return priors;
    }
    if (!(r > 0.0)) {
        throw std::invalid_argument("temporal prior rate must be positive");
    }
    std::vector<double> ages(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double post_time = index.doc(index.doc_index(prd.entries[i].doc_id)).post_time;
        ages[i] = prd.query_time - post_time;
        if (!(ages[i] > 0.0)) {
            throw std::invalid_argument("pseudo-relevant document " + prd.entries[i].doc_id +
                                        " is not older than the query");
        }
    }
    const double youngest = *std::min_element(ages.begin(), ages.end());
    for (std::size_t i = 0; i < n; ++i) {
        priors[i] = std::exp(-r * (ages[i] - youngest));
    }
    kernels::scale(priors, 1.0 / kernels::sum(priors));
    return priors;
}

std::vector<ScoredTerm> score_candidates(const std::set<std::string>& candidates,
                                         std::span<const std::string> query_terms,
                                         const RankedList& prd, const Index& index,
                                         DocumentPrior prior, double r, const SmoothingParams& s) {
    if (prd.entries.empty()) {
        throw std::invalid_argument("term scoring needs at least one pseudo-relevant document");
    }
    const std::size_t n = prd.entries.size();
    std::vector<DocIndex> docs(n);
    for (std::size_t i = 0; i < n; ++i) {
        docs[i] = index.doc_index(prd.entries[i].doc_id);
    }
    const auto priors = prd_priors(prd, index, prior, r);

    // Score(w) = sum_D weight_D * (c(w,D) + mu P(w|C)),
    // weight_D = P(D) * QL(D) / (|D| + mu)
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double norm = static_cast<double>(index.doc(docs[i]).length) + s.mu;
        weights[i] = priors[i] * query_likelihood(query_terms, docs[i], index, s) / norm;
    }
    const double weight_sum = kernels::sum(weights);

    std::vector<ScoredTerm> scored;
    scored.reserve(candidates.size());
    std::vector<double> counts(n);
    for (const auto& term : candidates) {
        const auto t = index.term_id(term);
        if (!t) {
            scored.push_back({term, 0.0});
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            counts[i] = index.count(docs[i], *t);
        }
        const double score =
            kernels::dot(counts, weights) + s.mu * index.collection_prob(*t) * weight_sum;
        scored.push_back({term, score});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredTerm& a, const ScoredTerm& b) {
        return a.score != b.score ? a.score > b.score : a.term < b.term;
    });
    return scored;
}

KnowledgeQuery build_knowledge_query(const ConceptSet& concepts,
                                     std::span<const std::string> query_terms,
                                     const RankedList& prd, const Index& index,
                                     const ExpansionParams& params, DocumentPrior prior,
                                     const SmoothingParams& s, const TextAnalyzer& analyzer) {
    KnowledgeQuery kq;
    if (concepts.empty()) {
        return kq;
    }
    std::set<std::string> meta;
    std::set<std::string> candidates;
    for (const Concept* c : concepts) {
        for (auto& term : meta_terms(*c, analyzer)) {
            meta.insert(std::move(term));
        }
        for (auto& term : candidate_terms(*c, analyzer)) {
            candidates.insert(std::move(term));
        }
    }
    kq.meta.assign(meta.begin(), meta.end());

    if (params.K > 0 && !candidates.empty() && !prd.entries.empty()) {
        for (auto& st : score_candidates(candidates, query_terms, prd, index, prior, params.r, s)) {
            if (kq.selected.size() >= params.K || !(st.score > 0.0)) {
                break;
            }
            kq.selected.push_back(std::move(st));
        }
    }

    std::set<std::string> terms = meta;
    for (const auto& st : kq.selected) {
        terms.insert(st.term);
    }
    if (!terms.empty()) {
        kq.model = LanguageModel::uniform(terms);
    }
    return kq;
}

}  // namespace kbqe
