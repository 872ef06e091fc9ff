#include "kbqe/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kbqe/kernels.hpp"
#include "kbqe/log.hpp"

namespace kbqe {
namespace {

double dense_loglik(const std::vector<double>& counts, const std::vector<double>& theta,
                    const std::vector<double>& background, double lambda,
                    std::vector<double>& scratch) {
    scratch.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        scratch[i] = std::log((1.0 - lambda) * theta[i] + lambda * background[i]);
    }
    return kernels::dot(counts, scratch);
}

}  // namespace

double feedback_loglik(const LanguageModel& theta_f, const FeedbackCounts& counts,
                       const TermProbs& background, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("lambda must lie in [0, 1]");
    }
    double ll = 0.0;
    for (const auto& [term, c] : counts) {
        const auto bg = background.find(term);
        const double p_bg = bg == background.end() ? 0.0 : bg->second;
        if (theta_f.prob(term) == 0.0 && p_bg == 0.0) {
            throw std::invalid_argument("feedback term '" + term +
                                        "' has zero probability under both components");
        }
        ll += static_cast<double>(c) * std::log((1.0 - lambda) * theta_f.prob(term) + lambda * p_bg);
    }
    return ll;
}

LanguageModel em_fit(const FeedbackCounts& counts, const TermProbs& background,
                     const FeedbackParams& params, EmTrace* trace) {
    if (counts.empty()) {
        throw std::invalid_argument("feedback counts are empty");
    }
    if (!(params.lambda > 0.0 && params.lambda < 1.0)) {
        throw std::invalid_argument("lambda must lie in (0, 1)");
    }
    const std::size_t n = counts.size();
    std::vector<std::string> terms;
    std::vector<double> c;
    std::vector<double> bg;
    terms.reserve(n);
    c.reserve(n);
    bg.reserve(n);
    for (const auto& [term, count] : counts) {
        const auto it = background.find(term);
        if (it == background.end() || !(it->second > 0.0)) {
            throw std::invalid_argument("feedback term '" + term +
                                        "' has zero collection probability");
        }
        terms.push_back(term);
        c.push_back(static_cast<double>(count));
        bg.push_back(it->second);
    }

    std::vector<double> theta(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    std::vector<double> scratch;
    double ll = dense_loglik(c, theta, bg, params.lambda, scratch);
    EmTrace local;
    local.loglik.push_back(ll);
    for (std::size_t it = 1; it <= params.max_iters; ++it) {
        const double total = kernels::em_step(c, theta, bg, params.lambda, next);
        kernels::scale(next, 1.0 / total);
        theta.swap(next);
        const double ll_next = dense_loglik(c, theta, bg, params.lambda, scratch);
        local.loglik.push_back(ll_next);
        local.iterations = it;
        const double delta = std::abs(ll_next - ll);
        ll = ll_next;
        if (delta < params.tol) {
            local.converged = true;
            break;
        }
    }
    if (!local.converged) {
        log::debug("em_fit: stopped after " + std::to_string(local.iterations) +
                   " iterations without converging");
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return theta[a] != theta[b] ? theta[a] > theta[b] : terms[a] < terms[b];
    });
    const std::size_t keep = std::min(params.fb_terms, n);
    double kept_mass = 0.0;
    for (std::size_t k = 0; k < keep; ++k) {
        kept_mass += theta[order[k]];
    }
    LanguageModel::Map truncated;
    for (std::size_t k = 0; k < keep; ++k) {
        const double p = theta[order[k]] / kept_mass;
        if (p > 0.0) {
            truncated.emplace(terms[order[k]], p);
        }
    }

    if (trace != nullptr) {
        LanguageModel::Map full;
        double mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mass += theta[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (theta[i] > 0.0) {
                full.emplace(terms[i], theta[i] / mass);
            }
        }
        local.fitted = LanguageModel::from_probs(std::move(full));
        *trace = std::move(local);
    }
    if (truncated.empty()) {
        return LanguageModel{};
    }
    return LanguageModel::from_probs(std::move(truncated));
}

FeedbackCounts feedback_counts(const RankedList& ranked, const Index& index, std::size_t fb_docs,
                               std::vector<std::string>* docs) {
    FeedbackCounts counts;
    const std::size_t n = std::min(fb_docs, ranked.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& id = ranked.entries[i].doc_id;
        const DocIndex d = index.doc_index(id);
        const auto& entry = index.doc(d);
        if (!(entry.post_time < ranked.query_time)) {
            throw std::logic_error("feedback document " + id + " is not older than the query");
        }
        for (const auto& tc : entry.terms) {
            counts[index.term(tc.term)] += tc.count;
        }
        if (docs != nullptr) {
            docs->push_back(id);
        }
    }
    return counts;
}

LanguageModel apply_feedback(const LanguageModel& theta_q1, const RankedList& ranked,
                             const Index& index, const FeedbackParams& params,
                             FeedbackTrace* trace) {
    if (!(params.beta >= 0.0 && params.beta <= 1.0)) {
        throw std::invalid_argument("beta must lie in [0, 1]");
    }
    if (ranked.entries.empty() || params.fb_docs == 0 || params.fb_terms == 0) {
        return theta_q1;
    }
    FeedbackTrace local;
    local.counts = feedback_counts(ranked, index, params.fb_docs, &local.docs);
    if (local.counts.empty()) {
        return theta_q1;
    }
    TermProbs background;
    for (const auto& [term, c] : local.counts) {
        background.emplace(term, index.collection_prob(term));
    }
    local.theta_f = em_fit(local.counts, background, params, &local.em);
    auto result = interpolate(theta_q1, local.theta_f, params.beta);
    if (trace != nullptr) {
        *trace = std::move(local);
    }
    return result;
}

}  // namespace kbqe
