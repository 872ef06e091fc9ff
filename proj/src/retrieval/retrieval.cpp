#include "kbqe/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "kbqe/error.hpp"
#include "kbqe/kernels.hpp"
#include "kbqe/log.hpp"

namespace kbqe {

LanguageModel LanguageModel::from_probs(Map probs) {
    double total = 0.0;
    for (const auto& [term, p] : probs) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("language model probability for '" + term +
                                        "' must be positive and finite");
        }
        total += p;
    }
    if (!probs.empty() && std::abs(total - 1.0) > kProbabilitySumTolerance) {
        throw std::invalid_argument("language model does not sum to 1");
    }
    return LanguageModel{std::move(probs)};
}

LanguageModel LanguageModel::uniform(const std::set<std::string>& terms) {
    Map probs;
    const double p = terms.empty() ? 0.0 : 1.0 / static_cast<double>(terms.size());
    for (const auto& t : terms) {
        probs.emplace(t, p);
    }
    return LanguageModel{std::move(probs)};
}

double LanguageModel::prob(std::string_view term) const {
    const auto it = probs_.find(term);
    return it == probs_.end() ? 0.0 : it->second;
}

double LanguageModel::total() const {
    double total = 0.0;
    for (const auto& [term, p] : probs_) {
        total += p;
    }
    return total;
}

LanguageModel interpolate(const LanguageModel& base, const LanguageModel& other, double weight) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
        throw std::invalid_argument("interpolation weight must lie in [0, 1]");
    }
    LanguageModel::Map mixed;
    const double keep = 1.0 - weight;
    for (const auto& [term, p] : base.probs()) {
        mixed.emplace(term, keep * p + weight * other.prob(term));
    }
    for (const auto& [term, p] : other.probs()) {
        if (!mixed.contains(term)) {
            mixed.emplace(term, keep * 0.0 + weight * p);
        }
    }
    std::erase_if(mixed, [](const auto& kv) { return !(kv.second > 0.0); });
    return LanguageModel::from_probs(std::move(mixed));
}

std::vector<Topic> load_topics(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read topics file: " + path.string());
    }
    std::vector<Topic> topics;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto j = nlohmann::json::parse(line, nullptr, false);
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (!j.is_object() || !j.contains("id") || !j.contains("query") ||
            !j.contains("query_time") || !j["id"].is_string() || !j["query"].is_string() ||
            !j["query_time"].is_number()) {
            throw DataError("malformed topic record at " + where);
        }
        Topic topic{j["id"].get<std::string>(), j["query"].get<std::string>(),
                    j["query_time"].get<double>()};
        if (topic.id.empty() || !std::isfinite(topic.query_time)) {
            throw DataError("malformed topic record at " + where);
        }
        topics.push_back(std::move(topic));
    }
    return topics;
}

LanguageModel mle_query_model(std::span<const std::string> terms) {
    if (terms.empty()) {
        throw std::invalid_argument("query has no terms after preprocessing");
    }
    std::map<std::string, std::size_t, std::less<>> counts;
    for (const auto& t : terms) {
        ++counts[t];
    }
    LanguageModel::Map probs;
    const auto n = static_cast<double>(terms.size());
    for (const auto& [term, c] : counts) {
        probs.emplace(term, static_cast<double>(c) / n);
    }
    return LanguageModel::from_probs(std::move(probs));
}

namespace {

// Query terms that survive the zero-collection-probability filter.
struct ResolvedQuery {
    std::vector<TermId> terms;
    std::vector<double> weights;
    std::vector<std::string> skipped;
};

ResolvedQuery resolve(const LanguageModel& qm, const Index& index) {
    ResolvedQuery rq;
    for (const auto& [term, weight] : qm.probs()) {
        const auto t = index.term_id(term);
        if (!t || index.collection_count(*t) == 0) {
            rq.skipped.push_back(term);
            continue;
        }
        rq.terms.push_back(*t);
        rq.weights.push_back(weight);
    }
    return rq;
}

double score_resolved(const ResolvedQuery& rq, DocIndex d, const Index& index,
                      const SmoothingParams& s, std::vector<double>& logs) {
    logs.resize(rq.terms.size());
    for (std::size_t i = 0; i < rq.terms.size(); ++i) {
        logs[i] = std::log(index.doc_prob(d, rq.terms[i], s));
    }
    return kernels::dot(rq.weights, logs);
}

}  // namespace

double kl_score(const LanguageModel& qm, DocIndex doc, const Index& index,
                const SmoothingParams& s, std::vector<std::string>* skipped) {
    if (doc >= index.num_docs()) {
        throw std::out_of_range("document index out of range");
    }
    auto rq = resolve(qm, index);
    if (!rq.skipped.empty()) {
        for (const auto& term : rq.skipped) {
            log::debug("kl_score: skipping term unseen in collection: " + term);
        }
        if (skipped != nullptr) {
            skipped->insert(skipped->end(), rq.skipped.begin(), rq.skipped.end());
        }
    }
    std::vector<double> logs;
    return score_resolved(rq, doc, index, s, logs);
}

double kl_score(const LanguageModel& qm, std::string_view doc_id, const Index& index,
                const SmoothingParams& s, std::vector<std::string>* skipped) {
    return kl_score(qm, index.doc_index(doc_id), index, s, skipped);
}

double query_likelihood(std::span<const std::string> query_terms, DocIndex doc,
                        const Index& index, const SmoothingParams& s) {
    if (doc >= index.num_docs()) {
        throw std::out_of_range("document index out of range");
    }
    double log_sum = 0.0;
    for (const auto& q : query_terms) {
        const double p = index.doc_prob(doc, index.term_id(q), s);
        if (p == 0.0) {
            return 0.0;
        }
        log_sum += std::log(p);
    }
    return std::exp(log_sum);
}

double query_likelihood(std::span<const std::string> query_terms, std::string_view doc_id,
                        const Index& index, const SmoothingParams& s) {
    return query_likelihood(query_terms, index.doc_index(doc_id), index, s);
}

RankedList search(const Index& index, const LanguageModel& qm, double query_time,
                  std::size_t depth, const SmoothingParams& s) {
    RankedList ranked;
    ranked.query_time = query_time;
    if (index.empty() || depth == 0) {
        return ranked;
    }
    const auto rq = resolve(qm, index);
    ranked.skipped_terms = rq.skipped;

    std::vector<DocIndex> candidates;
    for (const TermId t : rq.terms) {
        for (const auto& posting : index.postings(t)) {
            if (index.doc(posting.doc).post_time < query_time) {
                candidates.push_back(posting.doc);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    struct Scored {
        double score;
        DocIndex doc;
    };
    std::vector<Scored> scored;
    scored.reserve(candidates.size());
    std::vector<double> logs;
    for (const DocIndex d : candidates) {
        scored.push_back({score_resolved(rq, d, index, s, logs), d});
    }
    // DocIndex order is doc id order, so it doubles as the tie-break.
    const auto better = [](const Scored& a, const Scored& b) {
        return a.score != b.score ? a.score > b.score : a.doc < b.doc;
    };
    const std::size_t keep = std::min(depth, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), better);
    ranked.entries.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        ranked.entries.push_back({index.doc(scored[i].doc).id, scored[i].score});
    }
    return ranked;
}

void write_run(std::ostream& out, const RankedList& ranked, std::string_view tag) {
    char score[64];
    for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
        const auto& e = ranked.entries[i];
        std::snprintf(score, sizeof score, "%.12g", e.score);
        out << ranked.topic_id << " Q0 " << e.doc_id << ' ' << (i + 1) << ' ' << score << ' '
            << tag << '\n';
    }
}

}  // namespace kbqe
