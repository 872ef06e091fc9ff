#pragma once

// Per-topic wiring of the retrieval variants.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kbqe/corpus.hpp"
#include "kbqe/expansion.hpp"
#include "kbqe/feedback.hpp"
#include "kbqe/index.hpp"
#include "kbqe/knowledge.hpp"
#include "kbqe/retrieval.hpp"

namespace kbqe {

/// simplekl: theta_Q. qesmm: theta_Q + feedback. qefb: knowledge expansion.
/// qefbnt: qefb with a uniform document prior. qefb_smm: qefb + feedback.
enum class Variant { simplekl, qesmm, qefb, qefbnt, qefb_smm };

std::string_view variant_name(Variant v);
/// Throws std::invalid_argument on unknown names.
Variant parse_variant(std::string_view name);
bool uses_knowledge(Variant v);

struct SystemConfig {
    Variant variant = Variant::qefb_smm;
    double mu = 100.0;
    double alpha = 0.5;
    double beta = 0.6;        // feedback weight after knowledge expansion
    double qesmm_beta = 0.9;  // feedback weight for qesmm
    std::size_t K = 5;        // kAllPositiveTerms for "MAX"
    std::size_t N = 100;
    double r = 0.1;
    double lambda = 0.5;
    std::size_t fb_docs = 7;
    std::size_t fb_terms = 5;
    std::size_t depth = kDefaultDepth;
    std::optional<std::filesystem::path> concept_override;
    std::size_t max_iters = 50;
    double tol = 1e-6;

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
    SmoothingParams smoothing() const { return {mu}; }
    ExpansionParams expansion() const { return {alpha, K, N, r}; }
    FeedbackParams feedback(Variant v) const;
};

/// topic id -> concept ids, replacing automatic concept matching.
using ConceptOverrides = std::map<std::string, std::vector<std::string>, std::less<>>;

/// `topic_id concept_id...` lines; `#` starts a comment line.
ConceptOverrides load_concept_overrides(const std::filesystem::path& path);

struct PipelineContext {
    const Index* index = nullptr;
    const TextAnalyzer* analyzer = nullptr;
    const ConceptStore* store = nullptr;        // required by knowledge variants
    const PosTagger* tagger = nullptr;          // required unless overrides cover the topic
    const ConceptOverrides* overrides = nullptr;
};

struct TopicTrace {
    std::string topic_id;
    std::vector<std::string> query_terms;
    bool skipped = false;
    std::vector<std::string> prd;  // pseudo-relevant documents for term scoring
    ConceptSet concepts;
    KnowledgeQuery knowledge;
    std::optional<FeedbackTrace> feedback;
    LanguageModel final_model;
    /// Every document whose content or timestamp fed a query model.
    std::vector<std::string> consulted;
};

/// Runs one topic. A topic whose query is empty after preprocessing yields an
/// empty list with a warning. Throws std::invalid_argument when a knowledge
/// variant has no concept store, DataError for unknown override concepts.
RankedList run_topic(const PipelineContext& ctx, const SystemConfig& cfg, const Topic& topic,
                     TopicTrace* trace = nullptr);

/// Runs every topic, on up to `threads` workers; results are in topic order.
std::vector<RankedList> run_topics(const PipelineContext& ctx, const SystemConfig& cfg,
                                   const std::vector<Topic>& topics, std::size_t threads = 1,
                                   std::vector<TopicTrace>* traces = nullptr);

/// Line-oriented dump of the intermediate models of a topic.
void write_trace(std::ostream& out, const TopicTrace& trace);

}  // namespace kbqe
