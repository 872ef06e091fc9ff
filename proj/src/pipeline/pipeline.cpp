#include "kbqe/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kbqe/error.hpp"
#include "kbqe/log.hpp"

namespace kbqe {

namespace {

constexpr std::pair<Variant, std::string_view> kVariantNames[] = {
    {Variant::simplekl, "simplekl"}, {Variant::qesmm, "qesmm"},       {Variant::qefb, "qefb"},
    {Variant::qefbnt, "qefbnt"},     {Variant::qefb_smm, "qefb_smm"},
};

}  // namespace

std::string_view variant_name(Variant v) {
    for (const auto& [variant, name] : kVariantNames) {
        if (variant == v) {
            return name;
        }
    }
    return "unknown";
}

Variant parse_variant(std::string_view name) {
    for (const auto& [variant, n] : kVariantNames) {
        if (n == name) {
            return variant;
        }
    }
    throw std::invalid_argument("unknown variant: " + std::string(name));
}

bool uses_knowledge(Variant v) {
    return v == Variant::qefb || v == Variant::qefbnt || v == Variant::qefb_smm;
}

void SystemConfig::validate() const {
    const auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!(mu > 0.0)) {
        throw std::invalid_argument("mu must be positive");
    }
    if (!unit(alpha) || !unit(beta) || !unit(qesmm_beta)) {
        throw std::invalid_argument("alpha, beta and qesmm_beta must lie in [0, 1]");
    }
    if (!(r > 0.0)) {
        throw std::invalid_argument("r must be positive");
    }
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("lambda must lie in (0, 1)");
    }
    if (depth == 0 || N == 0 || fb_docs == 0 || fb_terms == 0) {
        throw std::invalid_argument("depth, N, fb_docs and fb_terms must be positive");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("tol must be positive");
    }
}

FeedbackParams SystemConfig::feedback(Variant v) const {
    FeedbackParams p;
    p.beta = v == Variant::qesmm ? qesmm_beta : beta;
    p.lambda = lambda;
    p.fb_docs = fb_docs;
    p.fb_terms = fb_terms;
    p.max_iters = max_iters;
    p.tol = tol;
    return p;
}

ConceptOverrides load_concept_overrides(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read concept override file: " + path.string());
    }
    ConceptOverrides overrides;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields{line};
        std::string topic;
        if (!(fields >> topic) || topic.front() == '#') {
            continue;
        }
        auto& ids = overrides[topic];
        if (!ids.empty()) {
            throw DataError("topic " + topic + " listed twice at " + path.string() + ":" +
                            std::to_string(line_no));
        }
        std::string id;
        while (fields >> id) {
            ids.push_back(id);
        }
    }
    return overrides;
}

namespace {

void note_consulted(TopicTrace& trace, const RankedList& ranked, std::size_t limit) {
    const std::size_t n = std::min(limit, ranked.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        trace.consulted.push_back(ranked.entries[i].doc_id);
    }
}

ConceptSet resolve_concepts(const PipelineContext& ctx, const Topic& topic) {
    if (ctx.overrides != nullptr) {
        if (const auto it = ctx.overrides->find(topic.id); it != ctx.overrides->end()) {
            ConceptSet concepts;
            for (const auto& id : it->second) {
                const Concept* c = ctx.store->find(id);
                if (c == nullptr) {
                    throw DataError("concept override for topic " + topic.id +
                                    " names unknown concept " + id);
                }
                concepts.push_back(c);
            }
            std::sort(concepts.begin(), concepts.end(),
                      [](const Concept* a, const Concept* b) { return a->concept_id < b->concept_id; });
            concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());
            return concepts;
        }
    }
    if (ctx.tagger == nullptr) {
        throw std::invalid_argument("concept matching needs a part-of-speech tagger");
    }
    return match_concepts(*ctx.store, *ctx.tagger, topic.query_text);
}

}  // namespace

RankedList run_topic(const PipelineContext& ctx, const SystemConfig& cfg, const Topic& topic,
                     TopicTrace* trace) {
    if (ctx.index == nullptr || ctx.analyzer == nullptr) {
        throw std::invalid_argument("pipeline context needs an index and an analyzer");
    }
    const Index& index = *ctx.index;
    const auto s = cfg.smoothing();
    TopicTrace local;
    local.topic_id = topic.id;
    local.query_terms = ctx.analyzer->analyze(topic.query_text);

    RankedList result;
    result.topic_id = topic.id;
    result.query_time = topic.query_time;
    if (local.query_terms.empty()) {
        log::warn("topic " + topic.id + ": query is empty after preprocessing; skipped");
        local.skipped = true;
        if (trace != nullptr) {
            *trace = std::move(local);
        }
        return result;
    }

    const auto theta_q = mle_query_model(local.query_terms);
    LanguageModel model = theta_q;

    if (uses_knowledge(cfg.variant)) {
        if (ctx.store == nullptr) {
            throw std::invalid_argument("variant " + std::string(variant_name(cfg.variant)) +
                                        " needs a concept store");
        }
        local.concepts = resolve_concepts(ctx, topic);
        const auto prd = search(index, theta_q, topic.query_time, cfg.N, s);
        for (const auto& e : prd.entries) {
            local.prd.push_back(e.doc_id);
        }
        note_consulted(local, prd, prd.entries.size());
        const auto prior =
            cfg.variant == Variant::qefbnt ? DocumentPrior::uniform : DocumentPrior::temporal;
        local.knowledge = build_knowledge_query(local.concepts, local.query_terms, prd, index,
                                                cfg.expansion(), prior, s, *ctx.analyzer);
        if (local.knowledge.model) {
            model = interpolate(theta_q, *local.knowledge.model, cfg.alpha);
        }
    }

    if (cfg.variant == Variant::qesmm || cfg.variant == Variant::qefb_smm) {
        const auto params = cfg.feedback(cfg.variant);
        const auto initial = search(index, model, topic.query_time, params.fb_docs, s);
        note_consulted(local, initial, params.fb_docs);
        FeedbackTrace fb;
        model = apply_feedback(model, initial, index, params, &fb);
        local.feedback = std::move(fb);
    }

    result = search(index, model, topic.query_time, cfg.depth, s);
    result.topic_id = topic.id;
    note_consulted(local, result, result.entries.size());
    if (trace != nullptr) {
        local.final_model = std::move(model);
        *trace = std::move(local);
    }
    return result;
}

std::vector<RankedList> run_topics(const PipelineContext& ctx, const SystemConfig& cfg,
                                   const std::vector<Topic>& topics, std::size_t threads,
                                   std::vector<TopicTrace>* traces) {
    std::vector<RankedList> results(topics.size());
    std::vector<TopicTrace> local(traces != nullptr ? topics.size() : 0);
    const auto run_one = [&](std::size_t i) {
        results[i] = run_topic(ctx, cfg, topics[i], traces != nullptr ? &local[i] : nullptr);
    };

    const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), topics.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < topics.size(); ++i) {
            run_one(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < topics.size(); i = next++) {
                    try {
                        run_one(i);
                    } catch (...) {
                        const std::lock_guard lock{failure_mutex};
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }
    if (traces != nullptr) {
        *traces = std::move(local);
    }
    return results;
}

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_model(std::ostream& out, std::string_view label, const LanguageModel& m) {
    for (const auto& [term, p] : m.probs()) {
        out << label << ' ' << term << ' ' << num(p) << '\n';
    }
}

}  // namespace

void write_trace(std::ostream& out, const TopicTrace& trace) {
    out << "topic " << trace.topic_id << '\n';
    out << "query_terms";
    for (const auto& t : trace.query_terms) {
        out << ' ' << t;
    }
    out << '\n';
    if (trace.skipped) {
        out << "skipped\n";
        return;
    }
    for (const Concept* c : trace.concepts) {
        out << "concept " << c->concept_id << ' ' << c->name << '\n';
    }
    out << "prd_size " << trace.prd.size() << '\n';
    for (const auto& t : trace.knowledge.meta) {
        out << "meta_term " << t << '\n';
    }
    for (const auto& st : trace.knowledge.selected) {
        out << "selected_term " << st.term << ' ' << num(st.score) << '\n';
    }
    if (trace.knowledge.model) {
        write_model(out, "knowledge", *trace.knowledge.model);
    }
    if (trace.feedback) {
        const auto& fb = *trace.feedback;
        out << "feedback_docs";
        for (const auto& d : fb.docs) {
            out << ' ' << d;
        }
        out << '\n';
        out << "em_iterations " << fb.em.iterations << (fb.em.converged ? " converged" : "")
            << '\n';
        if (!fb.em.loglik.empty()) {
            out << "em_loglik " << num(fb.em.loglik.back()) << '\n';
        }
        write_model(out, "feedback", fb.theta_f);
    }
    write_model(out, "final", trace.final_model);
}

}  // namespace kbqe
