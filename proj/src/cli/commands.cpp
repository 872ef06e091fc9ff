#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "kbqe/cli.hpp"
#include "kbqe/error.hpp"
#include "kbqe/log.hpp"

namespace kbqe::cli {

std::size_t parse_k(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "MAX") {
        return kAllPositiveTerms;
    }
    std::size_t k = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError("K must be a non-negative integer or MAX, got '" + std::string(text) +
                         "'");
    }
    return k;
}

std::string format_k(std::size_t k) { return k == kAllPositiveTerms ? "MAX" : std::to_string(k); }

IndexSummary cmd_index(const IndexOptions& opts, std::ostream& out) {
    auto cfg = PreprocessConfig::defaults();
    if (opts.stopwords) {
        cfg.stopword_list = load_stopwords(*opts.stopwords);
    }
    cfg.english_filter = opts.english_filter;
    cfg.merge_url_titles = opts.merge_url_titles;
    cfg.retweet_prefix = opts.retweet_prefix;

    IndexSummary summary;
    auto docs = load_documents(opts.corpus, cfg, &summary.corpus);
    const auto index = Index::build(std::move(docs));
    summary.vocabulary = index.vocabulary_size();
    save_index(opts.out, index, cfg.stopword_list);

    const auto& s = summary.corpus;
    out << "documents " << s.accepted << " read " << s.read << " malformed " << s.malformed
        << " rejected_retweet " << s.rejected_retweet << " rejected_non_english "
        << s.rejected_non_english << " rejected_empty " << s.rejected_empty << " vocabulary "
        << summary.vocabulary << '\n';
    return summary;
}

PipelineContext Workspace::context() const {
    PipelineContext ctx;
    ctx.index = &snapshot.index;
    ctx.analyzer = &analyzer;
    ctx.store = store ? &*store : nullptr;
    ctx.tagger = &tagger;
    ctx.overrides = overrides ? &*overrides : nullptr;
    return ctx;
}

Workspace load_workspace(const RunInputs& inputs, const SystemConfig& cfg) {
    if (uses_knowledge(cfg.variant) && !inputs.store) {
        throw UsageError("variant " + std::string(variant_name(cfg.variant)) +
                         " needs --store");
    }
    auto snapshot = load_index(inputs.index);
    TextAnalyzer analyzer{snapshot.stopwords};
    Workspace ws{std::move(snapshot), std::move(analyzer), std::nullopt,
                 inputs.lexicon ? LexiconTagger::load(*inputs.lexicon) : LexiconTagger::defaults(),
                 std::nullopt, load_topics(inputs.topics)};
    if (inputs.store) {
        ConceptStoreStats stats;
        ws.store = load_concept_store(*inputs.store, &stats);
        log::info("concept store: " + std::to_string(stats.loaded) + " concepts, " +
                  std::to_string(stats.malformed) + " malformed, " +
                  std::to_string(stats.collisions) + " surface collisions");
    }
    if (cfg.concept_override) {
        if (!ws.store) {
            throw UsageError("--concept_override needs --store");
        }
        ws.overrides = load_concept_overrides(*cfg.concept_override);
    }
    return ws;
}

void write_runs(std::ostream& out, const std::vector<RankedList>& runs, std::string_view tag) {
    for (const auto& r : runs) {
        write_run(out, r, tag);
    }
}

std::vector<RankedList> cmd_run(const RunOptions& opts, std::ostream& out) {
    opts.config.validate();
    const auto ws = load_workspace(opts.inputs, opts.config);
    std::vector<TopicTrace> traces;
    auto runs = run_topics(ws.context(), opts.config, ws.topics, opts.inputs.threads,
                           opts.debug_dump ? &traces : nullptr);
    const std::string tag =
        opts.tag.empty() ? std::string(variant_name(opts.config.variant)) : opts.tag;
    write_runs(out, runs, tag);
    if (opts.debug_dump) {
        std::ofstream dump{*opts.debug_dump};
        if (!dump) {
            throw DataError("cannot write debug dump: " + opts.debug_dump->string());
        }
        for (const auto& t : traces) {
            write_trace(dump, t);
        }
    }
    return runs;
}

EvalReport cmd_eval(const EvalOptions& opts, std::ostream& out) {
    if (opts.cutoffs.empty() ||
        std::find(opts.cutoffs.begin(), opts.cutoffs.end(), 0) != opts.cutoffs.end()) {
        throw UsageError("precision cutoffs must be positive");
    }
    const auto qrels = load_qrels(opts.qrels);
    const auto report = evaluate(load_run(opts.run), qrels, opts.mode, opts.cutoffs);
    if (!opts.compare) {
        if (opts.json) {
            out << report_to_json(report).dump() << '\n';
        } else {
            write_report(out, report);
        }
        return report;
    }
    const auto other = evaluate(load_run(*opts.compare), qrels, opts.mode, opts.cutoffs);
    Comparison cmp;
    try {
        cmp = compare_reports(report, other);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("cannot compare runs: ") + e.what());
    }
    if (opts.json) {
        nlohmann::json j;
        j["run"] = report_to_json(report);
        j["compare"] = report_to_json(other);
        j["t_test"] = comparison_to_json(cmp);
        out << j.dump() << '\n';
    } else {
        write_report(out, report);
        out << '\n';
        write_comparison(out, report, other, cmp);
    }
    return report;
}

std::vector<std::size_t> sweep_cutoffs(std::string_view parameter) {
    if (parameter == "r") {
        return {1, 5, 10, 30};
    }
    return {30};
}

namespace {

double parse_number(std::string_view parameter, std::string_view value) {
    const std::string text(value);
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) {
        throw UsageError("bad value '" + text + "' for " + std::string(parameter));
    }
    return v;
}

std::size_t parse_count(std::string_view parameter, std::string_view value) {
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
        throw UsageError("bad value '" + std::string(value) + "' for " + std::string(parameter));
    }
    return n;
}

}  // namespace

void apply_parameter(SystemConfig& cfg, std::string_view parameter, std::string_view value) {
    if (parameter == "alpha") {
        cfg.alpha = parse_number(parameter, value);
    } else if (parameter == "beta") {
        cfg.beta = parse_number(parameter, value);
    } else if (parameter == "K") {
        cfg.K = parse_k(value);
    } else if (parameter == "N") {
        cfg.N = parse_count(parameter, value);
    } else if (parameter == "r") {
        cfg.r = parse_number(parameter, value);
    } else {
        throw UsageError("cannot sweep '" + std::string(parameter) +
                         "'; expected alpha, beta, K, N or r");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::vector<SweepRow> cmd_sweep(const SweepOptions& opts, std::ostream& out) {
    if (std::find(kSweepParameters.begin(), kSweepParameters.end(), opts.parameter) ==
        kSweepParameters.end()) {
        throw UsageError("cannot sweep '" + opts.parameter + "'; expected alpha, beta, K, N or r");
    }
    if (opts.values.empty()) {
        throw UsageError("sweep needs at least one value");
    }
    SystemConfig base = opts.config;
    if (!opts.variant_given) {
        base.variant = opts.parameter == "beta" ? Variant::qefb_smm : Variant::qefb;
    }
    std::vector<SystemConfig> configs;
    for (const auto& v : opts.values) {
        auto cfg = base;
        apply_parameter(cfg, opts.parameter, v);
        configs.push_back(std::move(cfg));
    }

    const auto ws = load_workspace(opts.inputs, base);
    const auto qrels = load_qrels(opts.qrels);
    const auto cutoffs = sweep_cutoffs(opts.parameter);
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto runs = run_topics(ws.context(), configs[i], ws.topics, opts.inputs.threads);
        // Round-trip through the run format so rows agree with run + eval.
        std::stringstream text;
        write_runs(text, runs, variant_name(configs[i].variant));
        const auto report = evaluate(read_run(text), qrels, opts.mode, cutoffs);
        rows.push_back({opts.values[i], report.map, cutoffs, report.mean_precision});
    }

    if (opts.json) {
        for (const auto& row : rows) {
            nlohmann::json j;
            j["parameter"] = opts.parameter;
            j["value"] = row.value;
            j["map"] = row.map;
            for (std::size_t c = 0; c < row.cutoffs.size(); ++c) {
                j["P@" + std::to_string(row.cutoffs[c])] = row.precision[c];
            }
            out << j.dump() << '\n';
        }
        return rows;
    }
    std::size_t width = opts.parameter.size();
    for (const auto& row : rows) {
        width = std::max(width, row.value.size());
    }
    out << std::left << std::setw(static_cast<int>(width)) << opts.parameter << std::right
        << "  " << std::setw(6) << "MAP";
    for (const auto c : cutoffs) {
        out << "  " << std::setw(6) << ("P@" + std::to_string(c));
    }
    out << '\n';
    char buf[32];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.4f", row.map);
        out << std::left << std::setw(static_cast<int>(width)) << row.value << std::right << "  "
            << std::setw(6) << buf;
        for (const double p : row.precision) {
            std::snprintf(buf, sizeof buf, "%.4f", p);
            out << "  " << std::setw(6) << buf;
        }
        out << '\n';
    }
    return rows;
}

}  // namespace kbqe::cli
