#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "kbqe/cli.hpp"
#include "kbqe/error.hpp"
#include "kbqe/log.hpp"

namespace kbqe::cli {
namespace {

struct ConfigFlags {
    std::string variant;
    std::string K;
    std::optional<std::string> concept_override;
};

void add_system_flags(CLI::App& cmd, SystemConfig& cfg, ConfigFlags& flags) {
    cmd.add_option("--variant", flags.variant, "simplekl, qesmm, qefb, qefbnt or qefb_smm");
    cmd.add_option("--mu", cfg.mu, "Dirichlet prior")->capture_default_str();
    cmd.add_option("--alpha", cfg.alpha, "knowledge query weight")->capture_default_str();
    cmd.add_option("--beta", cfg.beta, "feedback weight after expansion")->capture_default_str();
    cmd.add_option("--qesmm_beta", cfg.qesmm_beta, "feedback weight for qesmm")
        ->capture_default_str();
    cmd.add_option("--K", flags.K, "selected long-text terms, or MAX")->default_str("5");
    cmd.add_option("--N", cfg.N, "pseudo-relevant documents")->capture_default_str();
    cmd.add_option("--r", cfg.r, "recency rate per day")->capture_default_str();
    cmd.add_option("--lambda", cfg.lambda, "background weight in feedback")
        ->capture_default_str();
    cmd.add_option("--fb_docs", cfg.fb_docs, "feedback documents")->capture_default_str();
    cmd.add_option("--fb_terms", cfg.fb_terms, "feedback terms")->capture_default_str();
    cmd.add_option("--depth", cfg.depth, "documents per topic")->capture_default_str();
    cmd.add_option("--max_iters", cfg.max_iters, "EM iteration cap")->capture_default_str();
    cmd.add_option("--tol", cfg.tol, "EM log-likelihood tolerance")->capture_default_str();
    cmd.add_option("--concept_override", flags.concept_override,
                   "topic_id concept_id... lines replacing concept matching");
}

void finish_config(SystemConfig& cfg, const ConfigFlags& flags) {
    if (!flags.variant.empty()) {
        try {
            cfg.variant = parse_variant(flags.variant);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (!flags.K.empty()) {
        cfg.K = parse_k(flags.K);
    }
    if (flags.concept_override) {
        cfg.concept_override = *flags.concept_override;
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void add_inputs(CLI::App& cmd, RunInputs& in) {
    cmd.add_option("--index", in.index, "index snapshot")->required();
    cmd.add_option("--topics", in.topics, "topics file (JSON lines)")->required();
    cmd.add_option("--store", in.store, "concept store (JSON lines)");
    cmd.add_option("--lexicon", in.lexicon, "tagger lexicon (word<TAB>tag)");
    cmd.add_option("--threads", in.threads, "worker threads")->capture_default_str();
}

RelevanceMode to_mode(const std::string& s) {
    try {
        return parse_relevance_mode(s);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

// Writes to `path` if given, else to `fallback`.
template <class Fn>
void with_output(const std::optional<std::string>& path, std::ostream& fallback, Fn&& fn) {
    if (!path) {
        fn(fallback);
        return;
    }
    std::ofstream file{*path};
    if (!file) {
        throw DataError("cannot write " + *path);
    }
    fn(file);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = std::min(text.find(',', start), text.size());
        if (auto item = trim(std::string_view(text).substr(start, comma - start)); !item.empty()) {
            items.push_back(std::move(item));
        }
        start = comma + 1;
    }
    return items;
}

// `key = value` lines become `--key=value` arguments. Blank lines and lines
// starting with '#' are ignored.
std::vector<std::string> read_config(const std::string& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read config file: " + path);
    }
    std::vector<std::string> args;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        const auto key = eq == std::string::npos ? std::string{} : trim(text.substr(0, eq));
        if (key.empty()) {
            throw UsageError("bad config line " + path + ":" + std::to_string(line_no));
        }
        args.push_back("--" + key + "=" + trim(text.substr(eq + 1)));
    }
    return args;
}

// Splices config-file arguments in front of the subcommand's own flags so
// that explicit flags, parsed later, win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> config;
    std::size_t sub = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "index" || a == "run" || a == "eval" || a == "sweep") {
            sub = i;
            break;
        }
        if (a == "--config" && i + 1 < args.size()) {
            config = args[i + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            config = a.substr(9);
        }
    }
    if (config && sub < args.size()) {
        const auto extra = read_config(*config);
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, extra.begin(),
                    extra.end());
    }
    return args;
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Knowledge-based query expansion for real-time microblog search", "kbqe"};
    app.require_subcommand(1);
    // Config-file values come first on the command line; the last value wins.
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file; flags override it");
    std::string log_level = "warn";
    app.add_option("--log_level", log_level, "debug, info, warn, error or off")
        ->capture_default_str();

    IndexOptions index_opts;
    std::string english_filter = "off";
    bool no_url_titles = false;
    auto* index_cmd = app.add_subcommand("index", "build an index snapshot from a corpus");
    index_cmd->add_option("--corpus", index_opts.corpus, "corpus (JSON lines)")->required();
    index_cmd->add_option("--out", index_opts.out, "snapshot path")->required();
    index_cmd->add_option("--stopwords", index_opts.stopwords, "stopword list, one per line");
    index_cmd->add_option("--english_filter", english_filter, "off or heuristic")
        ->capture_default_str();
    index_cmd->add_flag("--no_url_titles", no_url_titles, "do not merge URL titles");
    index_cmd->add_option("--retweet_prefix", index_opts.retweet_prefix)->capture_default_str();

    RunOptions run_opts;
    ConfigFlags run_flags;
    std::optional<std::string> run_out;
    std::optional<std::string> debug_dump;
    auto* run_cmd = app.add_subcommand("run", "retrieve every topic and write a TREC run");
    add_inputs(*run_cmd, run_opts.inputs);
    add_system_flags(*run_cmd, run_opts.config, run_flags);
    run_cmd->add_option("--out", run_out, "run file (default stdout)");
    run_cmd->add_option("--tag", run_opts.tag, "run tag (default: variant name)");
    run_cmd->add_option("--debug_dump", debug_dump, "write intermediate models here");

    EvalOptions eval_opts;
    std::string eval_mode = "allrel";
    std::optional<std::string> eval_compare;
    auto* eval_cmd = app.add_subcommand("eval", "score a run against qrels");
    eval_cmd->add_option("--run", eval_opts.run, "run file")->required();
    eval_cmd->add_option("--qrels", eval_opts.qrels, "qrels file")->required();
    eval_cmd->add_option("--mode", eval_mode, "allrel or highrel")->capture_default_str();
    std::string eval_cutoffs;
    eval_cmd->add_option("--n", eval_cutoffs, "comma-separated precision cutoffs")
        ->default_str("1,5,10,30");
    eval_cmd->add_option("--compare", eval_compare, "second run for a paired t-test");
    eval_cmd->add_flag("--json", eval_opts.json, "emit JSON");

    SweepOptions sweep_opts;
    ConfigFlags sweep_flags;
    std::string sweep_mode = "allrel";
    auto* sweep_cmd = app.add_subcommand("sweep", "run + eval over a grid of one parameter");
    add_inputs(*sweep_cmd, sweep_opts.inputs);
    add_system_flags(*sweep_cmd, sweep_opts.config, sweep_flags);
    sweep_cmd->add_option("--qrels", sweep_opts.qrels, "qrels file")->required();
    sweep_cmd->add_option("--param", sweep_opts.parameter, "alpha, beta, K, N or r")->required();
    std::string sweep_values;
    sweep_cmd->add_option("--values", sweep_values, "comma-separated grid")->required();
    sweep_cmd->add_option("--mode", sweep_mode, "allrel or highrel")->capture_default_str();
    sweep_cmd->add_flag("--json", sweep_opts.json, "emit JSON lines");

    std::vector<std::string> args;
    try {
        args = expand_config(argc, argv);
    } catch (const UsageError& e) {
        err << "kbqe: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "kbqe: " << e.what() << '\n';
        return kExitData;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        static const std::map<std::string, log::Level> levels{
            {"debug", log::Level::debug}, {"info", log::Level::info}, {"warn", log::Level::warn},
            {"error", log::Level::error}, {"off", log::Level::off}};
        const auto level = levels.find(log_level);
        if (level == levels.end()) {
            throw UsageError("unknown log level: " + log_level);
        }
        log::set_threshold(level->second);

        if (index_cmd->parsed()) {
            if (english_filter == "heuristic") {
                index_opts.english_filter = EnglishFilter::heuristic;
            } else if (english_filter != "off") {
                throw UsageError("--english_filter must be off or heuristic");
            }
            index_opts.merge_url_titles = !no_url_titles;
            cmd_index(index_opts, out);
        } else if (run_cmd->parsed()) {
            finish_config(run_opts.config, run_flags);
            if (debug_dump) {
                run_opts.debug_dump = *debug_dump;
            }
            with_output(run_out, out, [&](std::ostream& os) { cmd_run(run_opts, os); });
        } else if (eval_cmd->parsed()) {
            eval_opts.mode = to_mode(eval_mode);
            if (!eval_cutoffs.empty()) {
                eval_opts.cutoffs.clear();
                for (const auto& c : split_list(eval_cutoffs)) {
                    const auto n = parse_k(c);
                    if (n == kAllPositiveTerms) {
                        throw UsageError("bad precision cutoff: " + c);
                    }
                    eval_opts.cutoffs.push_back(n);
                }
            }
            if (eval_compare) {
                eval_opts.compare = *eval_compare;
            }
            cmd_eval(eval_opts, out);
        } else if (sweep_cmd->parsed()) {
            finish_config(sweep_opts.config, sweep_flags);
            sweep_opts.variant_given = !sweep_flags.variant.empty();
            sweep_opts.mode = to_mode(sweep_mode);
            sweep_opts.values = split_list(sweep_values);
            cmd_sweep(sweep_opts, out);
        }
    } catch (const UsageError& e) {
        err << "kbqe: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "kbqe: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "kbqe: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace kbqe::cli
