#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "kbqe/corpus.hpp"

namespace kbqe {
namespace {

std::string_view trim_leading_space(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r' ||
                            s[i] == '\v' || s[i] == '\f')) {
        ++i;
    }
    return s.substr(i);
}

bool valid_doc_id(const std::string& id) {
    if (id.empty()) {
        return false;
    }
    // ids end up as whitespace-separated run-file fields
    for (const char c : id) {
        if (static_cast<unsigned char>(c) <= 0x20) {
            return false;
        }
    }
    return true;
}

}  // namespace

PreprocessConfig PreprocessConfig::defaults() {
    PreprocessConfig cfg;
    cfg.stopword_list = {default_stopwords().begin(), default_stopwords().end()};
    return cfg;
}

std::string_view reject_reason_name(RejectReason reason) {
    switch (reason) {
        case RejectReason::retweet: return "retweet";
        case RejectReason::non_english: return "non_english";
        case RejectReason::empty_after_preprocess: return "empty_after_preprocess";
    }
    return "unknown";
}

PreprocessResult preprocess(const RawTweet& raw, const PreprocessConfig& cfg) {
    if (!cfg.retweet_prefix.empty() && trim_leading_space(raw.text).starts_with(cfg.retweet_prefix)) {
        return Rejected{RejectReason::retweet};
    }
    if (cfg.english_filter == EnglishFilter::heuristic &&
        ascii_letter_share(raw.text) < kEnglishLetterShare) {
        return Rejected{RejectReason::non_english};
    }

    Document doc;
    doc.id = raw.id;
    doc.post_time = raw.post_time;
    auto add = [&](std::string_view text) {
        for (auto& term : analyze_text(text, cfg.stopword_list)) {
            ++doc.term_counts[std::move(term)];
            ++doc.length;
        }
    };
    add(raw.text);
    if (cfg.merge_url_titles) {
        for (const auto& title : raw.url_titles) {
            add(title);
        }
    }
    if (doc.length == 0) {
        return Rejected{RejectReason::empty_after_preprocess};
    }
    return doc;
}

std::optional<RawTweet> parse_corpus_line(std::string_view line) {
    const auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (!j.is_object()) {
        return std::nullopt;
    }
    const auto id = j.find("id");
    const auto text = j.find("text");
    const auto time = j.find("post_time");
    if (id == j.end() || !id->is_string() || text == j.end() || !text->is_string() ||
        time == j.end() || !time->is_number()) {
        return std::nullopt;
    }
    RawTweet tweet;
    tweet.id = id->get<std::string>();
    tweet.text = text->get<std::string>();
    tweet.post_time = time->get<double>();
    if (!valid_doc_id(tweet.id) || !std::isfinite(tweet.post_time) || tweet.post_time < 0.0) {
        return std::nullopt;
    }
    if (const auto titles = j.find("url_titles"); titles != j.end() && !titles->is_null()) {
        if (!titles->is_array()) {
            return std::nullopt;
        }
        for (const auto& title : *titles) {
            if (!title.is_string()) {
                return std::nullopt;
            }
            tweet.url_titles.push_back(title.get<std::string>());
        }
    }
    return tweet;
}

CorpusReader::CorpusReader(const std::filesystem::path& path) : in_(path) {
    if (!in_) {
        throw std::runtime_error("cannot read corpus file: " + path.string());
    }
}

std::optional<RawTweet> CorpusReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (auto tweet = parse_corpus_line(line)) {
            return tweet;
        }
        ++skipped_;
    }
    return std::nullopt;
}

std::vector<Document> load_documents(const std::filesystem::path& path,
                                     const PreprocessConfig& cfg, CorpusStats* stats) {
    CorpusReader reader{path};
    CorpusStats local;
    std::vector<Document> docs;
    while (auto tweet = reader.next()) {
        ++local.read;
        auto result = preprocess(*tweet, cfg);
        if (auto* doc = std::get_if<Document>(&result)) {
            docs.push_back(std::move(*doc));
            continue;
        }
        switch (std::get<Rejected>(result).reason) {
            case RejectReason::retweet: ++local.rejected_retweet; break;
            case RejectReason::non_english: ++local.rejected_non_english; break;
            case RejectReason::empty_after_preprocess: ++local.rejected_empty; break;
        }
    }
    local.malformed = reader.skipped();
    local.accepted = docs.size();
    if (stats != nullptr) {
        *stats = local;
    }
    return docs;
}

}  // namespace kbqe
