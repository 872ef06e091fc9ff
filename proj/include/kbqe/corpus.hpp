#pragma once

// Tweet ingestion and text normalization.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

namespace kbqe {

struct RawTweet {
    std::string id;
    std::string text;
    double post_time = 0.0;  // fractional days since the corpus epoch
    std::vector<std::string> url_titles;
};

using TermCounts = std::map<std::string, std::uint32_t>;

struct Document {
    std::string id;
    TermCounts term_counts;
    std::uint64_t length = 0;  // == sum of term_counts
    double post_time = 0.0;

    friend bool operator==(const Document&, const Document&) = default;
};

enum class EnglishFilter { off, heuristic };

struct PreprocessConfig {
    std::unordered_set<std::string> stopword_list;
    std::string retweet_prefix = "RT";
    EnglishFilter english_filter = EnglishFilter::off;
    bool merge_url_titles = true;

    /// Default configuration with the bundled stopword list.
    static PreprocessConfig defaults();
};

/// Minimum share of ASCII letters among all letters for the heuristic
/// language filter to accept a tweet.
inline constexpr double kEnglishLetterShare = 0.8;

enum class RejectReason { retweet, non_english, empty_after_preprocess };

std::string_view reject_reason_name(RejectReason reason);

struct Rejected {
    RejectReason reason;
};

using PreprocessResult = std::variant<Document, Rejected>;

/// Bundled InQuery-style stopword list (lowercase surface forms).
const std::vector<std::string>& default_stopwords();

/// Reads a stopword file: one word per line, '#' starts a comment.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

/// Splits on Unicode whitespace, lowercases ASCII, strips leading and
/// trailing punctuation (which also removes the '@' of mentions and the
/// '#' of hashtags) and drops empty tokens and tokens starting with "http".
std::vector<std::string> tokenize(std::string_view text);

/// Porter (1980) suffix stripping. Tokens that are not entirely lowercase
/// ASCII letters, and tokens of length <= 2, are returned unchanged.
std::string porter_stem(std::string_view token);

/// tokenize -> drop stopwords -> stem.
std::vector<std::string> analyze_text(std::string_view text,
                                      const std::unordered_set<std::string>& stopwords);

/// Owns a stopword set and applies analyze_text.
/// Documents, queries and knowledge-store text all go through the same
/// analyzer so they share one vocabulary.
class TextAnalyzer {
  public:
    explicit TextAnalyzer(std::unordered_set<std::string> stopwords);
    TextAnalyzer();

    std::vector<std::string> analyze(std::string_view text) const;
    bool is_stopword(std::string_view token) const;
    const std::unordered_set<std::string>& stopwords() const { return stopwords_; }

  private:
    std::unordered_set<std::string> stopwords_;
};

/// Share of ASCII letters among all letters in `text`; 1.0 for text with
/// no letters.
double ascii_letter_share(std::string_view text);

PreprocessResult preprocess(const RawTweet& raw, const PreprocessConfig& cfg);

/// Single-pass reader over a JSON-lines corpus file. Malformed lines are
/// skipped and counted.
class CorpusReader {
  public:
    explicit CorpusReader(const std::filesystem::path& path);

    std::optional<RawTweet> next();

    std::size_t skipped() const { return skipped_; }
    std::size_t line_number() const { return line_no_; }

  private:
    std::ifstream in_;
    std::size_t skipped_ = 0;
    std::size_t line_no_ = 0;
};

/// Parses one corpus line; nullopt when the record is malformed.
std::optional<RawTweet> parse_corpus_line(std::string_view line);

struct CorpusStats {
    std::size_t read = 0;
    std::size_t malformed = 0;
    std::size_t rejected_retweet = 0;
    std::size_t rejected_non_english = 0;
    std::size_t rejected_empty = 0;
    std::size_t accepted = 0;
};

/// Reads and preprocesses a whole corpus file.
std::vector<Document> load_documents(const std::filesystem::path& path,
                                     const PreprocessConfig& cfg, CorpusStats* stats = nullptr);

}  // namespace kbqe
