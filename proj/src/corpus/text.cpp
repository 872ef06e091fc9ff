#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kbqe/corpus.hpp"
#include "../util/utf8.hpp"

namespace kbqe {
namespace {

constexpr const char* kDefaultStopwords[] = {
    "a", "about", "above", "according", "across", "after", "afterwards", "again", "against",
    "albeit", "all", "almost", "alone", "along", "already", "also", "although", "always", "am",
    "among", "amongst", "an", "and", "another", "any", "anybody", "anyhow", "anyone", "anything",
    "anyway", "anywhere", "apart", "are", "around", "as", "at", "av", "be", "became", "because",
    "become", "becomes", "becoming", "been", "before", "beforehand", "behind", "being", "below",
    "beside", "besides", "between", "beyond", "both", "but", "by", "can", "cannot", "canst",
    "certain", "cf", "choose", "contrariwise", "cos", "could", "cu", "day", "do", "does",
    "doesn't", "doing", "dost", "doth", "double", "down", "dual", "during", "each", "either",
    "else", "elsewhere", "enough", "et", "etc", "even", "ever", "every", "everybody", "everyone",
    "everything", "everywhere", "except", "excepted", "excepting", "exception", "exclude",
    "excluding", "exclusive", "far", "farther", "farthest", "few", "ff", "first", "for",
    "formerly", "forth", "forward", "from", "front", "further", "furthermore", "furthest", "get",
    "go", "had", "halves", "hardly", "has", "hast", "hath", "have", "he", "hence", "henceforth",
    "her", "here", "hereabouts", "hereafter", "hereby", "herein", "hereto", "hereupon", "hers",
    "herself", "him", "himself", "hindmost", "his", "hither", "hitherto", "how", "however",
    "howsoever", "i", "ie", "if", "in", "inasmuch", "inc", "include", "included", "including",
    "indeed", "indoors", "inside", "insomuch", "instead", "into", "inward", "inwards", "is", "it",
    "its", "itself", "just", "kg", "kind", "km", "last", "latter", "latterly", "less", "lest",
    "let", "like", "little", "ltd", "many", "may", "maybe", "me", "meantime", "meanwhile",
    "might", "more", "moreover", "most", "mostly", "mr", "mrs", "ms", "much", "must", "my",
    "myself", "namely", "need", "neither", "never", "nevertheless", "next", "no", "nobody",
    "none", "nonetheless", "noone", "nope", "nor", "not", "nothing", "notwithstanding", "now",
    "nowadays", "nowhere", "of", "off", "often", "ok", "on", "once", "one", "only", "onto", "or",
    "other", "others", "otherwise", "ought", "our", "ours", "ourselves", "out", "outside", "over",
    "own", "per", "perhaps", "plenty", "provide", "quite", "rather", "really", "round", "said",
    "sake", "same", "sang", "save", "saw", "see", "seeing", "seem", "seemed", "seeming", "seems",
    "seen", "seldom", "selves", "sent", "several", "shalt", "she", "should", "shown", "sideways",
    "since", "slept", "slew", "slung", "slunk", "smote", "so", "some", "somebody", "somehow",
    "someone", "something", "sometime", "sometimes", "somewhat", "somewhere", "spake", "spat",
    "spoke", "spoken", "sprang", "sprung", "stave", "staves", "still", "such", "supposing",
    "than", "that", "the", "thee", "their", "them", "themselves", "then", "thence", "thenceforth",
    "there", "thereabout", "thereabouts", "thereafter", "thereby", "therefore", "therein",
    "thereof", "thereon", "thereto", "thereupon", "these", "they", "this", "those", "thou",
    "though", "thrice", "through", "throughout", "thru", "thus", "thy", "thyself", "till", "to",
    "together", "too", "toward", "towards", "ugh", "unable", "under", "underneath", "unless",
    "unlike", "until", "up", "upon", "upward", "upwards", "us", "use", "used", "using", "very",
    "via", "vs", "want", "was", "we", "week", "well", "were", "what", "whatever", "whatsoever",
    "when", "whence", "whenever", "whensoever", "where", "whereabouts", "whereafter", "whereas",
    "whereat", "whereby", "wherefore", "wherefrom", "wherein", "whereinto", "whereof", "whereon",
    "wheresoever", "whereto", "whereunto", "whereupon", "wherever", "wherewith", "whether",
    "whew", "which", "whichever", "whichsoever", "while", "whilst", "whither", "who", "whoa",
    "whoever", "whole", "whom", "whomever", "whomsoever", "whose", "whosoever", "why", "will",
    "wilt", "with", "within", "without", "worse", "worst", "would", "wow", "ye", "year", "yippee",
    "you", "your", "yours", "yourself", "yourselves",
};

std::string ascii_lower(std::string_view s) {
    std::string out{s};
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

// Removes leading and trailing punctuation code points.
std::string_view strip_punct(std::string_view token) {
    std::size_t begin = 0;
    while (begin < token.size()) {
        const auto cp = utf8::decode(token, begin);
        if (!utf8::is_punct_or_symbol(cp.value)) {
            break;
        }
        begin += cp.length;
    }
    std::size_t end = begin;
    std::size_t keep_end = begin;
    while (end < token.size()) {
        const auto cp = utf8::decode(token, end);
        end += cp.length;
        if (!utf8::is_punct_or_symbol(cp.value)) {
            keep_end = end;
        }
    }
    return token.substr(begin, keep_end - begin);
}

}  // namespace

const std::vector<std::string>& default_stopwords() {
    static const std::vector<std::string> words(std::begin(kDefaultStopwords),
                                                std::end(kDefaultStopwords));
    return words;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw std::runtime_error("cannot read stopword file: " + path.string());
    }
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream fields{line};
        std::string word;
        while (fields >> word) {
            words.insert(ascii_lower(word));
        }
    }
    return words;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        // skip whitespace
        while (pos < text.size()) {
            const auto cp = utf8::decode(text, pos);
            if (!utf8::is_space(cp.value)) {
                break;
            }
            pos += cp.length;
        }
        const std::size_t start = pos;
        while (pos < text.size()) {
            const auto cp = utf8::decode(text, pos);
            if (utf8::is_space(cp.value)) {
                break;
            }
            pos += cp.length;
        }
        if (pos == start) {
            continue;
        }
        auto token = ascii_lower(strip_punct(text.substr(start, pos - start)));
        if (token.empty() || token.starts_with("http")) {
            continue;
        }
        tokens.push_back(std::move(token));
    }
    return tokens;
}

double ascii_letter_share(std::string_view text) {
    std::size_t ascii_letters = 0;
    std::size_t letters = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto cp = utf8::decode(text, pos);
        pos += cp.length;
        const char32_t c = cp.value;
        if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) {
            ++ascii_letters;
            ++letters;
        } else if (c >= 0x80 && !utf8::is_space(c) && !utf8::is_punct_or_symbol(c)) {
            ++letters;
        }
    }
    return letters == 0 ? 1.0 : static_cast<double>(ascii_letters) / static_cast<double>(letters);
}

TextAnalyzer::TextAnalyzer(std::unordered_set<std::string> stopwords)
    : stopwords_(std::move(stopwords)) {}

TextAnalyzer::TextAnalyzer()
    : stopwords_(default_stopwords().begin(), default_stopwords().end()) {}

bool TextAnalyzer::is_stopword(std::string_view token) const {
    return stopwords_.contains(std::string{token});
}

std::vector<std::string> TextAnalyzer::analyze(std::string_view text) const {
    return analyze_text(text, stopwords_);
}

std::vector<std::string> analyze_text(std::string_view text,
                                      const std::unordered_set<std::string>& stopwords) {
    auto tokens = tokenize(text);
    std::vector<std::string> terms;
    terms.reserve(tokens.size());
    for (auto& token : tokens) {
        if (stopwords.contains(token)) {
            continue;
        }
        auto stem = porter_stem(token);
        if (!stem.empty()) {
            terms.push_back(std::move(stem));
        }
    }
    return terms;
}

}  // namespace kbqe
