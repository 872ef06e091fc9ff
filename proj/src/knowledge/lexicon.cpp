#include <fstream>
#include <sstream>

#include "kbqe/error.hpp"
#include "kbqe/knowledge.hpp"

namespace kbqe {
namespace {

struct LexiconEntry {
    const char* word;
    PosTag tag;
};

constexpr LexiconEntry kDefaultLexicon[] = {
    {"a", PosTag::other},
    {"about", PosTag::other},
    {"above", PosTag::other},
    {"across", PosTag::other},
    {"actor", PosTag::noun},
    {"actress", PosTag::noun},
    {"african", PosTag::adjective},
    {"after", PosTag::other},
    {"again", PosTag::other},
    {"against", PosTag::other},
    {"album", PosTag::noun},
    {"almost", PosTag::other},
    {"along", PosTag::other},
    {"already", PosTag::other},
    {"also", PosTag::other},
    {"although", PosTag::other},
    {"always", PosTag::other},
    {"am", PosTag::other},
    {"american", PosTag::adjective},
    {"among", PosTag::other},
    {"an", PosTag::other},
    {"and", PosTag::other},
    {"annual", PosTag::adjective},
    {"any", PosTag::other},
    {"are", PosTag::other},
    {"around", PosTag::other},
    {"article", PosTag::noun},
    {"artist", PosTag::noun},
    {"as", PosTag::other},
    {"asian", PosTag::adjective},
    {"ask", PosTag::other},
    {"asked", PosTag::other},
    {"at", PosTag::other},
    {"australian", PosTag::adjective},
    {"bad", PosTag::adjective},
    {"band", PosTag::noun},
    {"be", PosTag::other},
    {"because", PosTag::other},
    {"been", PosTag::other},
    {"before", PosTag::other},
    {"behind", PosTag::other},
    {"being", PosTag::other},
    {"below", PosTag::other},
    {"best", PosTag::adjective},
    {"better", PosTag::adjective},
    {"between", PosTag::other},
    {"beyond", PosTag::other},
    {"big", PosTag::adjective},
    {"birthday", PosTag::noun},
    {"black", PosTag::adjective},
    {"blue", PosTag::adjective},
    {"british", PosTag::adjective},
    {"business", PosTag::noun},
    {"but", PosTag::other},
    {"by", PosTag::other},
    {"call", PosTag::other},
    {"called", PosTag::other},
    {"came", PosTag::other},
    {"can", PosTag::other},
    {"canadian", PosTag::adjective},
    {"car", PosTag::noun},
    {"certain", PosTag::adjective},
    {"child", PosTag::noun},
    {"children", PosTag::noun},
    {"chinese", PosTag::adjective},
    {"city", PosTag::noun},
    {"coach", PosTag::noun},
    {"cold", PosTag::adjective},
    {"come", PosTag::other},
    {"comes", PosTag::other},
    {"company", PosTag::noun},
    {"computer", PosTag::noun},
    {"could", PosTag::other},
    {"country", PosTag::noun},
    {"court", PosTag::noun},
    {"crisis", PosTag::noun},
    {"current", PosTag::adjective},
    {"cute", PosTag::adjective},
    {"daily", PosTag::adjective},
    {"day", PosTag::noun},
    {"dead", PosTag::adjective},
    {"did", PosTag::other},
    {"different", PosTag::adjective},
    {"disease", PosTag::noun},
    {"do", PosTag::other},
    {"does", PosTag::other},
    {"doing", PosTag::other},
    {"done", PosTag::other},
    {"drought", PosTag::noun},
    {"dry", PosTag::adjective},
    {"during", PosTag::other},
    {"each", PosTag::other},
    {"early", PosTag::adjective},
    {"easy", PosTag::adjective},
    {"economic", PosTag::adjective},
    {"economy", PosTag::noun},
    {"either", PosTag::other},
    {"election", PosTag::noun},
    {"energy", PosTag::noun},
    {"english", PosTag::adjective},
    {"entire", PosTag::adjective},
    {"episode", PosTag::noun},
    {"etc", PosTag::other},
    {"european", PosTag::adjective},
    {"even", PosTag::other},
    {"evening", PosTag::noun},
    {"ever", PosTag::other},
    {"every", PosTag::other},
    {"false", PosTag::adjective},
    {"family", PosTag::noun},
    {"famous", PosTag::adjective},
    {"fan", PosTag::noun},
    {"fans", PosTag::noun},
    {"feel", PosTag::other},
    {"felt", PosTag::other},
    {"film", PosTag::noun},
    {"final", PosTag::noun},
    {"find", PosTag::other},
    {"first", PosTag::adjective},
    {"food", PosTag::noun},
    {"for", PosTag::other},
    {"found", PosTag::other},
    {"free", PosTag::adjective},
    {"french", PosTag::adjective},
    {"friend", PosTag::noun},
    {"from", PosTag::other},
    {"full", PosTag::adjective},
    {"funny", PosTag::adjective},
    {"game", PosTag::noun},
    {"gas", PosTag::noun},
    {"gave", PosTag::other},
    {"german", PosTag::adjective},
    {"get", PosTag::other},
    {"gets", PosTag::other},
    {"give", PosTag::other},
    {"gives", PosTag::other},
    {"global", PosTag::adjective},
    {"go", PosTag::other},
    {"goes", PosTag::other},
    {"going", PosTag::other},
    {"good", PosTag::adjective},
    {"got", PosTag::other},
    {"government", PosTag::noun},
    {"grape", PosTag::noun},
    {"great", PosTag::adjective},
    {"green", PosTag::adjective},
    {"had", PosTag::other},
    {"happy", PosTag::adjective},
    {"hard", PosTag::adjective},
    {"has", PosTag::other},
    {"have", PosTag::other},
    {"having", PosTag::other},
    {"he", PosTag::other},
    {"health", PosTag::noun},
    {"her", PosTag::other},
    {"here", PosTag::other},
    {"herself", PosTag::other},
    {"high", PosTag::adjective},
    {"him", PosTag::other},
    {"himself", PosTag::other},
    {"his", PosTag::other},
    {"home", PosTag::noun},
    {"hot", PosTag::adjective},
    {"house", PosTag::noun},
    {"how", PosTag::other},
    {"i", PosTag::other},
    {"if", PosTag::other},
    {"important", PosTag::adjective},
    {"in", PosTag::other},
    {"indian", PosTag::adjective},
    {"industry", PosTag::noun},
    {"international", PosTag::adjective},
    {"internet", PosTag::noun},
    {"into", PosTag::other},
    {"irish", PosTag::adjective},
    {"is", PosTag::other},
    {"it", PosTag::other},
    {"italian", PosTag::adjective},
    {"its", PosTag::other},
    {"itself", PosTag::other},
    {"japanese", PosTag::adjective},
    {"job", PosTag::noun},
    {"just", PosTag::other},
    {"knew", PosTag::other},
    {"know", PosTag::other},
    {"knows", PosTag::other},
    {"korean", PosTag::adjective},
    {"large", PosTag::adjective},
    {"last", PosTag::adjective},
    {"late", PosTag::adjective},
    {"latest", PosTag::adjective},
    {"law", PosTag::noun},
    {"least", PosTag::other},
    {"leave", PosTag::other},
    {"left", PosTag::other},
    {"less", PosTag::other},
    {"like", PosTag::other},
    {"little", PosTag::adjective},
    {"live", PosTag::adjective},
    {"local", PosTag::adjective},
    {"lol", PosTag::other},
    {"long", PosTag::adjective},
    {"look", PosTag::other},
    {"looked", PosTag::other},
    {"looks", PosTag::other},
    {"lose", PosTag::other},
    {"lost", PosTag::other},
    {"low", PosTag::adjective},
    {"made", PosTag::other},
    {"main", PosTag::adjective},
    {"major", PosTag::adjective},
    {"make", PosTag::other},
    {"makes", PosTag::other},
    {"man", PosTag::noun},
    {"market", PosTag::noun},
    {"match", PosTag::noun},
    {"may", PosTag::other},
    {"me", PosTag::other},
    {"memories", PosTag::noun},
    {"memory", PosTag::noun},
    {"mexican", PosTag::adjective},
    {"might", PosTag::other},
    {"minister", PosTag::noun},
    {"minor", PosTag::adjective},
    {"money", PosTag::noun},
    {"monthly", PosTag::adjective},
    {"more", PosTag::other},
    {"morning", PosTag::noun},
    {"most", PosTag::other},
    {"movie", PosTag::noun},
    {"much", PosTag::other},
    {"music", PosTag::noun},
    {"must", PosTag::other},
    {"my", PosTag::other},
    {"myself", PosTag::other},
    {"national", PosTag::adjective},
    {"near", PosTag::other},
    {"neither", PosTag::other},
    {"never", PosTag::other},
    {"new", PosTag::adjective},
    {"news", PosTag::noun},
    {"next", PosTag::adjective},
    {"night", PosTag::noun},
    {"no", PosTag::other},
    {"nor", PosTag::other},
    {"not", PosTag::other},
    {"now", PosTag::other},
    {"of", PosTag::other},
    {"official", PosTag::adjective},
    {"often", PosTag::other},
    {"oil", PosTag::noun},
    {"old", PosTag::adjective},
    {"omg", PosTag::other},
    {"on", PosTag::other},
    {"only", PosTag::other},
    {"onto", PosTag::other},
    {"or", PosTag::other},
    {"other", PosTag::adjective},
    {"our", PosTag::other},
    {"ourselves", PosTag::other},
    {"over", PosTag::other},
    {"own", PosTag::adjective},
    {"people", PosTag::noun},
    {"per", PosTag::other},
    {"phone", PosTag::noun},
    {"photo", PosTag::noun},
    {"picture", PosTag::noun},
    {"player", PosTag::noun},
    {"police", PosTag::noun},
    {"policy", PosTag::noun},
    {"political", PosTag::adjective},
    {"popular", PosTag::adjective},
    {"president", PosTag::noun},
    {"price", PosTag::noun},
    {"private", PosTag::adjective},
    {"public", PosTag::adjective},
    {"quickly", PosTag::other},
    {"quite", PosTag::other},
    {"ran", PosTag::other},
    {"rather", PosTag::other},
    {"real", PosTag::adjective},
    {"really", PosTag::other},
    {"recent", PosTag::adjective},
    {"red", PosTag::adjective},
    {"report", PosTag::noun},
    {"rt", PosTag::other},
    {"run", PosTag::other},
    {"running", PosTag::other},
    {"runs", PosTag::other},
    {"russian", PosTag::adjective},
    {"sad", PosTag::adjective},
    {"said", PosTag::other},
    {"same", PosTag::adjective},
    {"saw", PosTag::other},
    {"say", PosTag::other},
    {"says", PosTag::other},
    {"school", PosTag::noun},
    {"scottish", PosTag::adjective},
    {"season", PosTag::noun},
    {"second", PosTag::adjective},
    {"see", PosTag::other},
    {"seem", PosTag::other},
    {"seems", PosTag::other},
    {"seen", PosTag::other},
    {"sees", PosTag::other},
    {"series", PosTag::noun},
    {"shall", PosTag::other},
    {"she", PosTag::other},
    {"short", PosTag::adjective},
    {"shortage", PosTag::noun},
    {"should", PosTag::other},
    {"show", PosTag::noun},
    {"simple", PosTag::adjective},
    {"since", PosTag::other},
    {"singer", PosTag::noun},
    {"slowly", PosTag::other},
    {"small", PosTag::adjective},
    {"so", PosTag::other},
    {"social", PosTag::adjective},
    {"some", PosTag::other},
    {"sometimes", PosTag::other},
    {"song", PosTag::noun},
    {"soon", PosTag::other},
    {"spanish", PosTag::adjective},
    {"state", PosTag::noun},
    {"still", PosTag::other},
    {"storm", PosTag::noun},
    {"story", PosTag::noun},
    {"strong", PosTag::adjective},
    {"student", PosTag::noun},
    {"such", PosTag::adjective},
    {"take", PosTag::other},
    {"takes", PosTag::other},
    {"teacher", PosTag::noun},
    {"team", PosTag::noun},
    {"tell", PosTag::other},
    {"than", PosTag::other},
    {"that", PosTag::other},
    {"the", PosTag::other},
    {"their", PosTag::other},
    {"them", PosTag::other},
    {"themselves", PosTag::other},
    {"then", PosTag::other},
    {"there", PosTag::other},
    {"these", PosTag::other},
    {"they", PosTag::other},
    {"think", PosTag::other},
    {"thinks", PosTag::other},
    {"third", PosTag::adjective},
    {"this", PosTag::other},
    {"those", PosTag::other},
    {"though", PosTag::other},
    {"thought", PosTag::other},
    {"through", PosTag::other},
    {"till", PosTag::other},
    {"time", PosTag::noun},
    {"to", PosTag::other},
    {"today", PosTag::noun},
    {"told", PosTag::other},
    {"tomorrow", PosTag::noun},
    {"too", PosTag::other},
    {"took", PosTag::other},
    {"top", PosTag::adjective},
    {"tournament", PosTag::noun},
    {"toward", PosTag::other},
    {"towards", PosTag::other},
    {"tried", PosTag::other},
    {"true", PosTag::adjective},
    {"try", PosTag::other},
    {"tweet", PosTag::noun},
    {"twitter", PosTag::noun},
    {"ugly", PosTag::adjective},
    {"under", PosTag::other},
    {"university", PosTag::noun},
    {"unless", PosTag::other},
    {"unlike", PosTag::other},
    {"until", PosTag::other},
    {"upon", PosTag::other},
    {"us", PosTag::other},
    {"use", PosTag::other},
    {"used", PosTag::other},
    {"versus", PosTag::other},
    {"very", PosTag::other},
    {"via", PosTag::other},
    {"video", PosTag::noun},
    {"vs", PosTag::other},
    {"vs.", PosTag::other},
    {"want", PosTag::other},
    {"wanted", PosTag::other},
    {"wants", PosTag::other},
    {"war", PosTag::noun},
    {"warm", PosTag::adjective},
    {"was", PosTag::other},
    {"watch", PosTag::other},
    {"watched", PosTag::other},
    {"water", PosTag::noun},
    {"we", PosTag::other},
    {"weak", PosTag::adjective},
    {"weather", PosTag::noun},
    {"week", PosTag::noun},
    {"weekly", PosTag::adjective},
    {"well", PosTag::other},
    {"went", PosTag::other},
    {"were", PosTag::other},
    {"wet", PosTag::adjective},
    {"what", PosTag::other},
    {"when", PosTag::other},
    {"where", PosTag::other},
    {"whereas", PosTag::other},
    {"whether", PosTag::other},
    {"which", PosTag::other},
    {"while", PosTag::other},
    {"white", PosTag::adjective},
    {"who", PosTag::other},
    {"whole", PosTag::adjective},
    {"whom", PosTag::other},
    {"whose", PosTag::other},
    {"why", PosTag::other},
    {"will", PosTag::other},
    {"win", PosTag::other},
    {"wine", PosTag::noun},
    {"wins", PosTag::other},
    {"with", PosTag::other},
    {"within", PosTag::other},
    {"without", PosTag::other},
    {"woman", PosTag::noun},
    {"won", PosTag::other},
    {"work", PosTag::noun},
    {"worked", PosTag::other},
    {"world", PosTag::noun},
    {"worse", PosTag::adjective},
    {"worst", PosTag::adjective},
    {"would", PosTag::other},
    {"year", PosTag::noun},
    {"yes", PosTag::other},
    {"yesterday", PosTag::noun},
    {"yet", PosTag::other},
    {"you", PosTag::other},
    {"young", PosTag::adjective},
    {"your", PosTag::other},
    {"yourself", PosTag::other},
};

std::string lower_ascii(std::string_view s) {
    std::string out{s};
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
    }
    return out;
}

}  // namespace

LexiconTagger::LexiconTagger(std::unordered_map<std::string, PosTag> lexicon)
    : lexicon_(std::move(lexicon)) {}

LexiconTagger LexiconTagger::defaults() {
    std::unordered_map<std::string, PosTag> lexicon;
    for (const auto& entry : kDefaultLexicon) {
        lexicon.emplace(entry.word, entry.tag);
    }
    return LexiconTagger{std::move(lexicon)};
}

LexiconTagger LexiconTagger::load(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read lexicon file: " + path.string());
    }
    std::unordered_map<std::string, PosTag> lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0) {
            throw DataError("lexicon line " + std::to_string(line_no) + ": expected word<TAB>tag");
        }
        const auto tag = line.substr(tab + 1);
        PosTag parsed;
        if (tag == "NOUN") {
            parsed = PosTag::noun;
        } else if (tag == "PROPER") {
            parsed = PosTag::proper;
        } else if (tag == "ADJ") {
            parsed = PosTag::adjective;
        } else if (tag == "OTHER") {
            parsed = PosTag::other;
        } else {
            throw DataError("lexicon line " + std::to_string(line_no) + ": unknown tag " + tag);
        }
        lexicon.insert_or_assign(lower_ascii(line.substr(0, tab)), parsed);
    }
    return LexiconTagger{std::move(lexicon)};
}

std::vector<PosTag> LexiconTagger::tag(std::span<const std::string> words) const {
    std::vector<PosTag> tags;
    tags.reserve(words.size());
    for (const auto& word : words) {
        if (word.empty()) {
            tags.push_back(PosTag::other);
            continue;
        }
        if (const auto it = lexicon_.find(lower_ascii(word)); it != lexicon_.end()) {
            tags.push_back(it->second);
        } else if (word.front() >= 'A' && word.front() <= 'Z') {
            tags.push_back(PosTag::proper);
        } else {
            tags.push_back(PosTag::noun);
        }
    }
    return tags;
}

}  // namespace kbqe
