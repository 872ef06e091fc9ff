#include "kbqe/knowledge.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "../util/utf8.hpp"
#include "kbqe/error.hpp"
#include "kbqe/log.hpp"

namespace kbqe {

std::string normalize_phrase(std::string_view phrase) {
    std::string out;
    out.reserve(phrase.size());
    bool pending_space = false;
    std::size_t pos = 0;
    while (pos < phrase.size()) {
        const auto cp = utf8::decode(phrase, pos);
        const auto bytes = phrase.substr(pos, cp.length);
        pos += cp.length;
        if (utf8::is_space(cp.value)) {
            pending_space = !out.empty();
            continue;
        }
        if (utf8::is_punct_or_symbol(cp.value)) {
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        if (cp.length == 1 && bytes[0] >= 'A' && bytes[0] <= 'Z') {
            out += static_cast<char>(bytes[0] - 'A' + 'a');
        } else {
            out += bytes;
        }
    }
    return out;
}

ConceptStore ConceptStore::from_concepts(std::vector<Concept> concepts, ConceptStoreStats* stats) {
    ConceptStore store;
    for (auto& c : concepts) {
        const auto id = c.concept_id;
        if (!store.concepts_.emplace(id, std::move(c)).second) {
            throw DataError("duplicate concept id: " + id);
        }
    }
    std::size_t collisions = 0;
    // Map iteration is by ascending id, so the first claimant of a surface
    // string is the lexicographically smallest id.
    for (const auto& [id, c] : store.concepts_) {
        auto claim = [&](const std::string& surface) {
            auto key = normalize_phrase(surface);
            if (key.empty()) {
                return;
            }
            const auto [it, inserted] = store.surface_.emplace(key, &c);
            if (!inserted && it->second != &c) {
                ++collisions;
                log::warn("concept store: '" + key + "' claimed by " + it->second->concept_id +
                          " and " + id + "; keeping " + it->second->concept_id);
            }
        };
        claim(c.name);
        for (const auto& alias : c.aliases) {
            claim(alias);
        }
    }
    if (stats != nullptr) {
        stats->loaded = store.concepts_.size();
        stats->collisions = collisions;
    }
    return store;
}

const Concept* ConceptStore::search(std::string_view phrase) const {
    const auto it = surface_.find(normalize_phrase(phrase));
    return it == surface_.end() ? nullptr : it->second;
}

const Concept* ConceptStore::find(std::string_view concept_id) const {
    const auto it = concepts_.find(concept_id);
    return it == concepts_.end() ? nullptr : &it->second;
}

namespace {

bool read_string(const nlohmann::json& j, const char* key, std::string& out) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return true;
    }
    if (!it->is_string()) {
        return false;
    }
    out = it->get<std::string>();
    return true;
}

bool read_strings(const nlohmann::json& j, const char* key, std::vector<std::string>& out) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) {
        return true;
    }
    if (!it->is_array()) {
        return false;
    }
    for (const auto& v : *it) {
        if (!v.is_string()) {
            return false;
        }
        out.push_back(v.get<std::string>());
    }
    return true;
}

std::optional<Concept> parse_concept(const std::string& line) {
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_object()) {
        return std::nullopt;
    }
    Concept c;
    if (!read_string(j, "concept_id", c.concept_id) || !read_string(j, "name", c.name) ||
        c.concept_id.empty() || normalize_phrase(c.name).empty() ||
        !read_strings(j, "aliases", c.aliases) || !read_strings(j, "notable_for", c.notable_for) ||
        !read_strings(j, "notable_types", c.notable_types) ||
        !read_string(j, "description", c.description)) {
        return std::nullopt;
    }
    if (const auto it = j.find("domain_properties"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) {
            return std::nullopt;
        }
        for (const auto& [domain, text] : it->items()) {
            if (!text.is_string()) {
                return std::nullopt;
            }
            c.domain_properties.emplace(domain, text.get<std::string>());
        }
    }
    return c;
}

}  // namespace

ConceptStore load_concept_store(const std::filesystem::path& path, ConceptStoreStats* stats) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read concept store: " + path.string());
    }
    std::vector<Concept> concepts;
    std::size_t malformed = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (auto c = parse_concept(line)) {
            concepts.push_back(std::move(*c));
        } else {
            ++malformed;
        }
    }
    if (malformed > 0) {
        log::warn("concept store: skipped " + std::to_string(malformed) + " malformed record(s)");
    }
    auto store = ConceptStore::from_concepts(std::move(concepts), stats);
    if (stats != nullptr) {
        stats->malformed = malformed;
    }
    return store;
}

std::string NounPhrase::text() const {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w;
    }
    return out;
}

std::vector<NounPhrase> detect_noun_phrases(std::string_view query_text, const PosTagger& tagger) {
    // Whitespace split, then trim punctuation off each word. Words that are
    // nothing but punctuation stay in place (tagged OTHER) and break runs.
    std::vector<std::string> words;
    std::size_t pos = 0;
    while (pos < query_text.size()) {
        const auto cp = utf8::decode(query_text, pos);
        if (utf8::is_space(cp.value)) {
            pos += cp.length;
            continue;
        }
        const std::size_t start = pos;
        while (pos < query_text.size()) {
            const auto c = utf8::decode(query_text, pos);
            if (utf8::is_space(c.value)) {
                break;
            }
            pos += c.length;
        }
        const auto raw = query_text.substr(start, pos - start);
        std::size_t b = 0;
        while (b < raw.size() && utf8::is_punct_or_symbol(utf8::decode(raw, b).value)) {
            b += utf8::decode(raw, b).length;
        }
        std::size_t keep = b;
        for (std::size_t i = b; i < raw.size();) {
            const auto c = utf8::decode(raw, i);
            i += c.length;
            if (!utf8::is_punct_or_symbol(c.value)) {
                keep = i;
            }
        }
        words.emplace_back(raw.substr(b, keep - b));
    }

    const auto tags = tagger.tag(words);
    std::vector<NounPhrase> phrases;
    std::size_t i = 0;
    while (i < words.size()) {
        const auto is_np_tag = [&](std::size_t k) {
            return !words[k].empty() && tags[k] != PosTag::other;
        };
        if (!is_np_tag(i)) {
            ++i;
            continue;
        }
        std::size_t end = i;
        while (end < words.size() && is_np_tag(end)) {
            ++end;
        }
        std::size_t last = end;
        while (last > i && tags[last - 1] == PosTag::adjective) {
            --last;
        }
        if (last > i) {
            NounPhrase np;
            for (std::size_t k = i; k < last; ++k) {
                np.words.push_back(normalize_phrase(words[k]));
            }
            phrases.push_back(std::move(np));
        }
        i = end;
    }
    return phrases;
}

namespace {

ConceptSet merge(const ConceptSet& a, const ConceptSet& b) {
    ConceptSet out;
    out.reserve(a.size() + b.size());
    const auto by_id = [](const Concept* x, const Concept* y) { return x->concept_id < y->concept_id; };
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), by_id);
    return out;
}

ConceptSet get_concepts_impl(const ConceptStore& store, std::span<const std::string> words,
                             ConceptMemo* memo, std::size_t* lookups, BranchOrder order) {
    std::string key;
    for (const auto& w : words) {
        if (!key.empty()) {
            key += ' ';
        }
        key += w;
    }
    if (memo != nullptr) {
        if (const auto it = memo->resolved.find(key); it != memo->resolved.end()) {
            return it->second;
        }
    }
    if (lookups != nullptr) {
        ++*lookups;
    }
    ConceptSet result;
    if (const Concept* hit = store.search(key)) {
        result.push_back(hit);
    } else if (words.size() > 1) {
        const auto prefix = words.first(words.size() - 1);
        const auto suffix = words.subspan(1);
        if (order == BranchOrder::prefix_first) {
            auto left = get_concepts_impl(store, prefix, memo, lookups, order);
            auto right = get_concepts_impl(store, suffix, memo, lookups, order);
            result = merge(left, right);
        } else {
            auto right = get_concepts_impl(store, suffix, memo, lookups, order);
            auto left = get_concepts_impl(store, prefix, memo, lookups, order);
            result = merge(left, right);
        }
    }
    if (memo != nullptr) {
        memo->resolved.emplace(std::move(key), result);
    }
    return result;
}

}  // namespace

ConceptSet get_concepts(const ConceptStore& store, const NounPhrase& phrase, ConceptMemo* memo,
                        std::size_t* lookups, BranchOrder order) {
    if (phrase.words.empty()) {
        return {};
    }
    return get_concepts_impl(store, phrase.words, memo, lookups, order);
}

ConceptSet match_concepts(const ConceptStore& store, const PosTagger& tagger,
                          std::string_view query_text) {
    ConceptMemo memo;
    ConceptSet all;
    for (const auto& np : detect_noun_phrases(query_text, tagger)) {
        all = merge(all, get_concepts(store, np, &memo));
    }
    return all;
}

}  // namespace kbqe
