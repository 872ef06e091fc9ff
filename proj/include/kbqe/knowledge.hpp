#pragma once

// Local concept store and the recursive maximum-match concept resolver.

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kbqe {

struct Concept {
    std::string concept_id;
    std::string name;
    std::vector<std::string> aliases;
    std::vector<std::string> notable_for;
    std::vector<std::string> notable_types;
    std::string description;
    std::map<std::string, std::string> domain_properties;
};

/// Lowercase, drop punctuation, collapse runs of whitespace. No stemming.
std::string normalize_phrase(std::string_view phrase);

struct ConceptStoreStats {
    std::size_t loaded = 0;
    std::size_t malformed = 0;
    std::size_t collisions = 0;  // surface strings claimed by several concepts
};

class ConceptStore {
  public:
    ConceptStore() = default;

    /// Throws DataError on duplicate concept ids. When two concepts share a
    /// normalized name or alias, the smaller concept_id keeps it.
    static ConceptStore from_concepts(std::vector<Concept> concepts,
                                      ConceptStoreStats* stats = nullptr);

    /// Exact match of the normalized phrase against names and aliases.
    const Concept* search(std::string_view phrase) const;
    const Concept* find(std::string_view concept_id) const;

    std::size_t size() const { return concepts_.size(); }
    bool empty() const { return concepts_.empty(); }

  private:
    std::map<std::string, Concept, std::less<>> concepts_;
    std::unordered_map<std::string, const Concept*> surface_;
};

/// Reads a JSON-lines concept store. Malformed records are skipped and
/// counted; duplicate ids throw DataError.
ConceptStore load_concept_store(const std::filesystem::path& path,
                                ConceptStoreStats* stats = nullptr);

inline const Concept* concept_search(const ConceptStore& store, std::string_view phrase) {
    return store.search(phrase);
}

// Part-of-speech tagging for noun phrase detection.

enum class PosTag { noun, proper, adjective, other };

class PosTagger {
  public:
    virtual ~PosTagger() = default;
    virtual std::vector<PosTag> tag(std::span<const std::string> words) const = 0;
};

/// word -> most frequent tag, with fallbacks for unknown words:
/// capitalized -> proper noun, anything else -> noun.
class LexiconTagger final : public PosTagger {
  public:
    explicit LexiconTagger(std::unordered_map<std::string, PosTag> lexicon);

    /// The bundled lexicon.
    static LexiconTagger defaults();
    /// `word<TAB>tag` lines with tags NOUN, PROPER, ADJ, OTHER.
    static LexiconTagger load(const std::filesystem::path& path);

    std::vector<PosTag> tag(std::span<const std::string> words) const override;
    const std::unordered_map<std::string, PosTag>& lexicon() const { return lexicon_; }

  private:
    std::unordered_map<std::string, PosTag> lexicon_;
};

struct NounPhrase {
    std::vector<std::string> words;  // lowercased surface forms

    std::string text() const;
    friend bool operator==(const NounPhrase&, const NounPhrase&) = default;
};

/// Tags whitespace tokens and returns the maximal (ADJ|NOUN|PROPER)+ runs,
/// trimmed so that each ends in a noun or proper noun, in query order.
std::vector<NounPhrase> detect_noun_phrases(std::string_view query_text, const PosTagger& tagger);

/// Concepts ordered by concept_id, without duplicates.
using ConceptSet = std::vector<const Concept*>;

/// Records each phrase already resolved during one query.
struct ConceptMemo {
    std::unordered_map<std::string, ConceptSet> resolved;
};

enum class BranchOrder { prefix_first, suffix_first };

/// Recursive maximum match: a direct hit on the whole phrase wins; otherwise
/// a single word yields nothing and longer phrases recurse on the phrase
/// without its last word and without its first word, returning the union.
/// `lookups`, when given, is incremented once per store search.
ConceptSet get_concepts(const ConceptStore& store, const NounPhrase& phrase, ConceptMemo* memo,
                        std::size_t* lookups = nullptr,
                        BranchOrder order = BranchOrder::prefix_first);

/// Noun phrase detection followed by get_concepts on every phrase, with a
/// memo shared across the phrases of the query.
ConceptSet match_concepts(const ConceptStore& store, const PosTagger& tagger,
                          std::string_view query_text);

}  // namespace kbqe
