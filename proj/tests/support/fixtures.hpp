#pragma once

// Shared fixtures and brute-force oracles for the test binaries.

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kbqe/corpus.hpp"
#include "kbqe/index.hpp"
#include "kbqe/knowledge.hpp"
#include "kbqe/retrieval.hpp"

namespace kbqe::testing {

std::filesystem::path test_data(const std::string& rel);
std::filesystem::path shared_data(const std::string& rel);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

Document make_doc(std::string id, const std::map<std::string, std::uint32_t>& counts,
                  double post_time = 0.0);

/// {"d1": a b, "d2": b b}
Index toy_index();

struct RandomCorpusShape {
    std::size_t docs = 100;
    std::size_t vocabulary = 500;
    std::size_t min_length = 1;
    std::size_t max_length = 30;
    double max_time = 30.0;
};

/// Random documents with Zipf-like term draws; ids "d00000"...
std::vector<Document> random_corpus(std::mt19937_64& rng, const RandomCorpusShape& shape);

/// Term name used by random_corpus for rank i.
std::string random_term(std::size_t i);

/// Random query model over 1..max_terms terms drawn from [0, vocabulary + extra),
/// so some terms may be unseen.
LanguageModel random_query_model(std::mt19937_64& rng, std::size_t vocabulary,
                                 std::size_t max_terms, std::size_t extra = 0);

// Oracles recomputed from the definitions with no index shortcuts.

/// Full-collection scan for c(w, C) / |C|.
double naive_collection_prob(const std::vector<Document>& docs, const std::string& term);
/// (c(w, D) + mu P(w|C)) / (|D| + mu), with P(w|C) from naive_collection_prob.
double naive_doc_prob(const std::vector<Document>& docs, const Document& d,
                      const std::string& term, double mu);
/// sum over the whole vocabulary of q(w) log P(w|D), skipping q(w) = 0 and P(w|C) = 0.
double naive_kl(const std::vector<Document>& docs, const Document& d, const LanguageModel& qm,
                double mu);

/// The bundled end-to-end fixture.
struct E2eFixture {
    std::vector<Document> docs;
    Index index;
    TextAnalyzer analyzer;
    ConceptStore store;
    LexiconTagger tagger;
    std::vector<Topic> topics;
};
const E2eFixture& e2e_fixture();

/// Mila Kunis knowledge-base record (film credit as a domain property) plus a
/// Wizard of Oz concept.
ConceptStore mila_kunis_store();

}  // namespace kbqe::testing
