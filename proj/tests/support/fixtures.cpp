#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kbqe::testing {

std::filesystem::path test_data(const std::string& rel) {
    return std::filesystem::path(KBQE_TEST_DATA) / rel;
}

std::filesystem::path shared_data(const std::string& rel) {
    return std::filesystem::path(KBQE_SHARED_DATA) / rel;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out{path, std::ios::binary};
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("kbqe-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

Document make_doc(std::string id, const std::map<std::string, std::uint32_t>& counts,
                  double post_time) {
    Document d;
    d.id = std::move(id);
    d.post_time = post_time;
    for (const auto& [term, c] : counts) {
        d.term_counts[term] = c;
        d.length += c;
    }
    return d;
}

Index toy_index() {
    return Index::build({make_doc("d1", {{"a", 1}, {"b", 1}}), make_doc("d2", {{"b", 2}})});
}

std::string random_term(std::size_t i) { return "w" + std::to_string(i); }

std::vector<Document> random_corpus(std::mt19937_64& rng, const RandomCorpusShape& shape) {
    std::vector<double> weights(shape.vocabulary);
    for (std::size_t i = 0; i < shape.vocabulary; ++i) {
        weights[i] = 1.0 / static_cast<double>(i + 1);
    }
    std::discrete_distribution<std::size_t> term(weights.begin(), weights.end());
    std::uniform_int_distribution<std::size_t> length(shape.min_length, shape.max_length);
    std::uniform_real_distribution<double> when(0.0, shape.max_time);
    std::vector<Document> docs;
    docs.reserve(shape.docs);
    char id[16];
    for (std::size_t d = 0; d < shape.docs; ++d) {
        std::snprintf(id, sizeof id, "d%05zu", d);
        Document doc;
        doc.id = id;
        doc.post_time = when(rng);
        const std::size_t n = length(rng);
        for (std::size_t k = 0; k < n; ++k) {
            ++doc.term_counts[random_term(term(rng))];
        }
        doc.length = n;
        docs.push_back(std::move(doc));
    }
    return docs;
}

LanguageModel random_query_model(std::mt19937_64& rng, std::size_t vocabulary,
                                 std::size_t max_terms, std::size_t extra) {
    std::uniform_int_distribution<std::size_t> count(1, max_terms);
    std::uniform_int_distribution<std::size_t> pick(0, vocabulary + extra - 1);
    std::uniform_real_distribution<double> weight(0.05, 1.0);
    std::map<std::string, double> raw;
    const std::size_t n = count(rng);
    while (raw.size() < n) {
        raw[random_term(pick(rng))] = weight(rng);
    }
    double total = 0.0;
    for (const auto& [t, w] : raw) {
        total += w;
    }
    LanguageModel::Map probs;
    for (const auto& [t, w] : raw) {
        probs.emplace(t, w / total);
    }
    return LanguageModel::from_probs(std::move(probs));
}

double naive_collection_prob(const std::vector<Document>& docs, const std::string& term) {
    double count = 0.0;
    double length = 0.0;
    for (const auto& d : docs) {
        for (const auto& [t, c] : d.term_counts) {
            length += c;
            if (t == term) {
                count += c;
            }
        }
    }
    return count / length;
}

double naive_doc_prob(const std::vector<Document>& docs, const Document& d,
                      const std::string& term, double mu) {
    const auto it = d.term_counts.find(term);
    const double c = it == d.term_counts.end() ? 0.0 : it->second;
    return (c + mu * naive_collection_prob(docs, term)) / (static_cast<double>(d.length) + mu);
}

double naive_kl(const std::vector<Document>& docs, const Document& d, const LanguageModel& qm,
                double mu) {
    std::set<std::string> vocabulary;
    for (const auto& doc : docs) {
        for (const auto& [t, c] : doc.term_counts) {
            vocabulary.insert(t);
        }
    }
    double score = 0.0;
    for (const auto& w : vocabulary) {
        const double q = qm.prob(w);
        if (q == 0.0 || naive_collection_prob(docs, w) == 0.0) {
            continue;
        }
        score += q * std::log(naive_doc_prob(docs, d, w, mu));
    }
    return score;
}

const E2eFixture& e2e_fixture() {
    static const E2eFixture fixture = [] {
        auto cfg = PreprocessConfig::defaults();
        auto docs = load_documents(test_data("e2e/corpus.jsonl"), cfg);
        auto index = Index::build(docs);
        return E2eFixture{std::move(docs),
                          std::move(index),
                          TextAnalyzer{cfg.stopword_list},
                          load_concept_store(test_data("e2e/concepts.jsonl")),
                          LexiconTagger::defaults(),
                          load_topics(test_data("e2e/topics.jsonl"))};
    }();
    return fixture;
}

ConceptStore mila_kunis_store() {
    Concept mila;
    mila.concept_id = "m.0c9c0";
    mila.name = "Mila Kunis";
    mila.aliases = {"Milena Markovna Kunis"};
    mila.notable_for = {"Actor"};
    mila.notable_types = {"Celebrity"};
    mila.description =
        "Milena Markovna is an American actress and voice artist. In 1991, at the age of seven, "
        "she moved from the Soviet Union to Los Angeles with her family";
    mila.domain_properties = {{"film", "Oz the Great and Powerful"}};
    Concept oz;
    oz.concept_id = "m.0hgdq";
    oz.name = "The Wizard of Oz";
    oz.aliases = {"Oz", "Wizard of Oz"};
    oz.notable_for = {"Film"};
    oz.notable_types = {"Film series"};
    oz.description = "The wizard and the witches of the land of Oz.";
    return ConceptStore::from_concepts({mila, oz});
}

}  // namespace kbqe::testing
