#include "kbqe/index.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kbqe/error.hpp"
#include "kbqe/kernels.hpp"

namespace kbqe {

Index Index::build(std::vector<Document> docs) {
    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < docs.size(); ++i) {
        if (docs[i].id == docs[i - 1].id) {
            throw DataError("duplicate document id: " + docs[i].id);
        }
    }

    // Sorted vocabulary gives deterministic term ids.
    std::map<std::string, std::uint64_t> totals;
    for (const auto& doc : docs) {
        std::uint64_t sum = 0;
        for (const auto& [term, count] : doc.term_counts) {
            if (count == 0 || term.empty()) {
                throw DataError("document " + doc.id + " has an empty term or zero count");
            }
            totals[term] += count;
            sum += count;
        }
        if (sum != doc.length) {
            throw DataError("document " + doc.id + " length does not match its term counts");
        }
    }

    Index index;
    index.vocabulary_.reserve(totals.size());
    index.collection_counts_.reserve(totals.size());
    for (const auto& [term, total] : totals) {
        index.term_ids_.emplace(term, static_cast<TermId>(index.vocabulary_.size()));
        index.vocabulary_.push_back(term);
        index.collection_counts_.push_back(total);
    }
    index.postings_.resize(index.vocabulary_.size());

    index.docs_.reserve(docs.size());
    for (auto& doc : docs) {
        const auto d = static_cast<DocIndex>(index.docs_.size());
        DocEntry entry;
        entry.id = doc.id;
        entry.length = doc.length;
        entry.post_time = doc.post_time;
        entry.terms.reserve(doc.term_counts.size());
        // term_counts is ordered by term, and term ids follow the same order
        for (const auto& [term, count] : doc.term_counts) {
            const TermId t = index.term_ids_.at(term);
            entry.terms.push_back({t, count});
            index.postings_[t].push_back({d, count});
        }
        index.collection_length_ += doc.length;
        index.doc_ids_.emplace(entry.id, d);
        index.docs_.push_back(std::move(entry));
    }

    index.collection_probs_.resize(index.vocabulary_.size(), 0.0);
    if (index.collection_length_ > 0) {
        const auto total = static_cast<double>(index.collection_length_);
        for (std::size_t t = 0; t < index.collection_counts_.size(); ++t) {
            index.collection_probs_[t] = static_cast<double>(index.collection_counts_[t]) / total;
        }
    }
    return index;
}

std::optional<TermId> Index::term_id(std::string_view term) const {
    const auto it = term_ids_.find(std::string{term});
    if (it == term_ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::optional<DocIndex> Index::find_doc(std::string_view id) const {
    const auto it = doc_ids_.find(std::string{id});
    if (it == doc_ids_.end()) {
        return std::nullopt;
    }
    return it->second;
}

DocIndex Index::doc_index(std::string_view id) const {
    if (const auto d = find_doc(id)) {
        return *d;
    }
    throw std::out_of_range("unknown document id: " + std::string{id});
}

std::uint64_t Index::collection_count(std::string_view term) const {
    const auto t = term_id(term);
    return t ? collection_counts_[*t] : 0;
}

std::uint32_t Index::count(DocIndex d, TermId t) const {
    const auto& terms = docs_[d].terms;
    const auto it = std::lower_bound(terms.begin(), terms.end(), t,
                                     [](const TermCount& tc, TermId id) { return tc.term < id; });
    return (it != terms.end() && it->term == t) ? it->count : 0;
}

double Index::collection_prob(std::string_view term) const {
    if (empty()) {
        throw std::logic_error("collection probability requested from an empty index");
    }
    const auto t = term_id(term);
    return t ? collection_probs_[*t] : 0.0;
}

double Index::collection_prob(TermId t) const {
    if (empty()) {
        throw std::logic_error("collection probability requested from an empty index");
    }
    return collection_probs_[t];
}

double Index::doc_prob(std::string_view doc_id, std::string_view term,
                       const SmoothingParams& s) const {
    return doc_prob(doc_index(doc_id), term_id(term), s);
}

double Index::doc_prob(DocIndex d, std::optional<TermId> t, const SmoothingParams& s) const {
    if (!t) {
        return 0.0;
    }
    const auto& doc = docs_[d];
    const double c = count(d, *t);
    return (c + s.mu * collection_probs_[*t]) / (static_cast<double>(doc.length) + s.mu);
}

std::vector<double> Index::doc_distribution(DocIndex d, const SmoothingParams& s) const {
    const auto& doc = docs_[d];
    std::vector<double> counts(vocabulary_.size(), 0.0);
    for (const auto& tc : doc.terms) {
        counts[tc.term] = tc.count;
    }
    std::vector<double> out(vocabulary_.size());
    kernels::dirichlet(counts, collection_probs_, s.mu,
                       1.0 / (static_cast<double>(doc.length) + s.mu), out);
    return out;
}

std::vector<Document> export_documents(const Index& index) {
    std::vector<Document> docs;
    docs.reserve(index.num_docs());
    for (DocIndex d = 0; d < index.num_docs(); ++d) {
        const auto& entry = index.doc(d);
        Document doc;
        doc.id = entry.id;
        doc.length = entry.length;
        doc.post_time = entry.post_time;
        for (const auto& tc : entry.terms) {
            doc.term_counts.emplace(index.term(tc.term), tc.count);
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

double temporal_prior(double query_time, double doc_time, double rate) {
    if (!(rate > 0.0)) {
        throw std::invalid_argument("temporal prior rate must be positive");
    }
    if (!(doc_time < query_time)) {
        throw std::invalid_argument("document time must precede the query time");
    }
    return rate * std::exp(-rate * (query_time - doc_time));
}

// Snapshot format (line oriented, UTF-8):
//   kbqe-index 1
//   stopwords <n>
//   <word>                                  x n
//   documents <n>
//   <id>\t<post_time>\t<term>:<count> ...   x n

namespace {

constexpr std::string_view kMagic = "kbqe-index 1";

std::size_t parse_header_count(const std::string& line, std::string_view key) {
    std::istringstream in{line};
    std::string word;
    std::size_t n = 0;
    if (!(in >> word >> n) || word != key) {
        throw DataError("index snapshot: expected '" + std::string{key} + " <n>' header");
    }
    return n;
}

}  // namespace

void save_index(const std::filesystem::path& path, const Index& index,
                const std::unordered_set<std::string>& stopwords) {
    std::ofstream out{path};
    if (!out) {
        throw DataError("cannot write index snapshot: " + path.string());
    }
    std::vector<std::string> words(stopwords.begin(), stopwords.end());
    std::sort(words.begin(), words.end());
    out << kMagic << '\n' << "stopwords " << words.size() << '\n';
    for (const auto& w : words) {
        out << w << '\n';
    }
    out << "documents " << index.num_docs() << '\n';
    char time_buf[64];
    for (DocIndex d = 0; d < index.num_docs(); ++d) {
        const auto& doc = index.doc(d);
        std::snprintf(time_buf, sizeof time_buf, "%.17g", doc.post_time);
        out << doc.id << '\t' << time_buf << '\t';
        bool first = true;
        for (const auto& tc : doc.terms) {
            out << (first ? "" : " ") << index.term(tc.term) << ':' << tc.count;
            first = false;
        }
        out << '\n';
    }
    if (!out) {
        throw DataError("failed writing index snapshot: " + path.string());
    }
}

IndexSnapshot load_index(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read index snapshot: " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw DataError("not an index snapshot: " + path.string());
    }
    IndexSnapshot snap;
    std::getline(in, line);
    const auto n_stop = parse_header_count(line, "stopwords");
    for (std::size_t i = 0; i < n_stop; ++i) {
        if (!std::getline(in, line)) {
            throw DataError("index snapshot truncated in stopword list");
        }
        snap.stopwords.insert(line);
    }
    std::getline(in, line);
    const auto n_docs = parse_header_count(line, "documents");
    std::vector<Document> docs;
    docs.reserve(n_docs);
    for (std::size_t i = 0; i < n_docs; ++i) {
        if (!std::getline(in, line)) {
            throw DataError("index snapshot truncated in document table");
        }
        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
        if (tab2 == std::string::npos) {
            throw DataError("index snapshot: malformed document line " + std::to_string(i + 1));
        }
        Document doc;
        doc.id = line.substr(0, tab1);
        doc.post_time = std::stod(line.substr(tab1 + 1, tab2 - tab1 - 1));
        std::istringstream terms{line.substr(tab2 + 1)};
        std::string item;
        while (terms >> item) {
            const auto colon = item.rfind(':');
            std::uint32_t count = 0;
            const auto* begin = item.data() + colon + 1;
            const auto* end = item.data() + item.size();
            if (colon == std::string::npos || colon == 0 ||
                std::from_chars(begin, end, count).ptr != end) {
                throw DataError("index snapshot: bad term entry '" + item + "'");
            }
            doc.term_counts.emplace(item.substr(0, colon), count);
            doc.length += count;
        }
        docs.push_back(std::move(doc));
    }
    snap.index = Index::build(std::move(docs));
    return snap;
}

}  // namespace kbqe
