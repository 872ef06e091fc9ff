#include "kbqe/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "kbqe/error.hpp"

namespace kbqe {

int relevance_threshold(RelevanceMode mode) { return mode == RelevanceMode::highrel ? 2 : 1; }

std::string_view relevance_mode_name(RelevanceMode mode) {
    return mode == RelevanceMode::highrel ? "highrel" : "allrel";
}

RelevanceMode parse_relevance_mode(std::string_view name) {
    if (name == "allrel") {
        return RelevanceMode::allrel;
    }
    if (name == "highrel") {
        return RelevanceMode::highrel;
    }
    throw std::invalid_argument("unknown relevance mode: " + std::string(name));
}

void Qrels::add(std::string topic, std::string doc, int grade) {
    if (grade < 0 || grade > 2) {
        throw std::invalid_argument("relevance grade must be 0, 1 or 2");
    }
    auto& docs = judgments_[std::move(topic)];
    if (!docs.emplace(std::move(doc), grade).second) {
        throw std::invalid_argument("duplicate judgment");
    }
}

int Qrels::grade(std::string_view topic, std::string_view doc) const {
    const auto t = judgments_.find(topic);
    if (t == judgments_.end()) {
        return 0;
    }
    const auto d = t->second.find(doc);
    return d == t->second.end() ? 0 : d->second;
}

std::size_t Qrels::relevant_count(std::string_view topic, int threshold) const {
    const auto t = judgments_.find(topic);
    if (t == judgments_.end()) {
        return 0;
    }
    return static_cast<std::size_t>(std::count_if(
        t->second.begin(), t->second.end(), [&](const auto& kv) { return kv.second >= threshold; }));
}

std::vector<std::string> Qrels::topics() const {
    std::vector<std::string> out;
    out.reserve(judgments_.size());
    for (const auto& [topic, docs] : judgments_) {
        out.push_back(topic);
    }
    return out;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::istringstream in{line};
    std::vector<std::string> fields;
    std::string f;
    while (in >> f) {
        fields.push_back(f);
    }
    return fields;
}

bool parse_int(const std::string& s, long long& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    // strtod rather than from_chars: accepts the same spellings as C printf.
    if (s.empty()) {
        return false;
    }
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

Qrels load_qrels(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read qrels: " + path.string());
    }
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        const auto where = path.string() + ":" + std::to_string(line_no);
        const auto fields = split_fields(line);
        long long grade = 0;
        if (fields.size() != 4 || !parse_int(fields[3], grade) || grade < 0 || grade > 2) {
            throw DataError("malformed qrels line at " + where);
        }
        try {
            qrels.add(fields[0], fields[2], static_cast<int>(grade));
        } catch (const std::invalid_argument&) {
            throw DataError("duplicate judgment at " + where);
        }
    }
    return qrels;
}

std::map<std::string, RankedList> read_run(std::istream& in, std::string_view source) {
    std::map<std::string, RankedList> runs;
    std::map<std::string, std::set<std::string>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        const auto where = std::string(source) + ":" + std::to_string(line_no);
        const auto fields = split_fields(line);
        long long rank = 0;
        double score = 0.0;
        if (fields.size() != 6 || !parse_int(fields[3], rank) || !parse_double(fields[4], score)) {
            throw DataError("malformed run line at " + where);
        }
        if (!seen[fields[0]].insert(fields[2]).second) {
            throw DataError("duplicate document " + fields[2] + " for topic " + fields[0] + " at " +
                            where);
        }
        auto& ranked = runs[fields[0]];
        ranked.topic_id = fields[0];
        ranked.entries.push_back({fields[2], score});
    }
    for (auto& [topic, ranked] : runs) {
        std::sort(ranked.entries.begin(), ranked.entries.end(),
                  [](const RankedEntry& a, const RankedEntry& b) {
                      return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
                  });
    }
    return runs;
}

std::map<std::string, RankedList> load_run(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) {
        throw DataError("cannot read run file: " + path.string());
    }
    return read_run(in, path.string());
}

std::optional<double> average_precision(const RankedList& ranked, const Qrels& qrels,
                                        int threshold, std::size_t cutoff) {
    const std::size_t total_relevant = qrels.relevant_count(ranked.topic_id, threshold);
    if (total_relevant == 0) {
        return std::nullopt;
    }
    const std::size_t n = std::min(cutoff, ranked.entries.size());
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (qrels.grade(ranked.topic_id, ranked.entries[k].doc_id) >= threshold) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
    }
    return sum / static_cast<double>(total_relevant);
}

double precision_at_n(const RankedList& ranked, const Qrels& qrels, std::size_t n, int threshold) {
    if (n == 0) {
        throw std::invalid_argument("precision cutoff must be positive");
    }
    const std::size_t m = std::min(n, ranked.entries.size());
    std::size_t hits = 0;
    for (std::size_t k = 0; k < m; ++k) {
        if (qrels.grade(ranked.topic_id, ranked.entries[k].doc_id) >= threshold) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(n);
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("paired t-test needs samples of equal length");
    }
    if (a.size() < 2) {
        throw std::invalid_argument("paired t-test needs at least two pairs");
    }
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - b[i];
    }
    TTestResult res;
    res.df = n - 1;
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
    res.mean_difference = mean;
    double ss = 0.0;
    for (const double x : d) {
        ss += (x - mean) * (x - mean);
    }
    if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) {
        return res;
    }
    const double sd = std::sqrt(ss / static_cast<double>(res.df));
    if (sd == 0.0) {
        res.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
        res.p = 0.0;
        return res;
    }
    res.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const boost::math::students_t dist(static_cast<double>(res.df));
    res.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.t)));
    return res;
}

EvalReport evaluate(const std::map<std::string, RankedList>& run, const Qrels& qrels,
                    RelevanceMode mode, std::span<const std::size_t> cutoffs) {
    EvalReport report;
    report.mode = mode;
    report.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    const int threshold = relevance_threshold(mode);
    for (const auto& [topic, ranked] : run) {
        const auto ap = average_precision(ranked, qrels, threshold);
        if (!ap) {
            report.excluded.push_back(topic);
            continue;
        }
        TopicMetrics m{topic, *ap, {}};
        for (const std::size_t n : cutoffs) {
            m.precision.push_back(precision_at_n(ranked, qrels, n, threshold));
        }
        report.topics.push_back(std::move(m));
    }
    report.mean_precision.assign(cutoffs.size(), 0.0);
    if (!report.topics.empty()) {
        const auto count = static_cast<double>(report.topics.size());
        for (const auto& m : report.topics) {
            report.map += m.ap;
            for (std::size_t i = 0; i < cutoffs.size(); ++i) {
                report.mean_precision[i] += m.precision[i];
            }
        }
        report.map /= count;
        for (auto& p : report.mean_precision) {
            p /= count;
        }
    }
    return report;
}

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string p_label(std::size_t n) { return "P@" + std::to_string(n); }

}  // namespace

void write_report(std::ostream& out, const EvalReport& report) {
    std::size_t width = 5;
    for (const auto& m : report.topics) {
        width = std::max(width, m.topic.size());
    }
    out << std::left << std::setw(static_cast<int>(width)) << "topic" << std::right << "  "
        << std::setw(6) << "AP";
    for (const std::size_t n : report.cutoffs) {
        out << "  " << std::setw(6) << p_label(n);
    }
    out << '\n';
    const auto row = [&](const std::string& label, double ap, const std::vector<double>& ps) {
        out << std::left << std::setw(static_cast<int>(width)) << label << std::right << "  "
            << std::setw(6) << fixed4(ap);
        for (const double p : ps) {
            out << "  " << std::setw(6) << fixed4(p);
        }
        out << '\n';
    };
    for (const auto& m : report.topics) {
        row(m.topic, m.ap, m.precision);
    }
    row("all", report.map, report.mean_precision);
    out << "mode " << relevance_mode_name(report.mode) << ", " << report.topics.size()
        << " topic(s) evaluated";
    if (!report.excluded.empty()) {
        out << ", excluded (no relevant documents):";
        for (const auto& t : report.excluded) {
            out << ' ' << t;
        }
    }
    out << '\n';
}

nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["mode"] = relevance_mode_name(report.mode);
    j["map"] = report.map;
    nlohmann::json means = nlohmann::json::object();
    for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
        means[p_label(report.cutoffs[i])] = report.mean_precision[i];
    }
    j["p_at_n"] = means;
    nlohmann::json per_topic = nlohmann::json::object();
    for (const auto& m : report.topics) {
        nlohmann::json t;
        t["ap"] = m.ap;
        for (std::size_t i = 0; i < report.cutoffs.size(); ++i) {
            t[p_label(report.cutoffs[i])] = m.precision[i];
        }
        per_topic[m.topic] = t;
    }
    j["per_topic"] = per_topic;
    j["excluded"] = report.excluded;
    return j;
}

Comparison compare_reports(const EvalReport& a, const EvalReport& b) {
    if (a.cutoffs != b.cutoffs) {
        throw std::invalid_argument("reports use different precision cutoffs");
    }
    std::map<std::string, const TopicMetrics*> in_b;
    for (const auto& m : b.topics) {
        in_b.emplace(m.topic, &m);
    }
    Comparison cmp;
    std::vector<double> ap_a;
    std::vector<double> ap_b;
    std::vector<std::vector<double>> p_a(a.cutoffs.size());
    std::vector<std::vector<double>> p_b(a.cutoffs.size());
    for (const auto& m : a.topics) {
        const auto it = in_b.find(m.topic);
        if (it == in_b.end()) {
            continue;
        }
        cmp.topics.push_back(m.topic);
        ap_a.push_back(m.ap);
        ap_b.push_back(it->second->ap);
        for (std::size_t i = 0; i < a.cutoffs.size(); ++i) {
            p_a[i].push_back(m.precision[i]);
            p_b[i].push_back(it->second->precision[i]);
        }
    }
    cmp.map = paired_t_test(ap_a, ap_b);
    for (std::size_t i = 0; i < a.cutoffs.size(); ++i) {
        cmp.precision.push_back(paired_t_test(p_a[i], p_b[i]));
    }
    return cmp;
}

void write_comparison(std::ostream& out, const EvalReport& a, const EvalReport& b,
                      const Comparison& cmp) {
    char buf[160];
    out << "paired t-test over " << cmp.topics.size() << " topic(s)\n";
    std::snprintf(buf, sizeof buf, "%-8s %8s %8s %10s %10s\n", "metric", "run", "compare", "t", "p");
    out << buf;
    auto row = [&](const std::string& name, double va, double vb, const TTestResult& t) {
        std::snprintf(buf, sizeof buf, "%-8s %8.4f %8.4f %10.4f %10.6f\n", name.c_str(), va, vb,
                      t.t, t.p);
        out << buf;
    };
    row("MAP", a.map, b.map, cmp.map);
    for (std::size_t i = 0; i < a.cutoffs.size(); ++i) {
        row(p_label(a.cutoffs[i]), a.mean_precision[i], b.mean_precision[i], cmp.precision[i]);
    }
}

nlohmann::json comparison_to_json(const Comparison& cmp) {
    const auto test = [](const TTestResult& t) {
        nlohmann::json j;
        j["t"] = std::isfinite(t.t) ? nlohmann::json(t.t) : nlohmann::json(t.t > 0 ? "inf" : "-inf");
        j["p"] = t.p;
        j["df"] = t.df;
        j["mean_difference"] = t.mean_difference;
        return j;
    };
    nlohmann::json j;
    j["topics"] = cmp.topics;
    j["map"] = test(cmp.map);
    nlohmann::json ps = nlohmann::json::array();
    for (const auto& t : cmp.precision) {
        ps.push_back(test(t));
    }
    j["precision"] = ps;
    return j;
}

}  // namespace kbqe
