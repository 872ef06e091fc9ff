#include <doctest.h>

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "kbqe/error.hpp"
#include "kbqe/evaluation.hpp"

using namespace kbqe;

namespace {

// scipy.stats.ttest_rel on differences [1, 2, 3, 4, 5] against zeros.
constexpr double kFrozenT = 4.242640687119285;
constexpr double kFrozenP = 0.013235599563682695;

RankedList ranking(const std::string& topic, const std::vector<std::string>& docs) {
    RankedList r;
    r.topic_id = topic;
    double score = 0.0;
    for (const auto& d : docs) {
        r.entries.push_back({d, score});
        score -= 1.0;
    }
    return r;
}

using Rational = boost::multiprecision::cpp_rational;

Rational rational_ap(const std::vector<int>& grades, std::size_t relevant, int threshold) {
    if (relevant == 0) {
        return 0;
    }
    Rational sum = 0;
    long long hits = 0;
    for (std::size_t k = 0; k < grades.size(); ++k) {
        if (grades[k] >= threshold) {
            ++hits;
            sum += Rational(hits, static_cast<long long>(k + 1));
        }
    }
    return sum / static_cast<long long>(relevant);
}

double as_double(const Rational& r) {
    return r.convert_to<double>();
}

}  // namespace

TEST_SUITE("evaluation") {
    TEST_CASE("relevance modes") {
        CHECK(relevance_threshold(RelevanceMode::allrel) == 1);
        CHECK(relevance_threshold(RelevanceMode::highrel) == 2);
        CHECK(parse_relevance_mode("highrel") == RelevanceMode::highrel);
        CHECK(relevance_mode_name(RelevanceMode::allrel) == "allrel");
        CHECK_THROWS_AS(parse_relevance_mode("some"), std::invalid_argument);
    }

    TEST_CASE("qrels") {
        Qrels q;
        q.add("T1", "a", 2);
        q.add("T1", "b", 1);
        q.add("T1", "c", 0);
        CHECK(q.grade("T1", "a") == 2);
        CHECK(q.grade("T1", "zz") == 0);
        CHECK(q.grade("T9", "a") == 0);
        CHECK(q.relevant_count("T1", 1) == 2);
        CHECK(q.relevant_count("T1", 2) == 1);
        CHECK_THROWS_AS(q.add("T1", "a", 1), std::invalid_argument);
        CHECK_THROWS_AS(q.add("T1", "x", 3), std::invalid_argument);
        CHECK_THROWS_AS(q.add("T1", "y", -1), std::invalid_argument);

        kbqe::testing::TempDir dir;
        kbqe::testing::write_file(dir / "q.txt", "T1 0 a 2\nT1 0 b 1\n\nT2 0 c 0\n");
        const auto loaded = load_qrels(dir / "q.txt");
        CHECK(loaded.topics() == std::vector<std::string>{"T1", "T2"});
        kbqe::testing::write_file(dir / "bad.txt", "T1 0 a 2\nT1 0 b\n");
        try {
            load_qrels(dir / "bad.txt");
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string{e.what()}.find(":2") != std::string::npos);
        }
        kbqe::testing::write_file(dir / "grade.txt", "T1 0 a 7\n");
        CHECK_THROWS_AS(load_qrels(dir / "grade.txt"), DataError);
    }

    TEST_CASE("average precision examples") {
        Qrels q;
        q.add("T", "r1", 1);
        q.add("T", "r2", 2);
        q.add("T", "n1", 0);
        const auto ap = average_precision(ranking("T", {"r1", "n1", "r2"}), q);
        REQUIRE(ap);
        CHECK(std::abs(*ap - (1.0 + 2.0 / 3.0) / 2.0) <= 1e-15);
        CHECK(*ap == doctest::Approx(0.833333).epsilon(1e-6));

        CHECK(*average_precision(ranking("T", {"n1", "x"}), q) == 0.0);
        CHECK(*average_precision(ranking("T", {"r2", "r1", "n1"}), q) == 1.0);
        CHECK_FALSE(average_precision(ranking("U", {"r1"}), q));
        // Cutoff.
        CHECK(*average_precision(ranking("T", {"r1", "n1", "r2"}), q, 1, 2) == 0.5);
        // highrel counts only r2.
        CHECK(*average_precision(ranking("T", {"r1", "n1", "r2"}), q, 2) ==
              doctest::Approx(1.0 / 3.0));
    }

    TEST_CASE("precision at n") {
        Qrels q;
        std::vector<std::string> docs;
        for (int i = 0; i < 30; ++i) {
            docs.push_back("d" + std::to_string(i));
            if (i % 5 < 2) {
                q.add("T", docs.back(), 1);
            }
        }
        const auto r = ranking("T", docs);
        CHECK(precision_at_n(r, q, 30) == doctest::Approx(0.4));
        CHECK(precision_at_n(ranking("T", {}), q, 10) == 0.0);
        CHECK(precision_at_n(ranking("T", {"d0"}), q, 5) == 0.2);
        Qrels g;
        g.add("T", "top", 2);
        CHECK(precision_at_n(ranking("T", {"top"}), g, 1, 1) == 1.0);
        CHECK_THROWS_AS(precision_at_n(r, q, 0), std::invalid_argument);
    }

    TEST_CASE("metrics match a rational oracle on random cases") {
        std::mt19937_64 rng{71};
        for (int i = 0; i < 200; ++i) {
            const std::size_t pool = 1 + rng() % 50;
            Qrels q;
            std::vector<std::string> docs;
            std::vector<int> grades;
            for (std::size_t d = 0; d < pool; ++d) {
                docs.push_back("doc" + std::to_string(d));
                const int g = static_cast<int>(rng() % 3);
                grades.push_back(g);
                if (rng() % 4 != 0) {
                    q.add("T", docs.back(), g);
                } else {
                    grades.back() = 0;  // unjudged
                }
            }
            // Relevant documents that were never retrieved still count in R.
            const std::size_t missing = rng() % 3;
            for (std::size_t m = 0; m < missing; ++m) {
                q.add("T", "unretrieved" + std::to_string(m), 1 + static_cast<int>(rng() % 2));
            }
            std::vector<std::size_t> order(pool);
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<std::string> ranked_docs;
            std::vector<int> ranked_grades;
            const std::size_t len = rng() % (pool + 1);
            for (std::size_t k = 0; k < len; ++k) {
                ranked_docs.push_back(docs[order[k]]);
                ranked_grades.push_back(grades[order[k]]);
            }
            const auto r = ranking("T", ranked_docs);
            for (const int threshold : {1, 2}) {
                const std::size_t relevant = q.relevant_count("T", threshold);
                const auto ap = average_precision(r, q, threshold);
                if (relevant == 0) {
                    CHECK_FALSE(ap);
                    continue;
                }
                REQUIRE(ap);
                const auto exact = rational_ap(ranked_grades, relevant, threshold);
                CHECK(std::abs(*ap - as_double(exact)) <= 1e-12);
                CHECK(*ap <= 1.0);
                // AP = 1 exactly when all R relevant documents fill the top R ranks.
                bool perfect = relevant <= ranked_grades.size();
                for (std::size_t k = 0; perfect && k < relevant; ++k) {
                    perfect = ranked_grades[k] >= threshold;
                }
                CHECK((exact == 1) == perfect);
                for (const std::size_t n : {1u, 5u, 10u, 30u}) {
                    long long hits = 0;
                    for (std::size_t k = 0; k < std::min(n, ranked_grades.size()); ++k) {
                        hits += ranked_grades[k] >= threshold ? 1 : 0;
                    }
                    CHECK(precision_at_n(r, q, n, threshold) ==
                          doctest::Approx(as_double(Rational(hits, static_cast<long long>(n))))
                              .epsilon(1e-15));
                }
                // Positive affine transform of the scores changes nothing.
                auto affine = r;
                for (auto& e : affine.entries) {
                    e.score = 3.5 * e.score + 11.0;
                }
                CHECK(average_precision(affine, q, threshold) == ap);
            }
        }
    }

    TEST_CASE("paired t-test") {
        const std::vector<double> a{1, 2, 3, 4, 5};
        const std::vector<double> zero{0, 0, 0, 0, 0};
        const auto r = paired_t_test(a, zero);
        CHECK(std::abs(r.t - kFrozenT) <= 1e-12);
        CHECK(std::abs(r.p - kFrozenP) <= 1e-10);
        CHECK(r.df == 4);
        CHECK(r.mean_difference == 3.0);

        const auto flipped = paired_t_test(zero, a);
        CHECK(flipped.t == -r.t);
        CHECK(flipped.p == r.p);

        const auto same = paired_t_test(a, a);
        CHECK(same.t == 0.0);
        CHECK(same.p == 1.0);

        const std::vector<double> shifted{2, 3, 4, 5, 6};
        const auto constant = paired_t_test(shifted, a);
        CHECK(std::isinf(constant.t));
        CHECK(constant.t > 0);
        CHECK(constant.p == 0.0);

        CHECK_THROWS_AS(paired_t_test(a, std::vector<double>{1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}),
                        std::invalid_argument);
    }

    TEST_CASE("run files") {
        std::istringstream in{
            "T1 Q0 b 1 -2.0 tag\n"
            "T1 Q0 a 2 -1.0 tag\n"
            "T1 Q0 c 3 -1.0 tag\n"
            "T2 Q0 z 1 5 tag\n"};
        const auto run = read_run(in);
        REQUIRE(run.size() == 2);
        const auto& t1 = run.at("T1").entries;
        REQUIRE(t1.size() == 3);
        CHECK(t1[0].doc_id == "a");
        CHECK(t1[1].doc_id == "c");
        CHECK(t1[2].doc_id == "b");
        CHECK(run.at("T1").topic_id == "T1");

        std::istringstream dup{"T1 Q0 a 1 1 x\nT1 Q0 a 2 0 x\n"};
        CHECK_THROWS_AS(read_run(dup), DataError);
        std::istringstream fields{"T1 Q0 a 1 1\n"};
        CHECK_THROWS_AS(read_run(fields), DataError);
        std::istringstream score{"T1 Q0 a 1 abc x\n"};
        try {
            read_run(score, "mine.run");
            FAIL("expected DataError");
        } catch (const DataError& e) {
            CHECK(std::string{e.what()}.find("mine.run:1") != std::string::npos);
        }
    }

    TEST_CASE("reports") {
        Qrels q;
        q.add("A", "a1", 1);
        q.add("A", "a2", 1);
        q.add("B", "b1", 2);
        q.add("C", "c1", 1);  // grade-1 only: excluded under highrel
        std::map<std::string, RankedList> run;
        run["A"] = ranking("A", {"x", "a1", "y", "a2"});  // AP (1/2 + 2/4)/2 = 0.5
        run["B"] = ranking("B", {"b1"});                  // AP 1
        run["C"] = ranking("C", {"c1"});
        run["D"] = ranking("D", {"d1"});  // no judgments at all

        std::map<std::string, RankedList> ab{{"A", run["A"]}, {"B", run["B"]}};
        const auto two = evaluate(ab, q, RelevanceMode::allrel);
        CHECK(two.map == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(two.cutoffs == kDefaultCutoffs);
        REQUIRE(two.topics.size() == 2);
        CHECK(two.topics[0].precision[0] == 0.0);
        CHECK(two.topics[1].precision[0] == 1.0);

        const auto single = evaluate({{"A", run["A"]}}, q, RelevanceMode::allrel);
        CHECK(single.map == single.topics[0].ap);

        const auto all = evaluate(run, q, RelevanceMode::allrel);
        CHECK(all.topics.size() == 3);
        CHECK(all.excluded == std::vector<std::string>{"D"});
        const auto high = evaluate(run, q, RelevanceMode::highrel);
        CHECK(high.topics.size() == 1);
        CHECK(high.topics[0].topic == "B");
        CHECK(high.map == 1.0);
        CHECK(high.excluded == std::vector<std::string>{"A", "C", "D"});

        const auto empty = evaluate({{"C", run["C"]}}, q, RelevanceMode::highrel);
        CHECK(empty.topics.empty());
        CHECK(empty.map == 0.0);

        // Shuffled input gives the same report.
        auto shuffled = run;
        std::reverse(shuffled["A"].entries.begin(), shuffled["A"].entries.end());
        std::ostringstream ordered_text, shuffled_text;
        write_run(ordered_text, run["A"], "t");
        write_run(shuffled_text, shuffled["A"], "t");
        std::istringstream in1{ordered_text.str()}, in2{shuffled_text.str()};
        const auto r1 = evaluate(read_run(in1), q, RelevanceMode::allrel);
        const auto r2 = evaluate(read_run(in2), q, RelevanceMode::allrel);
        CHECK(report_to_json(r1) == report_to_json(r2));

        std::ostringstream table;
        write_report(table, two);
        CHECK(table.str() ==
              "topic      AP     P@1     P@5    P@10    P@30\n"
              "A      0.5000  0.0000  0.4000  0.2000  0.0667\n"
              "B      1.0000  1.0000  0.2000  0.1000  0.0333\n"
              "all    0.7500  0.5000  0.3000  0.1500  0.0500\n"
              "mode allrel, 2 topic(s) evaluated\n");
        const auto j = report_to_json(high);
        CHECK(j["map"] == 1.0);
        CHECK(j["mode"] == "highrel");
        CHECK(j["per_topic"]["B"]["P@1"] == 1.0);
        CHECK(j["excluded"].size() == 3);
    }

    TEST_CASE("comparisons") {
        EvalReport a, b;
        a.cutoffs = b.cutoffs = {10};
        for (int i = 0; i < 5; ++i) {
            const std::string t = "T" + std::to_string(i);
            a.topics.push_back({t, 0.1 * (i + 1) + 0.1 * (i + 1), {0.5}});
            b.topics.push_back({t, 0.1 * (i + 1), {0.5}});
        }
        b.topics.push_back({"extra", 0.9, {0.1}});
        const auto cmp = compare_reports(a, b);
        CHECK(cmp.topics.size() == 5);
        CHECK(cmp.map.t == doctest::Approx(kFrozenT).epsilon(1e-9));
        CHECK(cmp.map.p == doctest::Approx(kFrozenP).epsilon(1e-9));
        REQUIRE(cmp.precision.size() == 1);
        CHECK(cmp.precision[0].p == 1.0);
        const auto j = comparison_to_json(cmp);
        CHECK(j.contains("map"));
    }
}
