#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "kbqe/feedback.hpp"

using namespace kbqe;
using kbqe::testing::make_doc;

namespace {

// Textbook EM in long double with the same start and stopping rule.
std::map<std::string, long double> reference_em(const FeedbackCounts& counts,
                                                const TermProbs& bg, long double lambda,
                                                std::size_t max_iters, long double tol) {
    std::map<std::string, long double> theta;
    for (const auto& [t, c] : counts) {
        theta[t] = 1.0L / counts.size();
    }
    auto loglik = [&] {
        long double ll = 0;
        for (const auto& [t, c] : counts) {
            ll += c * std::log((1 - lambda) * theta[t] + lambda * bg.at(t));
        }
        return ll;
    };
    long double ll = loglik();
    for (std::size_t it = 0; it < max_iters; ++it) {
        std::map<std::string, long double> next;
        long double mass = 0;
        for (const auto& [t, c] : counts) {
            const long double f = (1 - lambda) * theta[t];
            next[t] = c * f / (f + lambda * bg.at(t));
            mass += next[t];
        }
        for (auto& [t, p] : next) {
            p /= mass;
        }
        theta = next;
        const long double ll_next = loglik();
        const bool done = std::abs(ll_next - ll) < tol;
        ll = ll_next;
        if (done) {
            break;
        }
    }
    return theta;
}

FeedbackParams params_with(double lambda, std::size_t fb_terms = 5) {
    FeedbackParams p;
    p.lambda = lambda;
    p.fb_terms = fb_terms;
    return p;
}

}  // namespace

TEST_SUITE("feedback") {
    TEST_CASE("log-likelihood") {
        const auto theta = LanguageModel::from_probs({{"x", 1.0}});
        CHECK(feedback_loglik(theta, {{"x", 1}}, {{"x", 0.5}}, 0.5) ==
              doctest::Approx(std::log(0.75)).epsilon(1e-15));

        const auto three = LanguageModel::from_probs({{"a", 0.5}, {"b", 0.3}, {"c", 0.2}});
        const FeedbackCounts f{{"a", 3}, {"b", 1}, {"c", 4}};
        const TermProbs bg{{"a", 0.01}, {"b", 0.2}, {"c", 0.05}};
        const double expect = 3 * std::log(0.7 * 0.5 + 0.3 * 0.01) +
                              1 * std::log(0.7 * 0.3 + 0.3 * 0.2) +
                              4 * std::log(0.7 * 0.2 + 0.3 * 0.05);
        CHECK(std::abs(feedback_loglik(three, f, bg, 0.3) - expect) <= 1e-12);

        // lambda = 1 ignores theta_F.
        const double pure = 3 * std::log(0.01) + std::log(0.2) + 4 * std::log(0.05);
        CHECK(std::abs(feedback_loglik(three, f, bg, 1.0) - pure) <= 1e-12);
        CHECK(std::abs(feedback_loglik(theta, f, bg, 1.0) - pure) <= 1e-12);

        CHECK_THROWS_AS(feedback_loglik(theta, {{"q", 1}}, {}, 0.5), std::invalid_argument);
        CHECK_THROWS_AS(feedback_loglik(theta, {{"x", 1}}, {{"x", 0.5}}, 1.5),
                        std::invalid_argument);
    }

    TEST_CASE("two-term fixed point") {
        const FeedbackCounts f{{"x", 2}, {"y", 1}};
        const TermProbs bg{{"x", 0.9}, {"y", 0.1}};
        auto p = params_with(0.5);
        p.tol = 1e-15;
        p.max_iters = 10000;
        EmTrace trace;
        const auto theta = em_fit(f, bg, p, &trace);
        CHECK(trace.converged);
        // Fixed point solved by hand: x = 13/30, y = 17/30.
        CHECK(std::abs(theta.prob("x") - 13.0 / 30.0) <= 1e-8);
        CHECK(std::abs(theta.prob("y") - 17.0 / 30.0) <= 1e-8);
        CHECK(theta.prob("y") > 1.0 / 3.0);
        const auto ref = reference_em(f, bg, 0.5L, 10000, 1e-18L);
        CHECK(std::abs(theta.prob("y") - static_cast<double>(ref.at("y"))) <= 1e-8);

        // Default stopping rule against the reference with the same rule.
        EmTrace dflt;
        const auto coarse = em_fit(f, bg, params_with(0.5), &dflt);
        const auto ref_coarse = reference_em(f, bg, 0.5L, 50, 1e-6L);
        CHECK(std::abs(coarse.prob("y") - static_cast<double>(ref_coarse.at("y"))) <= 1e-12);
    }

    TEST_CASE("single term and empirical background") {
        EmTrace trace;
        const auto one = em_fit({{"z", 4}}, {{"z", 0.3}}, params_with(0.5), &trace);
        CHECK(one.probs() == LanguageModel::Map{{"z", 1.0}});
        CHECK(trace.iterations == 1);

        // A background equal to the empirical distribution makes it the maximizer.
        const FeedbackCounts f{{"a", 5}, {"b", 3}, {"c", 2}};
        const TermProbs empirical{{"a", 0.5}, {"b", 0.3}, {"c", 0.2}};
        auto p = params_with(0.5);
        p.tol = 1e-15;
        p.max_iters = 10000;
        const auto mle = em_fit(f, empirical, p);
        CHECK(mle.prob("a") == doctest::Approx(0.5).epsilon(1e-6));
        CHECK(mle.prob("b") == doctest::Approx(0.3).epsilon(1e-6));
        CHECK(mle.prob("c") == doctest::Approx(0.2).epsilon(1e-6));
    }

    TEST_CASE("rejects bad input") {
        CHECK_THROWS_AS(em_fit({}, {}, params_with(0.5)), std::invalid_argument);
        CHECK_THROWS_AS(em_fit({{"a", 1}}, {{"a", 0.0}}, params_with(0.5)), std::invalid_argument);
        CHECK_THROWS_AS(em_fit({{"a", 1}}, {}, params_with(0.5)), std::invalid_argument);
        CHECK_THROWS_AS(em_fit({{"a", 1}}, {{"a", 0.1}}, params_with(0.0)), std::invalid_argument);
        CHECK_THROWS_AS(em_fit({{"a", 1}}, {{"a", 0.1}}, params_with(1.0)), std::invalid_argument);
    }

    TEST_CASE("monotone log-likelihood and normalization on random fixtures") {
        std::mt19937_64 rng{67};
        std::uniform_int_distribution<int> nterms(1, 20);
        std::uniform_int_distribution<std::uint64_t> count(1, 30);
        std::uniform_real_distribution<double> prob(1e-4, 0.2);
        std::uniform_real_distribution<double> lam(0.05, 0.95);
        for (int i = 0; i < 100; ++i) {
            FeedbackCounts f;
            TermProbs bg;
            const int n = nterms(rng);
            for (int k = 0; k < n; ++k) {
                const auto t = "t" + std::to_string(k);
                f[t] = count(rng);
                bg[t] = prob(rng);
            }
            auto p = params_with(lam(rng), 1 + rng() % 8);
            EmTrace trace;
            const auto theta = em_fit(f, bg, p, &trace);
            for (std::size_t k = 1; k < trace.loglik.size(); ++k) {
                CHECK(trace.loglik[k] >= trace.loglik[k - 1] - 1e-12 * std::abs(trace.loglik[k - 1]));
            }
            CHECK(std::abs(trace.fitted.total() - 1.0) <= 1e-9);
            CHECK(std::abs(theta.total() - 1.0) <= 1e-9);
            CHECK(theta.size() == std::min<std::size_t>(p.fb_terms, f.size()));
            CHECK(trace.loglik.size() == trace.iterations + 1);
            CHECK(feedback_loglik(trace.fitted, f, bg, p.lambda) ==
                  doctest::Approx(trace.loglik.back()).epsilon(1e-9));
            // Kept terms are the most probable ones.
            double min_kept = 1.0;
            for (const auto& [t, q] : theta.probs()) {
                min_kept = std::min(min_kept, trace.fitted.prob(t));
            }
            for (const auto& [t, q] : trace.fitted.probs()) {
                if (theta.prob(t) == 0.0) {
                    CHECK(q <= min_kept);
                }
            }
            // Deterministic.
            CHECK(em_fit(f, bg, p) == theta);
        }
    }

    TEST_CASE("truncation breaks ties by term") {
        const FeedbackCounts f{{"b", 1}, {"a", 1}, {"c", 1}};
        const TermProbs bg{{"a", 0.1}, {"b", 0.1}, {"c", 0.1}};
        const auto theta = em_fit(f, bg, params_with(0.5, 2));
        CHECK(theta.probs() == LanguageModel::Map{{"a", 0.5}, {"b", 0.5}});
    }

    TEST_CASE("apply feedback on a toy collection") {
        const auto idx = Index::build({make_doc("d1", {{"a", 2}, {"b", 1}}, 1.0),
                                       make_doc("d2", {{"b", 1}, {"c", 3}}, 2.0),
                                       make_doc("d3", {{"d", 2}, {"e", 1}, {"a", 1}}, 3.0),
                                       make_doc("d4", {{"a", 5}}, 9.0)});
        const auto q1 = LanguageModel::from_probs({{"a", 0.7}, {"b", 0.3}});
        const auto ranked = search(idx, q1, 5.0, 100, {100.0});
        REQUIRE(ranked.entries.size() == 3);
        FeedbackParams p;
        p.fb_docs = 2;
        p.fb_terms = 3;
        FeedbackTrace trace;
        const auto q2 = apply_feedback(q1, ranked, idx, p, &trace);

        // Compose by hand: counts of the two top documents, EM, then mix.
        FeedbackCounts f;
        TermProbs bg;
        for (std::size_t i = 0; i < 2; ++i) {
            const auto& entry = idx.doc(idx.doc_index(ranked.entries[i].doc_id));
            for (const auto& tc : entry.terms) {
                f[idx.term(tc.term)] += tc.count;
                bg[idx.term(tc.term)] = idx.collection_prob(tc.term);
            }
        }
        CHECK(trace.counts == f);
        CHECK(trace.docs.size() == 2);
        const auto ref = reference_em(f, bg, 0.5L, 50, 1e-6L);
        std::vector<std::pair<long double, std::string>> order;
        for (const auto& [t, v] : ref) {
            order.emplace_back(-v, t);
        }
        std::sort(order.begin(), order.end());
        long double kept = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            kept += -order[k].first;
        }
        std::map<std::string, double> expect;
        for (const auto& [t, p1] : q1.probs()) {
            expect[t] += 0.4 * p1;
        }
        for (std::size_t k = 0; k < 3; ++k) {
            expect[order[k].second] += static_cast<double>(0.6L * -order[k].first / kept);
        }
        CHECK(q2.size() == expect.size());
        for (const auto& [t, v] : expect) {
            CHECK(std::abs(q2.prob(t) - v) <= 1e-9);
        }
        CHECK(std::abs(q2.total() - 1.0) <= 1e-9);

        p.beta = 0.0;
        CHECK(apply_feedback(q1, ranked, idx, p) == q1);
        CHECK(apply_feedback(q1, RankedList{}, idx, FeedbackParams{}) == q1);

        auto leaky = ranked;
        leaky.entries.insert(leaky.entries.begin(), {"d4", 0.0});
        CHECK_THROWS_AS(feedback_counts(leaky, idx, 2), std::logic_error);
    }
}
