// Porter, M.F. "An algorithm for suffix stripping", Program 14(3), 1980.
//
// Follows the published rules, including ABLI -> ABLE in step 2 (later
// reference implementations changed this to BLI -> BLE and added LOGI).
// Within a rule list the first matching suffix decides; if its condition
// fails the word is left alone for that step.

#include <array>
#include <string>
#include <string_view>

#include "kbqe/corpus.hpp"

namespace kbqe {
namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

// y is a consonant at the start of a word or after a vowel.
bool is_consonant(std::string_view w, std::size_t i) {
    if (is_vowel_letter(w[i])) {
        return false;
    }
    if (w[i] == 'y') {
        return i == 0 ? true : !is_consonant(w, i - 1);
    }
    return true;
}

// m in [C](VC){m}[V]
int measure(std::string_view w) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const bool cons = is_consonant(w, i);
        if (cons && prev_vowel) {
            ++m;
        }
        prev_vowel = !cons;
    }
    return m;
}

bool contains_vowel(std::string_view w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!is_consonant(w, i)) {
            return true;
        }
    }
    return false;
}

bool ends_double_consonant(std::string_view w) {
    const auto n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o
bool ends_cvc(std::string_view w) {
    const auto n = w.size();
    if (n < 3) {
        return false;
    }
    const char last = w[n - 1];
    return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) &&
           last != 'w' && last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    int min_measure;  // stem measure must exceed this
};

// Applies the first rule whose suffix matches.
template <std::size_t N>
void apply_rules(std::string& w, const std::array<Rule, N>& rules) {
    for (const auto& rule : rules) {
        if (!ends_with(w, rule.suffix)) {
            continue;
        }
        const std::string_view stem{w.data(), w.size() - rule.suffix.size()};
        if (measure(stem) > rule.min_measure) {
            w.resize(stem.size());
            w += rule.replacement;
        }
        return;
    }
}

void step1a(std::string& w) {
    if (ends_with(w, "sses")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
        // unchanged
    } else if (ends_with(w, "s")) {
        w.pop_back();
    }
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view{w}.substr(0, w.size() - 3)) > 0) {
            w.pop_back();
        }
        return;
    }
    std::size_t cut = 0;
    if (ends_with(w, "ed") && contains_vowel(std::string_view{w}.substr(0, w.size() - 2))) {
        cut = 2;
    } else if (ends_with(w, "ing") && contains_vowel(std::string_view{w}.substr(0, w.size() - 3))) {
        cut = 3;
    }
    if (cut == 0) {
        return;
    }
    w.resize(w.size() - cut);
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w += 'e';
    } else if (ends_double_consonant(w)) {
        const char last = w.back();
        if (last != 'l' && last != 's' && last != 'z') {
            w.pop_back();
        }
    } else if (measure(w) == 1 && ends_cvc(w)) {
        w += 'e';
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && contains_vowel(std::string_view{w}.substr(0, w.size() - 1))) {
        w.back() = 'i';
    }
}

constexpr std::array<Rule, 20> kStep2{{
    {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},  {"anci", "ance", 0},
    {"izer", "ize", 0},    {"abli", "able", 0},   {"alli", "al", 0},     {"entli", "ent", 0},
    {"eli", "e", 0},       {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
    {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0}, {"fulness", "ful", 0},
    {"ousness", "ous", 0}, {"aliti", "al", 0},    {"iviti", "ive", 0},   {"biliti", "ble", 0},
}};

constexpr std::array<Rule, 7> kStep3{{
    {"icate", "ic", 0},
    {"ative", "", 0},
    {"alize", "al", 0},
    {"iciti", "ic", 0},
    {"ical", "ic", 0},
    {"ful", "", 0},
    {"ness", "", 0},
}};

void step4(std::string& w) {
    static constexpr std::array<std::string_view, 19> kSuffixes{
        "al",   "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement", "ment",
        "ent",  "ion",  "ou",   "ism", "ate", "iti",  "ous",  "ive", "ize"};
    for (const auto suffix : kSuffixes) {
        if (!ends_with(w, suffix)) {
            continue;
        }
        const std::string_view stem{w.data(), w.size() - suffix.size()};
        bool ok = measure(stem) > 1;
        if (ok && suffix == "ion") {
            ok = !stem.empty() && (stem.back() == 's' || stem.back() == 't');
        }
        if (ok) {
            w.resize(stem.size());
        }
        return;
    }
}

void step5a(std::string& w) {
    if (!ends_with(w, "e")) {
        return;
    }
    const std::string_view stem{w.data(), w.size() - 1};
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) {
        w.pop_back();
    }
}

void step5b(std::string& w) {
    if (ends_with(w, "ll") && measure(std::string_view{w}.substr(0, w.size() - 1)) > 1) {
        w.pop_back();
    }
}

bool all_lower_alpha(std::string_view token) {
    for (const char c : token) {
        if (c < 'a' || c > 'z') {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string porter_stem(std::string_view token) {
    std::string w{token};
    if (w.size() <= 2 || !all_lower_alpha(w)) {
        return w;
    }
    step1a(w);
    step1b(w);
    step1c(w);
    apply_rules(w, kStep2);
    apply_rules(w, kStep3);
    step4(w);
    step5a(w);
    step5b(w);
    return w;
}

}  // namespace kbqe
