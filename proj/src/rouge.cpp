#include "facet/rouge.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <unordered_map>

namespace facet::rouge {

namespace {

bool is_word_char(unsigned char c) {
    // Bytes >= 0x80 (UTF-8 continuation/lead) are kept as word characters.
    return std::isalnum(c) != 0 || c >= 0x80;
}

// ---------------------------------------------------------------------------
// Porter stemmer (the classic 1980 algorithm).
// ---------------------------------------------------------------------------

bool vowel_at(const std::string& w, size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return true;
        case 'y':
            return i > 0 && !vowel_at(w, i - 1);
        default:
            return false;
    }
}

// Number of vowel->consonant transitions in w[0, len).
int measure(const std::string& w, size_t len) {
    int m = 0;
    bool prev_vowel = false;
    for (size_t i = 0; i < len; ++i) {
        bool v = vowel_at(w, i);
        if (!v && prev_vowel) ++m;
        prev_vowel = v;
    }
    return m;
}

bool has_vowel(const std::string& w, size_t len) {
    for (size_t i = 0; i < len; ++i)
        if (vowel_at(w, i)) return true;
    return false;
}

bool ends_double_consonant(const std::string& w) {
    size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && !vowel_at(w, n - 1);
}

// Stem of length len ends consonant-vowel-consonant, last not w/x/y.
bool ends_cvc(const std::string& w, size_t len) {
    if (len < 3) return false;
    if (vowel_at(w, len - 3) || !vowel_at(w, len - 2) || vowel_at(w, len - 1))
        return false;
    char c = w[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, const char* s) {
    size_t n = std::strlen(s);
    return w.size() >= n && w.compare(w.size() - n, n, s) == 0;
}

struct SuffixRule {
    const char* suffix;
    const char* replacement;
};

// Replaces the first (longest-listed) matching suffix when the remaining stem
// has measure > m_min. Returns true if a suffix matched, applied or not.
bool apply_rules(std::string& w, const SuffixRule* rules, size_t count, int m_min) {
    for (size_t i = 0; i < count; ++i) {
        if (!ends_with(w, rules[i].suffix)) continue;
        size_t stem = w.size() - std::strlen(rules[i].suffix);
        if (measure(w, stem) > m_min) {
            w.erase(stem);
            w += rules[i].replacement;
        }
        return true;
    }
    return false;
}

constexpr SuffixRule kStep2[] = {
    {"ational", "ate"}, {"ization", "ize"}, {"iveness", "ive"},
    {"fulness", "ful"}, {"ousness", "ous"}, {"tional", "tion"},
    {"biliti", "ble"},  {"entli", "ent"},   {"ousli", "ous"},
    {"ation", "ate"},   {"alism", "al"},    {"aliti", "al"},
    {"iviti", "ive"},   {"enci", "ence"},   {"anci", "ance"},
    {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},
    {"ator", "ate"},    {"eli", "e"},
};

constexpr SuffixRule kStep3[] = {
    {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
    {"ical", "ic"},  {"ness", ""},  {"ful", ""},
};

constexpr SuffixRule kStep4[] = {
    {"ement", ""}, {"ance", ""}, {"ence", ""}, {"able", ""}, {"ible", ""},
    {"ment", ""},  {"ant", ""},  {"ent", ""},  {"ism", ""},  {"ate", ""},
    {"iti", ""},   {"ous", ""},  {"ive", ""},  {"ize", ""},  {"ion", ""},
    {"al", ""},    {"er", ""},   {"ic", ""},   {"ou", ""},
};

}  // namespace

std::string porter_stem(std::string w) {
    if (w.size() <= 2) return w;

    // Step 1a
    if (ends_with(w, "sses")) {
        w.erase(w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w.erase(w.size() - 2);
    } else if (!ends_with(w, "ss") && ends_with(w, "s")) {
        w.erase(w.size() - 1);
    }

    // Step 1b
    bool cleanup = false;
    if (ends_with(w, "eed")) {
        if (measure(w, w.size() - 3) > 0) w.erase(w.size() - 1);
    } else if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
        w.erase(w.size() - 2);
        cleanup = true;
    } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
        w.erase(w.size() - 3);
        cleanup = true;
    }
    if (cleanup) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w += 'e';
        } else if (ends_double_consonant(w) && !ends_with(w, "l") &&
                   !ends_with(w, "s") && !ends_with(w, "z")) {
            w.erase(w.size() - 1);
        } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
            w += 'e';
        }
    }

    // Step 1c
    if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w[w.size() - 1] = 'i';

    apply_rules(w, kStep2, std::size(kStep2), 0);
    apply_rules(w, kStep3, std::size(kStep3), 0);

    // Step 4: plain truncation at measure > 1; "ion" additionally requires the
    // stem to end in s or t.
    for (const auto& rule : kStep4) {
        if (!ends_with(w, rule.suffix)) continue;
        size_t stem = w.size() - std::strlen(rule.suffix);
        bool ok = measure(w, stem) > 1;
        if (ok && std::strcmp(rule.suffix, "ion") == 0)
            ok = stem > 0 && (w[stem - 1] == 's' || w[stem - 1] == 't');
        if (ok) w.erase(stem);
        break;
    }

    // Step 5a
    if (ends_with(w, "e")) {
        int m = measure(w, w.size() - 1);
        if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1)))
            w.erase(w.size() - 1);
    }
    // Step 5b
    if (measure(w, w.size()) > 1 && ends_double_consonant(w) && ends_with(w, "l"))
        w.erase(w.size() - 1);

    return w;
}

TokenSeq tokenize(std::string_view text, bool stemming) {
    TokenSeq tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) continue;

        size_t lo = start, hi = i;
        while (lo < hi && !is_word_char(static_cast<unsigned char>(text[lo]))) ++lo;
        while (hi > lo && !is_word_char(static_cast<unsigned char>(text[hi - 1]))) --hi;
        if (lo == hi) continue;

        std::string token;
        token.reserve(hi - lo);
        for (size_t j = lo; j < hi; ++j)
            token += static_cast<char>(std::tolower(static_cast<unsigned char>(text[j])));
        if (stemming) token = porter_stem(std::move(token));
        tokens.push_back(std::move(token));
    }
    return tokens;
}

Score make_score(double matches, double candidate_total, double reference_total) {
    Score s;
    s.precision = candidate_total > 0 ? matches / candidate_total : 0.0;
    s.recall = reference_total > 0 ? matches / reference_total : 0.0;
    double pr = s.precision + s.recall;
    s.f1 = pr > 0 ? 2.0 * s.precision * s.recall / pr : 0.0;
    return s;
}

namespace {

using Counts = std::unordered_map<std::string, int>;

void add_ngram_counts(const TokenSeq& sentence, int n, Counts& counts, long& total) {
    if (static_cast<int>(sentence.size()) < n) return;
    for (size_t i = 0; i + n <= sentence.size(); ++i) {
        std::string key = sentence[i];
        for (int j = 1; j < n; ++j) {
            key += '\x1e';
            key += sentence[i + j];
        }
        ++counts[key];
        ++total;
    }
}

long clipped_matches(const Counts& a, const Counts& b) {
    const Counts& small = a.size() <= b.size() ? a : b;
    const Counts& large = a.size() <= b.size() ? b : a;
    long matches = 0;
    for (const auto& [key, count] : small) {
        auto it = large.find(key);
        if (it != large.end()) matches += std::min(count, it->second);
    }
    return matches;
}

// Indices of `ref` tokens participating in one LCS of (ref, cand).
std::vector<int> lcs_ref_indices(const TokenSeq& ref, const TokenSeq& cand) {
    size_t m = ref.size(), n = cand.size();
    std::vector<int> out;
    if (m == 0 || n == 0) return out;
    std::vector<std::vector<int>> dp(m + 1, std::vector<int>(n + 1, 0));
    for (size_t i = 1; i <= m; ++i)
        for (size_t j = 1; j <= n; ++j)
            dp[i][j] = ref[i - 1] == cand[j - 1]
                           ? dp[i - 1][j - 1] + 1
                           : std::max(dp[i - 1][j], dp[i][j - 1]);
    size_t i = m, j = n;
    while (i > 0 && j > 0) {
        if (ref[i - 1] == cand[j - 1]) {
            out.push_back(static_cast<int>(i - 1));
            --i;
            --j;
        } else if (dp[i - 1][j] >= dp[i][j - 1]) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

Score rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n) {
    Counts cand, ref;
    long cand_total = 0, ref_total = 0;
    add_ngram_counts(candidate, n, cand, cand_total);
    add_ngram_counts(reference, n, ref, ref_total);
    return make_score(static_cast<double>(clipped_matches(cand, ref)),
                      static_cast<double>(cand_total), static_cast<double>(ref_total));
}

Score rouge_n(const std::vector<TokenSeq>& candidate_sentences,
              const std::vector<TokenSeq>& reference_sentences, int n) {
    Counts cand, ref;
    long cand_total = 0, ref_total = 0;
    for (const auto& s : candidate_sentences) add_ngram_counts(s, n, cand, cand_total);
    for (const auto& s : reference_sentences) add_ngram_counts(s, n, ref, ref_total);
    return make_score(static_cast<double>(clipped_matches(cand, ref)),
                      static_cast<double>(cand_total), static_cast<double>(ref_total));
}

int lcs_length(const TokenSeq& a, const TokenSeq& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<int> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (size_t i = 1; i <= a.size(); ++i) {
        for (size_t j = 1; j <= b.size(); ++j)
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                          : std::max(prev[j], cur[j - 1]);
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

Score rouge_l_sentence(const TokenSeq& candidate, const TokenSeq& reference) {
    double lcs = static_cast<double>(lcs_length(candidate, reference));
    return make_score(lcs, static_cast<double>(candidate.size()),
                      static_cast<double>(reference.size()));
}

Score rouge_l_summary(const std::vector<TokenSeq>& candidate_sentences,
                      const std::vector<TokenSeq>& reference_sentences) {
    long ref_total = 0, cand_total = 0;
    Counts ref_budget, cand_budget;
    for (const auto& s : reference_sentences) {
        ref_total += static_cast<long>(s.size());
        for (const auto& t : s) ++ref_budget[t];
    }
    for (const auto& s : candidate_sentences) {
        cand_total += static_cast<long>(s.size());
        for (const auto& t : s) ++cand_budget[t];
    }
    long hits = 0;
    for (const auto& ref : reference_sentences) {
        std::vector<char> matched(ref.size(), 0);
        for (const auto& cand : candidate_sentences)
            for (int idx : lcs_ref_indices(ref, cand)) matched[idx] = 1;
        for (size_t i = 0; i < ref.size(); ++i) {
            if (!matched[i]) continue;
            auto r = ref_budget.find(ref[i]);
            auto c = cand_budget.find(ref[i]);
            if (r != ref_budget.end() && r->second > 0 && c != cand_budget.end() &&
                c->second > 0) {
                ++hits;
                --r->second;
                --c->second;
            }
        }
    }
    return make_score(static_cast<double>(hits), static_cast<double>(cand_total),
                      static_cast<double>(ref_total));
}

double rouge_avg(const std::vector<TokenSeq>& candidate_sentences,
                 const std::vector<TokenSeq>& reference_sentences) {
    double r1 = rouge_n(candidate_sentences, reference_sentences, 1).f1;
    double r2 = rouge_n(candidate_sentences, reference_sentences, 2).f1;
    double rl = rouge_l_summary(candidate_sentences, reference_sentences).f1;
    return (r1 + r2 + rl) / 3.0;
}

}  // namespace facet::rouge
