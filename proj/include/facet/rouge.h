#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace facet::rouge {

// Lowercase tokens with edge punctuation stripped. Empty or punctuation-only
// tokens never appear in a TokenSeq produced by tokenize().
using TokenSeq = std::vector<std::string>;

struct Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// P = matches/candidate_total, R = matches/reference_total, F1 harmonic mean.
// Any zero denominator yields 0, never an error.
Score make_score(double matches, double candidate_total, double reference_total);

// Lowercases, splits on whitespace, strips leading/trailing punctuation from
// each token and drops tokens that become empty. With stemming=true each
// surviving token is passed through the Porter stemmer.
TokenSeq tokenize(std::string_view text, bool stemming = false);

std::string porter_stem(std::string word);

// Clipped n-gram overlap between two token sequences.
Score rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n);

// Multi-sentence variant. N-grams are counted within each sentence, so no
// n-gram spans a sentence boundary.
Score rouge_n(const std::vector<TokenSeq>& candidate_sentences,
              const std::vector<TokenSeq>& reference_sentences, int n);

int lcs_length(const TokenSeq& a, const TokenSeq& b);

// R = LCS/|reference|, P = LCS/|candidate|.
Score rouge_l_sentence(const TokenSeq& candidate, const TokenSeq& reference);

// Summary-level ROUGE-L: per reference sentence, the union of its LCS matches
// against every candidate sentence; hits clipped by per-token counts on both
// sides.
Score rouge_l_summary(const std::vector<TokenSeq>& candidate_sentences,
                      const std::vector<TokenSeq>& reference_sentences);

// Mean of ROUGE-1 F1, ROUGE-2 F1 and summary-level ROUGE-L F1.
double rouge_avg(const std::vector<TokenSeq>& candidate_sentences,
                 const std::vector<TokenSeq>& reference_sentences);

}  // namespace facet::rouge
