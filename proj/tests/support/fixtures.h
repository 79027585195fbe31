#pragma once

#include <random>
#include <string>
#include <vector>

#include "facet/corpus.h"

namespace facet::testsupport {

// The two-facet fixture used throughout: facet 0 -> {{0},{2},{3}},
// facet 1 -> {{1,3}} over a four-sentence document.
corpus::Sample two_facet_sample();

// Random sample with doc_max sentences at most; fams drawn with group sizes
// 1..3 and 0..3 groups per facet. Deterministic for a given generator state.
corpus::Sample random_sample(std::mt19937& rng, int doc_max = 12, int facet_max = 3);

// Random extraction (unique indices, ascending) of size <= max_size.
std::vector<int> random_extraction(std::mt19937& rng, int doc_len, int max_size);

// Random token sequence over a small alphabet.
std::vector<std::string> random_tokens(std::mt19937& rng, int max_len,
                                       int alphabet = 3);

}  // namespace facet::testsupport
