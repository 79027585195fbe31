#include "support/fixtures.h"

#include <algorithm>
#include <set>

namespace facet::testsupport {

corpus::Sample two_facet_sample() {
    return corpus::make_sample(
        "s1",
        {"the mayor opened the new bridge", "the bridge cost ten million",
         "a ribbon was cut by the mayor", "the mayor spoke at the opening"},
        {"the mayor opened the bridge", "the bridge cost ten million to build"},
        {{{0}, {2}, {3}}, {{1, 3}}});
}

corpus::Sample random_sample(std::mt19937& rng, int doc_max, int facet_max) {
    std::uniform_int_distribution<int> doc_len_dist(1, doc_max);
    std::uniform_int_distribution<int> facet_dist(1, facet_max);
    int doc_len = doc_len_dist(rng);
    int facets = facet_dist(rng);

    static const char* kWords[] = {"alpha", "bravo", "charlie", "delta", "echo",
                                   "foxtrot", "golf", "hotel", "india", "juliet"};
    auto sentence = [&](int salt) {
        std::uniform_int_distribution<int> len(2, 6);
        std::uniform_int_distribution<int> word(0, 9);
        std::string out;
        int n = len(rng);
        for (int i = 0; i < n; ++i) {
            if (i) out += ' ';
            out += kWords[word(rng)];
        }
        out += " s" + std::to_string(salt);
        return out;
    };

    std::vector<std::string> document, reference;
    for (int i = 0; i < doc_len; ++i) document.push_back(sentence(i));
    for (int i = 0; i < facets; ++i) reference.push_back(sentence(100 + i));

    std::uniform_int_distribution<int> group_count_dist(0, 3);
    std::uniform_int_distribution<int> group_size_dist(1, 3);
    std::uniform_int_distribution<int> index_dist(0, doc_len - 1);
    std::vector<std::vector<std::vector<int>>> fams;
    for (int f = 0; f < facets; ++f) {
        std::vector<std::vector<int>> groups;
        int n_groups = group_count_dist(rng);
        for (int g = 0; g < n_groups; ++g) {
            std::set<int> members;
            int size = std::min(group_size_dist(rng), doc_len);
            while (static_cast<int>(members.size()) < size)
                members.insert(index_dist(rng));
            groups.emplace_back(members.begin(), members.end());
        }
        fams.push_back(std::move(groups));
    }
    static int counter = 0;
    return corpus::make_sample("rand" + std::to_string(counter++), document, reference,
                               fams);
}

std::vector<int> random_extraction(std::mt19937& rng, int doc_len, int max_size) {
    std::uniform_int_distribution<int> size_dist(0, std::min(max_size, doc_len));
    std::uniform_int_distribution<int> index_dist(0, doc_len - 1);
    std::set<int> members;
    int size = size_dist(rng);
    while (static_cast<int>(members.size()) < size) members.insert(index_dist(rng));
    return {members.begin(), members.end()};
}

std::vector<std::string> random_tokens(std::mt19937& rng, int max_len, int alphabet) {
    std::uniform_int_distribution<int> len_dist(0, max_len);
    std::uniform_int_distribution<int> sym_dist(0, alphabet - 1);
    std::vector<std::string> out;
    int n = len_dist(rng);
    for (int i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + sym_dist(rng))));
    return out;
}

}  // namespace facet::testsupport
