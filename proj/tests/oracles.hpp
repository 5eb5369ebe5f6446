// Brute-force oracles for the dynamics layer, shared by the unit and
// acceptance suites.
#pragma once

#include <numeric>

#include "gcore/dynamics.hpp"
#include "support.hpp"

namespace gtest_support {

// |S_n| per edge from letter counts of the images, one preimage per crossing.
inline std::vector<long long> counts_by_recurrence(const Automorphism& phi, Letter e, int n_max) {
    const int k = phi.rank();
    std::vector<long long> c(static_cast<std::size_t>(k), 0), out{1};
    c[static_cast<std::size_t>(e - 1)] = 1;
    for (int n = 1; n <= n_max; ++n) {
        std::vector<long long> nc(static_cast<std::size_t>(k), 0);
        for (Letter y = 1; y <= k; ++y)
            for (Letter l : phi.image(y)) nc[static_cast<std::size_t>(y - 1)] += c[static_cast<std::size_t>(index_of(l) - 1)];
        c = nc;
        out.push_back(std::accumulate(c.begin(), c.end(), 0LL));
    }
    return out;
}

struct Preimage {
    Word vertex;
    Letter edge;
    Letter source;
    int occurrence;
    Real offset;
};

// Every edge v.z of the tree with |v| <= depth, pushed forward letter by
// letter; returns the pieces landing on the tree edge of x.
inline std::vector<Preimage> preimages_by_enumeration(const LiftedMap& f, const TreePoint& x, int depth) {
    const int k = f.rank();
    const Word target = x.edge_word();
    std::vector<Preimage> out;
    for (int d = 0; d <= depth; ++d)
        for (auto& v : words_of_length(k, d)) {
            Word fv = f.aut().apply(v);
            for (int a = 1; a <= k; ++a)
                for (Letter z : {a, -a}) {
                    if (!v.empty() && v.back() == -z) continue;
                    // only the positive letter carries the edge; walk its image in direction z
                    Word img = f.rose().image(a);
                    if (z < 0) img = invert(img);
                    Word at = fv;
                    Real before = 0;
                    for (std::size_t j = 0; j < img.size(); ++j) {
                        Letter l = img[j];
                        Real ll = f.length(l);
                        TreePoint seg = oriented_point(at, l, 0, ll);
                        if (seg.edge_word() == target) {
                            // distance of x from `at` along the letter
                            Real s = seg.edge == l ? x.offset : ll - x.offset;
                            Real tau = (before + s) / f.lambda();
                            std::size_t occ = z > 0 ? j : img.size() - 1 - j;
                            TreePoint y = oriented_point(v, z, tau, f.length(z));
                            out.push_back({y.vertex, y.edge, a, static_cast<int>(occ), y.offset});
                        }
                        at = concat(at, Word{l});
                        before += ll;
                    }
                }
        }
    return out;
}

}  // namespace gtest_support
