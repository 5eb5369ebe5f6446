// Shared helpers for the unit and acceptance suites: seeded random words and
// automorphisms, and brute-force membership tables for boundary sets.
#pragma once

#include <random>
#include <vector>

#include "gcore/boundary.hpp"

namespace gtest_support {

using namespace gcore;

inline Word random_word(int k, int len, std::mt19937& g) {
    Word w;
    while (static_cast<int>(w.size()) < len) {
        Letter x = static_cast<Letter>(g() % static_cast<unsigned>(k) + 1);
        if (g() % 2) x = -x;
        if (!w.empty() && w.back() == -x) continue;
        w.push_back(x);
    }
    return w;
}

// Product of `len` random elementary Nielsen moves x -> x y^{+-1} or y^{+-1} x.
inline Automorphism random_automorphism(int k, int len, std::mt19937& g) {
    Automorphism a = Automorphism::identity(k);
    for (int i = 0; i < len; ++i) {
        int x = static_cast<int>(g() % static_cast<unsigned>(k)) + 1, y;
        do y = static_cast<int>(g() % static_cast<unsigned>(k)) + 1;
        while (y == x);
        int sy = g() % 2 ? y : -y;
        bool right = g() % 2;
        std::vector<Word> im, iv;
        for (int j = 1; j <= k; ++j) im.push_back({j}), iv.push_back({j});
        im[static_cast<std::size_t>(x - 1)] = right ? Word{x, sy} : Word{sy, x};
        iv[static_cast<std::size_t>(x - 1)] = right ? Word{x, -sy} : Word{-sy, x};
        a = compose(a, Automorphism(im, iv));
    }
    return a;
}

// All reduced words of length exactly n, in lexicographic letter order.
inline std::vector<Word> words_of_length(int k, int n) {
    std::vector<Word> out{Word{}};
    for (int i = 0; i < n; ++i) {
        std::vector<Word> next;
        for (auto& w : out)
            for (int a = 1; a <= k; ++a)
                for (Letter x : {a, -a}) {
                    if (!w.empty() && w.back() == -x) continue;
                    Word v = w;
                    v.push_back(x);
                    next.push_back(v);
                }
        out = std::move(next);
    }
    return out;
}

inline bool starts_with(const Word& w, const Word& p) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

// Membership of every depth-n cylinder in the union of the given boxes.
inline std::vector<char> table(const std::vector<Word>& boxes, const std::vector<Word>& universe) {
    std::vector<char> t;
    for (auto& w : universe) {
        bool in = false;
        for (auto& b : boxes) in = in || starts_with(w, b);
        t.push_back(in);
    }
    return t;
}

inline std::vector<Word> random_boxes(int k, int max_len, int count, std::mt19937& g) {
    std::vector<Word> b;
    for (int i = 0; i < count; ++i) b.push_back(random_word(k, static_cast<int>(g() % static_cast<unsigned>(max_len + 1)), g));
    return b;
}

}  // namespace gtest_support
