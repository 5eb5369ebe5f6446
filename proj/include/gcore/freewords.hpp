// Reduced words in a free group F_k and automorphisms given by generator images.
//
// Letters are nonzero ints: +i is the i-th generator, -i its inverse.  The text
// form writes generator i as the i-th lowercase letter and its inverse in
// uppercase, so "abC" is a*b*c^-1 and "1" (or "") is the identity.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gcore {

using Letter = int;
using Word = std::vector<Letter>;

struct word_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr Letter inv(Letter x) noexcept { return -x; }
constexpr int index_of(Letter x) noexcept { return x > 0 ? x : -x; }

// Position of a letter in the canonical child order: a, A, b, B, ...
constexpr int letter_rank(Letter x) noexcept { return 2 * (index_of(x) - 1) + (x < 0 ? 1 : 0); }

inline void check_letter(Letter x, int rank) {
    if (x == 0 || (rank > 0 && index_of(x) > rank))
        throw word_error("letter " + std::to_string(x) + " out of rank " + std::to_string(rank));
}

inline bool is_reduced(const Word& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] == -w[i - 1]) return false;
    return true;
}

// Free reduction with a stack; rank <= 0 skips the range check.
inline Word reduce(const Word& raw, int rank = 0) {
    Word out;
    out.reserve(raw.size());
    for (Letter x : raw) {
        check_letter(x, rank);
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

inline Word invert(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& x : r) x = -x;
    return r;
}

inline Word concat(const Word& u, const Word& v) {
    std::size_t c = 0;
    while (c < u.size() && c < v.size() && u[u.size() - 1 - c] == -v[c]) ++c;
    Word r(u.begin(), u.end() - static_cast<std::ptrdiff_t>(c));
    r.insert(r.end(), v.begin() + static_cast<std::ptrdiff_t>(c), v.end());
    return r;
}

template <class... Ws>
Word concat(const Word& u, const Word& v, const Ws&... rest) {
    return concat(concat(u, v), rest...);
}

inline bool has_prefix(const Word& w, const Word& p) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline Word prefix(const Word& w, std::size_t n) { return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(n, w.size()))); }

// Canonical order used for every sorted container of words: letterwise by
// letter_rank, a proper prefix before its extensions.
struct WordLess {
    bool operator()(const Word& u, const Word& v) const {
        return std::lexicographical_compare(u.begin(), u.end(), v.begin(), v.end(),
                                            [](Letter x, Letter y) { return letter_rank(x) < letter_rank(y); });
    }
};

inline Word parse_word(std::string_view s, int rank = 0) {
    Word w;
    if (s == "1") return w;
    for (char ch : s) {
        if (ch == ' ' || ch == '.' || ch == '*') continue;
        Letter x;
        if (ch >= 'a' && ch <= 'z')
            x = ch - 'a' + 1;
        else if (ch >= 'A' && ch <= 'Z')
            x = -(ch - 'A' + 1);
        else
            throw word_error(std::string("bad character '") + ch + "' in word");
        check_letter(x, rank);
        w.push_back(x);
    }
    if (!is_reduced(w)) throw word_error("word '" + std::string(s) + "' is not reduced");
    return w;
}

inline std::string letter_name(Letter x) {
    if (index_of(x) > 26) return (x > 0 ? "x" : "X") + std::to_string(index_of(x));
    return std::string(1, static_cast<char>(x > 0 ? 'a' + x - 1 : 'A' - x - 1));
}

inline std::string format_word(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (Letter x : w) s += letter_name(x);
    return s;
}

// Substitute images letter by letter, then reduce.
inline Word substitute(const std::vector<Word>& images, const Word& w) {
    Word raw;
    for (Letter x : w) {
        const Word& im = images.at(static_cast<std::size_t>(index_of(x) - 1));
        if (x > 0)
            raw.insert(raw.end(), im.begin(), im.end());
        else
            for (auto it = im.rbegin(); it != im.rend(); ++it) raw.push_back(-*it);
    }
    return reduce(raw);
}

struct InverseFailure {
    int generator;   // 1-based
    bool forward;    // true: psi(phi(x)) != x, false: phi(psi(x)) != x
    Word residue;
};

inline std::optional<InverseFailure> verify_inverse(const std::vector<Word>& images, const std::vector<Word>& inverse_images) {
    if (images.size() != inverse_images.size()) throw word_error("rank mismatch between images and inverse");
    for (int x = 1; x <= static_cast<int>(images.size()); ++x) {
        Word r = substitute(inverse_images, images[static_cast<std::size_t>(x - 1)]);
        if (r != Word{x}) return InverseFailure{x, true, r};
    }
    for (int x = 1; x <= static_cast<int>(images.size()); ++x) {
        Word r = substitute(images, inverse_images[static_cast<std::size_t>(x - 1)]);
        if (r != Word{x}) return InverseFailure{x, false, r};
    }
    return std::nullopt;
}

class Automorphism {
public:
    Automorphism() = default;

    // Throws word_error unless inverse_images really is the inverse.
    Automorphism(std::vector<Word> images, std::vector<Word> inverse_images) : img_(std::move(images)), inv_(std::move(inverse_images)) {
        const int k = rank();
        for (auto* tab : {&img_, &inv_})
            for (auto& w : *tab) {
                w = reduce(w, k);
                if (w.empty()) throw word_error("generator image is trivial");
            }
        if (auto f = verify_inverse(img_, inv_))
            throw word_error("inverse check failed at generator " + letter_name(f->generator) + ": residue " + format_word(f->residue));
    }

    static Automorphism identity(int k) {
        std::vector<Word> id;
        for (int i = 1; i <= k; ++i) id.push_back({i});
        return Automorphism(id, id);
    }

    static Automorphism parse(const std::vector<std::string>& images, const std::vector<std::string>& inverse) {
        const int k = static_cast<int>(images.size());
        std::vector<Word> a, b;
        for (auto& s : images) a.push_back(parse_word(s, k));
        for (auto& s : inverse) b.push_back(parse_word(s, k));
        return Automorphism(std::move(a), std::move(b));
    }

    int rank() const { return static_cast<int>(img_.size()); }
    const std::vector<Word>& images() const { return img_; }
    const std::vector<Word>& inverse_images() const { return inv_; }

    // phi(x) for a single letter, unreduced-safe (letters of reduced images).
    Word image(Letter x) const {
        const Word& w = img_.at(static_cast<std::size_t>(index_of(x) - 1));
        return x > 0 ? w : gcore::invert(w);
    }

    Word apply(const Word& w) const { return substitute(img_, w); }
    Word apply_inverse(const Word& w) const { return substitute(inv_, w); }

    Automorphism inverse() const {
        Automorphism r;
        r.img_ = inv_;
        r.inv_ = img_;
        return r;
    }

    bool is_identity() const {
        for (int i = 1; i <= rank(); ++i)
            if (img_[static_cast<std::size_t>(i - 1)] != Word{i}) return false;
        return true;
    }

    friend bool operator==(const Automorphism& a, const Automorphism& b) { return a.img_ == b.img_; }

private:
    std::vector<Word> img_, inv_;
};

// (phi o psi)(x) = phi(psi(x)).
inline Automorphism compose(const Automorphism& phi, const Automorphism& psi) {
    if (phi.rank() != psi.rank()) throw word_error("rank mismatch in compose");
    std::vector<Word> a, b;
    for (const auto& w : psi.images()) a.push_back(phi.apply(w));
    for (const auto& w : phi.inverse_images()) b.push_back(psi.apply_inverse(w));
    return Automorphism(std::move(a), std::move(b));
}

inline Automorphism power(const Automorphism& phi, int n) {
    if (n < 0) return power(phi.inverse(), -n);
    Automorphism r = Automorphism::identity(phi.rank());
    for (int i = 0; i < n; ++i) r = compose(phi, r);
    return r;
}

// Cyclic reduction, used by a few diagnostics.
inline Word cyclic_reduce(Word w) {
    w = reduce(w);
    std::size_t i = 0, j = w.size();
    while (j - i >= 2 && w[i] == -w[j - 1]) ++i, --j;
    return Word(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
}

}  // namespace gcore
