// Clopen subsets of the boundary of F_k and maps on ends.
//
// A BoxSet is a finite union of cylinders <w> (ends whose reduced expansion
// starts with w), stored as the minimal prefix antichain with every complete
// family of siblings merged into its parent.  The whole boundary is the
// antichain {empty word}; the empty set has no words.  Two BoxSets are equal
// iff their antichains are.
#pragma once

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "freewords.hpp"

namespace gcore {

// Admissible one-letter extensions of u, in canonical order.
inline std::vector<Word> children(int rank, const Word& u) {
    std::vector<Word> out;
    for (int i = 1; i <= rank; ++i)
        for (Letter y : {i, -i}) {
            if (!u.empty() && u.back() == -y) continue;
            Word c = u;
            c.push_back(y);
            out.push_back(std::move(c));
        }
    return out;
}

inline std::size_t sibling_count(int rank, const Word& parent) { return parent.empty() ? 2u * rank : 2u * rank - 1; }

class BoxSet {
public:
    BoxSet() = default;
    explicit BoxSet(int rank) : rank_(rank) {}
    BoxSet(int rank, std::vector<Word> words) : rank_(rank), w_(std::move(words)) { canonicalize(); }

    static BoxSet all(int rank) { return BoxSet(rank, {Word{}}); }
    static BoxSet none(int rank) { return BoxSet(rank); }
    static BoxSet cylinder(int rank, Word w) { return BoxSet(rank, {std::move(w)}); }
    static BoxSet parse(int rank, const std::vector<std::string>& words) {
        std::vector<Word> ws;
        for (auto& s : words) ws.push_back(parse_word(s, rank));
        return BoxSet(rank, std::move(ws));
    }

    int rank() const { return rank_; }
    const std::vector<Word>& words() const { return w_; }
    bool is_empty() const { return w_.empty(); }
    bool is_all() const { return w_.size() == 1 && w_[0].empty(); }
    std::size_t size() const { return w_.size(); }
    std::size_t depth() const {
        std::size_t d = 0;
        for (auto& w : w_) d = std::max(d, w.size());
        return d;
    }

    // Is the cylinder <w> inside the set?  Exact once |w| >= depth().
    bool contains(const Word& w) const {
        for (auto& u : w_)
            if (has_prefix(w, u)) return true;
        return false;
    }

    friend bool operator==(const BoxSet& a, const BoxSet& b) { return a.w_ == b.w_; }
    friend bool operator!=(const BoxSet& a, const BoxSet& b) { return !(a == b); }

    std::vector<std::string> strings() const {
        std::vector<std::string> s;
        for (auto& w : w_) s.push_back(format_word(w));
        return s;
    }

    // Human form such as "c - cAB" or "aC + B"; not the stored form.
    std::string display() const;

private:
    void canonicalize();

    int rank_ = 0;
    std::vector<Word> w_;
};

inline void BoxSet::canonicalize() {
    std::sort(w_.begin(), w_.end(), WordLess{});
    w_.erase(std::unique(w_.begin(), w_.end()), w_.end());
    // drop words under an earlier kept word; sorted order puts a prefix first
    std::vector<Word> kept;
    for (auto& w : w_)
        if (kept.empty() || !has_prefix(w, kept.back())) kept.push_back(std::move(w));
    std::set<Word, WordLess> s(kept.begin(), kept.end());
    // merge complete sibling families, deepest first
    for (bool changed = true; changed;) {
        changed = false;
        std::map<Word, std::size_t, WordLess> cnt;
        for (auto& w : s)
            if (!w.empty()) ++cnt[prefix(w, w.size() - 1)];
        std::size_t best = 0;
        const Word* parent = nullptr;
        for (auto& [p, c] : cnt)
            if (c == sibling_count(rank_, p) && (!parent || p.size() >= best)) parent = &p, best = p.size();
        if (parent) {
            Word p = *parent;
            for (auto& ch : children(rank_, p)) s.erase(ch);
            s.insert(p);
            changed = true;
        }
    }
    w_.assign(s.begin(), s.end());
}

inline void check_rank(const BoxSet& a, const BoxSet& b) {
    if (a.rank() != b.rank()) throw word_error("BoxSet rank mismatch");
}

inline BoxSet unite(const BoxSet& a, const BoxSet& b) {
    check_rank(a, b);
    std::vector<Word> w = a.words();
    w.insert(w.end(), b.words().begin(), b.words().end());
    return BoxSet(a.rank(), std::move(w));
}

inline BoxSet intersect(const BoxSet& a, const BoxSet& b) {
    check_rank(a, b);
    std::vector<Word> out;
    for (auto& u : a.words())
        for (auto& v : b.words()) {
            if (has_prefix(v, u))
                out.push_back(v);
            else if (has_prefix(u, v))
                out.push_back(u);
        }
    return BoxSet(a.rank(), std::move(out));
}

inline BoxSet complement(const BoxSet& a) {
    const int k = a.rank();
    if (a.is_empty()) return BoxSet::all(k);
    if (a.is_all()) return BoxSet::none(k);
    std::set<Word, WordLess> pre;
    for (auto& w : a.words())
        for (std::size_t i = 0; i < w.size(); ++i) pre.insert(prefix(w, i));
    std::set<Word, WordLess> mem(a.words().begin(), a.words().end());
    std::vector<Word> out;
    for (auto& p : pre)
        for (auto& c : children(k, p))
            if (!mem.count(c) && !pre.count(c)) out.push_back(c);
    return BoxSet(k, std::move(out));
}

inline BoxSet subtract(const BoxSet& a, const BoxSet& b) { return intersect(a, complement(b)); }
inline bool is_subset(const BoxSet& a, const BoxSet& b) { return subtract(a, b).is_empty(); }
inline bool disjoint(const BoxSet& a, const BoxSet& b) { return intersect(a, b).is_empty(); }

// Cylinder tests by prefix scans.  covers() needs the canonical form: a set
// containing <w> has a word that is a prefix of w.
inline bool comparable(const Word& u, const Word& v) { return has_prefix(u, v) || has_prefix(v, u); }
inline bool covers(const BoxSet& s, const Word& w) {
    return std::any_of(s.words().begin(), s.words().end(), [&](const Word& u) { return has_prefix(w, u); });
}
inline bool meets(const BoxSet& s, const Word& w) {
    return std::any_of(s.words().begin(), s.words().end(), [&](const Word& u) { return comparable(u, w); });
}
inline bool within(const BoxSet& s, const Word& c) {  // s inside <c>
    return std::all_of(s.words().begin(), s.words().end(), [&](const Word& u) { return has_prefix(u, c); });
}
inline bool within_complement(const BoxSet& s, const Word& v) {  // s misses <v>
    return !meets(s, v);
}

// g . S for the boundary action of F_k.
inline BoxSet translate(const Word& g, const BoxSet& s) {
    const int k = s.rank();
    if (s.is_all() || s.is_empty() || g.empty()) return s;
    std::vector<Word> out;
    std::function<void(const Word&)> go = [&](const Word& w) {
        std::size_t c = 0;
        while (c < g.size() && c < w.size() && g[g.size() - 1 - c] == -w[c]) ++c;
        if (c < w.size()) {
            Word r(g.begin(), g.end() - static_cast<std::ptrdiff_t>(c));
            r.insert(r.end(), w.begin() + static_cast<std::ptrdiff_t>(c), w.end());
            out.push_back(std::move(r));
        } else {
            for (auto& ch : children(k, w)) go(ch);
        }
    };
    for (auto& w : s.words()) go(w);
    return BoxSet(k, std::move(out));
}

inline std::string BoxSet::display() const {
    if (is_empty()) return "0";
    if (is_all()) return "ALL";
    std::set<Word, WordLess> mem(w_.begin(), w_.end()), pre;
    for (auto& w : w_)
        for (std::size_t i = 0; i < w.size(); ++i) pre.insert(prefix(w, i));
    using Terms = std::vector<std::pair<int, Word>>;
    auto neg = [](Terms t) {
        for (auto& x : t) x.first = -x.first;
        return t;
    };
    // inside(u): S cut to <u>; outside(u): <u> minus S.  Each picks the shorter
    // of "sum over children" and "<u> minus the other side".
    std::map<std::pair<Word, bool>, Terms> memo;
    std::function<Terms(const Word&, bool)> go = [&](const Word& u, bool inside) -> Terms {
        if (mem.count(u)) return inside ? Terms{{1, u}} : Terms{};
        if (auto it = memo.find({u, inside}); it != memo.end()) return it->second;
        if (!pre.count(u)) return inside ? Terms{} : Terms{{1, u}};
        Terms a, b;
        if (!u.empty()) b.push_back({1, u});
        for (auto& c : children(rank_, u)) {
            auto x = go(c, inside);
            a.insert(a.end(), x.begin(), x.end());
            auto y = neg(go(c, !inside));
            b.insert(b.end(), y.begin(), y.end());
        }
        Terms& r = memo[{u, inside}];
        // prefer fewer terms, then fewer "+" terms in the final expression;
        // outside() results appear negated there
        auto cost = [inside](const Terms& t) {
            return std::make_pair(t.size(), std::count_if(t.begin(), t.end(), [&](auto& x) { return (x.first > 0) == inside; }));
        };
        r = (u.empty() || cost(a) <= cost(b)) ? a : b;
        return r;
    };
    Terms t = go(Word{}, true);
    std::stable_sort(t.begin(), t.end(), [](const auto& x, const auto& y) {
        if (x.second.size() != y.second.size()) return x.second.size() < y.second.size();
        return WordLess{}(x.second, y.second);
    });
    std::ostringstream os;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << (t[i].first > 0 ? " + " : " - ");
        else if (t[i].first < 0) os << "-";
        os << format_word(t[i].second);
    }
    return os.str();
}

// The homeomorphism of the boundary induced by an automorphism, stored by the
// images of the k positive letter cylinders.
class EndsMap {
public:
    EndsMap() = default;
    EndsMap(Automorphism aut, std::vector<BoxSet> letter_images) : aut_(std::move(aut)), p_(std::move(letter_images)) {
        if (static_cast<int>(p_.size()) != aut_.rank()) throw word_error("EndsMap needs one image per generator");
    }

    static EndsMap identity(int k) {
        std::vector<BoxSet> p;
        for (int i = 1; i <= k; ++i) p.push_back(BoxSet::cylinder(k, {i}));
        return EndsMap(Automorphism::identity(k), std::move(p));
    }

    int rank() const { return aut_.rank(); }
    const Automorphism& aut() const { return aut_; }
    const std::vector<BoxSet>& letter_images() const { return p_; }

    BoxSet letter_image(Letter x) const {
        const BoxSet& pos = p_.at(static_cast<std::size_t>(index_of(x) - 1));
        if (x > 0) return pos;
        return translate(aut_.image(x), complement(pos));
    }

    // f<x v> = phi(x) f<v>
    BoxSet cylinder_image(const Word& w) const {
        if (w.empty()) return BoxSet::all(rank());
        BoxSet s = letter_image(w.back());
        for (std::size_t i = w.size() - 1; i-- > 0;) s = translate(aut_.image(w[i]), s);
        return s;
    }

    // f<u y> = phi(u) f<y>; must agree with cylinder_image.
    BoxSet cylinder_image_last(const Word& w) const {
        if (w.empty()) return BoxSet::all(rank());
        return translate(aut_.apply(prefix(w, w.size() - 1)), letter_image(w.back()));
    }

    BoxSet image(const BoxSet& s) const {
        if (s.is_all() || s.is_empty()) return s;
        std::vector<Word> acc;
        for (auto& w : s.words()) {
            BoxSet c = cylinder_image(w);
            acc.insert(acc.end(), c.words().begin(), c.words().end());
        }
        return BoxSet(rank(), std::move(acc));
    }

private:
    Automorphism aut_;
    std::vector<BoxSet> p_;
};

// (F o G): aut F.aut o G.aut, letter images F(G<x>).
inline EndsMap compose_ends(const EndsMap& f, const EndsMap& g) {
    if (f.rank() != g.rank()) throw word_error("rank mismatch in compose_ends");
    std::vector<BoxSet> p;
    for (auto& s : g.letter_images()) p.push_back(f.image(s));
    return EndsMap(compose(f.aut(), g.aut()), std::move(p));
}

inline EndsMap power_ends(const EndsMap& f, int n) {
    EndsMap r = EndsMap::identity(f.rank());
    for (int i = 0; i < n; ++i) r = compose_ends(f, r);
    return r;
}

struct PartitionViolation {
    bool overlap;       // false: region not covered
    Letter first = 0;   // letters whose images overlap (overlap only)
    Letter second = 0;
    Word witness;       // a cylinder inside the offending region
};

inline std::vector<Letter> all_letters(int k) {
    std::vector<Letter> v;
    for (int i = 1; i <= k; ++i) v.push_back(i), v.push_back(-i);
    return v;
}

inline std::optional<PartitionViolation> partition_check(const EndsMap& f) {
    const int k = f.rank();
    std::vector<std::pair<Letter, BoxSet>> im;
    for (Letter x : all_letters(k)) im.emplace_back(x, f.letter_image(x));
    for (std::size_t i = 0; i < im.size(); ++i)
        for (std::size_t j = i + 1; j < im.size(); ++j) {
            BoxSet o = intersect(im[i].second, im[j].second);
            if (!o.is_empty()) return PartitionViolation{true, im[i].first, im[j].first, o.words().front()};
        }
    BoxSet u = BoxSet::none(k);
    for (auto& [x, s] : im) u = unite(u, s);
    if (!u.is_all()) return PartitionViolation{false, 0, 0, complement(u).words().front()};
    return std::nullopt;
}

}  // namespace gcore
