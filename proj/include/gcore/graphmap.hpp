// Self-maps of the k-rose: transition data, gates, train-track check,
// bounded cancellation, indivisible Nielsen paths and legality ratios.
//
// The rose has one vertex fixed by the map; edge i is the generator i, and an
// edge path is a reduced word.  Metric quantities use the Perron-Frobenius
// lengths unless stated otherwise.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "freewords.hpp"

namespace gcore {

struct graph_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Real = long double;

class RoseMap {
public:
    RoseMap() = default;
    explicit RoseMap(std::vector<Word> images) : img_(std::move(images)) {
        for (auto& w : img_) {
            if (w.empty()) throw graph_error("edge image collapses to a point");
            if (!is_reduced(w)) throw graph_error("edge image " + format_word(w) + " is not tight");
            for (Letter x : w) check_letter(x, rank());
        }
    }
    static RoseMap of(const Automorphism& phi) { return RoseMap(phi.images()); }
    static RoseMap parse(const std::vector<std::string>& images) {
        std::vector<Word> w;
        for (auto& s : images) w.push_back(parse_word(s, static_cast<int>(images.size())));
        return RoseMap(std::move(w));
    }

    int rank() const { return static_cast<int>(img_.size()); }
    const std::vector<Word>& images() const { return img_; }
    Word image(Letter x) const {
        const Word& w = img_.at(static_cast<std::size_t>(index_of(x) - 1));
        return x > 0 ? w : invert(w);
    }
    // sigma(path) before tightening
    Word apply_raw(const Word& path) const {
        Word r;
        for (Letter x : path) {
            Word im = image(x);
            r.insert(r.end(), im.begin(), im.end());
        }
        return r;
    }
    Word apply(const Word& path) const { return reduce(apply_raw(path)); }

    RoseMap power(int p) const {
        if (p < 1) throw graph_error("power must be positive");
        std::vector<Word> im = img_;
        for (int i = 1; i < p; ++i)
            for (auto& w : im) w = apply(w);
        return RoseMap(std::move(im));
    }

private:
    std::vector<Word> img_;
};

inline Word tighten_path(const Word& path) { return reduce(path); }

// ---------------------------------------------------------------- transition

struct TransitionData {
    std::vector<std::vector<long long>> matrix;  // [e'][e] = crossings of e by sigma(e')
    Real lambda = 1;
    Real lambda_lo = 1, lambda_hi = 1;  // Collatz-Wielandt bracket
    std::vector<Real> pf;                // sums to 1
    bool irreducible = false;
    int iterations = 0;

    Real length(Letter x) const { return pf.at(static_cast<std::size_t>(index_of(x) - 1)); }
    Real length(const Word& w) const {
        Real s = 0;
        for (Letter x : w) s += length(x);
        return s;
    }
};

inline bool matrix_irreducible(const std::vector<std::vector<long long>>& m) {
    const std::size_t n = m.size();
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> st{s};
        seen[s] = 1;
        while (!st.empty()) {
            auto i = st.back();
            st.pop_back();
            for (std::size_t j = 0; j < n; ++j)
                if (m[i][j] > 0 && !seen[j]) seen[j] = 1, st.push_back(j);
        }
        if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n)) return false;
    }
    return true;
}

inline TransitionData transition(const RoseMap& s, Real rel_tol = 1e-12L, int max_iter = 1000000) {
    const int k = s.rank();
    TransitionData t;
    t.matrix.assign(k, std::vector<long long>(k, 0));
    for (int e = 0; e < k; ++e)
        for (Letter x : s.images()[static_cast<std::size_t>(e)]) ++t.matrix[e][index_of(x) - 1];
    t.irreducible = matrix_irreducible(t.matrix);

    // power iteration on M + I from the all-ones vector; the shift makes the
    // dominant eigenvalue strictly dominant for irreducible M
    std::vector<Real> v(k, 1.0L / k), w(k);
    Real prev = -1;
    for (t.iterations = 1; t.iterations <= max_iter; ++t.iterations) {
        for (int i = 0; i < k; ++i) {
            w[i] = v[i];
            for (int j = 0; j < k; ++j) w[i] += static_cast<Real>(t.matrix[i][j]) * v[j];
        }
        Real sum = std::accumulate(w.begin(), w.end(), 0.0L);
        for (int i = 0; i < k; ++i) w[i] /= sum;
        Real diff = 0;
        for (int i = 0; i < k; ++i) diff = std::max(diff, std::fabs(w[i] - v[i]));
        v.swap(w);
        Real lam = sum - 1;  // sum(v) was 1
        if (diff < rel_tol * 1e-3L && std::fabs(lam - prev) <= rel_tol * std::fabs(lam)) {
            prev = lam;
            break;
        }
        prev = lam;
    }
    t.pf = v;
    t.lambda = prev;
    Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
    for (int i = 0; i < k; ++i) {
        if (v[i] <= 0) continue;
        Real r = 0;
        for (int j = 0; j < k; ++j) r += static_cast<Real>(t.matrix[i][j]) * v[j];
        lo = std::min(lo, r / v[i]);
        hi = std::max(hi, r / v[i]);
    }
    t.lambda_lo = lo, t.lambda_hi = hi;
    return t;
}

// --------------------------------------------------------------------- gates

struct GateStructure {
    int rank = 0;
    std::vector<int> gate;                       // by letter_rank of the germ
    std::vector<std::vector<Letter>> classes;    // germs per gate
    std::vector<std::pair<Letter, Letter>> illegal_turns;

    int gate_of(Letter x) const { return gate.at(static_cast<std::size_t>(letter_rank(x))); }
    // Turn at the vertex between outgoing germs x and y.
    bool legal(Letter x, Letter y) const { return x != y && gate_of(x) != gate_of(y); }
    // Turn crossed between consecutive letters p, q of a path.
    bool legal_step(Letter p, Letter q) const { return legal(-p, q); }
    bool legal_path(const Word& w) const {
        for (std::size_t i = 1; i < w.size(); ++i)
            if (!legal_step(w[i - 1], w[i])) return false;
        return true;
    }
    int illegal_count(const Word& w) const {
        int c = 0;
        for (std::size_t i = 1; i < w.size(); ++i) c += !legal_step(w[i - 1], w[i]);
        return c;
    }
};

inline GateStructure gates(const RoseMap& s) {
    const int k = s.rank(), n = 2 * k;
    auto germ = [](int r) { return r % 2 == 0 ? r / 2 + 1 : -(r / 2 + 1); };
    std::vector<int> d(n);
    for (int r = 0; r < n; ++r) d[r] = letter_rank(s.image(germ(r)).front());
    // x ~ y iff D^m x = D^m y for some m; m <= n suffices
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::function<int(int)> find = [&](int x) { return id[x] == x ? x : id[x] = find(id[x]); };
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            int a = x, b = y;
            for (int m = 0; m <= n; ++m, a = d[a], b = d[b])
                if (a == b) {
                    id[find(x)] = find(y);
                    break;
                }
        }
    GateStructure g;
    g.rank = k;
    g.gate.assign(n, -1);
    std::map<int, int> label;
    for (int r = 0; r < n; ++r) {
        int root = find(r);
        if (!label.count(root)) label[root] = static_cast<int>(label.size()), g.classes.emplace_back();
        g.gate[r] = label[root];
        g.classes[g.gate[r]].push_back(germ(r));
    }
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            if (g.gate[x] == g.gate[y]) g.illegal_turns.emplace_back(germ(x), germ(y));
    return g;
}

struct TrainTrackCheck {
    bool ok = true;
    Letter edge = 0;               // offending edge
    std::size_t position = 0;      // turn between letters position-1 and position of its image
    std::pair<Letter, Letter> turn{0, 0};
};

inline TrainTrackCheck is_train_track(const RoseMap& s, const GateStructure& g) {
    for (int e = 1; e <= s.rank(); ++e) {
        const Word& w = s.images()[static_cast<std::size_t>(e - 1)];
        for (std::size_t i = 1; i < w.size(); ++i)
            if (!g.legal_step(w[i - 1], w[i])) return {false, e, i, {-w[i - 1], w[i]}};
    }
    return {};
}
inline TrainTrackCheck is_train_track(const RoseMap& s) { return is_train_track(s, gates(s)); }

// -------------------------------------------------------------------- bcc

// Longest common image prefix over pairs of legal rays leaving the vertex
// through one illegal turn.  States record which side is ahead in the image
// and by which unmatched suffix, so the search space is finite and the
// supremum is an exact longest path.
struct BccResult {
    Real value = 0;
    Letter germ1 = 0, germ2 = 0;  // turn realising the maximum
};

inline BccResult bcc(const RoseMap& s, const GateStructure& g, const TransitionData& t) {
    const int k = s.rank();
    std::vector<Word> im(2 * k);
    std::vector<Letter> germs;
    for (int i = 1; i <= k; ++i)
        for (Letter x : {i, -i}) germs.push_back(x), im[letter_rank(x)] = s.image(x);
    auto img = [&](Letter x) -> const Word& { return im[letter_rank(x)]; };

    // key: (lastA, lastB, pending edge, offset, ahead side); pending edge 0 = both flush
    using Key = std::tuple<Letter, Letter, Letter, int, int>;
    std::map<Key, Real> memo;
    std::set<Key> onstack;

    std::function<Real(Letter, Letter, Letter, int, int)> value;
    // Match next letters a (side A) and b (side B) given pending suffixes.
    auto step = [&](Letter la, Letter lb, const Word& ra, std::size_t oa, const Word& rb, std::size_t ob, Letter ea, Letter eb) -> Real {
        std::size_t m = 0;
        while (oa + m < ra.size() && ob + m < rb.size() && ra[oa + m] == rb[ob + m]) ++m;
        Real w = 0;
        for (std::size_t i = 0; i < m; ++i) w += t.length(ra[oa + i]);
        bool enda = oa + m == ra.size(), endb = ob + m == rb.size();
        if (enda && endb) return w + value(ea, eb, 0, 0, 0);
        if (enda) return w + value(ea, eb, eb, static_cast<int>(ob + m), 1);
        if (endb) return w + value(ea, eb, ea, static_cast<int>(oa + m), 0);
        return w;  // images diverge
        (void)la, (void)lb;
    };
    value = [&](Letter la, Letter lb, Letter pend, int off, int ahead) -> Real {
        Key key{la, lb, pend, off, ahead};
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        if (onstack.count(key)) throw graph_error("unbounded cancellation: map is not a homotopy equivalence");
        onstack.insert(key);
        Real best = 0;
        for (Letter y : germs) {
            if (pend == 0) {
                if (!g.legal_step(la, y)) continue;
                for (Letter z : germs) {
                    if (!g.legal_step(lb, z)) continue;
                    best = std::max(best, step(la, lb, img(y), 0, img(z), 0, y, z));
                }
            } else if (ahead == 1) {  // side B holds img(pend)[off:], A is flush
                if (!g.legal_step(la, y)) continue;
                best = std::max(best, step(la, lb, img(y), 0, img(pend), static_cast<std::size_t>(off), y, lb));
            } else {
                if (!g.legal_step(lb, y)) continue;
                best = std::max(best, step(la, lb, img(pend), static_cast<std::size_t>(off), img(y), 0, la, y));
            }
        }
        onstack.erase(key);
        return memo[key] = best;
    };

    BccResult r;
    for (auto [u1, u2] : g.illegal_turns) {
        Real v = step(0, 0, img(u1), 0, img(u2), 0, u1, u2);
        if (v > r.value) r = {v, u1, u2};
    }
    return r;
}

inline Real critical_constant(Real bcc_value, Real lambda) {
    if (!(lambda > 1)) throw graph_error("critical constant needs expansion factor > 1");
    return 2 * bcc_value / (lambda - 1);
}

// ----------------------------------------------------------------- Nielsen

// An indivisible periodic Nielsen path: legs leave the vertex through the
// illegal turn (leg1[0], leg2[0]); each leg ends inside its last letter at
// PF distance leg_length from the vertex, and sigma^period folds the common
// prefix `fold` away: sigma^p(leg_i) starts with fold . leg_i.
struct NielsenPath {
    Word leg1, leg2;
    Word fold;
    int period = 1;
    Real leg_length = 0;
    bool ends_at_vertex1 = false, ends_at_vertex2 = false;
    int orbit = 0;

    Word as_path() const {  // combinatorial support, first leg reversed
        Word r = invert(leg1);
        r.insert(r.end(), leg2.begin(), leg2.end());
        return r;
    }
};

struct InpSearch {
    std::vector<NielsenPath> paths;
    bool complete = true;  // false: some branch hit the node budget
    long long nodes = 0;
    int period_bound = 0;
    Real length_bound = 0;
    std::size_t orbits() const {
        std::set<int> o;
        for (auto& p : paths) o.insert(p.orbit);
        return o.size();
    }
};

namespace detail {

struct LegCandidate {
    Word x, fold;
    bool at_vertex;
};

// Legal words x from germ u with sigma^p(x) = fold . x . rest and the fixed
// point inside the last letter of x (exact letter-count criterion).
inline void collect_legs(const RoseMap& sp, const GateStructure& g, const TransitionData& t, Letter u, Real bound, Real fold_cap,
                         long long budget, InpSearch& st, std::vector<LegCandidate>& out) {
    std::vector<Letter> germs;
    for (int i = 1; i <= sp.rank(); ++i) germs.push_back(i), germs.push_back(-i);
    Word x{u};
    Word s = sp.image(u);
    std::vector<std::size_t> mark{s.size()};  // |sigma^p(x[:j+1])|

    std::function<void(Real)> dfs = [&](Real len_w) {
        if (++st.nodes > budget) {
            st.complete = false;
            return;
        }
        // feasible fold lengths c: s[c + j] == x[j] wherever defined
        bool alive = false;
        Real lc = 0;
        for (std::size_t c = 0; c < s.size(); lc += t.length(s[c]), ++c) {
            if (lc > fold_cap) break;
            bool ok = true;
            for (std::size_t j = 0; j < x.size() && c + j < s.size(); ++j)
                if (s[c + j] != x[j]) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            alive = true;
            if (c + x.size() > s.size()) continue;
            // point lies past sigma^p(w): |fold| + |w| > |sigma^p(w)|
            std::size_t spw = x.size() >= 2 ? mark[x.size() - 2] : 0;
            if (c + x.size() - 1 > spw) {
                bool at_vertex = c + x.size() == s.size();
                out.push_back({x, Word(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(c)), at_vertex});
            }
        }
        if (!alive) return;
        Real len_x = len_w + t.length(x.back());
        if (len_x >= bound) return;  // extending would put |w| past the bound
        for (Letter y : germs) {
            if (!g.legal_step(x.back(), y)) continue;
            Word im = sp.image(y);
            x.push_back(y);
            s.insert(s.end(), im.begin(), im.end());
            mark.push_back(s.size());
            dfs(len_x);
            mark.pop_back();
            s.resize(s.size() - im.size());
            x.pop_back();
            if (!st.complete) return;
        }
    };
    dfs(0);
}

}  // namespace detail

inline InpSearch find_inps(const RoseMap& s, int period_bound, Real length_bound, long long budget = 20000000) {
    GateStructure g = gates(s);
    TransitionData t = transition(s);
    if (!is_train_track(s, g).ok) throw graph_error("find_inps needs a train-track map");
    if (!(t.lambda > 1)) throw graph_error("find_inps needs expansion factor > 1");
    InpSearch st;
    st.period_bound = period_bound;
    st.length_bound = length_bound;
    std::set<std::pair<Word, Word>> seen;

    for (int p = 1; p <= period_bound; ++p) {
        RoseMap sp = s.power(p);
        Real lp = std::pow(t.lambda, static_cast<Real>(p));
        Real fold_cap = (lp - 1) * (length_bound + 1) + 1e-9L;
        for (auto [u1, u2] : g.illegal_turns) {
            std::vector<detail::LegCandidate> a, b;
            detail::collect_legs(sp, g, t, u1, length_bound, fold_cap, budget, st, a);
            detail::collect_legs(sp, g, t, u2, length_bound, fold_cap, budget, st, b);
            std::map<Word, std::vector<const detail::LegCandidate*>> by_fold;
            for (auto& c : b) by_fold[c.fold].push_back(&c);
            for (auto& c1 : a) {
                auto it = by_fold.find(c1.fold);
                if (it == by_fold.end()) continue;
                for (auto* c2 : it->second) {
                    std::pair<Word, Word> key = WordLess{}(c1.x, c2->x) ? std::pair{c1.x, c2->x} : std::pair{c2->x, c1.x};
                    if (!seen.insert(key).second) continue;  // same path at a multiple period
                    NielsenPath np;
                    np.leg1 = c1.x, np.leg2 = c2->x, np.fold = c1.fold, np.period = p;
                    np.leg_length = t.length(np.fold) / (lp - 1);
                    np.ends_at_vertex1 = c1.at_vertex, np.ends_at_vertex2 = c2->at_vertex;
                    st.paths.push_back(np);
                }
            }
        }
    }
    // orbits: sigma carries an iNp to an iNp of the same period; after
    // tightening, the image legs start sigma(leg_i) past their common prefix
    std::vector<int> id(st.paths.size());
    std::iota(id.begin(), id.end(), 0);
    std::function<int(int)> find = [&](int x) { return id[x] == x ? x : id[x] = find(id[x]); };
    for (std::size_t i = 0; i < st.paths.size(); ++i) {
        const auto& np = st.paths[i];
        Word y1 = s.apply_raw(np.leg1), y2 = s.apply_raw(np.leg2);
        std::size_t c = 0;
        while (c < y1.size() && c < y2.size() && y1[c] == y2[c]) ++c;
        Real len = t.lambda * np.leg_length - t.length(Word(y1.begin(), y1.begin() + static_cast<std::ptrdiff_t>(c)));
        Word z1(y1.begin() + static_cast<std::ptrdiff_t>(c), y1.end()), z2(y2.begin() + static_cast<std::ptrdiff_t>(c), y2.end());
        for (std::size_t j = 0; j < st.paths.size(); ++j) {
            const auto& q = st.paths[j];
            if (q.period != np.period || std::fabs(q.leg_length - len) > 1e-9L) continue;
            bool m1 = has_prefix(z1, q.leg1) && has_prefix(z2, q.leg2);
            bool m2 = has_prefix(z1, q.leg2) && has_prefix(z2, q.leg1);
            if (m1 || m2) id[find(static_cast<int>(i))] = find(static_cast<int>(j));
        }
    }
    std::map<int, int> lab;
    for (std::size_t i = 0; i < st.paths.size(); ++i) {
        int r = find(static_cast<int>(i));
        if (!lab.count(r)) lab[r] = static_cast<int>(lab.size());
        st.paths[i].orbit = lab[r];
    }
    return st;
}

// Exact re-check of the fixed-path equation for one candidate.
inline bool verify_nielsen(const RoseMap& s, const NielsenPath& np) {
    GateStructure g = gates(s);
    if (np.leg1.empty() || np.leg2.empty() || np.leg1[0] == np.leg2[0]) return false;
    if (g.legal(np.leg1[0], np.leg2[0])) return false;
    if (!g.legal_path(np.leg1) || !g.legal_path(np.leg2)) return false;
    RoseMap sp = s.power(np.period);
    for (const Word* x : {&np.leg1, &np.leg2}) {
        Word im = sp.apply_raw(*x);
        Word want = np.fold;
        want.insert(want.end(), x->begin(), x->end());
        if (!has_prefix(im, want)) return false;
        Word w(x->begin(), x->end() - 1);
        if (np.fold.size() + w.size() <= sp.apply_raw(w).size()) return false;
    }
    return true;
}

enum class StableTree { geometric, nongeometric, inconclusive };

inline const char* to_string(StableTree c) {
    switch (c) {
        case StableTree::geometric: return "geometric";
        case StableTree::nongeometric: return "nongeometric";
        default: return "inconclusive";
    }
}

inline StableTree classify_stable_tree(const InpSearch& r) {
    if (!r.paths.empty()) return StableTree::geometric;
    return r.complete ? StableTree::nongeometric : StableTree::inconclusive;
}

// ------------------------------------------------------------------- LEG

inline Real leg1(const Word& path, const GateStructure& g, const TransitionData& t, Real bcc_value) {
    Real len = t.length(path);
    if (!(len > 0)) throw graph_error("LEG1 of an empty path");
    return (len - 2 * bcc_value * g.illegal_count(path) / t.lambda) / len;
}

inline Real leg2(const Word& path, const GateStructure& g, const TransitionData& t, Real c) {
    Real len = t.length(path), acc = 0, seg = 0;
    if (!(len > 0)) throw graph_error("LEG2 of an empty path");
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (i && !g.legal_step(path[i - 1], path[i])) {
            if (seg >= c) acc += seg;
            seg = 0;
        }
        seg += t.length(path[i]);
    }
    if (seg >= c) acc += seg;
    return acc / len;
}

}  // namespace gcore
