// Iterated preimages of an edge midpoint under the lift of a train-track
// rose map to the universal cover, with span volumes, clumps and growth
// rates of the preimage trees.
//
// The lift f fixes the base vertex and sends g to phi(g).  Lengths are PF
// lengths.  A point sits on the tree edge from u to u.y (u.y reduced) at
// distance t from u.  Points are identified exactly by their provenance:
// parent, source edge and occurrence.
#pragma once

#include <map>
#include <optional>

#include "graphmap.hpp"

namespace gcore {

struct dynamics_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct budget_error : dynamics_error {
    using dynamics_error::dynamics_error;
};

struct TreePoint {
    Word vertex;
    Letter edge = 0;
    Real offset = 0;

    Word edge_word() const {
        Word w = vertex;
        w.push_back(edge);
        return w;
    }
};

// Orient the edge from a along z away from the base vertex.
inline TreePoint oriented_point(const Word& a, Letter z, Real s, Real len) {
    if (!a.empty() && a.back() == -z) return {prefix(a, a.size() - 1), -z, len - s};
    return {a, z, s};
}

class LiftedMap {
public:
    LiftedMap(Automorphism phi) : phi_(std::move(phi)), sigma_(RoseMap::of(phi_)), t_(transition(sigma_)) {
        if (!is_train_track(sigma_).ok) throw dynamics_error("lifted map needs a train-track representative");
    }

    const Automorphism& aut() const { return phi_; }
    const RoseMap& rose() const { return sigma_; }
    const TransitionData& data() const { return t_; }
    int rank() const { return phi_.rank(); }
    Real lambda() const { return t_.lambda; }
    Real length(Letter x) const { return t_.length(x); }

    TreePoint map_point(const TreePoint& x) const {
        const Word img = sigma_.image(x.edge);
        Word a = phi_.apply(x.vertex);
        Real pos = t_.lambda * x.offset;
        for (std::size_t i = 0; i < img.size(); ++i) {
            Real l = length(img[i]);
            if (pos < l || i + 1 == img.size()) return oriented_point(a, img[i], std::min(pos, l), l);
            pos -= l;
            a = concat(a, Word{img[i]});
        }
        throw dynamics_error("empty edge image");
    }

private:
    Automorphism phi_;
    RoseMap sigma_;
    TransitionData t_;
};

struct LevelPoint {
    TreePoint p;
    int parent = -1;      // index in the previous level
    Letter source = 0;    // positive edge of T carrying the preimage
    int occurrence = -1;  // index of the crossed letter in sigma(source)
};

// Preimages of x, one per crossing of its edge by the image of a tree edge.
inline std::vector<LevelPoint> preimage_point(const LiftedMap& f, const TreePoint& x) {
    std::vector<LevelPoint> out;
    const Automorphism& phi = f.aut();
    const Real ly = f.length(x.edge), lam = f.lambda();
    for (Letter e = 1; e <= f.rank(); ++e) {
        const Word img = f.rose().image(e);
        Real pre_len = 0;
        for (std::size_t j = 0; j < img.size(); pre_len += f.length(img[j]), ++j) {
            const Letter z = img[j];
            if (index_of(z) != index_of(x.edge)) continue;
            Word pre_inv = invert(prefix(img, j));
            Word target = z == x.edge ? concat(x.vertex, pre_inv) : concat(x.vertex, Word{x.edge}, pre_inv);
            Real tau = (pre_len + (z == x.edge ? x.offset : ly - x.offset)) / lam;
            Word v = phi.apply_inverse(target);
            LevelPoint lp;
            lp.source = e;
            lp.occurrence = static_cast<int>(j);
            lp.p = oriented_point(v, e, tau, f.length(e));
            if (!(lp.p.offset > 0 && lp.p.offset < f.length(e)))
                throw dynamics_error("preimage lands on a vertex");  // impossible for interior x
            out.push_back(std::move(lp));
        }
    }
    return out;
}

inline bool same_point(const TreePoint& a, const TreePoint& b, Real tol) {
    return a.vertex == b.vertex && a.edge == b.edge && std::fabs(a.offset - b.offset) <= tol;
}

struct PreimageLevels {
    Letter edge = 0;
    std::vector<std::vector<LevelPoint>> levels;
    std::vector<long long> predicted;  // counts from the transition matrix
    Real start_offset = 0;
    int restarts = 0;

    std::size_t size(int n) const { return levels.at(static_cast<std::size_t>(n)).size(); }
    int top() const { return static_cast<int>(levels.size()) - 1; }
    // index of the level-m ancestor of point i at level n
    int ancestor(int n, int i, int m) const {
        for (; n > m; --n) i = levels[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)].parent;
        return i;
    }
};

struct vertex_collision : dynamics_error {
    using dynamics_error::dynamics_error;
};

namespace detail {

inline PreimageLevels preimage_levels_at(const LiftedMap& f, Letter e, Real start, int n_max, std::size_t budget, Real tol) {
    PreimageLevels r;
    r.edge = e;
    r.start_offset = start;
    r.levels.push_back({LevelPoint{{Word{}, e, start}, -1, 0, -1}});
    const int k = f.rank();
    const auto& M = f.data().matrix;
    std::vector<long long> c(k, 0);
    c[e - 1] = 1;
    r.predicted.push_back(1);
    for (int n = 1; n <= n_max; ++n) {
        std::vector<long long> nc(k, 0);
        long long total = 0;
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) nc[a] += M[a][b] * c[b];
        for (auto v : nc) total += v;
        if (total > static_cast<long long>(budget))
            throw budget_error("level " + std::to_string(n) + " needs " + std::to_string(total) + " points, over the budget of " +
                                 std::to_string(budget));
        c = nc;
        r.predicted.push_back(total);
        std::vector<LevelPoint> next;
        next.reserve(static_cast<std::size_t>(total));
        const auto& prev = r.levels.back();
        for (std::size_t i = 0; i < prev.size(); ++i)
            for (auto& lp : preimage_point(f, prev[i].p)) {
                Real l = f.length(lp.p.edge);
                if (lp.p.offset < 1e-12L * l || lp.p.offset > l - 1e-12L * l)
                    throw vertex_collision("preimage at level " + std::to_string(n) + " too close to a vertex");
                lp.parent = static_cast<int>(i);
                if (!same_point(f.map_point(lp.p), prev[i].p, tol * f.length(prev[i].p.edge)))
                    throw dynamics_error("preimage at level " + std::to_string(n) + " does not map to its parent");
                next.push_back(std::move(lp));
            }
        if (static_cast<long long>(next.size()) != total) throw dynamics_error("preimage count disagrees with the transition matrix");
        r.levels.push_back(std::move(next));
    }
    return r;
}

}  // namespace detail

// Start at the midpoint of e; on a vertex collision move to 1/2 + 1/(2*3^r).
inline PreimageLevels preimage_levels(const LiftedMap& f, Letter e, int n_max, std::size_t budget = 1000000, Real tol = 1e-9L) {
    if (e < 1 || e > f.rank()) throw dynamics_error("preimage_levels needs a positive edge");
    Real frac = 0.5L, step = 0.5L;
    for (int r = 0; r < 20; ++r) {
        try {
            auto lv = detail::preimage_levels_at(f, e, frac * f.length(e), n_max, budget, tol);
            lv.restarts = r;
            return lv;
        } catch (const vertex_collision&) {
            step /= 3;
            frac = 0.5L + step;
        }
    }
    throw dynamics_error("no generic starting point found");
}

// ------------------------------------------------------------------ spans

// Covered interval of each tree edge, keyed by edge word.
using SpanShape = std::map<Word, std::pair<Real, Real>, WordLess>;

inline Real shape_volume(const SpanShape& s) {
    Real v = 0;
    for (auto& [w, iv] : s) v += iv.second - iv.first;
    return v;
}

template <class LengthFn>
SpanShape span_shape(const std::vector<TreePoint>& pts, LengthFn len) {
    SpanShape out;
    if (pts.size() < 2) return out;
    struct Seg {
        long long here = 0, sub = 0;  // points on the edge, at or beyond it
        Real lo = std::numeric_limits<Real>::infinity(), hi = -std::numeric_limits<Real>::infinity();
    };
    std::map<Word, Seg, WordLess> trie;
    for (auto& p : pts) {
        Word w = p.edge_word();
        Seg& s = trie[w];
        ++s.here;
        s.lo = std::min(s.lo, p.offset);
        s.hi = std::max(s.hi, p.offset);
        for (std::size_t n = 1; n <= w.size(); ++n) ++trie[prefix(w, n)].sub;
    }
    const long long N = static_cast<long long>(pts.size());
    for (auto& [w, s] : trie) {
        long long beyond = s.sub - s.here, above = N - s.sub;
        Real l = len(w.back());
        std::pair<Real, Real> iv;
        if (above > 0 && beyond > 0) iv = {0, l};
        else if (above > 0) iv = {0, s.hi};
        else if (beyond > 0) iv = {s.lo, l};
        else iv = {s.lo, s.hi};
        if (iv.second > iv.first) out.emplace(w, iv);
    }
    return out;
}

// Same shape from the union of all pairwise geodesics.  Prefixes of the
// edge words are interned once so each geodesic is a walk on parent links.
template <class LengthFn>
SpanShape span_shape_pairwise(const std::vector<TreePoint>& pts, LengthFn len) {
    std::map<Word, int, WordLess> id{{Word{}, 0}};
    std::vector<int> parent{-1};
    std::vector<Word> name{Word{}};
    auto intern = [&](const Word& w) {
        int at = 0;
        Word cur;
        for (Letter x : w) {
            cur.push_back(x);
            auto [it, fresh] = id.emplace(cur, static_cast<int>(name.size()));
            if (fresh) parent.push_back(at), name.push_back(cur);
            at = it->second;
        }
        return at;
    };
    std::vector<int> edge_node, vertex_node;
    for (auto& p : pts) edge_node.push_back(intern(p.edge_word())), vertex_node.push_back(parent[static_cast<std::size_t>(edge_node.back())]);
    std::vector<std::pair<Real, Real>> iv(name.size(), {0, 0});
    std::vector<char> used(name.size(), 0);
    auto add = [&](int node, Real a, Real b) {
        if (b <= a) return;
        auto& r = iv[static_cast<std::size_t>(node)];
        if (!used[static_cast<std::size_t>(node)]) r = {a, b}, used[static_cast<std::size_t>(node)] = 1;
        else r = {std::min(r.first, a), std::max(r.second, b)};
    };
    auto depth = [&](int node) { return name[static_cast<std::size_t>(node)].size(); };
    auto below = [&](int node, int anc) {  // node lies in the subtree of anc
        while (depth(node) > depth(anc)) node = parent[static_cast<std::size_t>(node)];
        return node == anc;
    };
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const TreePoint &p = pts[i], &q = pts[j];
            int ep = edge_node[i], eq = edge_node[j];
            if (ep == eq) {
                add(ep, std::min(p.offset, q.offset), std::max(p.offset, q.offset));
                continue;
            }
            // leave each edge through the endpoint facing the other point
            auto exit_vertex = [&](const TreePoint& a, int ea, int va, int eb) {
                bool up = depth(eb) > depth(ea) && below(eb, ea);
                if (up) add(ea, a.offset, len(a.edge));
                else add(ea, 0, a.offset);
                return up ? ea : va;
            };
            int x = exit_vertex(p, ep, vertex_node[i], eq), y = exit_vertex(q, eq, vertex_node[j], ep);
            while (x != y) {
                int& deeper = depth(x) >= depth(y) ? x : y;
                add(deeper, 0, len(name[static_cast<std::size_t>(deeper)].back()));
                deeper = parent[static_cast<std::size_t>(deeper)];
            }
        }
    SpanShape out;
    for (std::size_t n = 0; n < name.size(); ++n)
        if (used[n]) out.emplace(name[n], iv[n]);
    return out;
}

template <class LengthFn>
Real tree_distance(const TreePoint& p, const TreePoint& q, LengthFn len) {
    Word wp = p.edge_word(), wq = q.edge_word();
    if (wp == wq) return std::fabs(p.offset - q.offset);
    auto vdist = [&](const Word& x, const Word& y) {
        std::size_t c = 0;
        while (c < x.size() && c < y.size() && x[c] == y[c]) ++c;
        Real d = 0;
        for (std::size_t n = c; n < x.size(); ++n) d += len(x[n]);
        for (std::size_t n = c; n < y.size(); ++n) d += len(y[n]);
        return d;
    };
    Real best = std::numeric_limits<Real>::infinity();
    const Real lp = len(p.edge), lq = len(q.edge);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Real d = (a ? lp - p.offset : p.offset) + (b ? lq - q.offset : q.offset) + vdist(a ? wp : p.vertex, b ? wq : q.vertex);
            best = std::min(best, d);
        }
    return best;
}

// ------------------------------------------------------------ statistics

struct ClumpStats {
    int index = 0;  // i: points sharing their ancestor i levels up
    std::size_t clumps = 0, min_size = 0, max_size = 0;
    Real mean_size = 0;
    Real max_diameter = 0, mean_diameter = 0;
    int sub_index = -1;   // i - l for the spanning trees, -1 when not requested
    Real mean_spanning_volume = 0;
};

struct SpanStats {
    int level = 0;
    std::size_t points = 0;
    Real volume = 0;
    std::vector<ClumpStats> clumps;
};

inline std::vector<TreePoint> points_of(const PreimageLevels& lv, int n) {
    std::vector<TreePoint> r;
    for (auto& lp : lv.levels.at(static_cast<std::size_t>(n))) r.push_back(lp.p);
    return r;
}

// Members of each i-clump at level n, grouped by the level n-i ancestor.
inline std::vector<std::vector<int>> clump_partition(const PreimageLevels& lv, int n, int i) {
    std::map<int, std::vector<int>> g;
    for (int x = 0; x < static_cast<int>(lv.size(n)); ++x) g[lv.ancestor(n, x, n - i)].push_back(x);
    std::vector<std::vector<int>> r;
    for (auto& [a, v] : g) r.push_back(std::move(v));
    return r;
}

// Mean number of j-clumps inside an i-clump at level n.
inline Real clumps_per_clump(const PreimageLevels& lv, int n, int i, int j) {
    auto big = clump_partition(lv, n, i);
    Real acc = 0;
    for (auto& c : big) {
        std::set<int> sub;
        for (int x : c) sub.insert(lv.ancestor(n, x, n - j));
        acc += static_cast<Real>(sub.size());
    }
    return big.empty() ? 0 : acc / static_cast<Real>(big.size());
}

inline SpanStats span_stats(const LiftedMap& f, const PreimageLevels& lv, int n, const std::vector<int>& i_grid, int ell = -1,
                            std::size_t diameter_cap = 4000) {
    auto len = [&](Letter x) { return f.length(x); };
    SpanStats st;
    st.level = n;
    auto pts = points_of(lv, n);
    st.points = pts.size();
    st.volume = shape_volume(span_shape(pts, len));
    for (int i : i_grid) {
        if (i < 0 || i > n) continue;
        ClumpStats cs;
        cs.index = i;
        auto part = clump_partition(lv, n, i);
        cs.clumps = part.size();
        cs.min_size = std::numeric_limits<std::size_t>::max();
        Real dsum = 0, vsum = 0;
        for (auto& c : part) {
            cs.min_size = std::min(cs.min_size, c.size());
            cs.max_size = std::max(cs.max_size, c.size());
            cs.mean_size += static_cast<Real>(c.size());
            Real diam = 0;
            if (c.size() <= diameter_cap)
                for (std::size_t a = 0; a < c.size(); ++a)
                    for (std::size_t b = a + 1; b < c.size(); ++b)
                        diam = std::max(diam, tree_distance(pts[static_cast<std::size_t>(c[a])], pts[static_cast<std::size_t>(c[b])], len));
            dsum += diam;
            cs.max_diameter = std::max(cs.max_diameter, diam);
            if (ell >= 0 && i - ell >= 0) {
                std::map<int, int> rep;  // one point per (i-l)-clump
                for (int x : c) rep.emplace(lv.ancestor(n, x, n - (i - ell)), x);
                std::vector<TreePoint> r;
                for (auto& [a, x] : rep) r.push_back(pts[static_cast<std::size_t>(x)]);
                vsum += shape_volume(span_shape(r, len));
            }
        }
        if (part.empty()) cs.min_size = 0;
        Real m = part.empty() ? 1 : static_cast<Real>(part.size());
        cs.mean_size /= m;
        cs.mean_diameter = dsum / m;
        if (ell >= 0 && i - ell >= 0) cs.sub_index = i - ell, cs.mean_spanning_volume = vsum / m;
        st.clumps.push_back(cs);
    }
    return st;
}

struct VanishingRow {
    int index = 0;  // i
    std::size_t pairs = 0;
    Real min_length = 0, max_length = 0;
};

// At level n: pairs identified by f^i but not by f^(i-1), for each i.
inline std::vector<VanishingRow> vanishing_stats(const LiftedMap& f, const PreimageLevels& lv, int n,
                                                 std::size_t pair_budget = 50000000) {
    auto len = [&](Letter x) { return f.length(x); };
    auto pts = points_of(lv, n);
    std::vector<VanishingRow> rows;
    for (int i = 1; i <= n; ++i) {
        VanishingRow r;
        r.index = i;
        r.min_length = std::numeric_limits<Real>::infinity();
        std::size_t work = 0;
        for (auto& c : clump_partition(lv, n, i)) {
            work += c.size() * c.size() / 2;
            if (work > pair_budget) throw budget_error("vanishing statistics exceed the pair budget");
            for (std::size_t a = 0; a < c.size(); ++a)
                for (std::size_t b = a + 1; b < c.size(); ++b) {
                    int x = c[a], y = c[b];
                    if (lv.ancestor(n, x, n - i + 1) == lv.ancestor(n, y, n - i + 1)) continue;
                    Real d = tree_distance(pts[static_cast<std::size_t>(x)], pts[static_cast<std::size_t>(y)], len);
                    ++r.pairs;
                    r.min_length = std::min(r.min_length, d);
                    r.max_length = std::max(r.max_length, d);
                }
        }
        if (!r.pairs) r.min_length = 0;
        rows.push_back(r);
    }
    return rows;
}

// --------------------------------------------------------------- growth

// Least-squares slope of log(y) against n, returned as a rate.
inline Real fit_rate(const std::vector<Real>& y, int lo, int hi) {
    Real sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int n = lo; n <= hi; ++n) {
        if (n < 0 || n >= static_cast<int>(y.size()) || !(y[static_cast<std::size_t>(n)] > 0)) continue;
        Real ly = std::log(y[static_cast<std::size_t>(n)]);
        sx += n, sy += ly, sxx += static_cast<Real>(n) * n, sxy += n * ly;
        ++m;
    }
    if (m < 2) return 0;
    return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

struct GrowthRow {
    int n = 0;
    long long count = 0;
    Real volume = 0, ratio = 0, vol_per_point = 0;
    Real min_vanish = 0, max_vanish = 0;
};

struct GrowthReport {
    Letter edge = 0;
    Real lambda = 0;
    std::optional<Real> mu;  // expansion factor of the inverse when its rose map is train track
    std::vector<GrowthRow> rows;
    Real fitted_rate = 0, count_rate = 0;
    int fit_lo = 0, fit_hi = 0;
    Real per_point_growth = 0;  // vol/count at the top level over its value at the first fitted level
    std::string empirical;      // geometric | nongeometric | n-lambda^n | undetermined
    std::vector<VanishingRow> vanishing;  // at the top level, by i
    Real n_lambda_spread = 0;             // max/min of vol/(n lambda^n) over the fitted levels
    std::optional<StableTree> nielsen;
    std::vector<std::string> warnings;
};

struct GrowthOptions {
    std::size_t budget = 1000000;
    Real tol = 1e-9L;
    bool vanishing = true;
    std::optional<InpSearch> inps;        // cross-check against the Nielsen path search
    std::optional<RoseMap> inverse_map;   // rose map for the inverse; defaults to its images
};

inline GrowthReport growth_report(const Automorphism& phi, Letter e, int n_max, const GrowthOptions& opt = {}) {
    LiftedMap f(phi);
    GrowthReport g;
    g.edge = e;
    g.lambda = f.lambda();
    RoseMap back = opt.inverse_map ? *opt.inverse_map : RoseMap::of(phi.inverse());
    if (is_train_track(back).ok) g.mu = transition(back).lambda;
    else g.warnings.push_back("inverse rose map is not train track; mu not reported");

    PreimageLevels lv = preimage_levels(f, e, n_max, opt.budget, opt.tol);
    auto len = [&](Letter x) { return f.length(x); };
    std::vector<Real> vol, cnt;
    for (int n = 0; n <= n_max; ++n) {
        GrowthRow r;
        r.n = n;
        r.count = static_cast<long long>(lv.size(n));
        r.volume = shape_volume(span_shape(points_of(lv, n), len));
        r.ratio = n && g.rows.back().volume > 0 ? r.volume / g.rows.back().volume : 0;
        r.vol_per_point = r.volume / static_cast<Real>(r.count);
        vol.push_back(r.volume);
        cnt.push_back(static_cast<Real>(r.count));
        g.rows.push_back(r);
    }
    if (opt.vanishing && n_max >= 1) {
        // row n holds the paths in S_top that first die under f^n
        g.vanishing = vanishing_stats(f, lv, n_max);
        for (auto& v : g.vanishing) g.rows[static_cast<std::size_t>(v.index)].min_vanish = v.min_length,
                                    g.rows[static_cast<std::size_t>(v.index)].max_vanish = v.max_length;
    }
    g.fit_hi = n_max;
    g.fit_lo = n_max / 2;
    g.fitted_rate = fit_rate(vol, g.fit_lo, g.fit_hi);
    g.count_rate = fit_rate(cnt, g.fit_lo, g.fit_hi);
    int base = std::max(1, n_max / 3);
    while (base < n_max && !(g.rows[static_cast<std::size_t>(base)].vol_per_point > 0)) ++base;
    g.per_point_growth = g.rows[static_cast<std::size_t>(base)].vol_per_point > 0
                             ? g.rows.back().vol_per_point / g.rows[static_cast<std::size_t>(base)].vol_per_point
                             : 0;

    Real top = g.mu ? std::max(g.lambda, *g.mu) : g.lambda;
    bool close = g.mu && std::fabs(g.lambda - *g.mu) < 0.02L * g.lambda;
    if (close) {
        Real lo = std::numeric_limits<Real>::infinity(), hi = 0;
        for (int n = std::max(1, g.fit_lo); n <= n_max; ++n) {
            Real q = vol[static_cast<std::size_t>(n)] / (n * std::pow(g.lambda, static_cast<Real>(n)));
            lo = std::min(lo, q), hi = std::max(hi, q);
        }
        g.n_lambda_spread = lo > 0 ? hi / lo : 0;
    }
    // below ~9 levels the per-point growth of both classes is still transient
    if (n_max < 9) g.empirical = "undetermined";
    else if (close && g.per_point_growth > 1.5L && g.n_lambda_spread > 0 && g.n_lambda_spread < 1.5L) g.empirical = "n-lambda^n";
    else if (g.per_point_growth >= 2.0L && g.fitted_rate > g.count_rate * 1.02L) g.empirical = "nongeometric";
    else if (g.per_point_growth < 2.0L) g.empirical = "geometric";
    else g.empirical = "undetermined";
    if (g.empirical == "nongeometric" && g.mu && std::fabs(g.fitted_rate - top) > 0.1L * top)
        g.warnings.push_back("fitted volume rate is more than 10% away from max(lambda, mu)");

    if (opt.inps) {
        g.nielsen = classify_stable_tree(*opt.inps);
        std::string want = g.nielsen == StableTree::geometric ? "geometric" : g.nielsen == StableTree::nongeometric ? "nongeometric" : "";
        if (!want.empty() && g.empirical != want && g.empirical != "n-lambda^n")
            g.warnings.push_back("empirical growth reads " + g.empirical + " but the Nielsen path search says " + want);
    }
    return g;
}

}  // namespace gcore
