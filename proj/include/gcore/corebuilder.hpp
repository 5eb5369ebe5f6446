// Slices of the core of T x T' for two unit-length rose trees, computed from
// the signed preimage points of an edge midpoint and cross-checked against
// the four-box rectangle criterion.
//
// Tree conventions: vertices of the Cayley tree are reduced words; the edge
// ending at w (w nonempty) joins w minus its last letter to w and is oriented
// away from the root.  Points on it carry the offset from the root-side end.
#pragma once

#include <boost/rational.hpp>
#include <map>
#include <set>

#include "boundary.hpp"

namespace gcore {

struct core_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Offset = boost::rational<long long>;

inline std::string format_offset(const Offset& o) { return std::to_string(o.numerator()) + "/" + std::to_string(o.denominator()); }

struct SignedPoint {
    Word address;          // end of the tight path before the final partial edge
    Letter edge = 0;       // letter of that partial edge
    Offset offset{1, 2};   // position along the tree edge, from its root side
    int sign = +1;         // sign of the region beyond the point
    Letter source = 0;     // generator whose image carries the occurrence
    int occurrence = -1;   // index in that image; -1 for synthetic points

    Word tree_edge() const {
        Word w = address;
        w.push_back(edge);
        return w;
    }
};

struct PointSet {
    int rank = 0;
    int root_sign = -1;  // sign of the region containing the base vertex
    std::map<Word, SignedPoint, WordLess> by_edge;

    std::vector<SignedPoint> points() const {
        std::vector<SignedPoint> r;
        for (auto& [w, p] : by_edge) r.push_back(p);
        return r;
    }
    std::size_t size() const { return by_edge.size(); }
};

// ----------------------------------------------------------- sigma points

// Signed points in the cover of the rose realising psi that map to the
// midpoint of the lift of e.  Each comes with its tight path, checked by
// pushing it forward again.
inline std::vector<SignedPoint> sigma_points(const Automorphism& psi, Letter e) {
    const int k = psi.rank();
    check_letter(e, k);
    if (e < 0) throw core_error("sigma_points wants a positive edge");
    std::vector<SignedPoint> out;
    for (Letter y = 1; y <= k; ++y) {
        const Word img = psi.image(y);
        const long long n = static_cast<long long>(img.size());
        for (std::size_t j = 0; j < img.size(); ++j) {
            const Letter l = img[j];
            if (index_of(l) != e) continue;
            Word pre_inv = invert(prefix(img, j));
            Word u = psi.apply_inverse(l > 0 ? pre_inv : concat(Word{e}, pre_inv));
            SignedPoint p;
            p.source = y;
            p.occurrence = static_cast<int>(j);
            Offset off(2 * static_cast<long long>(j) + 1, 2 * n);
            int approach = +1;
            if (!u.empty() && u.back() == -y) {
                u.pop_back();
                p.edge = -y;
                off = 1 - off;
                approach = -1;
            } else {
                p.edge = y;
            }
            p.address = u;
            p.offset = off;
            p.sign = (l > 0 ? 1 : -1) * approach;

            // psi(address) then the part of psi(edge) before the point must
            // end where the half-edge e_+ (sign +) or the reversed e_- starts
            Word img_edge = psi.image(p.edge);
            std::size_t i = approach > 0 ? j : img.size() - 1 - j;
            Word before = concat(psi.apply(p.address), prefix(img_edge, i));
            Letter half = img_edge[i];
            bool ok = index_of(half) == e && (half > 0 ? before.empty() : before == Word{e}) &&
                      (half > 0 ? 1 : -1) == p.sign && is_reduced(p.tree_edge());
            if (!ok)
                throw core_error("sigma point check failed for " + letter_name(e) + " at occurrence " + std::to_string(j) +
                                 " of " + letter_name(y));
            out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end(), [](const SignedPoint& a, const SignedPoint& b) {
        auto wa = a.tree_edge(), wb = b.tree_edge();
        if (wa.size() != wb.size()) return wa.size() < wb.size();
        return WordLess{}(wa, wb);
    });
    return out;
}

inline PointSet make_point_set(int rank, const std::vector<SignedPoint>& pts, int root_sign = -1) {
    PointSet s;
    s.rank = rank;
    s.root_sign = root_sign;
    for (auto& p : pts)
        if (!s.by_edge.emplace(p.tree_edge(), p).second)
            throw core_error("two signed points on the tree edge " + format_word(p.tree_edge()));
    return s;
}

// Ends whose last crossed point is "+", processed from the root outwards so
// that deeper points override shallower ones.
inline BoxSet ends_set(const PointSet& s) {
    std::vector<const SignedPoint*> order;
    for (auto& [w, p] : s.by_edge) order.push_back(&p);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* a, auto* b) { return a->address.size() < b->address.size(); });
    BoxSet P = s.root_sign > 0 ? BoxSet::all(s.rank) : BoxSet::none(s.rank);
    for (auto* p : order) {
        BoxSet c = BoxSet::cylinder(s.rank, p->tree_edge());
        P = p->sign > 0 ? unite(P, c) : subtract(P, c);
    }
    return P;
}

// Along every ray the crossed points alternate in sign, starting opposite to
// the base region.
inline bool alternates(const PointSet& s) {
    for (auto& [w, p] : s.by_edge) {
        int above = s.root_sign;
        for (std::size_t n = w.size() - 1; n >= 1; --n) {
            auto it = s.by_edge.find(prefix(w, n));
            if (it != s.by_edge.end()) {
                above = it->second.sign;
                break;
            }
        }
        if (above == p.sign) return false;
    }
    return true;
}

// Ends map of psi^{-1}, read off the points of psi.
inline EndsMap ends_map_from_sigma(const Automorphism& psi) {
    std::vector<BoxSet> P;
    for (Letter e = 1; e <= psi.rank(); ++e) P.push_back(ends_set(make_point_set(psi.rank(), sigma_points(psi, e))));
    EndsMap f(psi.inverse(), std::move(P));
    if (auto v = partition_check(f)) throw core_error("ends map fails the partition check at " + format_word(v->witness));
    return f;
}

// Ends map of phi.
inline EndsMap ends_map_from(const Automorphism& phi) { return ends_map_from_sigma(phi.inverse()); }

// Fewest signed points reproducing P: a point goes on an edge only where the
// sign must flip.  Ties prefer no point, and a "-" base region.
inline PointSet minimal_labeling(const BoxSet& P) {
    const int k = P.rank();
    PointSet s;
    s.rank = k;
    if (P.is_empty() || P.is_all()) {
        s.root_sign = P.is_all() ? 1 : -1;
        return s;
    }
    std::set<Word> inner;  // proper prefixes of the antichain words
    std::set<Word> leaves(P.words().begin(), P.words().end());
    for (auto& w : P.words())
        for (std::size_t n = 0; n < w.size(); ++n) inner.insert(prefix(w, n));

    std::map<std::pair<Word, int>, long long> memo;
    // cost of labelling everything below vertex u when the region at u has sign sg
    std::function<long long(const Word&, int)> cost = [&](const Word& u, int sg) -> long long {
        auto key = std::make_pair(u, sg);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        long long c = 0;
        for (auto& ch : children(k, u)) {
            if (inner.count(ch))
                c += std::min(cost(ch, sg), 1 + cost(ch, -sg));
            else
                c += (leaves.count(ch) ? 1 : -1) != sg;
        }
        return memo[key] = c;
    };
    std::function<void(const Word&, int)> place = [&](const Word& u, int sg) {
        for (auto& ch : children(k, u)) {
            int want = sg;
            if (inner.count(ch)) {
                if (1 + cost(ch, -sg) < cost(ch, sg)) want = -sg;
            } else {
                want = leaves.count(ch) ? 1 : -1;
            }
            if (want != sg) {
                SignedPoint p;
                p.address = u;
                p.edge = ch.back();
                p.sign = want;
                s.by_edge.emplace(ch, p);
            }
            if (inner.count(ch)) place(ch, want);
        }
    };
    s.root_sign = cost({}, 1) < cost({}, -1) ? 1 : -1;
    place({}, s.root_sign);
    if (ends_set(s) != P) throw core_error("minimal labelling does not reproduce its box set");
    return s;
}

// ------------------------------------------------------------------ spans

struct SpanInfo {
    std::set<Word, WordLess> vertices;  // tree vertices in the span
    std::vector<Word> full_edges;       // both endpoints in the span
    Offset partial{0};                  // leaf segments
    Offset volume() const { return partial + static_cast<long long>(full_edges.size()); }
};

namespace detail {

// points in each direction at u: index 0 = parent side, then children in order
inline std::vector<std::vector<Word>> directions(const PointSet& s, const Word& u) {
    auto ch = children(s.rank, u);
    std::vector<std::vector<Word>> d(ch.size() + 1);
    for (auto& [w, p] : s.by_edge) {
        if (w.size() > u.size() && has_prefix(w, u)) {
            auto pos = std::find(ch.begin(), ch.end(), prefix(w, u.size() + 1)) - ch.begin();
            d[static_cast<std::size_t>(pos) + 1].push_back(w);
        } else {
            d[0].push_back(w);
        }
    }
    return d;
}

inline std::set<Word, WordLess> candidate_vertices(const PointSet& s) {
    std::set<Word, WordLess> c{Word{}};
    for (auto& [w, p] : s.by_edge)
        for (std::size_t n = 0; n <= w.size(); ++n) c.insert(prefix(w, n));
    return c;
}

}  // namespace detail

inline SpanInfo span(const PointSet& s) {
    SpanInfo r;
    if (s.size() < 2) return r;
    for (auto& u : detail::candidate_vertices(s)) {
        int nonempty = 0;
        for (auto& d : detail::directions(s, u)) nonempty += !d.empty();
        if (nonempty >= 2) r.vertices.insert(u);
    }
    for (auto& w : r.vertices)
        if (!w.empty() && r.vertices.count(prefix(w, w.size() - 1))) r.full_edges.push_back(w);
    for (auto& [w, p] : s.by_edge) {
        bool lo = r.vertices.count(prefix(w, w.size() - 1)) > 0, hi = r.vertices.count(w) > 0;
        if (lo && !hi) r.partial += p.offset;
        if (hi && !lo) r.partial += 1 - p.offset;
    }
    return r;
}

// ---------------------------------------------------------- consolidation

struct ConsolidationStep {
    Word vertex;
    Word new_edge;  // tree edge that receives the replacement point
    int sign;
};

// Removes removable vertices until none remain.  Every step preserves the
// ends set and the alternation of signs.
inline std::vector<ConsolidationStep> consolidate(PointSet& s) {
    const int k = s.rank;
    const BoxSet P = ends_set(s);
    std::vector<ConsolidationStep> steps;
    for (bool again = true; again;) {
        again = false;
        SpanInfo sp = span(s);
        for (auto& v : sp.vertices) {
            auto d = detail::directions(s, v);
            auto ch = children(k, v);
            auto adjacent = [&](std::size_t i) { return i == 0 ? v : ch[i - 1]; };
            bool full = v.empty() ? std::all_of(d.begin() + 1, d.end(), [](auto& x) { return !x.empty(); })
                                  : std::all_of(d.begin(), d.end(), [](auto& x) { return !x.empty(); });
            if (!full) continue;
            std::vector<std::size_t> leaf_dirs, other;
            for (std::size_t i = v.empty() ? 1 : 0; i < d.size(); ++i)
                (d[i].size() == 1 && d[i][0] == adjacent(i) ? leaf_dirs : other).push_back(i);
            if (other.size() != 1) continue;
            const std::size_t hat = other[0];
            if (s.by_edge.count(adjacent(hat)))
                throw core_error("signed point next to removable-looking vertex " + format_word(v));
            int sg = 0;
            for (auto i : leaf_dirs) {
                int far = s.by_edge.at(adjacent(i)).sign * (i == 0 ? -1 : 1);
                if (sg == 0) sg = far;
                if (far != sg) throw core_error("mixed signs around removable vertex " + format_word(v));
            }
            for (auto i : leaf_dirs) s.by_edge.erase(adjacent(i));
            SignedPoint np;
            Word ew = adjacent(hat);
            np.address = prefix(ew, ew.size() - 1);
            np.edge = ew.back();
            np.sign = hat == 0 ? sg : -sg;
            s.by_edge.emplace(ew, np);
            if (v.empty()) s.root_sign = sg;
            steps.push_back({v, ew, np.sign});
            if (ends_set(s) != P) throw core_error("consolidation at " + format_word(v) + " changed the ends set");
            if (!alternates(s)) throw core_error("consolidation at " + format_word(v) + " broke sign alternation");
            again = true;
            break;
        }
    }
    return steps;
}

// -------------------------------------------------------------- rectangles

enum class Rect { out, in_core, twice_light };

inline const char* to_string(Rect r) {
    switch (r) {
        case Rect::in_core: return "in_core";
        case Rect::twice_light: return "twice_light";
        default: return "out";
    }
}

// e x e' with P = f(<e>), nP its complement and e' the tree edge ending at w.
inline Rect rectangle_in_core(const BoxSet& P, const BoxSet& nP, const Word& w) {
    auto outside = [&](const BoxSet& S) {
        return std::any_of(S.words().begin(), S.words().end(), [&](const Word& u) { return !has_prefix(u, w); });
    };
    if (meets(P, w) && meets(nP, w) && outside(P) && outside(nP)) return Rect::in_core;
    auto single = [&](const BoxSet& S) { return S.size() == 1 && S.words()[0] == w; };
    if (single(P) || single(nP)) return Rect::twice_light;
    return Rect::out;
}

inline Rect rectangle_in_core(const BoxSet& P, const Word& w) { return rectangle_in_core(P, complement(P), w); }

inline Rect rectangle_in_core(const EndsMap& f, Letter e, const Word& w) {
    if (e < 0) return rectangle_in_core(complement(f.letter_image(-e)), w);
    return rectangle_in_core(f.letter_image(e), w);
}

// e x {v'} lies in the core iff neither f(<e>) nor its complement fits in a
// single direction at v'.
inline bool fits_direction(const BoxSet& S, const Word& v, int rank) {
    if (!v.empty() && within_complement(S, v)) return true;
    for (auto& c : children(rank, v))
        if (within(S, c)) return true;
    return false;
}

inline bool vertex_in_slice(const BoxSet& P, const BoxSet& nP, const Word& v) {
    return !fits_direction(P, v, P.rank()) && !fits_direction(nP, v, P.rank());
}

inline bool vertex_in_slice(const BoxSet& P, const Word& v) { return vertex_in_slice(P, complement(P), v); }

// ------------------------------------------------------------------ slices

struct SliceTree {
    enum class Stage { span, consolidated, interior };
    Stage stage = Stage::interior;
    std::vector<Word> vertices;
    std::vector<Word> edges;  // tree edges, named by their far endpoint
    std::vector<SignedPoint> points;
    Offset volume{0};
};

inline const char* to_string(SliceTree::Stage s) {
    switch (s) {
        case SliceTree::Stage::span: return "span";
        case SliceTree::Stage::consolidated: return "consolidated";
        default: return "interior";
    }
}

struct SliceResult {
    Letter edge = 0;
    BoxSet image;  // f(<e>)
    SliceTree span_tree, consolidated, core;
    std::vector<ConsolidationStep> steps;
    std::size_t checked_rectangles = 0;
};

inline SliceTree make_slice_tree(const PointSet& s, SliceTree::Stage st) {
    SpanInfo sp = span(s);
    SliceTree t;
    t.stage = st;
    t.points = s.points();
    if (st == SliceTree::Stage::interior) t.points.clear();
    t.vertices.assign(sp.vertices.begin(), sp.vertices.end());
    t.edges = sp.full_edges;
    t.volume = st == SliceTree::Stage::interior ? Offset(static_cast<long long>(t.edges.size())) : sp.volume();
    return t;
}

// Slice over the base edge e from a set of signed points.  The interior
// edges left after consolidation must be exactly the edges passing the
// rectangle test.
inline SliceResult slice_from_points(PointSet pts, Letter e) {
    SliceResult r;
    r.edge = e;
    if (!alternates(pts)) throw core_error("signed points over " + letter_name(e) + " do not alternate");
    r.image = ends_set(pts);
    r.span_tree = make_slice_tree(pts, SliceTree::Stage::span);
    r.steps = consolidate(pts);
    r.consolidated = make_slice_tree(pts, SliceTree::Stage::consolidated);
    r.core = make_slice_tree(pts, SliceTree::Stage::interior);

    std::set<Word, WordLess> in_z(r.core.edges.begin(), r.core.edges.end());
    std::set<Word, WordLess> cand(r.span_tree.edges.begin(), r.span_tree.edges.end()), vcand{Word{}};
    const BoxSet outside = complement(r.image);
    for (const BoxSet* S : {static_cast<const BoxSet*>(&r.image), &outside})
        for (auto& w : S->words())
            for (std::size_t n = 0; n <= w.size(); ++n) {
                if (n >= 1 && n < w.size()) cand.insert(prefix(w, n));
                vcand.insert(prefix(w, n));
            }
    for (auto& w : cand) {
        bool box = rectangle_in_core(r.image, outside, w) == Rect::in_core;
        if (box != (in_z.count(w) > 0))
            throw core_error("slice over " + letter_name(e) + ": edge " + format_word(w) +
                             (box ? " passes the rectangle test but was consolidated away" : " survives consolidation but fails the rectangle test"));
        ++r.checked_rectangles;
    }
    for (auto& w : in_z)
        if (!cand.count(w)) throw core_error("slice edge outside the candidate set");

    // vertices: endpoints of the interior edges, or at most one vertex of the
    // consolidated tree when there are none
    std::set<Word, WordLess> ends;
    for (auto& w : in_z) ends.insert(w), ends.insert(prefix(w, w.size() - 1));
    std::set<Word, WordLess> boxv;
    for (auto& v : vcand)
        if (vertex_in_slice(r.image, outside, v)) boxv.insert(v);
    if (!in_z.empty() && boxv != ends)
        throw core_error("slice over " + letter_name(e) + ": vertex test disagrees with the endpoints of the interior edges");
    if (in_z.empty()) {
        if (boxv.size() > 1) throw core_error("slice over " + letter_name(e) + " has separated vertices");
        for (auto& v : boxv)
            if (!std::count(r.consolidated.vertices.begin(), r.consolidated.vertices.end(), v))
                throw core_error("slice vertex " + format_word(v) + " lies outside the consolidated tree");
    }
    r.core.vertices.assign(boxv.begin(), boxv.end());
    return r;
}

inline SliceResult slice(const EndsMap& f, Letter e) {
    if (e < 1 || e > f.rank()) throw core_error("slice needs a positive edge");
    return slice_from_points(minimal_labeling(f.letter_image(e)), e);
}

// -------------------------------------------------------- intersection

// The construction assumes no vertex neighbourhood of the rose maps into a
// single edge.  When every germ of psi leaves through the same letter x the
// map is homotoped across x, which conjugates psi; `conjugator` collects the
// product of those letters.
struct VertexNormalized {
    Automorphism psi;
    Word conjugator;
};

inline std::optional<Letter> collapsed_germ(const Automorphism& psi) {
    std::optional<Letter> x;
    for (Letter y : all_letters(psi.rank())) {
        Letter d = psi.image(y).front();
        if (x && *x != d) return std::nullopt;
        x = d;
    }
    return x;
}

inline VertexNormalized normalize_vertex(Automorphism psi) {
    const int k = psi.rank();
    Word c;
    while (auto x = collapsed_germ(psi)) {
        std::vector<Word> img, inv_img;
        for (Letter y = 1; y <= k; ++y) img.push_back({-*x, y, *x}), inv_img.push_back({*x, y, -*x});
        psi = compose(Automorphism(std::move(img), std::move(inv_img)), psi);
        c.push_back(*x);
    }
    return {std::move(psi), reduce(c)};
}

struct Cell {
    int dim;          // 0, 1 or 2
    bool vertical;    // 1-cells: {*} x e' when true, e x {v'} otherwise
    Letter base = 0;  // edge of T (0 for cells over the base vertex)
    Word word;        // vertex or edge of T'
};

struct CoreSummary {
    int rank = 0;
    int power = 1;
    std::vector<SliceResult> slices;         // one per petal, from the composed ends map
    std::vector<SliceResult> direct_slices;  // from the points of phi^-n
    Word direct_shift;                       // direct slices are this translate of the others
    long long intersection_number = 0;
    long long direct_count = 0;  // in_core rectangles over a fundamental domain
    std::vector<std::pair<Letter, Word>> twice_light;
    std::vector<Cell> cells;
    long long vertices = 0, horizontal_edges = 0, vertical_edges = 0, squares = 0;
    long long euler() const { return vertices - horizontal_edges - vertical_edges + squares; }
    std::vector<std::string> warnings;
};

namespace detail {

inline std::set<Word, WordLess> shifted(const Word& h, const std::vector<Word>& vs) {
    std::set<Word, WordLess> r;
    for (auto& v : vs) r.insert(concat(h, v));
    return r;
}

}  // namespace detail

// Cells of the quotient of the core by the diagonal action, with T' cells
// drawn from the prefixes of the letter images.  A cell is in the core when
// no light quadrant contains it.
inline void assemble_cells(const EndsMap& f, CoreSummary& cs) {
    const int k = f.rank();
    std::vector<BoxSet> img, co;
    for (Letter y : all_letters(k)) img.push_back(f.letter_image(y)), co.push_back(complement(img.back()));
    std::set<Word, WordLess> cand{Word{}};
    for (auto& S : img)
        for (auto& w : S.words())
            for (std::size_t n = 0; n <= w.size(); ++n) cand.insert(prefix(w, n));
    // S u B = ALL iff the complement of S fits in B
    for (auto& v : cand) {
        bool in = std::none_of(co.begin(), co.end(), [&](const BoxSet& c) { return fits_direction(c, v, k); });
        if (in) cs.cells.push_back({0, false, 0, v}), ++cs.vertices;
    }
    for (auto& w : cand) {
        if (w.empty()) continue;
        bool in = true;
        for (std::size_t i = 0; i < img.size() && in; ++i)
            if (covers(img[i], w) || within(co[i], w)) in = false;
        if (in) cs.cells.push_back({1, true, 0, w}), ++cs.vertical_edges;
    }
    for (Letter x = 1; x <= k; ++x) {
        const BoxSet& P = img[static_cast<std::size_t>(2 * (x - 1))];
        const BoxSet& nP = co[static_cast<std::size_t>(2 * (x - 1))];
        for (auto& v : cand)
            if (vertex_in_slice(P, nP, v)) cs.cells.push_back({1, false, x, v}), ++cs.horizontal_edges;
        for (auto& w : cand) {
            if (w.empty()) continue;
            Rect r = rectangle_in_core(P, nP, w);
            if (r == Rect::in_core) cs.cells.push_back({2, false, x, w}), ++cs.squares, ++cs.direct_count;
            if (r == Rect::twice_light) cs.twice_light.emplace_back(x, w);
        }
    }
}

inline CoreSummary intersection_number(const Automorphism& phi, int n) {
    if (n < 1) throw core_error("power must be at least 1");
    const int k = phi.rank();
    CoreSummary cs;
    cs.rank = k;
    cs.power = n;
    EndsMap f = power_ends(ends_map_from(phi), n);
    if (auto v = partition_check(f)) throw core_error("power of the ends map fails the partition check at " + format_word(v->witness));

    // direct route: points of a vertex-normalised representative of phi^-n,
    // whose ends sets are the composed ones translated by phi^n(c)
    VertexNormalized back = normalize_vertex(power(phi, -n));
    cs.direct_shift = power(phi, n).apply(back.conjugator);
    long long slice_vertices = 0;
    for (Letter e = 1; e <= k; ++e) {
        cs.slices.push_back(slice(f, e));
        cs.direct_slices.push_back(slice_from_points(make_point_set(k, sigma_points(back.psi, e)), e));
        const auto& a = cs.slices.back();
        const auto& b = cs.direct_slices.back();
        if (b.image != translate(cs.direct_shift, a.image))
            throw core_error("ends of " + letter_name(e) + " differ between the composed map and the direct points");
        if (detail::shifted(cs.direct_shift, a.core.vertices) != detail::shifted({}, b.core.vertices) ||
            a.core.edges.size() != b.core.edges.size())
            throw core_error("slice over " + letter_name(e) + " differs between the two routes");
        cs.intersection_number += static_cast<long long>(a.core.edges.size());
        slice_vertices += static_cast<long long>(a.core.vertices.size());
    }
    assemble_cells(f, cs);
    if (cs.direct_count != cs.intersection_number) throw core_error("rectangle count disagrees with the slice sum");
    if (cs.horizontal_edges != slice_vertices) throw core_error("horizontal cell count disagrees with the slice vertices");
    if (cs.euler() != 1 - k)
        cs.warnings.push_back("euler characteristic " + std::to_string(cs.euler()) + " differs from " + std::to_string(1 - k) +
                              (cs.twice_light.empty() ? "" : " (twice-light rectangles present)"));
    return cs;
}

struct SymmetryReport {
    long long forward = 0, backward = 0;
    bool equal() const { return forward == backward; }
};

inline SymmetryReport symmetry_check(const Automorphism& phi, int n) {
    return {intersection_number(phi, n).intersection_number, intersection_number(phi.inverse(), n).intersection_number};
}

}  // namespace gcore
