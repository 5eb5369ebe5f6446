// JSON payloads and figure/table emitters.  Everything here is a pure
// function of its input, so reruns give identical bytes.
#pragma once

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "corebuilder.hpp"
#include "dynamics.hpp"

namespace gcore {

using Json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "gcore-report/1";

// Fixed precision keeps the text stable across platforms.
inline double rounded(Real x, int digits = 12) {
    if (!std::isfinite(static_cast<double>(x))) return 0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lg", digits, x);
    return std::strtod(buf, nullptr);
}

inline std::string fixed(Real x, int digits = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lf", digits, x);
    return buf;
}

inline Json word_list(const std::vector<Word>& ws) {
    Json a = Json::array();
    for (auto& w : ws) a.push_back(format_word(w));
    return a;
}

inline Json to_json(const BoxSet& s) { return Json{{"display", s.display()}, {"words", s.strings()}}; }

inline Json to_json(const Automorphism& phi) {
    Json j;
    j["rank"] = phi.rank();
    j["images"] = word_list(phi.images());
    j["inverse"] = word_list(phi.inverse_images());
    return j;
}

inline Json to_json(const EndsMap& f) {
    Json j = Json::object();
    for (Letter x : all_letters(f.rank())) j[letter_name(x)] = to_json(f.letter_image(x));
    return j;
}

inline Json to_json(const TransitionData& t) {
    Json j;
    j["lambda"] = rounded(t.lambda);
    j["lambda_bracket"] = {rounded(t.lambda_lo), rounded(t.lambda_hi)};
    Json pf = Json::array();
    for (auto v : t.pf) pf.push_back(rounded(v));
    j["pf_lengths"] = pf;
    j["matrix"] = t.matrix;
    j["irreducible"] = t.irreducible;
    j["iterations"] = t.iterations;
    return j;
}

inline Json to_json(const GateStructure& g) {
    Json j;
    Json cl = Json::array();
    for (auto& c : g.classes) {
        Json a = Json::array();
        for (Letter x : c) a.push_back(letter_name(x));
        cl.push_back(a);
    }
    j["gates"] = cl;
    Json it = Json::array();
    for (auto [x, y] : g.illegal_turns) it.push_back({letter_name(x), letter_name(y)});
    j["illegal_turns"] = it;
    return j;
}

inline Json to_json(const NielsenPath& np) {
    Json j;
    j["leg1"] = format_word(np.leg1);
    j["leg2"] = format_word(np.leg2);
    j["path"] = format_word(np.as_path());
    j["fold"] = format_word(np.fold);
    j["period"] = np.period;
    j["leg_length"] = rounded(np.leg_length);
    j["ends_at_vertex"] = {np.ends_at_vertex1, np.ends_at_vertex2};
    j["orbit"] = np.orbit;
    return j;
}

inline Json to_json(const InpSearch& r) {
    Json j;
    Json ps = Json::array();
    for (auto& p : r.paths) ps.push_back(to_json(p));
    j["paths"] = ps;
    j["orbits"] = r.orbits();
    j["complete"] = r.complete;
    j["nodes"] = r.nodes;
    j["period_bound"] = r.period_bound;
    j["length_bound"] = rounded(r.length_bound);
    return j;
}

inline Json to_json(const SignedPoint& p) {
    return Json{{"edge", format_word(p.tree_edge())}, {"offset", format_offset(p.offset)}, {"sign", p.sign}};
}

inline Json to_json(const SliceTree& t) {
    Json j;
    j["stage"] = to_string(t.stage);
    j["vertices"] = word_list(t.vertices);
    j["edges"] = word_list(t.edges);
    Json pts = Json::array();
    for (auto& p : t.points) pts.push_back(to_json(p));
    j["points"] = pts;
    j["volume"] = format_offset(t.volume);
    return j;
}

inline Json to_json(const SliceResult& s) {
    Json j;
    j["edge"] = letter_name(s.edge);
    j["image"] = to_json(s.image);
    j["span"] = to_json(s.span_tree);
    j["consolidated"] = to_json(s.consolidated);
    j["core"] = to_json(s.core);
    Json st = Json::array();
    for (auto& c : s.steps) st.push_back(Json{{"vertex", format_word(c.vertex)}, {"new_edge", format_word(c.new_edge)}, {"sign", c.sign}});
    j["consolidation_steps"] = st;
    j["checked_rectangles"] = s.checked_rectangles;
    return j;
}

inline Json to_json(const CoreSummary& c) {
    Json j;
    j["power"] = c.power;
    j["intersection_number"] = c.intersection_number;
    j["rectangle_count"] = c.direct_count;
    j["cells"] = Json{{"vertices", c.vertices}, {"horizontal_edges", c.horizontal_edges}, {"vertical_edges", c.vertical_edges},
                      {"squares", c.squares}};
    j["euler_characteristic"] = c.euler();
    j["expected_euler_characteristic"] = 1 - c.rank;
    Json tl = Json::array();
    for (auto& [e, w] : c.twice_light) tl.push_back({letter_name(e), format_word(w)});
    j["twice_light"] = tl;
    j["direct_shift"] = format_word(c.direct_shift);
    Json sl = Json::array();
    for (auto& s : c.slices) sl.push_back(to_json(s));
    j["slices"] = sl;
    return j;
}

inline Json to_json(const TreePoint& p) {
    return Json{{"edge", format_word(p.edge_word())}, {"offset", rounded(p.offset)}};
}

inline Json to_json(const SpanStats& s) {
    Json j;
    j["level"] = s.level;
    j["points"] = s.points;
    j["volume"] = rounded(s.volume);
    Json cl = Json::array();
    for (auto& c : s.clumps) {
        Json x;
        x["i"] = c.index;
        x["clumps"] = c.clumps;
        x["min_size"] = c.min_size;
        x["max_size"] = c.max_size;
        x["mean_size"] = rounded(c.mean_size);
        x["max_diameter"] = rounded(c.max_diameter);
        x["mean_diameter"] = rounded(c.mean_diameter);
        if (c.sub_index >= 0) x["spanning_index"] = c.sub_index, x["mean_spanning_volume"] = rounded(c.mean_spanning_volume);
        cl.push_back(x);
    }
    j["clumps"] = cl;
    return j;
}

inline Json to_json(const VanishingRow& v) {
    return Json{{"i", v.index}, {"pairs", v.pairs}, {"min_length", rounded(v.min_length)}, {"max_length", rounded(v.max_length)}};
}

inline Json to_json(const GrowthReport& g) {
    Json j;
    j["edge"] = letter_name(g.edge);
    j["lambda"] = rounded(g.lambda);
    j["mu"] = g.mu ? Json(rounded(*g.mu)) : Json(nullptr);
    Json rows = Json::array();
    for (auto& r : g.rows)
        rows.push_back(Json{{"n", r.n},
                            {"count", r.count},
                            {"volume", rounded(r.volume)},
                            {"ratio", rounded(r.ratio)},
                            {"vol_per_point", rounded(r.vol_per_point)},
                            {"min_vanish", rounded(r.min_vanish)},
                            {"max_vanish", rounded(r.max_vanish)}});
    j["rows"] = rows;
    j["fit_levels"] = {g.fit_lo, g.fit_hi};
    j["fitted_volume_rate"] = rounded(g.fitted_rate);
    j["fitted_count_rate"] = rounded(g.count_rate);
    j["vol_per_point_growth"] = rounded(g.per_point_growth);
    if (g.n_lambda_spread > 0) j["n_lambda_spread"] = rounded(g.n_lambda_spread);
    j["empirical"] = g.empirical;
    j["nielsen_classification"] = g.nielsen ? Json(to_string(*g.nielsen)) : Json(nullptr);
    return j;
}

// ------------------------------------------------------------------ CSV

inline std::string growth_csv(const GrowthReport& g) {
    std::ostringstream o;
    o << "n,count,volume,ratio,vol_per_point,min_vanish,max_vanish\n";
    for (auto& r : g.rows)
        o << r.n << ',' << r.count << ',' << fixed(r.volume, 9) << ',' << fixed(r.ratio, 9) << ',' << fixed(r.vol_per_point, 9) << ','
          << fixed(r.min_vanish, 9) << ',' << fixed(r.max_vanish, 9) << '\n';
    return o.str();
}

inline std::string levels_csv(const PreimageLevels& lv, const std::vector<Real>& volumes) {
    std::ostringstream o;
    o << "n,count,predicted,volume\n";
    for (int n = 0; n <= lv.top(); ++n)
        o << n << ',' << lv.size(n) << ',' << lv.predicted[static_cast<std::size_t>(n)] << ','
          << fixed(volumes.at(static_cast<std::size_t>(n)), 9) << '\n';
    return o.str();
}

// ------------------------------------------------------------------ DOT

inline std::string slices_dot(const CoreSummary& c) {
    std::ostringstream o;
    o << "graph core {\n  node [shape=point];\n";
    for (auto& s : c.slices) {
        const std::string e = letter_name(s.edge);
        o << "  subgraph cluster_" << e << " {\n    label=\"Core_" << e << "\";\n";
        auto id = [&](const Word& w) { return "\"" + e + ":" + (w.empty() ? std::string("1") : format_word(w)) + "\""; };
        if (s.core.vertices.empty()) o << "    " << id({}) << " [shape=plaintext, label=\"empty\"];\n";
        for (auto& v : s.core.vertices) o << "    " << id(v) << " [xlabel=\"" << (v.empty() ? "1" : format_word(v)) << "\"];\n";
        for (auto& w : s.core.edges) o << "    " << id(prefix(w, w.size() - 1)) << " -- " << id(w) << ";\n";
        o << "  }\n";
    }
    o << "}\n";
    return o.str();
}

// ------------------------------------------------------------------ SVG

namespace detail {

inline std::string svg_text(const std::string& s) {
    std::string r;
    for (char ch : s) {
        if (ch == '<') r += "&lt;";
        else if (ch == '>') r += "&gt;";
        else if (ch == '&') r += "&amp;";
        else r += ch;
    }
    return r;
}

}  // namespace detail

// One block per petal e: a row of unit squares e x e', one per edge of
// Core_e, with the T' address under each square and vertices as ticks.
inline std::string render_core_svg(const CoreSummary& c) {
    const double cell = 40, pad = 20, gap = 50;
    std::size_t widest = 1;
    for (auto& s : c.slices) widest = std::max({widest, s.core.edges.size(), s.core.vertices.size()});
    const double width = 2 * pad + 90 + cell * static_cast<double>(widest) * 1.5;
    const double height = 2 * pad + (cell + gap) * static_cast<double>(c.slices.size()) + 30;
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 1) << "\" height=\"" << fixed(height, 1)
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
    o << "<text x=\"" << pad << "\" y=\"" << pad << "\">core of T x T.phi^" << c.power << ": " << c.intersection_number
      << " squares, chi = " << c.euler() << "</text>\n";
    double y = pad + 20;
    for (auto& s : c.slices) {
        const std::string e = letter_name(s.edge);
        o << "<g class=\"block\" data-edge=\"" << e << "\">\n";
        o << "<text x=\"" << pad << "\" y=\"" << fixed(y + cell / 2 + 4, 1) << "\">" << e << " x Core_" << e << "</text>\n";
        double x = pad + 90;
        if (s.core.edges.empty() && s.core.vertices.empty()) {
            o << "<rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y, 1) << "\" width=\"" << fixed(cell * 1.5, 1) << "\" height=\""
              << fixed(cell, 1) << "\" fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
            o << "<text x=\"" << fixed(x + 6, 1) << "\" y=\"" << fixed(y + cell / 2 + 4, 1) << "\">empty</text>\n";
        } else if (s.core.edges.empty()) {
            for (auto& v : s.core.vertices) {
                o << "<line class=\"vertex\" x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(y, 1) << "\" x2=\"" << fixed(x, 1) << "\" y2=\""
                  << fixed(y + cell, 1) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
                o << "<text x=\"" << fixed(x - 4, 1) << "\" y=\"" << fixed(y + cell + 14, 1) << "\">"
                  << detail::svg_text(v.empty() ? "1" : format_word(v)) << "</text>\n";
                x += cell * 1.5;
            }
        }
        for (auto& w : s.core.edges) {
            o << "<rect class=\"square\" x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y, 1) << "\" width=\"" << fixed(cell, 1) << "\" height=\""
              << fixed(cell, 1) << "\" fill=\"#dde8f4\" stroke=\"black\"/>\n";
            // arrows on the vertical sides mark the identification along e
            o << "<text x=\"" << fixed(x + 3, 1) << "\" y=\"" << fixed(y + 12, 1) << "\">" << e << "</text>\n";
            o << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y + cell + 14, 1) << "\">" << detail::svg_text(format_word(w))
              << "</text>\n";
            x += cell * 1.5;
        }
        for (auto& [te, w] : c.twice_light)
            if (te == s.edge) {
                o << "<g class=\"twice-light\"><rect x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y, 1) << "\" width=\"" << fixed(cell, 1)
                  << "\" height=\"" << fixed(cell, 1) << "\" fill=\"none\" stroke=\"#c33\" stroke-dasharray=\"3 2\"/>";
                o << "<line x1=\"" << fixed(x, 1) << "\" y1=\"" << fixed(y + cell, 1) << "\" x2=\"" << fixed(x + cell, 1) << "\" y2=\""
                  << fixed(y, 1) << "\" stroke=\"#c33\"/>";
                o << "<text x=\"" << fixed(x, 1) << "\" y=\"" << fixed(y + cell + 14, 1) << "\">" << detail::svg_text(format_word(w))
                  << "</text></g>\n";
                x += cell * 1.5;
            }
        o << "</g>\n";
        y += cell + gap;
    }
    o << "</svg>\n";
    return o.str();
}

// Tree drawn by the span of a point set: points plus the vertices of T
// inside the span.
struct SpanGraph {
    struct Node {
        bool is_point = false;
        Word vertex;       // tree vertex, or the edge word of a point
        Real offset = 0;   // points only
    };
    std::vector<Node> nodes;
    std::vector<std::tuple<int, int, Real>> edges;
    std::size_t points = 0, steiner = 0;
};

template <class LengthFn>
SpanGraph span_graph(const std::vector<TreePoint>& pts, LengthFn len) {
    SpanGraph g;
    SpanShape shape = span_shape(pts, len);
    std::map<Word, int, WordLess> vid;
    auto vertex = [&](const Word& v) {
        auto it = vid.find(v);
        if (it != vid.end()) return it->second;
        g.nodes.push_back({false, v, 0});
        ++g.steiner;
        return vid[v] = static_cast<int>(g.nodes.size()) - 1;
    };
    std::map<Word, std::vector<std::pair<Real, int>>, WordLess> on_edge;
    for (auto& p : pts) {
        g.nodes.push_back({true, p.edge_word(), p.offset});
        ++g.points;
        on_edge[p.edge_word()].emplace_back(p.offset, static_cast<int>(g.nodes.size()) - 1);
    }
    if (pts.size() == 1) return g;
    for (auto& [w, iv] : shape) {
        Real l = len(w.back());
        auto stops = on_edge[w];
        if (iv.first <= 0) stops.emplace_back(0, vertex(prefix(w, w.size() - 1)));
        if (iv.second >= l) stops.emplace_back(l, vertex(w));
        std::sort(stops.begin(), stops.end());
        for (std::size_t i = 1; i < stops.size(); ++i) g.edges.emplace_back(stops[i - 1].second, stops[i].second, stops[i].first - stops[i - 1].first);
    }
    return g;
}

// Radial layout: the first node is the centre, each subtree gets a wedge
// proportional to its leaf count, radius is PF distance.
inline std::string render_span_svg(const SpanGraph& g, const std::string& title) {
    const std::size_t n = g.nodes.size();
    std::vector<std::vector<std::pair<int, Real>>> adj(n);
    for (auto& [a, b, l] : g.edges) adj[static_cast<std::size_t>(a)].emplace_back(b, l), adj[static_cast<std::size_t>(b)].emplace_back(a, l);
    std::vector<int> parent(n, -1), order;
    std::vector<Real> depth(n, 0);
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> kids(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (seen[r]) continue;
        std::vector<int> st{static_cast<int>(r)};
        seen[r] = 1;
        while (!st.empty()) {
            int u = st.back();
            st.pop_back();
            order.push_back(u);
            for (auto [v, l] : adj[static_cast<std::size_t>(u)])
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    parent[static_cast<std::size_t>(v)] = u;
                    depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + l;
                    kids[static_cast<std::size_t>(u)].push_back(v);
                    st.push_back(v);
                }
        }
    }
    std::vector<double> leaves(n, 0), a0(n, 0), a1(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto u = static_cast<std::size_t>(*it);
        leaves[u] = kids[u].empty() ? 1 : 0;
        for (int v : kids[u]) leaves[u] += leaves[static_cast<std::size_t>(v)];
    }
    Real rmax = 0;
    for (auto d : depth) rmax = std::max(rmax, d);
    const double size = 600, mid = size / 2, scale = rmax > 0 ? (mid - 30) / static_cast<double>(rmax) : 1;
    const double tau = 6.283185307179586;
    std::vector<double> x(n, mid), y(n, mid);
    double total = 0;
    for (std::size_t r = 0; r < n; ++r)
        if (parent[r] < 0) total += leaves[r];
    double cursor = 0;
    for (int u0 : order) {
        auto u = static_cast<std::size_t>(u0);
        if (parent[u] < 0) a0[u] = cursor, a1[u] = cursor + tau * leaves[u] / std::max(total, 1.0), cursor = a1[u];
        double c = a0[u];
        for (int v : kids[u]) {
            auto vi = static_cast<std::size_t>(v);
            a0[vi] = c;
            a1[vi] = c + (a1[u] - a0[u]) * leaves[vi] / std::max(leaves[u], 1.0);
            c = a1[vi];
        }
        double ang = (a0[u] + a1[u]) / 2, rad = static_cast<double>(depth[u]) * scale;
        x[u] = mid + rad * std::cos(ang);
        y[u] = mid + rad * std::sin(ang);
    }
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
    o << "<text x=\"10\" y=\"" << size + 12 << "\">" << detail::svg_text(title) << "</text>\n";
    for (auto& [a, b, l] : g.edges)
        o << "<line x1=\"" << fixed(x[static_cast<std::size_t>(a)], 2) << "\" y1=\"" << fixed(y[static_cast<std::size_t>(a)], 2) << "\" x2=\""
          << fixed(x[static_cast<std::size_t>(b)], 2) << "\" y2=\"" << fixed(y[static_cast<std::size_t>(b)], 2)
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (std::size_t u = 0; u < n; ++u) {
        if (g.nodes[u].is_point)
            o << "<circle class=\"point\" cx=\"" << fixed(x[u], 2) << "\" cy=\"" << fixed(y[u], 2) << "\" r=\"3\" fill=\"#c33\"/>\n";
        else
            o << "<rect class=\"vertex\" x=\"" << fixed(x[u] - 1.5, 2) << "\" y=\"" << fixed(y[u] - 1.5, 2)
              << "\" width=\"3\" height=\"3\" fill=\"black\"/>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace gcore
