// Job files: one TOML document per experiment.
//
//   [automorphism]
//   images  = { a = "baC", b = "cA", c = "a" }
//   inverse = { a = "c",  b = "ab", c = "bc" }
//
//   [map]            # optional rose map for phi, up to an inner automorphism
//   images = { a = "...", ... }
//   [inverse_map]    # optional rose map for phi^-1
//   images = { ... }
//
//   [params]         # all optional
//   power = 3, levels = 12, edge = "a", tolerance = 1e-9,
//   budget_points = 1000000, inp_budget = 20000000, period_bound = 6,
//   length_bound = 4.0, out = "out"
#pragma once

#include <filesystem>
#include <optional>

#include <toml.hpp>

#include "graphmap.hpp"

namespace gcore {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MapBlock {
    RoseMap map;
    Word conjugator;  // map images are conjugator . phi(x) . conjugator^-1
};

struct JobConfig {
    std::string name;
    int rank = 0;
    std::vector<std::string> generators;
    Automorphism phi;
    std::optional<MapBlock> map, inverse_map;

    int power = 1;
    int levels = 10;
    Letter edge = 1;
    double tolerance = 1e-9;
    long long budget_points = 1000000;
    long long inp_budget = 20000000;
    int period_bound = 0;       // 0: twice the rank
    double length_bound = 0;    // 0: twice the critical constant
    std::string out;

    RoseMap forward_map() const { return map ? map->map : RoseMap::of(phi); }
    RoseMap backward_map() const { return inverse_map ? inverse_map->map : RoseMap::of(phi.inverse()); }
    // Automorphism realised by forward_map() with the base vertex fixed.
    Automorphism forward_aut() const;
};

// g with img[x] = g x g^-1 for every generator, if there is one.
inline std::optional<Word> inner_conjugator(const std::vector<Word>& img) {
    const int k = static_cast<int>(img.size());
    if (k == 0) return std::nullopt;
    const Word& wa = img[0];
    // wa = u a u^-1 with u determined up to a power of a
    if (wa.size() % 2 == 0) return std::nullopt;
    std::size_t h = wa.size() / 2;
    if (wa[h] != 1) return std::nullopt;
    Word u = prefix(wa, h);
    if (concat(u, Word{1}, invert(u)) != wa) return std::nullopt;
    auto works = [&](const Word& g) {
        for (Letter x = 1; x <= k; ++x)
            if (img[static_cast<std::size_t>(x - 1)] != concat(g, Word{x}, invert(g))) return false;
        return true;
    };
    int span = 1;
    for (auto& w : img) span += static_cast<int>(w.size());
    for (int m = 0; m <= span; ++m)
        for (int s : {m, -m}) {
            Word g = u;
            for (int i = 0; i < std::abs(s); ++i) g = concat(g, Word{s > 0 ? 1 : -1});
            if (works(g)) return g;
        }
    return std::nullopt;
}

inline Automorphism inner(const Word& g, int k) {
    std::vector<Word> a, b;
    for (Letter x = 1; x <= k; ++x) a.push_back(concat(g, Word{x}, invert(g))), b.push_back(concat(invert(g), Word{x}, g));
    return Automorphism(std::move(a), std::move(b));
}

inline Automorphism JobConfig::forward_aut() const {
    if (!map) return phi;
    return compose(inner(map->conjugator, rank), phi);
}

namespace detail {

inline std::vector<std::string> image_table(const toml::table& block, const std::string& where, const std::vector<std::string>& gens) {
    const toml::table* t = block["images"].as_table();
    if (where == "automorphism.inverse") t = block["inverse"].as_table();
    if (!t) throw config_error(where + " must be a table of generator = \"word\"");
    std::vector<std::string> out;
    for (auto& [key, val] : *t) {
        std::string g(key.str());
        if (std::find(gens.begin(), gens.end(), g) == gens.end()) throw config_error(where + ": undeclared generator " + g);
    }
    for (auto& g : gens) {
        auto v = (*t)[g].value<std::string>();
        if (!v) throw config_error(where + ": missing image of " + g);
        if (v->empty()) throw config_error(where + ": empty image for " + g);
        out.push_back(*v);
    }
    return out;
}

inline std::vector<std::string> standard_generators(int k) {
    std::vector<std::string> g;
    for (int i = 1; i <= k; ++i) g.push_back(letter_name(i));
    return g;
}

inline MapBlock map_block(const toml::table& root, const char* name, const Automorphism& target, const std::vector<std::string>& gens) {
    const toml::table* b = root[name].as_table();
    auto images = image_table(*b, name, gens);
    MapBlock m;
    try {
        m.map = RoseMap::parse(images);
    } catch (const std::exception& e) {
        throw config_error(std::string(name) + ": " + e.what());
    }
    // block = target o i_g = i_{target(g)} o target, so target^-1 o block is inner
    std::vector<Word> chi;
    for (auto& w : m.map.images()) chi.push_back(target.apply_inverse(w));
    auto g = inner_conjugator(chi);
    if (!g) throw config_error(std::string(name) + " does not represent the same outer automorphism");
    m.conjugator = target.apply(*g);
    return m;
}

}  // namespace detail

inline JobConfig parse_config(const toml::table& root) {
    JobConfig c;
    c.name = root["name"].value_or(std::string{});
    const toml::table* aut = root["automorphism"].as_table();
    if (!aut) throw config_error("missing [automorphism] table");
    const toml::table* im = (*aut)["images"].as_table();
    if (!im) throw config_error("[automorphism] needs images = { ... }");
    c.rank = static_cast<int>(im->size());
    if (c.rank < 1 || c.rank > 26) throw config_error("rank must be between 1 and 26");
    if (auto* g = (*aut)["generators"].as_array()) {
        for (auto& v : *g) {
            auto s = v.value<std::string>();
            if (!s) throw config_error("generators must be strings");
            c.generators.push_back(*s);
        }
        if (c.generators != detail::standard_generators(c.rank))
            throw config_error("generators must be the first " + std::to_string(c.rank) + " lowercase letters in order");
    } else {
        c.generators = detail::standard_generators(c.rank);
    }
    if (!(*aut)["inverse"].as_table()) throw config_error("[automorphism] needs inverse = { ... }");
    auto images = detail::image_table(*aut, "automorphism.images", c.generators);
    auto inverse = detail::image_table(*aut, "automorphism.inverse", c.generators);
    try {
        c.phi = Automorphism::parse(images, inverse);
    } catch (const word_error& e) {
        throw config_error(std::string("automorphism: ") + e.what());
    }
    if (root["map"].as_table()) c.map = detail::map_block(root, "map", c.phi, c.generators);
    if (root["inverse_map"].as_table()) c.inverse_map = detail::map_block(root, "inverse_map", c.phi.inverse(), c.generators);

    if (const toml::table* p = root["params"].as_table()) {
        c.power = (*p)["power"].value_or(c.power);
        c.levels = (*p)["levels"].value_or(c.levels);
        c.tolerance = (*p)["tolerance"].value_or(c.tolerance);
        c.budget_points = (*p)["budget_points"].value_or(c.budget_points);
        c.inp_budget = (*p)["inp_budget"].value_or(c.inp_budget);
        c.period_bound = (*p)["period_bound"].value_or(c.period_bound);
        c.length_bound = (*p)["length_bound"].value_or(c.length_bound);
        c.out = (*p)["out"].value_or(c.out);
        if (auto e = (*p)["edge"].value<std::string>()) {
            Word w;
            try {
                w = parse_word(*e, c.rank);
            } catch (const word_error&) {
            }
            if (w.size() != 1 || w[0] < 0) throw config_error("params.edge must be one generator name");
            c.edge = w[0];
        }
    }
    if (c.budget_points <= 0 || c.inp_budget <= 0) throw config_error("budgets must be positive");
    if (c.tolerance <= 0) throw config_error("tolerance must be positive");
    if (c.levels < 0) throw config_error("levels must be nonnegative");
    if (c.period_bound < 0 || c.length_bound < 0) throw config_error("search bounds must be nonnegative");
    return c;
}

inline JobConfig load_config(const std::filesystem::path& file) {
    try {
        return parse_config(toml::parse_file(file.string()));
    } catch (const toml::parse_error& e) {
        throw config_error(file.string() + ": " + std::string(e.description()));
    }
}

inline JobConfig parse_config_string(std::string_view text) {
    try {
        return parse_config(toml::parse(text));
    } catch (const toml::parse_error& e) {
        throw config_error(std::string(e.description()));
    }
}

}  // namespace gcore
