#include <gtest/gtest.h>

#include <filesystem>

#include "gcore/config.hpp"
#include "gcore/report.hpp"

using namespace gcore;

namespace {

std::size_t count_of(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

const char* fib_text = R"(
name = "fib"
[automorphism]
images  = { a = "ab", b = "a" }
inverse = { a = "b", b = "Ba" }
)";

}  // namespace

TEST(Config, MinimalFileUsesDefaults) {
    JobConfig c = parse_config_string(fib_text);
    EXPECT_EQ(c.name, "fib");
    EXPECT_EQ(c.rank, 2);
    EXPECT_EQ(c.generators, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(c.phi.image(1), parse_word("ab"));
    EXPECT_EQ(c.levels, 10);
    EXPECT_EQ(c.edge, 1);
    EXPECT_FALSE(c.map.has_value());
    EXPECT_EQ(c.forward_aut(), c.phi);
    EXPECT_EQ(c.backward_map().images(), c.phi.inverse().images());
}

TEST(Config, MapBlockMayDifferByConjugation) {
    // a . phi(x) . A
    std::string text = std::string(fib_text) + "[map]\nimages = { a = \"aabA\", b = \"a\" }\n[params]\nedge = \"b\"\nlevels = 7\n";
    JobConfig c = parse_config_string(text);
    ASSERT_TRUE(c.map.has_value());
    EXPECT_EQ(c.map->conjugator, parse_word("a"));
    EXPECT_EQ(c.forward_aut().images(), c.map->map.images());
    EXPECT_EQ(c.edge, 2);
    EXPECT_EQ(c.levels, 7);
    // a different outer class is refused
    EXPECT_THROW(parse_config_string(std::string(fib_text) + "[map]\nimages = { a = \"ba\", b = \"b\" }\n"), config_error);
}

TEST(Config, InnerConjugatorRecoversTheElement) {
    for (const char* g : {"", "a", "bA", "abbC", "CCa"}) {
        Word w = parse_word(g);
        auto r = inner_conjugator(inner(w, 3).images());
        ASSERT_TRUE(r.has_value()) << g;
        EXPECT_EQ(*r, w);
    }
    EXPECT_FALSE(inner_conjugator({parse_word("ab"), parse_word("b")}).has_value());
}

TEST(Config, ErrorsAreReported) {
    EXPECT_THROW(parse_config_string("name = 1"), config_error);
    EXPECT_THROW(parse_config_string("[automorphism]\nimages = { a = \"ab\", b = \"a\" }\n"), config_error);
    EXPECT_THROW(parse_config_string("[automorphism]\nimages = { a = \"ab\", b = \"a\" }\ninverse = { a = \"b\", b = \"ba\" }\n"), config_error);
    EXPECT_THROW(parse_config_string("[automorphism]\nimages = { a = \"ab\", c = \"a\" }\ninverse = { a = \"b\", c = \"Ba\" }\n"), config_error);
    EXPECT_THROW(parse_config_string(std::string(fib_text) + "[params]\nedge = \"A\"\n"), config_error);
    EXPECT_THROW(parse_config_string(std::string(fib_text) + "[params]\nlevels = -1\n"), config_error);
    EXPECT_THROW(parse_config_string(std::string(fib_text) + "[params]\nbudget_points = 0\n"), config_error);
    EXPECT_THROW(parse_config_string("[automorphism\n"), config_error);
    EXPECT_THROW(load_config("/nonexistent/x.toml"), config_error);
}

TEST(Config, ShippedConfigsLoad) {
    int n = 0;
    for (auto& entry : std::filesystem::directory_iterator(GCORE_CONFIG_DIR)) {
        if (entry.path().extension() != ".toml") continue;
        JobConfig c = load_config(entry.path());
        EXPECT_FALSE(c.name.empty()) << entry.path();
        EXPECT_TRUE(compose(c.phi, c.phi.inverse()).is_identity());
        ++n;
    }
    EXPECT_GE(n, 6);
    JobConfig intro = load_config(std::filesystem::path(GCORE_CONFIG_DIR) / "intro_nongeometric.toml");
    ASSERT_TRUE(intro.inverse_map.has_value());
    EXPECT_TRUE(intro.inverse_map->conjugator.empty());
}

TEST(Report, CoreJsonIsDeterministic) {
    Automorphism phi = Automorphism::parse({"baC", "cA", "a"}, {"c", "ab", "bc"});
    std::string a = to_json(intersection_number(phi, 3)).dump(2), b = to_json(intersection_number(phi, 3)).dump(2);
    EXPECT_EQ(a, b);
    Json j = Json::parse(a);
    EXPECT_EQ(j["intersection_number"], 23);
    EXPECT_EQ(j["euler_characteristic"], -2);
}

TEST(Report, CoreSvgHasOneSquarePerRectangle) {
    Automorphism phi = Automorphism::parse({"baC", "cA", "a"}, {"c", "ab", "bc"});
    std::string svg = render_core_svg(intersection_number(phi, 3));
    EXPECT_EQ(count_of(svg, "<rect class=\"square\""), 23u);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg, render_core_svg(intersection_number(phi, 3)));
}

TEST(Report, SpanSvgDrawsEveryPoint) {
    LiftedMap f(Automorphism::parse({"ac", "a", "b"}, {"b", "c", "Ba"}));
    auto lv = preimage_levels(f, 1, 6);
    auto pts = points_of(lv, 6);
    SpanGraph g = span_graph(pts, [&](Letter x) { return f.length(x); });
    EXPECT_EQ(g.points, pts.size());
    EXPECT_EQ(g.nodes.size(), g.points + g.steiner);
    // a tree: one fewer edge than node
    EXPECT_EQ(g.edges.size() + 1, g.nodes.size());
    Real total = 0;
    for (auto& [a, b, l] : g.edges) total += l;
    EXPECT_NEAR(static_cast<double>(total), static_cast<double>(shape_volume(span_shape(pts, [&](Letter x) { return f.length(x); }))), 1e-12);
    std::string svg = render_span_svg(g, "S_6");
    EXPECT_EQ(count_of(svg, "<circle class=\"point\""), pts.size());
}

TEST(Report, GrowthCsvHasOneRowPerLevel) {
    GrowthReport g = growth_report(Automorphism::parse({"ac", "a", "b"}, {"b", "c", "Ba"}), 1, 8);
    std::string csv = growth_csv(g);
    EXPECT_EQ(count_of(csv, "\n"), 10u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,count,volume,ratio,vol_per_point,min_vanish,max_vanish");
    Json j = to_json(g);
    EXPECT_EQ(j["empirical"], "undetermined");  // too few levels to separate the classes
}
