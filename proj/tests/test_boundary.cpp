#include <gtest/gtest.h>

#include "gcore/corebuilder.hpp"
#include "support.hpp"

using namespace gcore;
using namespace gtest_support;

namespace {

BoxSet box(int k, std::initializer_list<const char*> ws) {
    std::vector<std::string> s(ws.begin(), ws.end());
    return BoxSet::parse(k, s);
}

const Automorphism rank3 = Automorphism::parse({"baC", "cA", "a"}, {"c", "ab", "bc"});
const Automorphism rank2 = Automorphism::parse({"ab", "bab"}, {"aaB", "bA"});

}  // namespace

TEST(BoxSet, CanonicalForm) {
    EXPECT_TRUE(box(2, {"a", "A", "b", "B"}).is_all());
    EXPECT_EQ(box(2, {"aa", "ab", "aB"}), box(2, {"a"}));
    EXPECT_EQ(box(2, {"ab", "a"}), box(2, {"a"}));
    EXPECT_TRUE(BoxSet::none(3).is_empty());
    EXPECT_EQ(box(3, {"b", "aC"}).strings(), (std::vector<std::string>{"aC", "b"}));
}

TEST(BoxSet, DisplayFormsMatchHandWrittenOnes) {
    EXPECT_EQ(subtract(box(2, {"a"}), box(2, {"aB"})).display(), "a - aB");
    EXPECT_EQ(subtract(box(2, {"b"}), box(2, {"bAA", "bAB"})).display(), "b - bAA - bAB");
    EXPECT_EQ(box(3, {"aC", "B"}).display(), "B + aC");
    EXPECT_EQ(BoxSet::all(2).display(), "ALL");
}

// Set algebra against brute-force membership of every cylinder of a fixed
// depth.  The tables decide equality because every box is shallower.
TEST(BoxSet, AlgebraAgreesWithMembershipTables) {
    std::mt19937 g(2024);
    int cases = 0;
    for (int k : {2, 3}) {
        const int depth = 4;
        auto universe = words_of_length(k, depth);
        for (int t = 0; t < 5000; ++t, ++cases) {
            auto bx = random_boxes(k, 3, 1 + static_cast<int>(g() % 4), g);
            auto by = random_boxes(k, 3, 1 + static_cast<int>(g() % 4), g);
            if (g() % 8 == 0) bx.clear();
            BoxSet X(k, bx), Y(k, by);
            auto tx = table(bx, universe), ty = table(by, universe);
            std::vector<char> tu, ti, tc, ts;
            for (std::size_t i = 0; i < universe.size(); ++i) {
                tu.push_back(tx[i] || ty[i]);
                ti.push_back(tx[i] && ty[i]);
                tc.push_back(!tx[i]);
                ts.push_back(tx[i] && !ty[i]);
            }
            ASSERT_EQ(table(X.words(), universe), tx);
            ASSERT_EQ(table(unite(X, Y).words(), universe), tu);
            ASSERT_EQ(table(intersect(X, Y).words(), universe), ti);
            ASSERT_EQ(table(complement(X).words(), universe), tc);
            ASSERT_EQ(table(subtract(X, Y).words(), universe), ts);
            bool sub = true, dis = true;
            for (std::size_t i = 0; i < universe.size(); ++i) sub = sub && (!tx[i] || ty[i]), dis = dis && !(tx[i] && ty[i]);
            ASSERT_EQ(is_subset(X, Y), sub);
            ASSERT_EQ(disjoint(X, Y), dis);
        }
    }
    EXPECT_EQ(cases, 10000);
}

TEST(BoxSet, EqualTablesMeanEqualSets) {
    std::mt19937 g(99);
    auto universe = words_of_length(2, 4);
    for (int t = 0; t < 2000; ++t) {
        auto bx = random_boxes(2, 3, 3, g), by = random_boxes(2, 3, 3, g);
        if (table(bx, universe) == table(by, universe)) EXPECT_EQ(BoxSet(2, bx), BoxSet(2, by));
        else EXPECT_NE(BoxSet(2, bx), BoxSet(2, by));
    }
}

TEST(BoxSet, FastPredicatesAgreeWithAlgebra) {
    std::mt19937 g(17);
    for (int t = 0; t < 3000; ++t) {
        int k = 2 + t % 2;
        BoxSet S(k, random_boxes(k, 3, 1 + static_cast<int>(g() % 4), g));
        Word w = random_word(k, static_cast<int>(g() % 4), g);
        BoxSet C = BoxSet::cylinder(k, w);
        EXPECT_EQ(covers(S, w), is_subset(C, S));
        EXPECT_EQ(meets(S, w), !disjoint(S, C));
        EXPECT_EQ(within(S, w), is_subset(S, C));
        EXPECT_EQ(within_complement(S, w), disjoint(S, C));
    }
}

TEST(BoxSet, TranslationMatchesLeftMultiplication) {
    std::mt19937 g(8);
    const int k = 2;
    for (int t = 0; t < 300; ++t) {
        Word h = random_word(k, static_cast<int>(g() % 3), g);
        auto bx = random_boxes(k, 3, 1 + static_cast<int>(g() % 3), g);
        BoxSet S(k, bx), T = translate(h, S);
        // a deep cylinder x lies in h.S iff h^-1 x lies in S
        auto universe = words_of_length(k, static_cast<int>(h.size()) + 4);
        for (auto& x : universe) {
            Word y = concat(invert(h), x);
            bool in = false;
            for (auto& b : bx) in = in || starts_with(y, b);
            ASSERT_EQ(T.contains(x), in) << format_word(h) << " " << format_word(x);
        }
    }
}

TEST(EndsMap, IdentityAndPartition) {
    EndsMap id = ends_map_from(Automorphism::identity(3));
    for (Letter x : all_letters(3)) EXPECT_EQ(id.letter_image(x), BoxSet::cylinder(3, {x}));
    EXPECT_FALSE(partition_check(id).has_value());
    // a broken map: two letter images overlap
    EndsMap bad(Automorphism::identity(2), {BoxSet::cylinder(2, {1}), BoxSet::cylinder(2, {1, 1})});
    auto v = partition_check(bad);
    ASSERT_TRUE(v.has_value());
    EXPECT_TRUE(v->overlap);
}

TEST(EndsMap, RankTwoPointsExample) {
    EndsMap f = ends_map_from_sigma(rank2);
    EXPECT_EQ(f.letter_image(1), subtract(box(2, {"a"}), box(2, {"aB"})));
    EXPECT_EQ(f.letter_image(2), subtract(box(2, {"b"}), box(2, {"bAB", "bAA"})));
    EXPECT_FALSE(partition_check(f).has_value());
    // the points route is the ends map of the inverse
    EXPECT_EQ(f.letter_images(), ends_map_from(rank2.inverse()).letter_images());
}

TEST(EndsMap, RankThreeExampleAndEquivariance) {
    EndsMap f = ends_map_from(rank3);
    EXPECT_EQ(f.letter_image(1), box(3, {"b"}));
    EXPECT_EQ(f.letter_image(2), subtract(box(3, {"c"}), box(3, {"cAB"})));
    EXPECT_EQ(f.letter_image(3), subtract(box(3, {"a"}), box(3, {"aC"})));
    EXPECT_EQ(f.letter_image(-2), box(3, {"aC", "B"}));
    EXPECT_FALSE(partition_check(f).has_value());
}

TEST(EndsMap, CubeMatchesTable) {
    EndsMap f3 = power_ends(ends_map_from(rank3), 3);
    EXPECT_EQ(f3.letter_image(1), subtract(box(3, {"a"}), box(3, {"aC", "acABB", "acABaC"})));
    EXPECT_EQ(f3.letter_image(2), subtract(box(3, {"b"}), box(3, {"baCA", "baCC", "baCacABaCB", "baCacABaCaC", "baCacABaCbaCC", "baCacABaCbaCA"})));
    EXPECT_EQ(f3.letter_image(3), subtract(box(3, {"c"}), box(3, {"cAB", "cAbaCAC", "cAbaCAA", "cAbaCAcAB"})));
    EXPECT_EQ(f3.letter_image(1).display(), "a - aC - acABB - acABaC");
    // composing ends maps is the ends map of the composed automorphism
    EXPECT_EQ(f3.letter_images(), ends_map_from(power(rank3, 3)).letter_images());
    EXPECT_EQ(f3.aut(), power(rank3, 3));
}

TEST(EndsMap, RandomAutomorphismsGivePartitionsAndConsistentCylinders) {
    std::mt19937 g(31);
    for (int t = 0; t < 150; ++t) {
        int k = 2 + t % 2;
        Automorphism phi = random_automorphism(k, 1 + static_cast<int>(g() % 6), g);
        EndsMap f = ends_map_from(phi);
        ASSERT_FALSE(partition_check(f).has_value());
        ASSERT_EQ(f.letter_images(), ends_map_from_sigma(phi.inverse()).letter_images());
        EndsMap back = ends_map_from(phi.inverse());
        for (int s = 0; s < 5; ++s) {
            Word w = random_word(k, 1 + static_cast<int>(g() % 3), g);
            ASSERT_EQ(f.cylinder_image(w), f.cylinder_image_last(w));
            // the inverse map undoes the forward one
            ASSERT_EQ(back.image(f.cylinder_image(w)), BoxSet::cylinder(k, w));
        }
    }
}
