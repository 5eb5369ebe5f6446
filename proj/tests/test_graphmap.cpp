#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "gcore/graphmap.hpp"
#include "support.hpp"

using namespace gcore;
using gtest_support::random_word;

namespace {

const RoseMap fib = RoseMap::parse({"ab", "a"});
const RoseMap parageo = RoseMap::parse({"ac", "a", "b"});
const RoseMap intro = RoseMap::parse({"b", "c", "ab"});
const RoseMap intro_inv = RoseMap::parse({"cA", "a", "b"});
const RoseMap rank3 = RoseMap::parse({"baC", "cA", "a"});

double eigen_lambda(const std::vector<std::vector<long long>>& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = static_cast<double>(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    double best = 0;
    for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, std::abs(es.eigenvalues()[i]));
    return best;
}

// sigma^m(e) without tightening, for m = 1..reps
bool raw_iterates_reduced(const RoseMap& s, int reps) {
    for (int e = 1; e <= s.rank(); ++e) {
        Word w{e};
        for (int m = 0; m < reps; ++m) {
            w = s.apply_raw(w);
            if (!is_reduced(w)) return false;
        }
    }
    return true;
}

// Longest genuine divergence of images of legal words through an illegal
// turn, over words of at most `len` letters.
Real bcc_by_enumeration(const RoseMap& s, int len) {
    GateStructure g = gates(s);
    TransitionData t = transition(s);
    std::function<void(Word&, std::vector<Word>&)> grow = [&](Word& w, std::vector<Word>& out) {
        out.push_back(w);
        if (static_cast<int>(w.size()) == len) return;
        for (int i = 1; i <= s.rank(); ++i)
            for (Letter y : {i, -i})
                if (g.legal_step(w.back(), y)) {
                    w.push_back(y);
                    grow(w, out);
                    w.pop_back();
                }
    };
    Real best = 0;
    for (auto [u1, u2] : g.illegal_turns) {
        std::vector<Word> a, b;
        Word x{u1}, y{u2};
        grow(x, a);
        grow(y, b);
        for (auto& p : a)
            for (auto& q : b) {
                Word ip = s.apply_raw(p), iq = s.apply_raw(q);
                std::size_t c = 0;
                while (c < ip.size() && c < iq.size() && ip[c] == iq[c]) ++c;
                if (c == ip.size() || c == iq.size()) continue;  // not yet diverged
                best = std::max(best, t.length(Word(ip.begin(), ip.begin() + static_cast<std::ptrdiff_t>(c))));
            }
    }
    return best;
}

InpSearch search(const RoseMap& s) {
    GateStructure g = gates(s);
    TransitionData t = transition(s);
    Real cc = critical_constant(bcc(s, g, t).value, t.lambda);
    return find_inps(s, 2 * s.rank(), 2 * cc);
}

}  // namespace

TEST(Transition, GoldenRatioForFibonacci) {
    TransitionData t = transition(fib);
    const Real golden = (1 + std::sqrt(5.0L)) / 2;
    EXPECT_NEAR(static_cast<double>(t.lambda), static_cast<double>(golden), 1e-12);
    EXPECT_NEAR(static_cast<double>(t.length(1)), static_cast<double>(1 / golden), 1e-12);
    EXPECT_NEAR(static_cast<double>(t.length(1) + t.length(2)), 1.0, 1e-15);
    EXPECT_LE(t.lambda_lo, t.lambda);
    EXPECT_GE(t.lambda_hi, t.lambda);
    EXPECT_TRUE(t.irreducible);
}

TEST(Transition, MatchesDenseEigenSolver) {
    for (const RoseMap* s : {&fib, &parageo, &intro, &intro_inv, &rank3}) {
        TransitionData t = transition(*s);
        EXPECT_NEAR(static_cast<double>(t.lambda), eigen_lambda(t.matrix), 1e-9);
        // PF lengths are an eigenvector: lambda l_e = sum over e' of crossings
        for (int e = 1; e <= s->rank(); ++e) {
            Real lhs = t.lambda * t.length(e), rhs = t.length(s->image(e));
            EXPECT_NEAR(static_cast<double>(lhs), static_cast<double>(rhs), 1e-12);
        }
    }
}

TEST(Transition, PowersMultiplyTheExpansionFactor) {
    for (const RoseMap* s : {&intro, &parageo}) {
        Real l = transition(*s).lambda;
        for (int n = 1; n <= 5; ++n) {
            Real ln = transition(s->power(n)).lambda;
            EXPECT_LT(std::fabs(ln - std::pow(l, static_cast<Real>(n))) / ln, 1e-9L);
        }
    }
}

TEST(Transition, ExpansionFactorsOfTheIntroPair) {
    EXPECT_NEAR(static_cast<double>(transition(intro).lambda), 1.3247, 1e-3);
    EXPECT_NEAR(static_cast<double>(transition(intro_inv).lambda), 1.4656, 1e-3);
}

TEST(Transition, ReducibleMatrixIsFlagged) {
    EXPECT_FALSE(matrix_irreducible({{1, 0}, {1, 1}}));
    EXPECT_TRUE(matrix_irreducible({{0, 1}, {1, 0}}));
}

TEST(Gates, ParageometricExample) {
    GateStructure g = gates(parageo);
    EXPECT_EQ(g.classes.size(), 4u);
    EXPECT_EQ(g.gate_of(1), g.gate_of(2));
    EXPECT_EQ(g.gate_of(2), g.gate_of(3));
    EXPECT_NE(g.gate_of(-1), g.gate_of(-2));
    EXPECT_EQ(g.illegal_turns.size(), 3u);
    EXPECT_TRUE(is_train_track(parageo).ok);
}

TEST(Gates, NonTrainTrackTurnIsReported) {
    RoseMap s = RoseMap::parse({"aB", "ba"});
    TrainTrackCheck c = is_train_track(s);
    EXPECT_FALSE(c.ok);
    EXPECT_EQ(c.edge, 1);
    EXPECT_EQ(c.position, 1u);
    EXPECT_FALSE(raw_iterates_reduced(s, 5));
}

TEST(Gates, TrainTrackAgreesWithRawIterates) {
    std::mt19937 g(4);
    int tt = 0, not_tt = 0;
    for (int t = 0; t < 400; ++t) {
        int k = 2 + t % 2;
        std::vector<Word> im;
        for (int e = 1; e <= k; ++e) im.push_back(random_word(k, 1 + static_cast<int>(g() % 3), g));
        RoseMap s(im);
        bool ok = is_train_track(s).ok;
        EXPECT_EQ(ok, raw_iterates_reduced(s, 2 * k + 1)) << format_word(im[0]) << "," << format_word(im[1]);
        (ok ? tt : not_tt)++;
    }
    EXPECT_GT(tt, 20);
    EXPECT_GT(not_tt, 20);
}

TEST(Cancellation, BoundsOfTheExamples) {
    for (const RoseMap* s : {&fib, &parageo, &intro, &intro_inv}) {
        GateStructure g = gates(*s);
        TransitionData t = transition(*s);
        BccResult b = bcc(*s, g, t);
        EXPECT_NEAR(static_cast<double>(b.value), static_cast<double>(bcc_by_enumeration(*s, 6)), 1e-12);
        EXPECT_NEAR(static_cast<double>(critical_constant(b.value, t.lambda)), 2.0, 1e-9);
    }
    // nongeometric example: the bound is lambda - 1
    TransitionData t = transition(intro);
    EXPECT_NEAR(static_cast<double>(bcc(intro, gates(intro), t).value), static_cast<double>(t.lambda - 1), 1e-12);
    EXPECT_THROW(critical_constant(0.5, 1), graph_error);
}

TEST(Nielsen, ParageometricHasOneOrbit) {
    InpSearch r = search(parageo);
    EXPECT_TRUE(r.complete);
    EXPECT_EQ(r.orbits(), 1u);
    EXPECT_EQ(classify_stable_tree(r), StableTree::geometric);
    TransitionData t = transition(parageo);
    GateStructure g = gates(parageo);
    for (auto& p : r.paths) {
        EXPECT_TRUE(verify_nielsen(parageo, p));
        EXPECT_FALSE(g.legal(p.leg1[0], p.leg2[0]));
        // the fixed point sits where lambda^p L - |fold| = L
        Real lp = std::pow(t.lambda, static_cast<Real>(p.period));
        EXPECT_NEAR(static_cast<double>(lp * p.leg_length - t.length(p.fold)), static_cast<double>(p.leg_length), 1e-9);
        for (const Word* leg : {&p.leg1, &p.leg2}) {
            EXPECT_GT(p.leg_length, t.length(Word(leg->begin(), leg->end() - 1)));
            EXPECT_LE(p.leg_length, t.length(*leg) + 1e-12L);
        }
    }
}

TEST(Nielsen, FibonacciHasOnePath) {
    InpSearch r = search(fib);
    ASSERT_EQ(r.paths.size(), 1u);
    EXPECT_EQ(r.orbits(), 1u);
    EXPECT_TRUE(verify_nielsen(fib, r.paths[0]));
    EXPECT_EQ(classify_stable_tree(r), StableTree::geometric);
}

TEST(Nielsen, IntroExampleHasNone) {
    InpSearch r = search(intro);
    EXPECT_TRUE(r.complete);
    EXPECT_TRUE(r.paths.empty());
    EXPECT_EQ(classify_stable_tree(r), StableTree::nongeometric);
}

TEST(Nielsen, TinyBudgetIsInconclusive) {
    InpSearch r = find_inps(intro, 6, 4, 10);
    EXPECT_FALSE(r.complete);
    EXPECT_EQ(classify_stable_tree(r), StableTree::inconclusive);
}

TEST(Nielsen, TamperedPathFailsVerification) {
    InpSearch r = search(fib);
    ASSERT_FALSE(r.paths.empty());
    NielsenPath p = r.paths[0];
    p.fold.push_back(1);
    EXPECT_FALSE(verify_nielsen(fib, p));
    EXPECT_THROW(find_inps(RoseMap::parse({"aB", "ba"}), 2, 2), graph_error);
}

TEST(Legality, RatiosOfLegalAndIllegalPaths) {
    GateStructure g = gates(parageo);
    TransitionData t = transition(parageo);
    Real b = bcc(parageo, g, t).value;
    Word legal = parageo.apply(parageo.apply(Word{1}));
    EXPECT_NEAR(static_cast<double>(leg1(legal, g, t, b)), 1.0, 1e-15);
    EXPECT_NEAR(static_cast<double>(leg2(legal, g, t, 0.1L)), 1.0, 1e-15);
    Word bent = {-1, 2};  // crosses the illegal turn (a, b)
    EXPECT_EQ(g.illegal_count(bent), 1);
    EXPECT_LT(leg1(bent, g, t, b), 1);
    EXPECT_THROW(leg1({}, g, t, b), graph_error);
}
