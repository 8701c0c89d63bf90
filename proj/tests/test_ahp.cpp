#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>

#include "riskflow/ahp.hpp"
#include "riskflow/error.hpp"
#include "riskflow/store.hpp"
#include "support.hpp"

using namespace riskflow;
using testkit::Rng;

namespace {

using MatrixLD = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// Independent oracle: principal eigenvalue from a full long-double
// eigendecomposition (the Perron root is the eigenvalue of largest real part).
long double oracle_lambda(const PairwiseMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    MatrixLD a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto r = m.judgment(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            a(i, j) = r ? static_cast<long double>(r->num) / static_cast<long double>(r->den)
                        : static_cast<long double>(m(static_cast<std::size_t>(i),
                                                     static_cast<std::size_t>(j)));
        }
    }
    Eigen::EigenSolver<MatrixLD> solver(a, false);
    long double best = -1;
    for (Eigen::Index k = 0; k < n; ++k) best = std::max(best, solver.eigenvalues()[k].real());
    return best;
}

PairwiseMatrix from_rows(std::vector<std::vector<double>> rows) {
    std::vector<double> flat;
    for (auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return PairwiseMatrix::from_entries(testkit::item_labels(rows.size()), flat);
}

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

// Fully judges every matrix of a session with the same value above the
// diagonal.
AhpSession judged(AhpSession s, Ratio value) {
    for (const auto& key : s.matrix_keys()) {
        auto& m = s.matrix(key);
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = i + 1; j < m.size(); ++j) m.judge(i, j, value);
        }
    }
    return s;
}

} // namespace

// --- Ratios and matrices ---------------------------------------------------

TEST(Ratio, ParseAndRender) {
    EXPECT_EQ(parse_ratio("3"), (Ratio{3, 1}));
    EXPECT_EQ(parse_ratio("1/5"), (Ratio{1, 5}));
    EXPECT_EQ(to_string(Ratio{3, 1}), "3/1");
    EXPECT_EQ(error_code([] { parse_ratio("x"); }), "InvalidJudgment");
    EXPECT_EQ(error_code([] { parse_ratio("1/0"); }), "InvalidJudgment");
    EXPECT_TRUE((Ratio{1, 9}).on_saaty_scale());
    EXPECT_FALSE((Ratio{10, 1}).on_saaty_scale());
    EXPECT_FALSE((Ratio{2, 3}).on_saaty_scale());
}

TEST(Pairwise, JudgeSetsReciprocalAtomically) {
    PairwiseMatrix m(testkit::item_labels(3));
    EXPECT_FALSE(m.fully_judged());
    m.judge(0, 2, {5, 1});
    EXPECT_EQ(m.judgment(2, 0), (Ratio{1, 5}));
    EXPECT_DOUBLE_EQ(m(0, 2) * m(2, 0), 1.0);
    m.judge(2, 0, {3, 1});
    EXPECT_EQ(m.judgment(0, 2), (Ratio{1, 3}));
}

TEST(Pairwise, JudgmentsOutsideSaatyScaleAreRejected) {
    PairwiseMatrix m(testkit::item_labels(2));
    EXPECT_EQ(error_code([&] { m.judge(0, 1, {10, 1}); }), "InvalidJudgment");
    EXPECT_EQ(error_code([&] { m.judge(0, 0, {3, 1}); }), "InvalidJudgment");
}

TEST(Pairwise, ReciprocityPreservedUnderRandomEdits) {
    Rng rng(8);
    for (int k = 0; k < 50; ++k) {
        const std::size_t n = testkit::uniform(rng, 2, 9);
        PairwiseMatrix m(testkit::item_labels(n));
        for (int e = 0; e < 40; ++e) {
            const std::size_t i = testkit::uniform(rng, 0, n - 1), j = testkit::uniform(rng, 0, n - 1);
            if (i == j) continue;
            m.judge(i, j, testkit::random_saaty(rng));
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    const auto x = m.judgment(a, b), y = m.judgment(b, a);
                    ASSERT_EQ(x.has_value(), y.has_value());
                    if (x) EXPECT_EQ(x->reciprocal(), *y);
                }
            }
        }
    }
}

TEST(Pairwise, FromEntriesValidates) {
    EXPECT_EQ(error_code([] { from_rows({{1, 2}, {0.4, 1}}); }), "InvalidPairwiseMatrix");
    EXPECT_EQ(error_code([] { from_rows({{2, 2}, {0.5, 1}}); }), "InvalidPairwiseMatrix");
    EXPECT_EQ(error_code([] { from_rows({{1, -1}, {-1, 1}}); }), "InvalidPairwiseMatrix");
    EXPECT_NO_THROW(from_rows({{1, 3}, {1.0 / 3, 1}}));
}

TEST(Pairwise, SizeAndLabels) {
    EXPECT_THROW(PairwiseMatrix(testkit::item_labels(16)), Error);
    EXPECT_THROW(PairwiseMatrix(std::vector<std::string>{"a", "a"}), Error);
    EXPECT_THROW(PairwiseMatrix(std::vector<std::string>{"a", " "}), Error);
    EXPECT_NO_THROW(PairwiseMatrix(testkit::item_labels(15)));
}

// --- Priority vector --------------------------------------------------------

TEST(Priority, AllOnesIsUniform) {
    const auto w = priority_vector(from_rows({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
    for (double x : w.weights) EXPECT_NEAR(x, 1.0 / 3, 1e-12);
}

TEST(Priority, ConsistentThreeByThree) {
    const auto w = priority_vector(from_rows({{1, 2, 4}, {0.5, 1, 2}, {0.25, 0.5, 1}}));
    EXPECT_NEAR(w.weights[0], 4.0 / 7, 1e-9);
    EXPECT_NEAR(w.weights[1], 2.0 / 7, 1e-9);
    EXPECT_NEAR(w.weights[2], 1.0 / 7, 1e-9);
}

TEST(Priority, TwoByTwo) {
    PairwiseMatrix m(std::vector<std::string>{"3", "7"});
    m.judge(0, 1, {3, 1});
    const auto w = priority_vector(m);
    EXPECT_NEAR(w.weights[0], 0.75, 1e-9);
    EXPECT_NEAR(w.weights[1], 0.25, 1e-9);
}

TEST(Priority, UnjudgedMatrixIsRejected) {
    PairwiseMatrix m(testkit::item_labels(3));
    m.judge(0, 1, {2, 1});
    EXPECT_EQ(error_code([&] { priority_vector(m); }), "InvalidPairwiseMatrix");
}

TEST(PriorityProperty, RecoversWeightsOfConsistentMatrices) {
    Rng rng(1234);
    for (int k = 0; k < 300; ++k) {
        const std::size_t n = testkit::uniform(rng, 2, 9);
        const auto c = testkit::random_consistent(rng, n);
        const auto w = priority_vector(c.matrix);
        double sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(w.weights[i], c.weights[i], 1e-6);
            sum += w.weights[i];
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
        EXPECT_LE(consistency(c.matrix).cr, 1e-6);
    }
}

TEST(PriorityProperty, PermutationEquivariance) {
    Rng rng(77);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = testkit::uniform(rng, 2, 9);
        const auto m = testkit::random_reciprocal(rng, n);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        const auto p = m.permuted(order);
        const auto w = priority_vector(m), wp = priority_vector(p);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(wp.weights[i], w.weights[order[i]], 1e-12);
        EXPECT_EQ(p.labels()[0], m.labels()[order[0]]);
    }
}

// --- Consistency ------------------------------------------------------------

TEST(Consistency, RandomIndexTable) {
    const double expected[] = {0, 0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41,
                               1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59};
    for (std::size_t n = 1; n <= 15; ++n) EXPECT_DOUBLE_EQ(random_index(n), expected[n - 1]);
}

TEST(Consistency, AllOnesFourByFour) {
    const auto r = consistency(
        from_rows({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}}));
    EXPECT_NEAR(r.lambda_max, 4.0, 1e-12);
    EXPECT_NEAR(r.ci, 0.0, 1e-12);
    EXPECT_NEAR(r.cr, 0.0, 1e-12);
    EXPECT_TRUE(r.acceptable);
}

TEST(Consistency, ConsistentThreeByThreeHasZeroCr) {
    EXPECT_NEAR(consistency(from_rows({{1, 2, 4}, {0.5, 1, 2}, {0.25, 0.5, 1}})).cr, 0.0, 1e-9);
}

TEST(Consistency, InconsistentThreeByThreeMatchesClosedForm) {
    PairwiseMatrix m(testkit::item_labels(3));
    m.judge(0, 1, {1, 1});
    m.judge(0, 2, {9, 1});
    m.judge(1, 2, {1, 9});
    // For a 3x3 reciprocal matrix the characteristic polynomial is
    // l^3 - 3 l^2 - (t + 1/t - 2) = 0 with t = a12 a23 / a13, whose Perron
    // root is 1 + t^(1/3) + t^(-1/3).
    const double t = 1.0 * (1.0 / 9) / 9;
    const double lambda = 1 + std::cbrt(t) + 1 / std::cbrt(t);
    const auto r = consistency(m);
    EXPECT_NEAR(r.lambda_max, lambda, 1e-9);
    EXPECT_NEAR(r.ci, (lambda - 3) / 2, 1e-9);
    EXPECT_NEAR(r.cr, (lambda - 3) / 2 / 0.58, 1e-9);
    EXPECT_GT(r.cr, 0.10);
    EXPECT_FALSE(r.acceptable);
    EXPECT_NEAR(static_cast<double>(oracle_lambda(m)), lambda, 1e-9);
}

TEST(ConsistencyProperty, LambdaMatchesEigenOracle) {
    Rng rng(4321);
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = testkit::uniform(rng, 2, 9);
        const auto m = testkit::random_reciprocal(rng, n);
        const auto r = consistency(m);
        const double diff = std::abs(r.lambda_max - static_cast<double>(oracle_lambda(m)));
        worst = std::max(worst, diff);
        EXPECT_LE(diff, 1e-8) << "n=" << n;
        EXPECT_GE(r.lambda_max, static_cast<double>(n) - 1e-9);
        EXPECT_GE(r.ci, -1e-9);
        EXPECT_GE(r.cr, -1e-9);
    }
    RecordProperty("worst_lambda_error", std::to_string(worst));
}

// --- Synthesis ----------------------------------------------------------------

TEST(Synthesize, SingleCriterionIsIdentity) {
    const PriorityVector local{{0.2, 0.5, 0.3}};
    const auto g = synthesize(PriorityVector{{1.0}}, std::vector<PriorityVector>{local});
    EXPECT_EQ(g, local.weights);
}

TEST(Synthesize, WeightedSum) {
    const auto g = synthesize(PriorityVector{{0.6, 0.4}},
                              std::vector<PriorityVector>{{{0.5, 0.5}}, {{0.25, 0.75}}});
    EXPECT_NEAR(g[0], 0.4, 1e-12);
    EXPECT_NEAR(g[1], 0.6, 1e-12);
}

TEST(Synthesize, UniformCriteriaGiveMean) {
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
        const std::size_t crit = testkit::uniform(rng, 1, 5), alts = testkit::uniform(rng, 2, 6);
        std::vector<PriorityVector> local;
        for (std::size_t c = 0; c < crit; ++c) {
            local.push_back(priority_vector(testkit::random_reciprocal(rng, alts)));
        }
        const auto g = synthesize(PriorityVector{std::vector<double>(crit, 1.0 / crit)}, local);
        double total = 0;
        for (std::size_t a = 0; a < alts; ++a) {
            double mean = 0;
            for (const auto& l : local) mean += l.weights[a];
            EXPECT_NEAR(g[a], mean / crit, 1e-12);
            total += g[a];
        }
        EXPECT_NEAR(total, 1.0, 1e-9);
    }
}

TEST(Synthesize, DimensionMismatch) {
    EXPECT_EQ(error_code([] {
                  synthesize(PriorityVector{{0.5, 0.5}}, std::vector<PriorityVector>{{{1.0}}});
              }),
              "DimensionMismatch");
}

// --- Tie groups -----------------------------------------------------------------

TEST(Ties, SeedGroups) {
    const Register reg = seed_case_study();
    const auto groups = find_tie_groups(reg.cases);
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0], (TieGroup{Rating::Critical, {3, 7}}));
    const std::vector<Rating> high{Rating::High};
    const auto h = find_tie_groups(reg.cases, high);
    ASSERT_EQ(h.size(), 1u);
    EXPECT_EQ(h[0], (TieGroup{Rating::High, {1, 2}}));
    const std::vector<Rating> all(kRatings.begin(), kRatings.end());
    const auto every = find_tie_groups(reg.cases, all);
    ASSERT_EQ(every.size(), 3u);  // C {3,7}, H {1,2}, L {5,6}; M has one case
    EXPECT_EQ(every[0].level, Rating::Critical);
    EXPECT_EQ(every[2], (TieGroup{Rating::Low, {5, 6}}));
}

TEST(Ties, DistinctRatingsGiveNoGroups) {
    Register reg = seed_case_study();
    std::vector<RiskCase> distinct;
    for (CaseId id : {1, 3, 4, 5}) distinct.push_back(reg.get_case(id));
    const std::vector<Rating> all(kRatings.begin(), kRatings.end());
    EXPECT_TRUE(find_tie_groups(distinct, all).empty());
}

// --- Sessions -------------------------------------------------------------------

TEST(Session, ThreeTimesSevenGivesThreeQuarters) {
    AhpSession s = make_session(1, Rating::Critical, {3, 7}, {"impact"});
    EXPECT_EQ(s.status, SessionStatus::Draft);
    EXPECT_EQ(s.matrix("criteria").size(), 1u);
    s.matrix("impact").judge(0, 1, {3, 1});
    const auto done = rank_session(s);
    ASSERT_TRUE(done.result);
    EXPECT_EQ(done.status, SessionStatus::Complete);
    ASSERT_EQ(done.result->ranking.size(), 2u);
    EXPECT_EQ(done.result->ranking[0].case_id, 3u);
    EXPECT_NEAR(done.result->ranking[0].score, 0.75, 1e-9);
    EXPECT_EQ(done.result->ranking[1].case_id, 7u);
    EXPECT_NEAR(done.result->ranking[1].score, 0.25, 1e-9);
}

TEST(Session, UniformJudgmentsRankByCaseId) {
    const auto done = rank_session(judged(make_session(1, Rating::Critical, {9, 4, 6}, {"a", "b"}),
                                          {1, 1}));
    std::vector<CaseId> order;
    for (const auto& r : done.result->ranking) order.push_back(r.case_id);
    EXPECT_EQ(order, (std::vector<CaseId>{4, 6, 9}));
    for (const auto& r : done.result->ranking) EXPECT_NEAR(r.score, 1.0 / 3, 1e-12);
}

TEST(Session, IncompleteAndInconsistent) {
    AhpSession s = make_session(1, Rating::Critical, {1, 2, 3}, {"impact"});
    try {
        rank_session(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "SessionIncomplete");
        EXPECT_EQ(e.details()["matrices"], nlohmann::json::array({"impact"}));
    }
    auto& m = s.matrix("impact");
    m.judge(0, 1, {1, 1});
    m.judge(0, 2, {9, 1});
    m.judge(1, 2, {1, 9});
    try {
        rank_session(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "InconsistentJudgments");
        EXPECT_EQ(e.details()["matrix"], "impact");
        EXPECT_GT(e.details()["cr"].get<double>(), 0.10);
    }
    s.overrides.push_back({"impact", "team accepts"});
    EXPECT_EQ(rank_session(s).status, SessionStatus::Complete);
}

TEST(Session, ModerateInconsistencyIsBlocked) {
    // CR around 0.25 on four items.
    AhpSession s = make_session(1, Rating::Critical, {1, 2, 3, 4}, {"impact"});
    auto& m = s.matrix("impact");
    m.judge(0, 1, {3, 1});
    m.judge(0, 2, {1, 3});
    m.judge(0, 3, {5, 1});
    m.judge(1, 2, {3, 1});
    m.judge(1, 3, {1, 2});
    m.judge(2, 3, {4, 1});
    const double cr = consistency(m).cr;
    EXPECT_GT(cr, 0.10);
    EXPECT_EQ(error_code([&] { rank_session(s); }), "InconsistentJudgments");
}

TEST(Session, Validation) {
    EXPECT_EQ(error_code([] { make_session(1, Rating::Critical, {3}, {"x"}); }), "InvalidTieGroup");
    EXPECT_EQ(error_code([] { make_session(1, Rating::Critical, {3, 3}, {"x"}); }), "InvalidTieGroup");
    EXPECT_EQ(error_code([] { make_session(1, Rating::Critical, {3, 7}, {}); }), "InvalidCriteria");
    EXPECT_EQ(error_code([] { make_session(1, Rating::Critical, {3, 7}, {"criteria"}); }),
              "InvalidCriteria");
    AhpSession s = make_session(1, Rating::Critical, {3, 7}, {"x"});
    EXPECT_EQ(error_code([&] { s.matrix("nope"); }), "UnknownMatrix");
    EXPECT_EQ(resolve_item(s.matrix("x"), "7"), 1u);
    EXPECT_EQ(resolve_item(s.matrix("x"), "1"), 0u);
    EXPECT_EQ(error_code([&] { resolve_item(s.matrix("x"), "5"); }), "UnknownItem");
}

TEST(SessionProperty, RankingInvariantUnderTieGroupOrder) {
    Rng rng(31);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n = testkit::uniform(rng, 2, 6);
        std::vector<CaseId> ids;
        for (std::size_t i = 0; i < n; ++i) ids.push_back(static_cast<CaseId>(10 + 3 * i));
        AhpSession a = make_session(1, Rating::Critical, ids, {"c1", "c2"});
        for (const auto& key : a.matrix_keys()) {
            auto& m = a.matrix(key);
            for (std::size_t i = 0; i < m.size(); ++i) {
                for (std::size_t j = i + 1; j < m.size(); ++j) m.judge(i, j, testkit::random_saaty(rng));
            }
            a.overrides.push_back({key, "accepted"});
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<CaseId> shuffled;
        for (auto o : order) shuffled.push_back(ids[o]);
        AhpSession b = make_session(1, Rating::Critical, shuffled, {"c1", "c2"});
        b.criteria = a.criteria;
        for (std::size_t c = 0; c < a.alternatives.size(); ++c) {
            b.alternatives[c] = a.alternatives[c].permuted(order);
        }
        b.overrides = a.overrides;
        const auto ra = rank_session(a).result->ranking, rb = rank_session(b).result->ranking;
        ASSERT_EQ(ra.size(), rb.size());
        for (std::size_t i = 0; i < ra.size(); ++i) {
            EXPECT_EQ(ra[i].case_id, rb[i].case_id);
            EXPECT_NEAR(ra[i].score, rb[i].score, 1e-12);
        }
    }
}
