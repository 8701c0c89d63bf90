#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "riskflow/error.hpp"
#include "riskflow/register.hpp"
#include "riskflow/store.hpp"
#include "riskflow/workbench.hpp"
#include "support.hpp"

using namespace riskflow;

namespace {

const Timestamp kNow = parse_timestamp("2024-05-01T12:00:00Z");

Mutation open_mutation() {
    return {"team", "iteration.open", [](Register& r) {
                open_iteration(r, 21, kNow);
                return std::string("opened");
            }};
}

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

} // namespace

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Audit, EntryHashOverNetstringEncoding) {
    const AuditEntry e = make_entry({}, kNow, "team", "case.add", "case 1: profile recorded");
    EXPECT_EQ(e.seq, 1u);
    EXPECT_EQ(e.prev_hash, std::string(64, '0'));
    const std::string encoded = "1:1,20:2024-05-01T12:00:00Z,4:team,8:case.add,24:case 1: profile recorded,64:" +
                                std::string(64, '0') + ",";
    EXPECT_EQ(e.entry_hash, sha256_hex(encoded));
    EXPECT_EQ(e.entry_hash.size(), 64u);
}

TEST(Audit, ChainVerifiesAndLocatesTampering) {
    std::vector<AuditEntry> log;
    for (int i = 0; i < 5; ++i) {
        log.push_back(make_entry(log, kNow, "team", "op", "entry " + std::to_string(i + 1)));
    }
    EXPECT_NO_THROW(verify_chain(log));
    for (std::size_t target = 0; target < log.size(); ++target) {
        auto bad = log;
        bad[target].summary += "!";
        try {
            verify_chain(bad);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), "AuditChainBroken");
            EXPECT_EQ(e.details()["seq"], target + 1);
        }
    }
    auto reordered = log;
    std::swap(reordered[1], reordered[2]);
    EXPECT_EQ(error_code([&] { verify_chain(reordered); }), "AuditChainBroken");
    auto truncated_front = std::vector<AuditEntry>(log.begin() + 1, log.end());
    EXPECT_EQ(error_code([&] { verify_chain(truncated_front); }), "AuditChainBroken");
}

TEST(Commit, BumpsRevisionAndAppendsOneEntry) {
    const Register base;
    const Register next = commit(base, 0, open_mutation(), kNow);
    EXPECT_EQ(next.revision, 1u);
    ASSERT_EQ(next.audit_log.size(), 1u);
    EXPECT_EQ(next.audit_log[0].operation, "iteration.open");
    EXPECT_EQ(next.audit_log[0].actor, "team");
    EXPECT_EQ(next.audit_log[0].summary, "opened");
    EXPECT_NO_THROW(verify_chain(next.audit_log));
}

TEST(Commit, FailedMutationLeavesNoTrace) {
    const Register base = commit(Register{}, 0, open_mutation(), kNow);
    const Register copy = base;
    EXPECT_EQ(error_code([&] { commit(base, 1, open_mutation(), kNow); }), "IterationAlreadyOpen");
    EXPECT_EQ(base, copy);
}

TEST(Commit, StaleRevision) {
    const Register base = commit(Register{}, 0, open_mutation(), kNow);
    try {
        commit(base, 0, open_mutation(), kNow);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "StaleRevision");
        EXPECT_EQ(e.details()["expected"], 1);
        EXPECT_EQ(e.details()["got"], 0);
    }
}

TEST(Handle, SecondCommitFromSameBaseIsStale) {
    RegisterHandle handle(Register{}, [] { return kNow; });
    handle.commit(0, open_mutation());
    EXPECT_EQ(error_code([&] { handle.commit(0, open_mutation()); }), "StaleRevision");
    EXPECT_EQ(handle.snapshot()->revision, 1u);
}

TEST(Handle, SnapshotsAreImmutable) {
    RegisterHandle handle(Register{}, [] { return kNow; });
    const auto before = handle.snapshot();
    handle.commit(0, open_mutation());
    EXPECT_EQ(before->revision, 0u);
    EXPECT_TRUE(before->iterations.empty());
    EXPECT_EQ(handle.snapshot()->iterations.size(), 1u);
}

TEST(Handle, FailingHookAbortsCommit) {
    RegisterHandle handle(Register{}, [] { return kNow; },
                          [](const Register&) { throw Error("WriteFailed", "disk full"); });
    EXPECT_EQ(error_code([&] { handle.commit(0, open_mutation()); }), "WriteFailed");
    EXPECT_EQ(handle.snapshot()->revision, 0u);
}

TEST(Handle, RacingCommitsFromOneRevisionExactlyOneWins) {
    for (int round = 0; round < 20; ++round) {
        Workbench wb(seed_case_study(), testkit::step_clock());
        const auto rev = wb.snapshot()->revision;
        std::atomic<int> ok{0}, stale{0};
        std::vector<std::thread> threads;
        for (int t = 0; t < 8; ++t) {
            threads.emplace_back([&, t] {
                try {
                    const Likelihood l = kLikelihoods[static_cast<std::size_t>(t) % 5];
                    wb.set_matrix(rev, "racer " + std::to_string(t),
                                  default_matrix().with_identity("race", 1));
                    (void)l;
                    ++ok;
                } catch (const Error& e) {
                    if (e.code() == "StaleRevision") ++stale;
                }
            });
        }
        for (auto& th : threads) th.join();
        EXPECT_EQ(ok, 1);
        EXPECT_EQ(stale, 7);
        EXPECT_EQ(wb.snapshot()->revision, rev + 1);
        EXPECT_NO_THROW(verify_chain(wb.snapshot()->audit_log));
    }
}

TEST(Invariants, SeedAndRandomRegistersPass) {
    EXPECT_NO_THROW(check_invariants(seed_case_study()));
    testkit::Rng rng(3);
    for (int k = 0; k < 20; ++k) EXPECT_NO_THROW(check_invariants(testkit::random_register(rng)));
}

TEST(Invariants, DetectsCorruptedState) {
    const Register seed = seed_case_study();
    auto expect_violation = [](Register r) {
        EXPECT_EQ(error_code([&] { check_invariants(r); }), "InvariantViolation");
    };
    {
        Register r = seed;
        r.cases[1].case_id = r.cases[0].case_id;
        expect_violation(r);
    }
    {
        Register r = seed;
        r.cases[0].history[1].documentation = "  ";
        expect_violation(r);
    }
    {
        Register r = seed;
        auto& a = std::get<RiskAssessment>(r.cases[0].history[1].payload);
        a.rating = Rating::Low;  // disagrees with the matrix
        expect_violation(r);
    }
    {
        Register r = seed;
        r.iterations.push_back(r.iterations[0]);  // duplicate index, two open
        expect_violation(r);
    }
    {
        Register r = seed;
        r.revision = 3;  // fewer than audit entries
        expect_violation(r);
    }
    {
        Register r = seed;
        r.matrix = default_matrix().with_cell(Likelihood::VeryHigh, Severity::Critical, Rating::Low);
        expect_violation(r);
    }
}

TEST(Workbench, EveryOperationIsOneCommit) {
    Workbench wb(Register{}, testkit::step_clock());
    testkit::Rng rng(9);
    auto rev = [&] { return wb.snapshot()->revision; };
    std::size_t expected = 0;
    auto check = [&](const std::string& op) {
        ++expected;
        const auto snap = wb.snapshot();
        EXPECT_EQ(snap->revision, expected);
        ASSERT_EQ(snap->audit_log.size(), expected);
        EXPECT_EQ(snap->audit_log.back().operation, op);
    };
    wb.open_iteration(rev(), "team", 21);
    check("iteration.open");
    const CaseId a = wb.add_case(rev(), "team", testkit::random_profile(rng), "doc").value;
    check("case.add");
    const CaseId b = wb.add_case(rev(), "team", testkit::random_profile(rng), "doc").value;
    check("case.add");
    RiskAssessment as = testkit::random_assessment(rng);
    as.likelihood = Likelihood::High;
    as.severity = Severity::Critical;
    wb.record_step(rev(), "team", a, as, "doc");
    check("step.assessment");
    wb.record_step(rev(), "team", b, as, "doc");
    check("step.assessment");
    const auto s = wb.create_session(rev(), "team", {a, b}, {"cost"}).value;
    check("ahp.new");
    wb.judge(rev(), "team", s.id, "cost", std::to_string(a), std::to_string(b), {3, 1});
    check("ahp.judge");
    const auto done = wb.complete_session(rev(), "team", s.id);
    check("ahp.complete");
    EXPECT_EQ(done.value.result->ranking[0].case_id, a);
    EXPECT_NE(wb.snapshot()->audit_log.back().summary.find("ranking"), std::string::npos);
    EXPECT_EQ(error_code([&] { wb.judge(rev(), "team", s.id, "cost", "1", "2", {2, 1}); }),
              "SessionClosed");
    EXPECT_EQ(rev(), expected);
}

TEST(Workbench, SessionGroupMustShareARating) {
    Workbench wb(seed_case_study(), testkit::step_clock());
    const auto rev = wb.snapshot()->revision;
    EXPECT_EQ(error_code([&] { wb.create_session(rev, "team", {1, 3}, {"cost"}); }),
              "InvalidTieGroup");
    EXPECT_EQ(error_code([&] { wb.create_session(rev, "team", {3, 99}, {"cost"}); }),
              "UnknownCase");
    EXPECT_EQ(wb.snapshot()->revision, rev);
    EXPECT_EQ(error_code([&] { wb.override_consistency(rev, "team", 1, "criteria", "x"); }),
              "UnknownSession");
    const auto s = wb.create_session(rev, "team", {3, 7}, {"cost"});
    EXPECT_EQ(error_code([&] {
                  wb.override_consistency(s.reg->revision, "team", s.value.id, "criteria", " ");
              }),
              "JustificationRequired");
}

TEST(Workbench, WhatIfDoesNotMutate) {
    const Register reg = seed_case_study();
    EXPECT_EQ(what_if(reg, 1, Likelihood::VeryHigh, Severity::Critical), Rating::Critical);
    EXPECT_EQ(error_code([&] { what_if(reg, 99, Likelihood::Low, Severity::Low); }), "UnknownCase");
    EXPECT_EQ(reg, seed_case_study());
}
