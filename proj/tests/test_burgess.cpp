#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "ebconst/burgess.hpp"
#include "ebconst/errors.hpp"
#include "ebconst/integers.hpp"
#include "oracle.hpp"

using namespace ebconst;

namespace {

// I(Z/nZ) and D((Z/nZ)^x) for n = 2..36, frozen from exhaustive runs.
// Entries with n in kOracleModuli are recomputed by brute force below.
const std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> kFrozen{
    {2, {1, 1}},   {3, {2, 2}},   {4, {3, 2}},   {5, {4, 4}},   {6, {2, 2}},   {7, {6, 6}},
    {8, {5, 3}},   {9, {7, 6}},   {10, {4, 4}},  {11, {10, 10}}, {12, {4, 3}},  {13, {12, 12}},
    {14, {6, 6}},  {15, {5, 5}},  {16, {8, 5}},  {17, {16, 16}}, {18, {7, 6}},  {19, {18, 18}},
    {20, {6, 5}},  {21, {7, 7}},  {22, {10, 10}}, {23, {22, 22}}, {24, {6, 4}},  {25, {21, 20}},
    {26, {12, 12}}, {27, {20, 18}}, {28, {8, 7}},  {29, {28, 28}}, {30, {5, 5}},  {31, {30, 30}},
    {32, {13, 9}}, {33, {11, 11}}, {34, {16, 16}}, {35, {13, 13}}, {36, {9, 7}}};

const std::vector<std::uint64_t> kOracleModuli{2,  3,  4,  5,  6,  7,  8,  9,  10, 11, 12, 13, 14,
                                               15, 16, 18, 20, 21, 22, 24, 26, 28, 30, 36};

CertifyOptions quick() {
    CertifyOptions o;
    o.trials = 50;
    return o;
}

const CheckResult* find_check(const TheoremCertificate& c, const std::string& name) {
    for (const auto& ch : c.checks)
        if (ch.name == name) return &ch;
    return nullptr;
}

}  // namespace

TEST(Rings, KeysAndLabels) {
    const auto r = parse_ring_key("zmod:12");
    EXPECT_EQ(r.key, "zmod:12");
    EXPECT_EQ(r.omega(), 2u);
    EXPECT_EQ(r.big_omega(), 3u);
    EXPECT_EQ(r.format(Sequence({2, 3, 5})), "(2,3,5)");

    const auto p = parse_ring_key("polyring:2:t^2");
    EXPECT_EQ(p.key, "polyring:2:0,0,1");
    EXPECT_EQ(p.label(3), "t+1");
    EXPECT_EQ(parse_ring_key("polyring:3:2t^2+2").key, "polyring:3:1,0,1");

    EXPECT_THROW(parse_ring_key("zmod"), ParseError);
    EXPECT_THROW(parse_ring_key("zmod:x"), ParseError);
    EXPECT_THROW(parse_ring_key("ring:5"), ParseError);
    EXPECT_THROW(parse_ring_key("polyring:2"), ParseError);
    EXPECT_THROW(parse_ring_key("zmod:1"), DomainError);
    EXPECT_THROW(parse_ring_key("polyring:4:t^2"), DomainError);
    EXPECT_THROW(parse_ring_key("polyring:2:1"), DomainError);
    EXPECT_THROW(parse_ring_key("zmod:5000"), CapacityError);
}

TEST(Rings, ValuationsAndMasks) {
    for (std::uint64_t n = 2; n <= 120; ++n) {
        const auto r = make_zmod(n);
        const auto qsf = quasi_squarefree_mask(r);
        const auto reduced = reduced_candidates(r);
        const auto f = factorize(n);
        for (std::uint64_t x = 0; x < n; ++x) {
            bool expect_qsf = true;
            bool expect_reduced = true;
            for (const auto& [p, k] : f.factors()) {
                if (k >= 2 && x % (p * p) == 0) expect_qsf = false;
                if (k == 1 && x % p == 0) expect_reduced = false;
            }
            ASSERT_EQ(qsf.test(x), expect_qsf) << n << " " << x;
            ASSERT_EQ(reduced.test(x), expect_qsf && expect_reduced) << n << " " << x;
        }
    }
    const auto r12 = make_zmod(12);
    EXPECT_EQ(reduced_candidates(r12).indices(), (std::vector<std::size_t>{1, 2, 5, 7, 10, 11}));
}

TEST(Rings, ReducedModeParsing) {
    EXPECT_EQ(parse_reduced_mode("check"), ReducedMode::check);
    EXPECT_EQ(to_string(ReducedMode::on), "on");
    EXPECT_THROW(parse_reduced_mode("yes"), ParseError);
}

TEST(UnitDavenport, MethodFollowsShape) {
    const auto a = davenport_of_units(make_zmod(24));
    EXPECT_EQ(a.shape, CyclicDecomposition({2, 2, 2}));
    EXPECT_EQ(a.result.method, DavenportMethod::formula);
    EXPECT_EQ(a.result.value, 4u);

    const auto b = davenport_of_units(make_zmod(56));
    EXPECT_EQ(b.shape, CyclicDecomposition({2, 2, 6}));
    EXPECT_EQ(b.result.method, DavenportMethod::exhaustive);
    EXPECT_EQ(b.result.value, 8u);
    EXPECT_EQ(b.ring_witness.size(), 7u);
    // the ring witness has no subsequence with product 1 mod 56
    EXPECT_TRUE(oracle::is_free({b.ring_witness.begin(), b.ring_witness.end()}, oracle::zmod_mul(56),
                                [](std::uint32_t x) { return x == 1; }));

    const auto c = davenport_of_units(make_zmod(12));
    EXPECT_EQ(make_zmod(12).format(c.ring_witness), "(5,7)");
}

TEST(Burgess, SmallExamples) {
    const auto r4 = make_zmod(4);
    const auto b4 = burgess_exhaustive(r4.monoid);
    EXPECT_EQ(b4.value, 3u);
    EXPECT_EQ(r4.format(b4.witness), "(2,3)");
    EXPECT_EQ(burgess_exhaustive(make_zmod(6).monoid).value, 2u);
    const auto r12 = make_zmod(12);
    const auto b12 = burgess_exhaustive(r12.monoid);
    EXPECT_EQ(b12.value, 4u);
    EXPECT_EQ(r12.format(b12.witness), "(2,3,5)");
}

TEST(Burgess, FrozenTable) {
    for (const auto& [n, values] : kFrozen) {
        const auto r = make_zmod(n);
        ASSERT_EQ(burgess_exhaustive(r.monoid).value, values.first) << n;
        ASSERT_EQ(davenport_of_units(r).result.value, values.second) << n;
    }
}

TEST(Burgess, FrozenTableAgreesWithOracle) {
    for (auto n : kOracleModuli) {
        ASSERT_EQ(oracle::erdos_burgess_zmod(n), kFrozen.at(n).first) << n;
        const auto units = oracle::units_zmod(n);
        ASSERT_EQ(oracle::longest_free(static_cast<std::uint32_t>(n), oracle::zmod_mul(n),
                                       [](std::uint32_t x) { return x == 1; },
                                       [&](std::uint32_t x) {
                                           return std::find(units.begin(), units.end(), x) != units.end();
                                       })
                          .length +
                      1,
                  kFrozen.at(n).second)
            << n;
    }
}

TEST(Burgess, PolynomialQuotients) {
    EXPECT_EQ(burgess_exhaustive(parse_ring_key("polyring:2:t^2").monoid).value, 3u);
    const auto split = parse_ring_key("polyring:2:t^2+t");
    EXPECT_EQ(burgess_exhaustive(split.monoid).value, 1u);
    EXPECT_EQ(davenport_of_units(split).result.value, 1u);
    const auto r = parse_ring_key("polyring:3:t^2");
    EXPECT_EQ(davenport_of_units(r).shape, CyclicDecomposition({6}));
    EXPECT_EQ(burgess_exhaustive(r.monoid).value, 7u);
}

TEST(Burgess, CandidateRestrictionHonoured) {
    const auto r = make_zmod(12);
    BurgessOptions opts;
    opts.candidates = r.monoid.units();
    const auto b = burgess_exhaustive(r.monoid, opts);
    EXPECT_EQ(b.value, 3u);  // D of the units
    for (auto x : b.witness) EXPECT_TRUE(r.monoid.units().test(x));
}

TEST(Construction, Examples) {
    const auto r4 = make_zmod(4);
    const auto u4 = davenport_of_units(r4);
    EXPECT_EQ(r4.format(lower_bound_construction(r4, u4.ring_witness, u4.result.value)), "(2,3)");
    const auto r12 = make_zmod(12);
    const auto u12 = davenport_of_units(r12);
    EXPECT_EQ(r12.format(lower_bound_construction(r12, u12.ring_witness, u12.result.value)), "(2,5,7)");
    EXPECT_THROW(lower_bound_construction(r12, Sequence({5}), 3), DomainError);
    EXPECT_THROW(lower_bound_construction(r12, Sequence({2, 5}), 3), DomainError);
}

TEST(Construction, FreeWithExpectedLength) {
    for (std::uint64_t n = 2; n <= 100; ++n) {
        const auto r = make_zmod(n);
        const auto u = davenport_of_units(r);
        const auto s = lower_bound_construction(r, u.ring_witness, u.result.value);
        const auto f = factorize(n);
        ASSERT_EQ(s.size(), u.result.value + f.big_omega() - f.omega() - 1) << n;
        ASSERT_TRUE(oracle::is_free_long({s.begin(), s.end()}, oracle::zmod_mul(n), oracle::zmod_idempotent(n))) << n;
    }
}

TEST(Classify, Tags) {
    const std::vector<std::pair<std::uint64_t, CaseTag>> cases{
        {2, CaseTag::prime_power},  {9, CaseTag::prime_power},  {64, CaseTag::prime_power},
        {30, CaseTag::squarefree},  {6, CaseTag::squarefree},   {18, CaseTag::twice_odd},
        {50, CaseTag::twice_odd},   {90, CaseTag::twice_odd},   {12, CaseTag::two_primes},
        {36, CaseTag::two_primes},  {72, CaseTag::two_primes},  {60, CaseTag::s_pk_upper},
        {180, CaseTag::unproven},   {4 * 9 * 25, CaseTag::unproven}, {2 * 9 * 25, CaseTag::twice_odd}};
    for (const auto& [n, tag] : cases) EXPECT_EQ(classify(make_zmod(n)), tag) << n;
    EXPECT_EQ(classify(parse_ring_key("polyring:2:t^3")), CaseTag::prime_power);
    EXPECT_EQ(classify(parse_ring_key("polyring:2:t^2+t")), CaseTag::squarefree);
    EXPECT_EQ(classify(parse_ring_key("polyring:2:t^4+t^2")), CaseTag::unproven);
    EXPECT_EQ(to_string(CaseTag::s_pk_upper), "sPk-upper");
    EXPECT_EQ(to_string(CaseTag::twice_odd), "twiceOdd");
    EXPECT_FALSE(is_proven(CaseTag::s_pk_upper));
    EXPECT_TRUE(is_proven(CaseTag::two_primes));
}

TEST(Certify, TwiceOddModulus) {
    auto opts = quick();
    opts.reduced_mode = ReducedMode::check;
    const auto c = certify_theorems(18, opts);
    EXPECT_EQ(c.tag, CaseTag::twice_odd);
    EXPECT_EQ(c.status, CertStatus::confirmed);
    ASSERT_TRUE(c.exhaustive.has_value());
    EXPECT_EQ(*c.exhaustive, 7u);
    EXPECT_EQ(c.delta(), 0);
    ASSERT_NE(find_check(c, "doubling"), nullptr);
    EXPECT_EQ(find_check(c, "doubling")->outcome, CheckOutcome::pass);
    ASSERT_NE(find_check(c, "reduced_mode"), nullptr);
    EXPECT_EQ(find_check(c, "reduced_mode")->outcome, CheckOutcome::pass);
    EXPECT_TRUE(c.all_checks_pass());
}

TEST(Certify, BoundsForCompositeShapes) {
    const auto c12 = certify_theorems(12, quick());
    EXPECT_EQ(c12.tag, CaseTag::two_primes);
    EXPECT_EQ(c12.lower, 4u);
    EXPECT_EQ(c12.upper, 4u);
    EXPECT_EQ(c12.status, CertStatus::confirmed);

    const auto c30 = certify_theorems(30, quick());
    EXPECT_EQ(c30.tag, CaseTag::squarefree);
    EXPECT_EQ(c30.exhaustive, std::optional<std::uint64_t>(5));
    ASSERT_NE(find_check(c30, "tripling"), nullptr);
    EXPECT_EQ(find_check(c30, "tripling")->outcome, CheckOutcome::info);

    const auto c20 = certify_theorems(20, quick());
    ASSERT_NE(find_check(c20, "s_pk_upper_bound"), nullptr);
    EXPECT_EQ(find_check(c20, "s_pk_upper_bound")->outcome, CheckOutcome::pass);
    EXPECT_EQ(c20.status, CertStatus::confirmed);
}

TEST(Certify, BudgetLeavesBoundsOnly) {
    auto opts = quick();
    opts.node_budget = 5;
    const auto c = certify_theorems(36, opts);
    EXPECT_FALSE(c.exhaustive.has_value());
    EXPECT_EQ(c.status, CertStatus::bounds_only);
    EXPECT_FALSE(c.delta().has_value());
    ASSERT_NE(find_check(c, "exhaustive_search"), nullptr);
    EXPECT_EQ(find_check(c, "exhaustive_search")->outcome, CheckOutcome::skipped);
}

TEST(Certify, PolynomialRing) {
    const auto c = certify(parse_ring_key("polyring:3:t^2"), quick());
    EXPECT_EQ(c.tag, CaseTag::prime_power);
    EXPECT_EQ(c.davenport, 6u);
    EXPECT_EQ(c.exhaustive, std::optional<std::uint64_t>(7));
    EXPECT_EQ(c.status, CertStatus::confirmed);
}

TEST(Extremal, MatchesOracleListing) {
    for (std::uint64_t n : {3u, 4u, 6u, 8u, 9u, 10u, 12u, 15u}) {
        const auto report = enumerate_extremal(make_zmod(n));
        const auto expect = oracle::longest_free(static_cast<std::uint32_t>(n), oracle::zmod_mul(n),
                                                 oracle::zmod_idempotent(n));
        ASSERT_EQ(report.value, expect.length + 1);
        std::vector<std::vector<std::uint32_t>> got;
        for (const auto& e : report.sequences) got.emplace_back(e.sequence.begin(), e.sequence.end());
        auto want = expect.all;
        std::sort(want.begin(), want.end());
        ASSERT_EQ(got, want) << n;
    }
}

TEST(Extremal, SmallListings) {
    const auto r6 = make_zmod(6);
    const auto e6 = enumerate_extremal(r6);
    ASSERT_EQ(e6.sequences.size(), 2u);
    EXPECT_EQ(r6.format(e6.sequences[0].sequence), "(2)");
    EXPECT_EQ(r6.format(e6.sequences[1].sequence), "(5)");
    EXPECT_EQ(e6.coprime_count, 1u);  // only (5) avoids 2 and 3

    const auto e2 = enumerate_extremal(make_zmod(2));
    EXPECT_EQ(e2.value, 1u);
    EXPECT_TRUE(e2.sequences.empty());

    EXPECT_THROW(enumerate_extremal(make_zmod(12), 1), CapacityError);
}

TEST(Extremal, QuasiSquarefreeRestriction) {
    for (std::uint64_t n : {4u, 8u, 12u, 18u, 20u, 24u, 36u}) {
        const auto report = quasi_squarefree_restriction_check(make_zmod(n));
        EXPECT_EQ(report.unrestricted + 1, kFrozen.at(n).first) << n;
        EXPECT_LE(report.restricted, report.unrestricted);
    }
    EXPECT_TRUE(quasi_squarefree_restriction_check(make_zmod(12)).agree());
}
