#pragma once

/**
 * @file burgess.hpp
 * @brief Erdős–Burgess constants of Z/nZ and F_p[t]/(f): exhaustive values,
 * the lower-bound construction, per-instance certificates and the extremal
 * sequence enumerator.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ebconst/bitset.hpp"
#include "ebconst/free_search.hpp"
#include "ebconst/monoid.hpp"
#include "ebconst/polyring.hpp"
#include "ebconst/zerosum.hpp"

namespace ebconst {

enum class RingKind { zmod, polyring };

/// One prime power p^k of the modulus: the residue of p and its exponent.
struct PrimeComponent {
    std::string label;
    std::uint64_t prime_value = 0;  ///< p for Z/nZ, 0 for polynomial rings
    Element residue = 0;
    std::uint32_t exponent = 0;
};

/// A finite quotient ring presented through its multiplicative monoid.
struct RingInstance {
    std::string key;  ///< canonical: "zmod:n" or "polyring:p:c0,...,ck" (monic modulus)
    RingKind kind = RingKind::zmod;
    std::uint64_t n = 0;                  ///< modulus for zmod
    std::optional<PrimeFieldPoly> modulus;  ///< monic modulus for polyring
    FiniteCommutativeMonoid monoid;
    std::vector<PrimeComponent> components;
    /// valuation[i][x]: largest j <= k_i with p_i^j dividing x.
    std::vector<std::vector<std::uint32_t>> valuation;

    [[nodiscard]] std::uint32_t omega() const noexcept { return static_cast<std::uint32_t>(components.size()); }
    [[nodiscard]] std::uint32_t big_omega() const noexcept;
    [[nodiscard]] std::string label(Element x) const;
    [[nodiscard]] std::string format(const Sequence& s) const;
};

RingInstance make_zmod(std::uint64_t n, std::size_t cap = kDefaultMonoidCap);
RingInstance make_polyring(const PrimeFieldPoly& f, std::size_t cap = kDefaultQuotientCap);
/// "zmod:n", "polyring:p:c0,c1,...,ck" or "polyring:p:<human form>".
/// Throws ParseError on malformed keys.
RingInstance parse_ring_key(std::string_view key, std::size_t cap = kDefaultMonoidCap);

/// Elements with valuation <= 1 at every prime.
DynamicBitset quasi_squarefree_mask(const RingInstance& r);
/// Quasi-squarefree elements that are also coprime to every prime of exponent 1.
DynamicBitset reduced_candidates(const RingInstance& r);

enum class ReducedMode { off, on, check };
std::string to_string(ReducedMode m);
ReducedMode parse_reduced_mode(std::string_view text);

struct UnitDavenport {
    CyclicDecomposition shape;
    DavenportResult result;
    Sequence ring_witness;  ///< result.witness mapped to ring elements
};

/// D of the unit group. Uses M(G) with a basis witness when that value is
/// established (rank <= 2 or p-group), exhaustive search otherwise.
UnitDavenport davenport_of_units(const RingInstance& r, DavenportOptions options = {});

struct BurgessOptions {
    std::size_t start_length = 0;
    std::optional<DynamicBitset> candidates;
    std::uint64_t node_budget = 0;
};

struct BurgessResult {
    std::uint64_t value = 0;  ///< I = 1 + longest free length
    Sequence witness;         ///< lex-least free sequence of length value - 1
    FreeSearchStats stats;
};

/// Exhaustive I(S) for S = m with the idempotents forbidden. The witness is
/// rechecked independently before returning.
BurgessResult burgess_exhaustive(const FiniteCommutativeMonoid& m, BurgessOptions options = {});

/// The unit witness (zero-sum-free, length D - 1) extended by k_i - 1 copies
/// of each p_i. Throws InvariantFailure unless the result is free of length
/// D + Omega - omega - 1.
Sequence lower_bound_construction(const RingInstance& r, const Sequence& unit_witness, std::uint64_t davenport);

enum class CaseTag { prime_power, squarefree, twice_odd, two_primes, s_pk_upper, unproven };
std::string to_string(CaseTag t);
/// Whether the tag carries a proven equality I = D + Omega - omega.
bool is_proven(CaseTag t);
CaseTag classify(const RingInstance& r);

enum class CertStatus { confirmed, bounds_only, violation };
std::string to_string(CertStatus s);

enum class CheckOutcome { pass, fail, info, skipped };
std::string to_string(CheckOutcome o);

struct CheckResult {
    std::string name;
    CheckOutcome outcome;
    std::string detail;
};

struct CertifyOptions {
    ReducedMode reduced_mode = ReducedMode::off;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::uint64_t node_budget = 0;
    DavenportOptions davenport;
};

struct TheoremCertificate {
    std::string key;
    CaseTag tag = CaseTag::unproven;
    CertStatus status = CertStatus::bounds_only;
    CyclicDecomposition unit_shape;
    std::uint64_t davenport = 0;
    DavenportMethod davenport_method = DavenportMethod::formula;
    std::uint64_t m_formula = 0;
    std::uint32_t omega_gap = 0;  ///< Omega - omega
    std::uint64_t lower = 0;      ///< D + Omega - omega
    std::uint64_t upper = 0;      ///< best proven upper bound
    std::optional<std::uint64_t> exhaustive;
    Sequence davenport_witness;  ///< ring elements
    Sequence burgess_witness;
    Sequence construction;
    FreeSearchStats stats;
    std::vector<CheckResult> checks;

    [[nodiscard]] std::optional<std::int64_t> delta() const;
    [[nodiscard]] bool all_checks_pass() const;
};

/// Classifies the instance, computes D, runs the exhaustive search and
/// cross-checks every applicable bound and identity. A SearchBudgetExceeded
/// during the main search leaves exhaustive empty (status bounds_only).
TheoremCertificate certify(const RingInstance& r, const CertifyOptions& options = {});
TheoremCertificate certify_theorems(std::uint64_t n, const CertifyOptions& options = {});

struct ExtremalSequence {
    Sequence sequence;
    bool quasi_squarefree = false;
    bool coprime_to_simple = false;  ///< no term divisible by a prime of exponent 1
};

struct ExtremalReport {
    std::uint64_t value = 0;
    std::vector<ExtremalSequence> sequences;  ///< lexicographically sorted
    std::size_t quasi_squarefree_count = 0;
    std::size_t coprime_count = 0;
};

/// Every free sequence of length I - 1. Throws CapacityError beyond `limit`.
ExtremalReport enumerate_extremal(const RingInstance& r, std::size_t limit = 100000,
                                  std::uint64_t node_budget = 0);

struct QuasiSquarefreeReport {
    std::size_t unrestricted = 0;  ///< longest free length
    std::size_t restricted = 0;    ///< longest free length over quasi-squarefree terms
    [[nodiscard]] bool agree() const noexcept { return unrestricted == restricted; }
};

QuasiSquarefreeReport quasi_squarefree_restriction_check(const RingInstance& r, std::uint64_t node_budget = 0);

}  // namespace ebconst
