#pragma once

/**
 * @file zerosum.hpp
 * @brief Subset-product sets, exact Davenport constants, and executable
 * checks of the subset-product lemmas used in the upper-bound arguments.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ebconst/bitset.hpp"
#include "ebconst/free_search.hpp"
#include "ebconst/monoid.hpp"

namespace ebconst {

/// per_threshold[j] = products of subsequences with at least j terms, for
/// j = 0..k. The empty product (identity) belongs to per_threshold[0].
struct ProductSet {
    std::vector<DynamicBitset> per_threshold;

    [[nodiscard]] std::size_t threshold() const noexcept { return per_threshold.size() - 1; }
    [[nodiscard]] const DynamicBitset& at_least(std::size_t j) const { return per_threshold.at(j); }
};

/// Exact DP over the terms of s, tracking reachable products per term count
/// saturated at k. Throws DomainError when k > |s|.
ProductSet products_at_least(const FiniteCommutativeMonoid& m, const Sequence& s, std::size_t k);

/// True when no nonempty subsequence of s has its product in `forbidden`.
bool is_free(const FiniteCommutativeMonoid& m, const Sequence& s, const DynamicBitset& forbidden);

/// Positions (into s.elements()) of a nonempty subsequence whose product
/// lies in `forbidden`, or nullopt if s is free.
std::optional<std::vector<std::size_t>> find_forbidden_subsequence(const FiniteCommutativeMonoid& m,
                                                                   const Sequence& s,
                                                                   const DynamicBitset& forbidden);

struct KFoldReport {
    bool identity_reached;  ///< 1 is a product of at least k terms
    std::size_t set_size;   ///< |products of at least k terms|
};

/// For |s| = k + t in a group: either 1 is a product of >= k terms or there
/// are at least t + 1 such products. Throws InvariantFailure otherwise.
KFoldReport kfold_lemma_check(const FiniteCommutativeMonoid& group, const Sequence& s, std::size_t k);

struct StabilizerReport {
    std::size_t product_set_size;  ///< |products of >= 0 terms|
    std::size_t stabilizer_size;
    bool bound_applied;            ///< stabilizer was trivial, so |P| >= |s| + 1 was asserted
};

/// Terms must be non-identity. If the stabilizer of the subset-product set
/// (empty product included) is trivial, asserts |P| >= |s| + 1.
StabilizerReport stabilizer_bound_check(const FiniteCommutativeMonoid& group, const Sequence& s);

struct GcdInequalityReport {
    std::int64_t lhs;  ///< (gcd(a,c)+lcm(a,c)) - (gcd(a,b)+lcm(a,b))
    std::int64_t rhs;  ///< c/b - 1
};

/// For b | c: lhs >= rhs. Throws InvariantFailure on violation.
GcdInequalityReport gcd_inequality_check(std::uint64_t a, std::uint64_t b, std::uint64_t c);

/// 1 + sum (n_i - 1) over the invariant factors.
std::uint64_t davenport_formula_m(const CyclicDecomposition& g);

/// gcd(a,b) + lcm(a,b) - 1, the Davenport constant of C_a x C_b.
std::uint64_t davenport_rank2(std::uint64_t a, std::uint64_t b);

/// Whether D(G) = M(G) is known for this shape (rank <= 2 or prime-power order).
bool davenport_formula_applies(const CyclicDecomposition& g);

enum class DavenportMethod { formula, exhaustive };
std::string to_string(DavenportMethod m);

struct DavenportResult {
    std::uint64_t value;
    Sequence witness;  ///< zero-sum-free, length value - 1 (group element indices)
    DavenportMethod method;
    FreeSearchStats stats;
};

inline constexpr std::size_t kDefaultDavenportCap = 512;

struct DavenportOptions {
    std::size_t cap = kDefaultDavenportCap;
    std::uint64_t node_budget = 0;
};

/// D(G) by exhaustive search over zero-sum-free multisets, deepening from
/// M(G). The witness is the lexicographically least maximal sequence and is
/// rechecked: zero-sum-free, and every one-term extension has a zero sum.
DavenportResult davenport_exhaustive(const FiniteCommutativeMonoid& group, DavenportOptions options = {});
DavenportResult davenport_exhaustive(const CyclicDecomposition& g, DavenportOptions options = {});

/// D(G) = M(G) with the witness prod g_i^{n_i - 1} built from a basis
/// (basis[i] has order n_i and the basis generates G independently).
/// Requires davenport_formula_applies; the witness is verified zero-sum-free.
DavenportResult davenport_from_basis(const FiniteCommutativeMonoid& group, const CyclicDecomposition& g,
                                     const std::vector<Element>& basis);

}  // namespace ebconst
