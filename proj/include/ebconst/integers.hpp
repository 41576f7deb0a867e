#pragma once

/**
 * @file integers.hpp
 * @brief Desk-scale integer arithmetic and the ring Z/nZ: factorization,
 * idempotents, unit-group structure, and the map that replaces multiples
 * of a simple prime factor by units.
 */

#include <cstdint>
#include <utility>
#include <vector>

#include "ebconst/bitset.hpp"
#include "ebconst/monoid.hpp"

namespace ebconst {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::uint64_t lcm(std::uint64_t a, std::uint64_t b);
bool is_prime(std::uint64_t n);

/// Solves x = r_i (mod m_i) for pairwise coprime moduli; returns x in [0, prod m_i).
std::uint64_t crt(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& residues_and_moduli);

/// n = prod p_i^{k_i}, primes ascending.
class Factorization {
public:
    using Factor = std::pair<std::uint64_t, std::uint32_t>;

    Factorization(std::uint64_t n, std::vector<Factor> factors);

    [[nodiscard]] std::uint64_t n() const noexcept { return n_; }
    [[nodiscard]] const std::vector<Factor>& factors() const noexcept { return factors_; }
    /// Number of distinct primes.
    [[nodiscard]] std::uint32_t omega() const noexcept { return static_cast<std::uint32_t>(factors_.size()); }
    /// Number of primes counted with multiplicity.
    [[nodiscard]] std::uint32_t big_omega() const noexcept;
    [[nodiscard]] std::uint64_t euler_phi() const noexcept;
    [[nodiscard]] std::uint32_t exponent_of(std::uint64_t p) const noexcept;

    bool operator==(const Factorization&) const = default;

private:
    std::uint64_t n_;
    std::vector<Factor> factors_;
};

/// Trial division. Throws DomainError for n < 2.
Factorization factorize(std::uint64_t n);

/// Z/nZ with its idempotent set and unit set, each found by testing every residue.
struct ModularRing {
    std::uint64_t n;
    Factorization factorization;
    DynamicBitset idempotents;
    DynamicBitset units;
};

ModularRing build_modular_ring(std::uint64_t n);

/// Multiplicative monoid of Z/nZ as a dense table (index = residue).
FiniteCommutativeMonoid modular_monoid(std::uint64_t n, std::size_t cap = kDefaultMonoidCap);

/// (Z/nZ)^x in invariant-factor form with one generator (a residue mod n) per factor.
struct UnitGroupDecomposition {
    CyclicDecomposition invariant_factors;
    std::vector<std::uint64_t> generators;
};

UnitGroupDecomposition unit_group_decomposition(const Factorization& f);

/// For each a_j: the residue congruent to 1 mod p_i when p_i | a_j and to a_j
/// mod p_i otherwise (for every listed prime), and to a_j modulo n / prod p_i.
/// Every listed prime must divide n exactly once.
Sequence reduction_map(std::uint64_t n, const std::vector<std::uint64_t>& simple_primes,
                       const Sequence& s);

/// For every nonempty index set T of `terms` (at most 20 of them): if the
/// reduced images of T multiply to an idempotent mod n, so do the original
/// terms of T. Returns how many index sets had an idempotent reduced
/// product; throws InvariantFailure on a counterexample.
std::size_t reduction_transfer_check(std::uint64_t n, const std::vector<std::uint64_t>& simple_primes,
                                     const std::vector<std::uint64_t>& terms);

/// D + Omega(n) - omega(n).
std::uint64_t conjectured_value(const Factorization& f, std::uint64_t davenport);

/// p-adic valuation of the residue x mod n, capped at the exponent of p in n
/// (so 0 has valuation equal to that exponent).
std::uint32_t residue_valuation(std::uint64_t x, std::uint64_t p, std::uint32_t exponent);

}  // namespace ebconst
