#pragma once

/**
 * @file monoid.hpp
 * @brief Finite commutative monoids given by dense multiplication tables,
 * and finite abelian groups presented as products of cyclic groups.
 *
 * Element indexing is fixed so that witnesses are reproducible:
 *  - Z/nZ: index = residue
 *  - F_p[t]/(f): index = sum c_i p^i over the coefficient tuple
 *  - C_{n_1} x ... x C_{n_r}: mixed radix, first component most significant
 */

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ebconst/bitset.hpp"

namespace ebconst {

using Element = std::uint32_t;

/// Default cap on the number of elements of any dense table.
inline constexpr std::size_t kDefaultMonoidCap = 4096;

/// Throws CapacityError when size > cap.
void check_capacity(std::size_t size, std::size_t cap, const char* what);

class FiniteCommutativeMonoid {
public:
    /// `table[a * size + b]` is the product a*b. Validates that `identity`
    /// is a two-sided identity and that the table is commutative; derives
    /// the idempotent and unit sets.
    FiniteCommutativeMonoid(std::size_t size, std::vector<Element> table, Element identity);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] Element identity() const noexcept { return identity_; }
    [[nodiscard]] Element mul(Element a, Element b) const noexcept { return table_[a * size_ + b]; }
    [[nodiscard]] std::span<const Element> row(Element a) const noexcept {
        return {table_.data() + a * size_, size_};
    }
    [[nodiscard]] Element pow(Element a, std::uint64_t e) const noexcept;

    [[nodiscard]] const DynamicBitset& idempotents() const noexcept { return idempotents_; }
    [[nodiscard]] const DynamicBitset& units() const noexcept { return units_; }
    [[nodiscard]] bool is_group() const noexcept { return units_.count() == size_; }

    /// Multiplicative order of a unit (smallest k >= 1 with a^k = 1).
    [[nodiscard]] std::uint64_t order(Element a) const;

    /// Exhaustive associativity check; intended for small tables.
    [[nodiscard]] bool is_associative() const;

private:
    std::size_t size_;
    std::vector<Element> table_;
    Element identity_;
    DynamicBitset idempotents_;
    DynamicBitset units_;
};

/// A finite abelian group C_{n_1} x ... x C_{n_r} with n_i | n_{i+1}, each n_i >= 2.
/// The empty list is the trivial group.
class CyclicDecomposition {
public:
    CyclicDecomposition() = default;
    /// Requires the invariant-factor chain; throws DomainError otherwise.
    explicit CyclicDecomposition(std::vector<std::uint64_t> invariant_factors);

    /// Accepts any list of cyclic orders and normalizes it to invariant
    /// factors by repeatedly replacing (a, b) with (gcd(a,b), lcm(a,b)).
    static CyclicDecomposition from_orders(std::vector<std::uint64_t> orders);

    [[nodiscard]] const std::vector<std::uint64_t>& orders() const noexcept { return orders_; }
    [[nodiscard]] std::size_t rank() const noexcept { return orders_.size(); }
    [[nodiscard]] std::uint64_t group_order() const noexcept;
    /// True when the group order is a power of a single prime (or 1).
    [[nodiscard]] bool is_p_group() const;

    bool operator==(const CyclicDecomposition&) const = default;

private:
    std::vector<std::uint64_t> orders_;
};

/// A finite multiset of element indices kept sorted ascending. Two sequences
/// compare equal iff they are the same multiset.
class Sequence {
public:
    Sequence() = default;
    explicit Sequence(std::vector<Element> elements);

    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] bool empty() const noexcept { return elements_.empty(); }
    [[nodiscard]] const std::vector<Element>& elements() const noexcept { return elements_; }
    [[nodiscard]] auto begin() const noexcept { return elements_.begin(); }
    [[nodiscard]] auto end() const noexcept { return elements_.end(); }
    Element operator[](std::size_t i) const noexcept { return elements_[i]; }

    /// Returns a copy with `count` extra copies of `e`.
    [[nodiscard]] Sequence extended(Element e, std::size_t count = 1) const;

    auto operator<=>(const Sequence&) const = default;
    bool operator==(const Sequence&) const = default;

private:
    std::vector<Element> elements_;
};

/// Tuples with componentwise modular addition, presented multiplicatively.
FiniteCommutativeMonoid group_as_monoid(const CyclicDecomposition& g,
                                        std::size_t cap = kDefaultMonoidCap);

/// A subgroup or submonoid together with its embedding: `members[i]` is the
/// index in the parent of element i of `monoid`. Members are ascending.
struct EmbeddedMonoid {
    FiniteCommutativeMonoid monoid;
    std::vector<Element> members;
};

/// Restriction of the multiplication to the units of `m`.
EmbeddedMonoid unit_subgroup(const FiniteCommutativeMonoid& m);

/// {x : xP = P} for a nonempty subset P of a group.
DynamicBitset stabilizer(const FiniteCommutativeMonoid& group, const DynamicBitset& subset);

/// True when `h` contains the identity and is closed under multiplication
/// (sufficient for subgroups of a finite group).
bool is_subgroup(const FiniteCommutativeMonoid& group, const DynamicBitset& h);

struct QuotientGroup {
    FiniteCommutativeMonoid group;
    /// projection[x] = coset index of x. Cosets are numbered in order of
    /// their least element.
    std::vector<Element> projection;
};

QuotientGroup quotient_group(const FiniteCommutativeMonoid& group, const DynamicBitset& subgroup);

/// Invariant factors of a finite abelian group given by its table, computed
/// from the counts of elements killed by each prime power.
CyclicDecomposition invariant_factors(const FiniteCommutativeMonoid& group);

/// Independent generators g_1..g_r with ord(g_i) = n_i, matching
/// invariant_factors(group) position by position. Built by repeatedly taking
/// a coset of maximal order modulo the span so far and lifting it to an
/// element of the same order.
std::vector<Element> group_basis(const FiniteCommutativeMonoid& group);

}  // namespace ebconst
