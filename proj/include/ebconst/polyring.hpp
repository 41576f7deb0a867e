#pragma once

/**
 * @file polyring.hpp
 * @brief Polynomials over a prime field F_p and the quotient rings F_p[t]/(f).
 *
 * Only prime characteristic is supported; coefficients live in [0, p).
 * Quotient elements are the residues of degree < deg f, indexed by
 * sum c_i p^i (base-p order, constant term least significant).
 */

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ebconst/monoid.hpp"

namespace ebconst {

class PrimeFieldPoly {
public:
    using Coeff = std::uint32_t;

    /// The zero polynomial over F_p. Throws DomainError unless p is prime.
    explicit PrimeFieldPoly(std::uint32_t p);
    /// Coefficients lowest degree first; reduced mod p and trimmed.
    PrimeFieldPoly(std::uint32_t p, std::vector<std::int64_t> coeffs);

    static PrimeFieldPoly monomial(std::uint32_t p, std::size_t degree, Coeff c = 1);
    /// Inverse of index(): the residue with base-p digits of `index`.
    static PrimeFieldPoly from_index(std::uint32_t p, std::uint64_t index);

    /// Accepts "c0,c1,...,ck" or human form such as "t^2+t+1", "2t^3-1", "1+t".
    static PrimeFieldPoly parse(std::uint32_t p, std::string_view text);

    [[nodiscard]] std::uint32_t characteristic() const noexcept { return p_; }
    [[nodiscard]] const std::vector<Coeff>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] bool is_zero() const noexcept { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] Coeff leading() const noexcept { return coeffs_.empty() ? 0 : coeffs_.back(); }
    [[nodiscard]] bool is_monic() const noexcept { return leading() == 1; }
    [[nodiscard]] std::uint64_t index() const noexcept;

    [[nodiscard]] PrimeFieldPoly monic() const;
    [[nodiscard]] PrimeFieldPoly scaled(Coeff c) const;

    /// Human form, highest degree first: "t^2+t+1", "2t", "0".
    [[nodiscard]] std::string to_string() const;

    friend PrimeFieldPoly operator+(const PrimeFieldPoly& a, const PrimeFieldPoly& b);
    friend PrimeFieldPoly operator-(const PrimeFieldPoly& a, const PrimeFieldPoly& b);
    friend PrimeFieldPoly operator*(const PrimeFieldPoly& a, const PrimeFieldPoly& b);
    bool operator==(const PrimeFieldPoly&) const = default;

private:
    void normalize();

    std::uint32_t p_;
    std::vector<Coeff> coeffs_;
};

/// Quotient and remainder; divisor must be nonzero.
std::pair<PrimeFieldPoly, PrimeFieldPoly> divmod(const PrimeFieldPoly& a, const PrimeFieldPoly& b);
PrimeFieldPoly mod(const PrimeFieldPoly& a, const PrimeFieldPoly& b);
/// Monic gcd (zero if both are zero).
PrimeFieldPoly gcd(const PrimeFieldPoly& a, const PrimeFieldPoly& b);
/// (a*b) mod f with a, b already reduced mod f.
PrimeFieldPoly poly_mul_mod(const PrimeFieldPoly& a, const PrimeFieldPoly& b, const PrimeFieldPoly& f);

/// Coefficient-tuple order used for sorting factors: degree first, then
/// coefficients lowest degree first.
bool poly_less(const PrimeFieldPoly& a, const PrimeFieldPoly& b);

/// True when no monic polynomial of degree 1..deg/2 divides g.
bool is_irreducible(const PrimeFieldPoly& g);

struct PolyFactorization {
    PrimeFieldPoly f;                  ///< monic
    PrimeFieldPoly::Coeff unit = 1;    ///< leading coefficient of the original input
    std::vector<std::pair<PrimeFieldPoly, std::uint32_t>> factors;

    [[nodiscard]] std::uint32_t omega() const noexcept { return static_cast<std::uint32_t>(factors.size()); }
    [[nodiscard]] std::uint32_t big_omega() const noexcept;
};

/// Trial division by monic polynomials in base-p order. A non-monic input is
/// scaled to monic with the scalar recorded in `unit`; constants are rejected.
PolyFactorization factor_poly(const PrimeFieldPoly& f);

inline constexpr std::size_t kDefaultQuotientCap = 4096;

/// Multiplicative monoid of F_p[t]/(f). Checks that the idempotent count is
/// 2^omega(f) and that units are exactly the residues coprime to f.
FiniteCommutativeMonoid build_quotient_monoid(const PrimeFieldPoly& f,
                                              std::size_t cap = kDefaultQuotientCap);

}  // namespace ebconst
