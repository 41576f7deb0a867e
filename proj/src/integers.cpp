#include "ebconst/integers.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "ebconst/errors.hpp"

namespace ebconst {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1u) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

std::uint64_t lcm(std::uint64_t a, std::uint64_t b) { return a / std::gcd(a, b) * b; }

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Extended Euclid: inverse of a modulo m, gcd(a, m) = 1.
std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
    while (new_r != 0) {
        const auto q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw DomainError("no inverse");
    return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

}  // namespace

std::uint64_t crt(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& residues_and_moduli) {
    std::uint64_t x = 0;
    std::uint64_t modulus = 1;
    for (const auto& [r, m] : residues_and_moduli) {
        if (m == 0) throw DomainError("crt: zero modulus");
        if (std::gcd(modulus, m) != 1) throw DomainError("crt: moduli not coprime");
        // x' = x + modulus * ((r - x) * modulus^{-1} mod m)
        const std::uint64_t diff = (r % m + m - x % m) % m;
        const std::uint64_t t = mul_mod(diff, inverse_mod(modulus % m, m), m);
        x += modulus * t;
        modulus *= m;
    }
    return x;
}

Factorization::Factorization(std::uint64_t n, std::vector<Factor> factors)
    : n_(n), factors_(std::move(factors)) {
    std::uint64_t product = 1;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& [p, k] = factors_[i];
        if (k == 0 || !is_prime(p)) throw DomainError("invalid prime factor");
        if (i > 0 && factors_[i - 1].first >= p) throw DomainError("factors must be ascending");
        for (std::uint32_t j = 0; j < k; ++j) product *= p;
    }
    if (product != n_) throw DomainError("factors do not multiply to n");
}

std::uint32_t Factorization::big_omega() const noexcept {
    std::uint32_t total = 0;
    for (const auto& f : factors_) total += f.second;
    return total;
}

std::uint64_t Factorization::euler_phi() const noexcept {
    std::uint64_t phi = 1;
    for (const auto& [p, k] : factors_) {
        phi *= p - 1;
        for (std::uint32_t j = 1; j < k; ++j) phi *= p;
    }
    return phi;
}

std::uint32_t Factorization::exponent_of(std::uint64_t p) const noexcept {
    for (const auto& [q, k] : factors_)
        if (q == p) return k;
    return 0;
}

Factorization factorize(std::uint64_t n) {
    if (n < 2) throw DomainError("factorize: n must be at least 2, got " + std::to_string(n));
    std::vector<Factorization::Factor> factors;
    std::uint64_t rest = n;
    for (std::uint64_t p = 2; p * p <= rest; ++p) {
        if (rest % p != 0) continue;
        std::uint32_t k = 0;
        while (rest % p == 0) {
            rest /= p;
            ++k;
        }
        factors.emplace_back(p, k);
    }
    if (rest > 1) factors.emplace_back(rest, 1);
    return Factorization(n, std::move(factors));
}

ModularRing build_modular_ring(std::uint64_t n) {
    auto f = factorize(n);
    DynamicBitset idempotents(n);
    DynamicBitset units(n);
    for (std::uint64_t x = 0; x < n; ++x) {
        if (mul_mod(x, x, n) == x) idempotents.set(x);
        if (std::gcd(x, n) == 1) units.set(x);
    }
    if (idempotents.count() != (std::size_t{1} << f.omega()))
        throw InvariantFailure("idempotent count mismatch for n = " + std::to_string(n));
    return {n, std::move(f), std::move(idempotents), std::move(units)};
}

FiniteCommutativeMonoid modular_monoid(std::uint64_t n, std::size_t cap) {
    if (n < 2) throw DomainError("Z/nZ requires n >= 2");
    check_capacity(n, cap, "Z/nZ");
    std::vector<Element> table(n * n);
    for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b) table[a * n + b] = static_cast<Element>(a * b % n);
    return FiniteCommutativeMonoid(n, std::move(table), 1);
}

namespace {

std::uint64_t multiplicative_order(std::uint64_t g, std::uint64_t m) {
    std::uint64_t k = 1;
    for (std::uint64_t x = g % m; x != 1 % m; x = mul_mod(x, g, m)) ++k;
    return k;
}

std::uint64_t primitive_root(std::uint64_t p, std::uint32_t k, std::uint64_t pk) {
    const std::uint64_t phi = (p - 1) * (pk / p);
    const auto phi_factors = factorize(phi).factors();
    for (std::uint64_t g = 2; g < pk; ++g) {
        if (g % p == 0) continue;
        const bool generates = std::none_of(phi_factors.begin(), phi_factors.end(), [&](const auto& qf) {
            return pow_mod(g, phi / qf.first, pk) == 1;
        });
        if (generates) return g;
    }
    throw InvariantFailure("no primitive root mod " + std::to_string(p) + "^" + std::to_string(k));
}

struct CyclicPart {
    std::uint64_t order;
    std::uint64_t generator;  // residue mod n
};

}  // namespace

UnitGroupDecomposition unit_group_decomposition(const Factorization& f) {
    const std::uint64_t n = f.n();

    // Cyclic parts per prime power, each generator lifted to n with every other
    // CRT component equal to 1.
    std::vector<CyclicPart> parts;
    for (const auto& [p, k] : f.factors()) {
        std::uint64_t pk = 1;
        for (std::uint32_t j = 0; j < k; ++j) pk *= p;
        const std::uint64_t other = n / pk;
        auto lift = [&](std::uint64_t g) { return crt({{g, pk}, {1 % other, other}}); };
        if (p == 2) {
            if (k == 2) parts.push_back({2, lift(3)});
            if (k >= 3) {
                parts.push_back({2, lift(pk - 1)});
                parts.push_back({pk / 4, lift(5)});
            }
        } else {
            parts.push_back({(p - 1) * (pk / p), lift(primitive_root(p, k, pk))});
        }
    }

    // Primary decomposition: split every part into prime-power cyclic pieces,
    // then recombine the i-th largest pieces across primes.
    std::vector<std::uint64_t> raw_orders;
    std::vector<std::pair<std::uint64_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>>> by_prime;
    for (const auto& part : parts) {
        raw_orders.push_back(part.order);
        const auto order_factors = factorize(part.order);
        for (const auto& [q, e] : order_factors.factors()) {
            std::uint64_t qe = 1;
            for (std::uint32_t j = 0; j < e; ++j) qe *= q;
            const std::uint64_t piece = pow_mod(part.generator, part.order / qe, n);
            auto it = std::find_if(by_prime.begin(), by_prime.end(), [&](auto& bp) { return bp.first == q; });
            if (it == by_prime.end()) {
                by_prime.push_back({q, {}});
                it = std::prev(by_prime.end());
            }
            it->second.emplace_back(qe, piece);
        }
    }
    std::size_t rank = 0;
    for (auto& [q, pieces] : by_prime) {
        std::sort(pieces.begin(), pieces.end(), std::greater<>());
        rank = std::max(rank, pieces.size());
    }
    std::vector<std::uint64_t> orders(rank, 1);
    std::vector<std::uint64_t> generators(rank, 1 % n);
    for (const auto& [q, pieces] : by_prime) {
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            orders[i] *= pieces[i].first;
            generators[i] = mul_mod(generators[i], pieces[i].second, n);
        }
    }
    std::reverse(orders.begin(), orders.end());
    std::reverse(generators.begin(), generators.end());

    CyclicDecomposition decomposition(orders);
    if (!(decomposition == CyclicDecomposition::from_orders(raw_orders)))
        throw InvariantFailure("unit group normalization disagrees for n = " + std::to_string(n));
    for (std::size_t i = 0; i < rank; ++i)
        if (multiplicative_order(generators[i], n) != orders[i])
            throw InvariantFailure("generator order mismatch for n = " + std::to_string(n));
    return {std::move(decomposition), std::move(generators)};
}

Sequence reduction_map(std::uint64_t n, const std::vector<std::uint64_t>& simple_primes,
                       const Sequence& s) {
    const auto f = factorize(n);
    std::uint64_t rest = n;
    for (std::size_t i = 0; i < simple_primes.size(); ++i) {
        const auto p = simple_primes[i];
        if (f.exponent_of(p) != 1)
            throw DomainError("reduction_map: " + std::to_string(p) + " does not divide " +
                              std::to_string(n) + " exactly once");
        if (std::find(simple_primes.begin(), simple_primes.begin() + static_cast<std::ptrdiff_t>(i), p) !=
            simple_primes.begin() + static_cast<std::ptrdiff_t>(i))
            throw DomainError("reduction_map: repeated prime");
        rest /= p;
    }
    std::vector<Element> out;
    out.reserve(s.size());
    for (auto a : s) {
        if (a >= n) throw DomainError("reduction_map: element out of range");
        std::vector<std::pair<std::uint64_t, std::uint64_t>> system;
        for (auto p : simple_primes) system.emplace_back(a % p == 0 ? 1 : a % p, p);
        system.emplace_back(a % rest, rest);
        out.push_back(static_cast<Element>(crt(system)));
    }
    return Sequence(std::move(out));
}

std::size_t reduction_transfer_check(std::uint64_t n, const std::vector<std::uint64_t>& simple_primes,
                                     const std::vector<std::uint64_t>& terms) {
    if (terms.size() > 20) throw DomainError("reduction_transfer_check: at most 20 terms");
    std::vector<std::uint64_t> reduced;
    for (auto a : terms) reduced.push_back(reduction_map(n, simple_primes, Sequence({static_cast<Element>(a)}))[0]);
    auto idempotent = [n](std::uint64_t x) { return mul_mod(x, x, n) == x; };

    std::size_t hits = 0;
    const std::uint32_t subsets = std::uint32_t{1} << terms.size();
    for (std::uint32_t mask = 1; mask < subsets; ++mask) {
        std::uint64_t original = 1 % n;
        std::uint64_t image = 1 % n;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            if (!((mask >> j) & 1u)) continue;
            original = mul_mod(original, terms[j], n);
            image = mul_mod(image, reduced[j], n);
        }
        if (!idempotent(image)) continue;
        ++hits;
        if (!idempotent(original))
            throw InvariantFailure("reduction transfer fails for index set " + std::to_string(mask) + " mod " +
                                   std::to_string(n));
    }
    return hits;
}

std::uint64_t conjectured_value(const Factorization& f, std::uint64_t davenport) {
    return davenport + f.big_omega() - f.omega();
}

std::uint32_t residue_valuation(std::uint64_t x, std::uint64_t p, std::uint32_t exponent) {
    std::uint32_t v = 0;
    while (v < exponent && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

}  // namespace ebconst
