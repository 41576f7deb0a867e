#include "ebconst/monoid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>

#include "ebconst/errors.hpp"
#include "ebconst/integers.hpp"

namespace ebconst {

void check_capacity(std::size_t size, std::size_t cap, const char* what) {
    if (size > cap) {
        throw CapacityError(std::string(what) + ": " + std::to_string(size) +
                            " elements exceeds cap " + std::to_string(cap));
    }
}

FiniteCommutativeMonoid::FiniteCommutativeMonoid(std::size_t size, std::vector<Element> table,
                                                 Element identity)
    : size_(size),
      table_(std::move(table)),
      identity_(identity),
      idempotents_(size),
      units_(size) {
    if (size == 0) throw DomainError("monoid must be nonempty");
    if (table_.size() != size * size) throw DomainError("multiplication table has wrong size");
    if (identity >= size) throw DomainError("identity index out of range");
    for (std::size_t a = 0; a < size; ++a) {
        if (mul(identity_, static_cast<Element>(a)) != a)
            throw DomainError("identity does not act trivially on element " + std::to_string(a));
        for (std::size_t b = 0; b < size; ++b) {
            const Element ab = table_[a * size + b];
            if (ab >= size) throw DomainError("product out of range");
            if (ab != table_[b * size + a]) throw DomainError("table is not commutative");
        }
    }
    for (std::size_t a = 0; a < size; ++a) {
        const auto e = static_cast<Element>(a);
        if (mul(e, e) == e) idempotents_.set(a);
        const auto r = row(e);
        if (std::find(r.begin(), r.end(), identity_) != r.end()) units_.set(a);
    }
}

Element FiniteCommutativeMonoid::pow(Element a, std::uint64_t e) const noexcept {
    Element result = identity_;
    Element base = a;
    while (e > 0) {
        if (e & 1u) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

std::uint64_t FiniteCommutativeMonoid::order(Element a) const {
    if (!units_.test(a)) throw DomainError("order of a non-unit");
    std::uint64_t k = 1;
    for (Element x = a; x != identity_; x = mul(x, a)) ++k;
    return k;
}

bool FiniteCommutativeMonoid::is_associative() const {
    for (std::size_t a = 0; a < size_; ++a)
        for (std::size_t b = 0; b < size_; ++b) {
            const Element ab = table_[a * size_ + b];
            for (std::size_t c = 0; c < size_; ++c) {
                const Element bc = table_[b * size_ + c];
                if (table_[ab * size_ + c] != table_[a * size_ + bc]) return false;
            }
        }
    return true;
}

CyclicDecomposition::CyclicDecomposition(std::vector<std::uint64_t> invariant_factors)
    : orders_(std::move(invariant_factors)) {
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        if (orders_[i] < 2) throw DomainError("cyclic factor of order < 2");
        if (i + 1 < orders_.size() && orders_[i + 1] % orders_[i] != 0)
            throw DomainError("invariant factors must form a divisibility chain");
    }
}

CyclicDecomposition CyclicDecomposition::from_orders(std::vector<std::uint64_t> orders) {
    for (auto o : orders)
        if (o == 0) throw DomainError("cyclic factor of order 0");
    // After pass i, orders[i] is the gcd of the tail and divides every later entry.
    for (std::size_t i = 0; i < orders.size(); ++i) {
        for (std::size_t j = i + 1; j < orders.size(); ++j) {
            const auto g = std::gcd(orders[i], orders[j]);
            const auto l = orders[i] / g * orders[j];
            orders[i] = g;
            orders[j] = l;
        }
    }
    std::erase(orders, std::uint64_t{1});
    return CyclicDecomposition(std::move(orders));
}

std::uint64_t CyclicDecomposition::group_order() const noexcept {
    std::uint64_t n = 1;
    for (auto o : orders_) n *= o;
    return n;
}

bool CyclicDecomposition::is_p_group() const {
    const auto n = group_order();
    return n == 1 || factorize(n).omega() == 1;
}

Sequence::Sequence(std::vector<Element> elements) : elements_(std::move(elements)) {
    std::sort(elements_.begin(), elements_.end());
}

Sequence Sequence::extended(Element e, std::size_t count) const {
    auto copy = elements_;
    copy.insert(copy.end(), count, e);
    return Sequence(std::move(copy));
}

FiniteCommutativeMonoid group_as_monoid(const CyclicDecomposition& g, std::size_t cap) {
    const auto& n = g.orders();
    const auto order = g.group_order();
    check_capacity(order, cap, "group");
    const std::size_t size = order;
    const std::size_t r = n.size();

    std::vector<std::vector<std::uint64_t>> digits(size, std::vector<std::uint64_t>(r));
    for (std::size_t x = 0; x < size; ++x) {
        std::size_t rest = x;
        for (std::size_t i = r; i-- > 0;) {
            digits[x][i] = rest % n[i];
            rest /= n[i];
        }
    }
    std::vector<Element> table(size * size);
    for (std::size_t a = 0; a < size; ++a)
        for (std::size_t b = 0; b < size; ++b) {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < r; ++i) idx = idx * n[i] + (digits[a][i] + digits[b][i]) % n[i];
            table[a * size + b] = static_cast<Element>(idx);
        }
    return FiniteCommutativeMonoid(size, std::move(table), 0);
}

EmbeddedMonoid unit_subgroup(const FiniteCommutativeMonoid& m) {
    std::vector<Element> members;
    for (auto u : m.units().indices()) members.push_back(static_cast<Element>(u));
    std::vector<Element> local(m.size(), 0);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<Element>(i);

    const std::size_t k = members.size();
    std::vector<Element> table(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) table[i * k + j] = local[m.mul(members[i], members[j])];
    FiniteCommutativeMonoid group(k, std::move(table), local[m.identity()]);
    return {std::move(group), std::move(members)};
}

DynamicBitset stabilizer(const FiniteCommutativeMonoid& group, const DynamicBitset& subset) {
    if (!group.is_group()) throw DomainError("stabilizer requires a group");
    if (subset.none()) throw DomainError("stabilizer of the empty set");
    DynamicBitset stab(group.size());
    const auto members = subset.indices();
    for (std::size_t x = 0; x < group.size(); ++x) {
        const auto r = group.row(static_cast<Element>(x));
        // |xP| = |P| in a group, so xP within P means xP = P.
        const bool fixes = std::all_of(members.begin(), members.end(),
                                       [&](std::size_t p) { return subset.test(r[p]); });
        if (fixes) stab.set(x);
    }
    return stab;
}

bool is_subgroup(const FiniteCommutativeMonoid& group, const DynamicBitset& h) {
    if (!h.test(group.identity())) return false;
    const auto members = h.indices();
    for (auto a : members)
        for (auto b : members)
            if (!h.test(group.mul(static_cast<Element>(a), static_cast<Element>(b)))) return false;
    return true;
}

QuotientGroup quotient_group(const FiniteCommutativeMonoid& group, const DynamicBitset& subgroup) {
    if (!group.is_group()) throw DomainError("quotient requires a group");
    if (!is_subgroup(group, subgroup)) throw DomainError("quotient by a non-subgroup");

    constexpr Element kUnassigned = ~Element{0};
    std::vector<Element> projection(group.size(), kUnassigned);
    std::vector<Element> reps;
    const auto h = subgroup.indices();
    for (std::size_t x = 0; x < group.size(); ++x) {
        if (projection[x] != kUnassigned) continue;
        const auto coset = static_cast<Element>(reps.size());
        reps.push_back(static_cast<Element>(x));
        for (auto y : h) projection[group.mul(static_cast<Element>(x), static_cast<Element>(y))] = coset;
    }
    const std::size_t k = reps.size();
    std::vector<Element> table(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) table[i * k + j] = projection[group.mul(reps[i], reps[j])];
    FiniteCommutativeMonoid q(k, std::move(table), projection[group.identity()]);
    return {std::move(q), std::move(projection)};
}

CyclicDecomposition invariant_factors(const FiniteCommutativeMonoid& group) {
    if (!group.is_group()) throw DomainError("invariant factors require a group");
    const std::uint64_t n = group.size();
    if (n == 1) return {};

    std::vector<std::uint64_t> orders(n);
    for (std::size_t x = 0; x < n; ++x) orders[x] = group.order(static_cast<Element>(x));

    // For each prime p: c_j = #{x : x^{p^j} = 1} = p^{sum_i min(e_i, j)}, so
    // log_p(c_j / c_{j-1}) counts the cyclic p-parts of exponent >= j.
    std::vector<std::uint64_t> invariant;  // built from the largest factor down
    const auto order_factors = factorize(n);
    for (const auto& [p, k] : order_factors.factors()) {
        std::vector<std::uint64_t> parts;  // exponents of the p-primary cyclic parts
        std::uint64_t prev = 1;
        std::uint64_t pj = 1;
        std::vector<std::size_t> at_least;  // at_least[j-1] = number of parts with exponent >= j
        for (std::uint32_t j = 1; j <= k; ++j) {
            pj *= p;
            std::uint64_t cj = 0;
            for (auto o : orders)
                if (pj % o == 0) ++cj;
            std::size_t m = 0;
            for (std::uint64_t ratio = cj / prev; ratio > 1; ratio /= p) ++m;
            at_least.push_back(m);
            prev = cj;
        }
        // Parts sorted descending: part i has exponent #{j : at_least[j-1] > i}.
        const std::size_t count = at_least.empty() ? 0 : at_least.front();
        if (invariant.size() < count) invariant.resize(count, 1);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t power = 1;
            for (auto a : at_least)
                if (a > i) power *= p;
            invariant[i] *= power;
        }
    }
    std::reverse(invariant.begin(), invariant.end());
    return CyclicDecomposition(std::move(invariant));
}

std::vector<Element> group_basis(const FiniteCommutativeMonoid& group) {
    const auto shape = invariant_factors(group);
    const std::size_t n = group.size();
    DynamicBitset span(n);
    span.set(group.identity());
    std::vector<Element> span_elements{group.identity()};
    std::vector<Element> basis;  // largest order first

    while (span_elements.size() < n) {
        Element best = 0;
        std::uint64_t best_order = 0;
        for (std::size_t x = 0; x < n; ++x) {
            if (span.test(x)) continue;
            std::uint64_t m = 1;
            for (Element y = static_cast<Element>(x); !span.test(y); y = group.mul(y, static_cast<Element>(x))) ++m;
            if (m > best_order) {
                best_order = m;
                best = static_cast<Element>(x);
            }
        }
        std::optional<Element> lift;
        for (Element h : span_elements) {
            const Element y = group.mul(best, h);
            if (group.pow(y, best_order) == group.identity()) {
                lift = y;
                break;
            }
        }
        if (!lift) throw InvariantFailure("no lift of maximal coset order");
        basis.push_back(*lift);

        std::vector<Element> grown;
        grown.reserve(span_elements.size() * best_order);
        Element power = group.identity();
        for (std::uint64_t j = 0; j < best_order; ++j) {
            for (Element h : span_elements) grown.push_back(group.mul(h, power));
            power = group.mul(power, *lift);
        }
        for (Element g : grown) {
            if (span.test(g)) continue;
            span.set(g);
            span_elements.push_back(g);
        }
        if (span_elements.size() != grown.size()) throw InvariantFailure("basis element is not independent");
    }

    std::reverse(basis.begin(), basis.end());
    if (basis.size() != shape.rank()) throw InvariantFailure("basis size differs from the rank");
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (group.order(basis[i]) != shape.orders()[i]) throw InvariantFailure("basis orders differ from invariant factors");
    return basis;
}

}  // namespace ebconst
