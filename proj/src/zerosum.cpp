#include "ebconst/zerosum.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ebconst/errors.hpp"
#include "ebconst/integers.hpp"

namespace ebconst {

namespace {

std::string describe(const Sequence& s) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ')';
    return os.str();
}

DynamicBitset singleton(std::size_t size, Element e) {
    DynamicBitset b(size);
    b.set(e);
    return b;
}

}  // namespace

ProductSet products_at_least(const FiniteCommutativeMonoid& m, const Sequence& s, std::size_t k) {
    if (k > s.size()) throw DomainError("threshold exceeds sequence length");
    const std::size_t n = m.size();
    // exact[j]: products of exactly j terms (j = k means at least k).
    std::vector<DynamicBitset> exact(k + 1, DynamicBitset(n));
    exact[0].set(m.identity());
    for (auto a : s) {
        if (a >= n) throw DomainError("sequence term out of range");
        const auto row = m.row(a);
        for (std::size_t j = k + 1; j-- > 0;) {
            const std::size_t to = std::min(j + 1, k);
            DynamicBitset image(n);
            exact[j].for_each([&](std::size_t x) { image.set(row[x]); });
            exact[to] |= image;
        }
    }
    ProductSet out;
    out.per_threshold.assign(k + 1, DynamicBitset(n));
    DynamicBitset acc(n);
    for (std::size_t j = k + 1; j-- > 0;) {
        acc |= exact[j];
        out.per_threshold[j] = acc;
    }
    for (std::size_t j = 0; j < k; ++j)
        if (!out.per_threshold[j + 1].is_subset_of(out.per_threshold[j]))
            throw InvariantFailure("product sets not monotone in the threshold");
    return out;
}

bool is_free(const FiniteCommutativeMonoid& m, const Sequence& s, const DynamicBitset& forbidden) {
    if (s.empty()) return true;
    return !products_at_least(m, s, 1).at_least(1).intersects(forbidden);
}

std::optional<std::vector<std::size_t>> find_forbidden_subsequence(const FiniteCommutativeMonoid& m,
                                                                   const Sequence& s,
                                                                   const DynamicBitset& forbidden) {
    // parent[x] records how x first became reachable as a nonempty product.
    constexpr std::size_t kNone = ~std::size_t{0};
    struct Origin {
        std::size_t term = kNone;
        std::size_t from = kNone;  // previous product, kNone for the single term
    };
    const std::size_t n = m.size();
    std::vector<Origin> origin(n);
    DynamicBitset reached(n);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Element a = s[i];
        const auto row = m.row(a);
        std::vector<std::pair<Element, Origin>> fresh;
        if (!reached.test(a)) fresh.push_back({a, {i, kNone}});
        reached.for_each([&](std::size_t x) {
            const Element y = row[x];
            if (!reached.test(y)) fresh.push_back({y, {i, x}});
        });
        for (const auto& [y, o] : fresh) {
            if (reached.test(y)) continue;
            reached.set(y);
            origin[y] = o;
            if (forbidden.test(y)) {
                std::vector<std::size_t> positions;
                for (std::size_t cur = y; cur != kNone; cur = origin[cur].from) positions.push_back(origin[cur].term);
                std::reverse(positions.begin(), positions.end());
                return positions;
            }
        }
    }
    return std::nullopt;
}

KFoldReport kfold_lemma_check(const FiniteCommutativeMonoid& group, const Sequence& s, std::size_t k) {
    if (!group.is_group()) throw DomainError("k-fold check requires a group");
    if (k == 0 || k > s.size()) throw DomainError("k-fold check requires 0 < k <= |S|");
    const std::size_t t = s.size() - k;
    const auto sets = products_at_least(group, s, k);
    const auto& p = sets.at_least(k);
    KFoldReport report{p.test(group.identity()), p.count()};
    if (!report.identity_reached && report.set_size < t + 1)
        throw InvariantFailure("k-fold product bound violated: S=" + describe(s) + " k=" + std::to_string(k));
    return report;
}

StabilizerReport stabilizer_bound_check(const FiniteCommutativeMonoid& group, const Sequence& s) {
    if (!group.is_group()) throw DomainError("stabilizer check requires a group");
    for (auto a : s)
        if (a == group.identity()) throw DomainError("stabilizer check requires non-identity terms");
    const auto p = products_at_least(group, s, 0).at_least(0);
    const auto stab = stabilizer(group, p);
    StabilizerReport report{p.count(), stab.count(), stab.count() == 1};
    if (report.bound_applied && report.product_set_size < s.size() + 1)
        throw InvariantFailure("stabilizer bound violated: S=" + describe(s));
    return report;
}

GcdInequalityReport gcd_inequality_check(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    if (a == 0 || b == 0 || c == 0) throw DomainError("gcd inequality needs positive integers");
    if (c % b != 0) throw DomainError("gcd inequality needs b | c");
    const auto lhs = static_cast<std::int64_t>(std::gcd(a, c) + lcm(a, c)) -
                     static_cast<std::int64_t>(std::gcd(a, b) + lcm(a, b));
    const auto rhs = static_cast<std::int64_t>(c / b) - 1;
    if (lhs < rhs)
        throw InvariantFailure("gcd inequality violated at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                               std::to_string(c) + ")");
    return {lhs, rhs};
}

std::uint64_t davenport_formula_m(const CyclicDecomposition& g) {
    std::uint64_t m = 1;
    for (auto n : g.orders()) m += n - 1;
    return m;
}

std::uint64_t davenport_rank2(std::uint64_t a, std::uint64_t b) {
    if (a < 2 || b < 2) throw DomainError("rank-2 formula needs a, b >= 2");
    return std::gcd(a, b) + lcm(a, b) - 1;
}

bool davenport_formula_applies(const CyclicDecomposition& g) { return g.rank() <= 2 || g.is_p_group(); }

std::string to_string(DavenportMethod m) { return m == DavenportMethod::formula ? "formula" : "exhaustive"; }

DavenportResult davenport_exhaustive(const FiniteCommutativeMonoid& group, DavenportOptions options) {
    if (!group.is_group()) throw DomainError("Davenport constant requires a group");
    check_capacity(group.size(), options.cap, "Davenport search");
    const auto shape = invariant_factors(group);
    const auto zero = singleton(group.size(), group.identity());

    FreeSearchOptions search_options;
    search_options.start_length = davenport_formula_m(shape) - 1;
    search_options.node_budget = options.node_budget;
    FreeSequenceSearch search(group, zero, search_options);
    auto found = search.run();

    DavenportResult result{found.max_length + 1, std::move(found.witness), DavenportMethod::exhaustive, found.stats};
    if (result.witness.size() != result.value - 1 || !is_free(group, result.witness, zero))
        throw InvariantFailure("Davenport witness is not zero-sum-free");
    for (std::size_t g = 0; g < group.size(); ++g)
        if (is_free(group, result.witness.extended(static_cast<Element>(g)), zero))
            throw InvariantFailure("Davenport witness extends to a longer zero-sum-free sequence");
    if (result.value < davenport_formula_m(shape))
        throw InvariantFailure("exhaustive Davenport constant below M(G)");
    return result;
}

DavenportResult davenport_exhaustive(const CyclicDecomposition& g, DavenportOptions options) {
    return davenport_exhaustive(group_as_monoid(g, options.cap), options);
}

DavenportResult davenport_from_basis(const FiniteCommutativeMonoid& group, const CyclicDecomposition& g,
                                     const std::vector<Element>& basis) {
    if (!davenport_formula_applies(g)) throw DomainError("D(G) = M(G) is not established for this group");
    if (basis.size() != g.rank()) throw DomainError("basis size does not match the rank");
    std::vector<Element> terms;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (group.order(basis[i]) != g.orders()[i]) throw DomainError("basis element has the wrong order");
        terms.insert(terms.end(), g.orders()[i] - 1, basis[i]);
    }
    DavenportResult result{davenport_formula_m(g), Sequence(std::move(terms)), DavenportMethod::formula, {}};
    if (!is_free(group, result.witness, singleton(group.size(), group.identity())))
        throw InvariantFailure("basis witness is not zero-sum-free");
    return result;
}

}  // namespace ebconst
