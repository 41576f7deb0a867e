#include "ebconst/burgess.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <string>

#include "ebconst/errors.hpp"
#include "ebconst/integers.hpp"

namespace ebconst {

namespace {

std::vector<std::vector<std::uint32_t>> compute_valuations(const FiniteCommutativeMonoid& m,
                                                           const std::vector<PrimeComponent>& components) {
    std::vector<std::vector<std::uint32_t>> out;
    for (const auto& c : components) {
        std::vector<std::uint32_t> v(m.size(), 0);
        // p^j M shrinks as j grows, so later passes overwrite with larger j.
        for (std::uint32_t j = 1; j <= c.exponent; ++j) {
            const auto row = m.row(m.pow(c.residue, j));
            for (auto x : row) v[x] = j;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::uint64_t parse_number(std::string_view text, const char* what) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end)
        throw ParseError(std::string("invalid ") + what + ": '" + std::string(text) + "'");
    return value;
}

DynamicBitset forbidden_of(const FiniteCommutativeMonoid& m) { return m.idempotents(); }

bool recheck_free(const FiniteCommutativeMonoid& m, const Sequence& s) {
    if (s.empty()) return true;
    const auto products = products_at_least(m, s, 1);
    return !products.at_least(1).intersects(m.idempotents());
}

std::uint64_t euler_phi(std::uint64_t n) { return factorize(n).euler_phi(); }

bool is_squarefree(const Factorization& f) {
    return std::all_of(f.factors().begin(), f.factors().end(), [](const auto& pk) { return pk.second == 1; });
}

// min over primes p with n = s p^k (s > 1 squarefree, p not dividing s) of
// D + (k - 1) + (phi(s) - 1).
std::optional<std::uint64_t> s_pk_bound(const Factorization& f, std::uint64_t davenport) {
    if (f.omega() < 2) return std::nullopt;
    std::optional<std::uint64_t> best;
    for (const auto& [p, k] : f.factors()) {
        bool rest_squarefree = true;
        std::uint64_t s = 1;
        for (const auto& [q, e] : f.factors()) {
            if (q == p) continue;
            if (e != 1) rest_squarefree = false;
            s *= q;
        }
        if (!rest_squarefree) continue;
        const std::uint64_t bound = davenport + (k - 1) + (euler_phi(s) - 1);
        if (!best || bound < *best) best = bound;
    }
    return best;
}

std::string join_coeffs(const PrimeFieldPoly& f) {
    std::string out;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(f.coeffs()[i]);
    }
    return out;
}

void add_check(TheoremCertificate& cert, std::string name, bool ok, std::string detail) {
    cert.checks.push_back({std::move(name), ok ? CheckOutcome::pass : CheckOutcome::fail, std::move(detail)});
}

std::string relation(std::uint64_t a, const char* op, std::uint64_t b) {
    return std::to_string(a) + " " + op + " " + std::to_string(b);
}

}  // namespace

std::uint32_t RingInstance::big_omega() const noexcept {
    std::uint32_t total = 0;
    for (const auto& c : components) total += c.exponent;
    return total;
}

std::string RingInstance::label(Element x) const {
    if (kind == RingKind::zmod) return std::to_string(x);
    return PrimeFieldPoly::from_index(modulus->characteristic(), x).to_string();
}

std::string RingInstance::format(const Sequence& s) const {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += label(s[i]);
    }
    return out + ")";
}

RingInstance make_zmod(std::uint64_t n, std::size_t cap) {
    if (n < 2) throw DomainError("modulus must be at least 2");
    auto monoid = modular_monoid(n, cap);
    const auto f = factorize(n);
    std::vector<PrimeComponent> components;
    for (const auto& [p, k] : f.factors())
        components.push_back({std::to_string(p), p, static_cast<Element>(p % n), k});
    RingInstance r{"zmod:" + std::to_string(n), RingKind::zmod, n, std::nullopt, std::move(monoid),
                   std::move(components), {}};
    r.valuation = compute_valuations(r.monoid, r.components);
    return r;
}

RingInstance make_polyring(const PrimeFieldPoly& f, std::size_t cap) {
    const auto factored = factor_poly(f);
    const PrimeFieldPoly monic = factored.f;
    auto monoid = build_quotient_monoid(monic, cap);
    std::vector<PrimeComponent> components;
    for (const auto& [g, k] : factored.factors)
        components.push_back({g.to_string(), 0, static_cast<Element>(mod(g, monic).index()), k});
    RingInstance r{"polyring:" + std::to_string(monic.characteristic()) + ":" + join_coeffs(monic),
                   RingKind::polyring,
                   0,
                   monic,
                   std::move(monoid),
                   std::move(components),
                   {}};
    r.valuation = compute_valuations(r.monoid, r.components);
    return r;
}

RingInstance parse_ring_key(std::string_view key, std::size_t cap) {
    const auto colon = key.find(':');
    if (colon == std::string_view::npos) throw ParseError("ring key needs a kind prefix: '" + std::string(key) + "'");
    const auto kind = key.substr(0, colon);
    const auto rest = key.substr(colon + 1);
    if (kind == "zmod") return make_zmod(parse_number(rest, "modulus"), cap);
    if (kind == "polyring") {
        const auto second = rest.find(':');
        if (second == std::string_view::npos) throw ParseError("polyring key needs p and coefficients");
        const auto p = parse_number(rest.substr(0, second), "characteristic");
        if (p > 0xffffffffu) throw DomainError("characteristic too large");
        const auto f = PrimeFieldPoly::parse(static_cast<std::uint32_t>(p), rest.substr(second + 1));
        if (f.degree() < 1) throw DomainError("modulus must have positive degree");
        return make_polyring(f, cap);
    }
    throw ParseError("unknown ring kind '" + std::string(kind) + "'");
}

DynamicBitset quasi_squarefree_mask(const RingInstance& r) {
    DynamicBitset mask(r.monoid.size());
    for (std::size_t x = 0; x < r.monoid.size(); ++x) {
        bool ok = true;
        for (const auto& v : r.valuation) ok = ok && v[x] <= 1;
        if (ok) mask.set(x);
    }
    return mask;
}

DynamicBitset reduced_candidates(const RingInstance& r) {
    auto mask = quasi_squarefree_mask(r);
    for (std::size_t i = 0; i < r.components.size(); ++i) {
        if (r.components[i].exponent != 1) continue;
        for (std::size_t x = 0; x < r.monoid.size(); ++x)
            if (r.valuation[i][x] != 0) mask.reset(x);
    }
    return mask;
}

std::string to_string(ReducedMode m) {
    switch (m) {
        case ReducedMode::off: return "off";
        case ReducedMode::on: return "on";
        case ReducedMode::check: return "check";
    }
    return "off";
}

ReducedMode parse_reduced_mode(std::string_view text) {
    if (text == "off") return ReducedMode::off;
    if (text == "on") return ReducedMode::on;
    if (text == "check") return ReducedMode::check;
    throw ParseError("reduced mode must be off, on or check");
}

UnitDavenport davenport_of_units(const RingInstance& r, DavenportOptions options) {
    const auto units = unit_subgroup(r.monoid);
    const auto& group = units.monoid;
    const auto shape = invariant_factors(group);

    DavenportResult result;
    if (davenport_formula_applies(shape)) {
        std::vector<Element> basis;
        if (r.kind == RingKind::zmod) {
            const auto decomposition = unit_group_decomposition(factorize(r.n));
            if (!(decomposition.invariant_factors == shape))
                throw InvariantFailure("unit group decomposition disagrees with the table");
            for (auto g : decomposition.generators) {
                auto it = std::lower_bound(units.members.begin(), units.members.end(), static_cast<Element>(g));
                if (it == units.members.end() || *it != g) throw InvariantFailure("generator is not a unit");
                basis.push_back(static_cast<Element>(it - units.members.begin()));
            }
        } else {
            basis = group_basis(group);
        }
        result = davenport_from_basis(group, shape, basis);
    } else {
        result = davenport_exhaustive(group, options);
    }

    std::vector<Element> lifted;
    for (auto g : result.witness) lifted.push_back(units.members[g]);
    return {shape, std::move(result), Sequence(std::move(lifted))};
}

BurgessResult burgess_exhaustive(const FiniteCommutativeMonoid& m, BurgessOptions options) {
    FreeSearchOptions search_options;
    search_options.start_length = options.start_length;
    search_options.candidates = options.candidates;
    search_options.node_budget = options.node_budget;
    FreeSequenceSearch search(m, forbidden_of(m), search_options);
    auto found = search.run();

    BurgessResult result{found.max_length + 1, std::move(found.witness), found.stats};
    if (result.witness.size() != found.max_length) throw InvariantFailure("witness has the wrong length");
    if (!recheck_free(m, result.witness)) throw InvariantFailure("witness has an idempotent product");
    if (options.candidates)
        for (auto x : result.witness)
            if (!options.candidates->test(x)) throw InvariantFailure("witness uses an excluded element");
    return result;
}

Sequence lower_bound_construction(const RingInstance& r, const Sequence& unit_witness, std::uint64_t davenport) {
    if (unit_witness.size() + 1 != davenport) throw DomainError("unit witness must have length D - 1");
    for (auto x : unit_witness)
        if (!r.monoid.units().test(x)) throw DomainError("unit witness contains a non-unit");
    Sequence s = unit_witness;
    for (const auto& c : r.components) s = s.extended(c.residue, c.exponent - 1);
    if (s.size() != davenport + r.big_omega() - r.omega() - 1)
        throw InvariantFailure("construction has the wrong length");
    if (!recheck_free(r.monoid, s)) throw InvariantFailure("construction has an idempotent product");
    return s;
}

std::string to_string(CaseTag t) {
    switch (t) {
        case CaseTag::prime_power: return "primePower";
        case CaseTag::squarefree: return "squarefree";
        case CaseTag::twice_odd: return "twiceOdd";
        case CaseTag::two_primes: return "twoPrimes";
        case CaseTag::s_pk_upper: return "sPk-upper";
        case CaseTag::unproven: return "unproven";
    }
    return "unproven";
}

bool is_proven(CaseTag t) {
    return t == CaseTag::prime_power || t == CaseTag::squarefree || t == CaseTag::twice_odd ||
           t == CaseTag::two_primes;
}

CaseTag classify(const RingInstance& r) {
    const auto omega = r.omega();
    const bool squarefree = r.big_omega() == omega;
    if (omega == 1) return CaseTag::prime_power;
    if (squarefree) return CaseTag::squarefree;
    if (r.kind == RingKind::polyring) return CaseTag::unproven;

    const auto f = factorize(r.n);
    if (r.n % 2 == 0 && f.exponent_of(2) == 1) {
        const auto m = factorize(r.n / 2);
        if (m.omega() <= 2 || is_squarefree(m)) return CaseTag::twice_odd;
    }
    if (omega == 2) return CaseTag::two_primes;
    std::size_t repeated = 0;
    for (const auto& c : r.components) repeated += c.exponent > 1 ? 1 : 0;
    if (repeated == 1) return CaseTag::s_pk_upper;
    return CaseTag::unproven;
}

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::confirmed: return "confirmed";
        case CertStatus::bounds_only: return "boundsOnly";
        case CertStatus::violation: return "violation";
    }
    return "violation";
}

std::string to_string(CheckOutcome o) {
    switch (o) {
        case CheckOutcome::pass: return "pass";
        case CheckOutcome::fail: return "fail";
        case CheckOutcome::info: return "info";
        case CheckOutcome::skipped: return "skipped";
    }
    return "fail";
}

std::optional<std::int64_t> TheoremCertificate::delta() const {
    if (!exhaustive) return std::nullopt;
    return static_cast<std::int64_t>(*exhaustive) - static_cast<std::int64_t>(lower);
}

bool TheoremCertificate::all_checks_pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.outcome == CheckOutcome::fail; });
}

namespace {

// I and D for Z/mZ, used by the doubling and tripling comparisons.
struct SmallValue {
    std::uint64_t davenport;
    std::uint64_t value;
};

SmallValue small_value(std::uint64_t m, const CertifyOptions& options) {
    const auto r = make_zmod(m);
    const auto ud = davenport_of_units(r, options.davenport);
    BurgessOptions bo;
    bo.start_length = ud.result.value + r.big_omega() - r.omega() - 1;
    bo.node_budget = options.node_budget;
    return {ud.result.value, burgess_exhaustive(r.monoid, bo).value};
}

void spot_check(const RingInstance& r, TheoremCertificate& cert, const CertifyOptions& options) {
    const auto length = *cert.exhaustive;
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(r.monoid.size())};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(r.monoid.size() - 1));
    for (std::size_t t = 0; t < options.trials; ++t) {
        std::vector<Element> terms(length);
        for (auto& x : terms) x = pick(rng);
        const Sequence s(std::move(terms));
        const auto positions = find_forbidden_subsequence(r.monoid, s, r.monoid.idempotents());
        bool ok = positions && !positions->empty();
        if (ok) {
            Element product = r.monoid.identity();
            for (auto i : *positions) product = r.monoid.mul(product, s[i]);
            ok = r.monoid.idempotents().test(product);
        }
        if (!ok) {
            add_check(cert, "spot_check", false, "no idempotent subsequence in " + r.format(s));
            return;
        }
    }
    add_check(cert, "spot_check", true, std::to_string(options.trials) + " random sequences of length " +
                                             std::to_string(length));
}

}  // namespace

TheoremCertificate certify(const RingInstance& r, const CertifyOptions& options) {
    TheoremCertificate cert;
    cert.key = r.key;
    cert.tag = classify(r);

    const auto ud = davenport_of_units(r, options.davenport);
    cert.unit_shape = ud.shape;
    cert.davenport = ud.result.value;
    cert.davenport_method = ud.result.method;
    cert.m_formula = davenport_formula_m(ud.shape);
    cert.davenport_witness = ud.ring_witness;
    cert.omega_gap = r.big_omega() - r.omega();
    cert.lower = cert.davenport + cert.omega_gap;

    const std::uint64_t ghw = r.monoid.size() - r.monoid.idempotents().count() + 1;
    cert.upper = ghw;
    std::optional<std::uint64_t> spk;
    if (r.kind == RingKind::zmod) spk = s_pk_bound(factorize(r.n), cert.davenport);
    if (spk) cert.upper = std::min(cert.upper, *spk);
    if (is_proven(cert.tag)) cert.upper = cert.lower;

    try {
        cert.construction = lower_bound_construction(r, ud.ring_witness, cert.davenport);
        add_check(cert, "construction", true, "free of length " + std::to_string(cert.construction.size()));
    } catch (const InvariantFailure& e) {
        add_check(cert, "construction", false, e.what());
    }

    BurgessOptions bo;
    bo.start_length = cert.lower - 1;
    bo.node_budget = options.node_budget;
    if (options.reduced_mode == ReducedMode::on) bo.candidates = reduced_candidates(r);
    try {
        const auto result = burgess_exhaustive(r.monoid, bo);
        cert.exhaustive = result.value;
        cert.burgess_witness = result.witness;
        cert.stats = result.stats;
    } catch (const SearchBudgetExceeded& e) {
        cert.checks.push_back({"exhaustive_search", CheckOutcome::skipped, e.what()});
    }

    if (cert.exhaustive) {
        const auto value = *cert.exhaustive;
        add_check(cert, "witness_recheck",
                  cert.burgess_witness.size() + 1 == value && recheck_free(r.monoid, cert.burgess_witness),
                  "length " + std::to_string(cert.burgess_witness.size()) + ", no idempotent product");
        add_check(cert, "lower_bound", value >= cert.lower, relation(value, ">=", cert.lower));
        add_check(cert, "ghw_upper_bound", value <= ghw, relation(value, "<=", ghw));
        if (spk) add_check(cert, "s_pk_upper_bound", value <= *spk, relation(value, "<=", *spk));
        if (is_proven(cert.tag)) add_check(cert, "proven_value", value == cert.lower, relation(value, "==", cert.lower));

        if (options.reduced_mode == ReducedMode::check) {
            BurgessOptions reduced = bo;
            reduced.candidates = reduced_candidates(r);
            try {
                const auto other = burgess_exhaustive(r.monoid, reduced).value;
                add_check(cert, "reduced_mode", other == value, relation(other, "==", value));
            } catch (const SearchBudgetExceeded& e) {
                cert.checks.push_back({"reduced_mode", CheckOutcome::skipped, e.what()});
            }
        }

        if (r.kind == RingKind::zmod && r.n % 2 == 0 && (r.n / 2) % 2 == 1 && r.n / 2 > 1) {
            try {
                const auto half = small_value(r.n / 2, options);
                add_check(cert, "doubling", value == half.value, relation(value, "==", half.value));
                add_check(cert, "doubling_davenport", cert.davenport == half.davenport,
                          relation(cert.davenport, "==", half.davenport));
            } catch (const SearchBudgetExceeded& e) {
                cert.checks.push_back({"doubling", CheckOutcome::skipped, e.what()});
            }
        }
        if (r.kind == RingKind::zmod && r.n % 3 == 0 && (r.n / 3) % 3 != 0 && r.n / 3 > 1) {
            try {
                const auto third = small_value(r.n / 3, options);
                const auto d = static_cast<std::int64_t>(value) - static_cast<std::int64_t>(third.value);
                cert.checks.push_back({"tripling", CheckOutcome::info, "I(3m) - I(m) = " + std::to_string(d)});
            } catch (const SearchBudgetExceeded& e) {
                cert.checks.push_back({"tripling", CheckOutcome::skipped, e.what()});
            }
        }
        if (options.trials > 0) spot_check(r, cert, options);
    }

    if (!cert.all_checks_pass()) cert.status = CertStatus::violation;
    else cert.status = cert.exhaustive ? CertStatus::confirmed : CertStatus::bounds_only;
    return cert;
}

TheoremCertificate certify_theorems(std::uint64_t n, const CertifyOptions& options) {
    return certify(make_zmod(n), options);
}

ExtremalReport enumerate_extremal(const RingInstance& r, std::size_t limit, std::uint64_t node_budget) {
    const auto ud = davenport_of_units(r);
    FreeSearchOptions search_options;
    search_options.start_length = ud.result.value + r.big_omega() - r.omega() - 1;
    search_options.node_budget = node_budget;
    FreeSequenceSearch search(r.monoid, r.monoid.idempotents(), search_options);
    const auto found = search.run();

    ExtremalReport report;
    report.value = found.max_length + 1;
    if (found.max_length == 0) return report;
    auto sequences = search.enumerate(found.max_length, limit);
    std::sort(sequences.begin(), sequences.end());
    const auto qsf = quasi_squarefree_mask(r);
    for (auto& s : sequences) {
        ExtremalSequence e{std::move(s), true, true};
        for (auto x : e.sequence) {
            if (!qsf.test(x)) e.quasi_squarefree = false;
            for (std::size_t i = 0; i < r.components.size(); ++i)
                if (r.components[i].exponent == 1 && r.valuation[i][x] != 0) e.coprime_to_simple = false;
        }
        if (!recheck_free(r.monoid, e.sequence)) throw InvariantFailure("enumerated sequence is not free");
        report.quasi_squarefree_count += e.quasi_squarefree ? 1 : 0;
        report.coprime_count += e.coprime_to_simple ? 1 : 0;
        report.sequences.push_back(std::move(e));
    }
    return report;
}

QuasiSquarefreeReport quasi_squarefree_restriction_check(const RingInstance& r, std::uint64_t node_budget) {
    BurgessOptions bo;
    bo.node_budget = node_budget;
    QuasiSquarefreeReport report;
    report.unrestricted = burgess_exhaustive(r.monoid, bo).value - 1;
    bo.candidates = quasi_squarefree_mask(r);
    report.restricted = burgess_exhaustive(r.monoid, bo).value - 1;
    return report;
}

}  // namespace ebconst
