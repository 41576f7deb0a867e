/**
 * @file acceptance.cpp
 * @brief Acceptance checks. Prints one PASS/FAIL line per criterion and
 * exits nonzero if any criterion fails. All comparisons are exact.
 */

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "ebconst/burgess.hpp"
#include "ebconst/integers.hpp"
#include "ebconst/verifier.hpp"
#include "ebconst/zerosum.hpp"

#ifndef EBCONST_CLI_PATH
#error "EBCONST_CLI_PATH must point at the ebconst executable"
#endif

using namespace ebconst;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt_seconds(double s) {
    std::ostringstream o;
    o.precision(2);
    o << std::fixed << s << "s";
    return o.str();
}

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    if (!pass) ++failures;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << id << ". " << what << " -- " << detail << std::endl;
}

std::uint64_t exhaustive_ir(const RingInstance& r, std::optional<DynamicBitset> candidates = std::nullopt) {
    BurgessOptions o;
    o.candidates = std::move(candidates);
    return burgess_exhaustive(r.monoid, o).value;
}

std::uint64_t phi(std::uint64_t n) {
    std::uint64_t count = 0;
    for (std::uint64_t x = 1; x <= n; ++x) count += std::gcd(x, n) == 1 ? 1 : 0;
    return count;
}

// Independent freeness check: grow the set of subset products term by term.
bool free_by_product_set(std::uint64_t n, const Sequence& s) {
    std::set<std::uint64_t> reach;
    for (auto a : s) {
        auto next = reach;
        next.insert(a);
        for (auto x : reach) next.insert(x * a % n);
        reach = std::move(next);
    }
    for (auto x : reach)
        if (x * x % n == x) return false;
    return true;
}

std::string capture(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    status = pclose(pipe);
    return out;
}

void criterion_formula_sweep() {
    const auto start = Clock::now();
    double worst = 0;
    std::uint64_t worst_n = 0;
    std::string mismatch;
    for (std::uint64_t n = 2; n <= 36; ++n) {
        const auto t = Clock::now();
        const auto r = make_zmod(n);
        const auto d = davenport_of_units(r).result.value;
        const auto f = factorize(n);
        const auto value = exhaustive_ir(r);
        const auto expect = d + f.big_omega() - f.omega();
        if (value != expect && mismatch.empty())
            mismatch = "n=" + std::to_string(n) + " got " + std::to_string(value) + " expected " + std::to_string(expect);
        const double s = seconds_since(t);
        if (s > worst) {
            worst = s;
            worst_n = n;
        }
    }
    const double total = seconds_since(start);
    const bool pass = mismatch.empty() && total < 300 && worst < 60;
    report(1, pass, "I_r(Z/nZ) = D(units) + Omega(n) - omega(n) for every n in [2,36]",
           (mismatch.empty() ? "35 moduli agree" : mismatch) + ", total " + fmt_seconds(total) + ", slowest n=" +
               std::to_string(worst_n) + " " + fmt_seconds(worst));
}

void criterion_examples() {
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> expected{{4, 3}, {6, 2}, {12, 4}, {9, 7}, {18, 7}};
    std::string detail;
    bool pass = true;
    std::uint64_t i9 = 0, i18 = 0;
    for (const auto& [n, want] : expected) {
        const auto got = exhaustive_ir(make_zmod(n));
        if (n == 9) i9 = got;
        if (n == 18) i18 = got;
        pass = pass && got == want;
        detail += "I(" + std::to_string(n) + ")=" + std::to_string(got) + " ";
    }
    pass = pass && i9 == i18;
    detail += i9 == i18 ? "I(18)=I(9)" : "I(18)!=I(9)";
    report(2, pass, "worked examples Z/4, Z/6, Z/12, Z/9, Z/18", detail);
}

void criterion_davenport() {
    const auto start = Clock::now();
    std::string mismatch;
    std::size_t groups = 0;
    auto check = [&](const CyclicDecomposition& g, std::uint64_t want, const std::string& name) {
        ++groups;
        const auto got = davenport_exhaustive(g).value;
        if (got != want && mismatch.empty())
            mismatch = name + " got " + std::to_string(got) + " expected " + std::to_string(want);
    };
    for (std::uint64_t a = 2; a <= 6; ++a)
        for (std::uint64_t b = a; b <= 6; ++b)
            check(CyclicDecomposition::from_orders({a, b}), std::gcd(a, b) + std::lcm(a, b) - 1,
                  "C" + std::to_string(a) + "xC" + std::to_string(b));
    for (std::uint64_t n = 1; n <= 30; ++n) {
        const auto g = CyclicDecomposition::from_orders({n});
        check(g, davenport_formula_m(g), "C" + std::to_string(n));
    }
    for (const auto& orders : {std::vector<std::uint64_t>{2, 2, 2}, {3, 3}, {2, 4}}) {
        const CyclicDecomposition g(orders);
        std::string name;
        for (auto o : orders) name += (name.empty() ? "C" : "xC") + std::to_string(o);
        check(g, davenport_formula_m(g), name);
    }
    const double total = seconds_since(start);
    report(3, mismatch.empty() && total < 120,
           "exhaustive Davenport constants: gcd+lcm-1 for C_a x C_b (a,b <= 6), M(G) for cyclic of order <= 30, "
           "C2^3, C3^2, C2xC4",
           (mismatch.empty() ? std::to_string(groups) + " groups agree" : mismatch) + ", total " + fmt_seconds(total));
}

void criterion_construction() {
    std::string problem;
    for (std::uint64_t n = 2; n <= 100 && problem.empty(); ++n) {
        const auto r = make_zmod(n);
        const auto u = davenport_of_units(r);
        const auto f = factorize(n);
        const auto want = u.result.value + f.big_omega() - f.omega() - 1;
        try {
            const auto s = lower_bound_construction(r, u.ring_witness, u.result.value);
            if (s.size() != want)
                problem = "n=" + std::to_string(n) + " length " + std::to_string(s.size());
            else if (!free_by_product_set(n, s))
                problem = "n=" + std::to_string(n) + " not free: " + r.format(s);
        } catch (const std::exception& e) {
            problem = "n=" + std::to_string(n) + ": " + e.what();
        }
    }
    report(4, problem.empty(), "lower-bound construction is free of length D + Omega - omega - 1 for n in [2,100]",
           problem.empty() ? "99 moduli verified" : problem);
}

void criterion_spk_bound() {
    std::string detail;
    bool pass = true;
    for (std::uint64_t n : {12u, 18u, 20u, 24u, 45u, 50u}) {
        const auto f = factorize(n);
        std::uint64_t p = 0, k = 0;
        for (const auto& [q, e] : f.factors())
            if (e >= 2) {
                p = q;
                k = e;
            }
        std::uint64_t pk = 1;
        for (std::uint64_t j = 0; j < k; ++j) pk *= p;
        const auto s = n / pk;
        const auto r = make_zmod(n);
        const auto d = davenport_of_units(r).result.value;
        const auto bound = d + (k - 1) + (phi(s) - 1);
        const auto got = exhaustive_ir(r);
        pass = pass && got <= bound;
        detail += std::to_string(n) + ":" + std::to_string(got) + "<=" + std::to_string(bound) + " ";
    }
    report(5, pass, "I_r(Z/nZ) <= D + (k-1) + (phi(s)-1) for n = s p^k in {12,18,20,24,45,50}", detail);
}

void criterion_polyrings() {
    const auto a = parse_ring_key("polyring:2:t^2");
    const auto b = parse_ring_key("polyring:2:t^2+t");
    const auto c = parse_ring_key("polyring:3:t^2");
    const auto ia = exhaustive_ir(a);
    const auto ib = exhaustive_ir(b);
    const auto db = davenport_of_units(b).result.value;
    const auto ic = exhaustive_ir(c);
    const auto uc = davenport_of_units(c);
    const bool pass = ia == 3 && ib == db && db == 1 && uc.shape == CyclicDecomposition({6}) &&
                      uc.result.value == 6 && ic == uc.result.value + 1 && ic == 7;
    report(6, pass, "F_2[t]/(t^2) = 3, F_2[t]/(t^2+t) = D(units), F_3[t]/(t^2) = D(C_6) + 1",
           "I=" + std::to_string(ia) + ", I=" + std::to_string(ib) + " D=" + std::to_string(db) +
               ", I=" + std::to_string(ic) + " D=" + std::to_string(uc.result.value));
}

void criterion_checkers() {
    const std::size_t trials = 1000;
    const std::uint64_t seed = 1;
    std::string detail;
    bool pass = true;
    for (const auto& s : {run_kfold_suite(trials, seed), run_stabilizer_suite(trials, seed),
                          run_gcd_suite(trials, seed), run_reduction_suite(trials, seed)}) {
        pass = pass && s.violations == 0 && s.trials == trials;
        detail += s.name + " trials=" + std::to_string(s.trials) + " exhaustive=" + std::to_string(s.exhaustive_cases) +
                  " violations=" + std::to_string(s.violations) + "; ";
    }
    report(7, pass, "property checkers find zero violations", detail);
}

void criterion_reduced_mode() {
    std::string mismatch;
    for (std::uint64_t n = 2; n <= 36 && mismatch.empty(); ++n) {
        const auto r = make_zmod(n);
        const auto off = exhaustive_ir(r);
        const auto on = exhaustive_ir(r, reduced_candidates(r));
        if (off != on) mismatch = "n=" + std::to_string(n) + " off=" + std::to_string(off) + " on=" + std::to_string(on);
    }
    report(8, mismatch.empty(), "reduced mode gives the same I_r for n in [2,36]",
           mismatch.empty() ? "35 moduli agree" : mismatch);
}

void criterion_determinism() {
    const std::string command = std::string("\"") + EBCONST_CLI_PATH + "\" --no-cache sweep 2 36 --stable --seed 1";
    int s1 = 0, s2 = 0;
    const auto a = capture(command, s1);
    const auto b = capture(command, s2);
    const bool pass = s1 == 0 && s2 == 0 && !a.empty() && a == b;
    report(9, pass, "repeated `sweep 2 36 --stable --seed 1` is byte-identical",
           std::to_string(a.size()) + " bytes, exit statuses " + std::to_string(s1) + "/" + std::to_string(s2) +
               (a == b ? ", identical" : ", different"));
}

}  // namespace

int main() {
    const std::pair<int, void (*)()> criteria[] = {
        {1, criterion_formula_sweep}, {2, criterion_examples},   {3, criterion_davenport},
        {4, criterion_construction},  {5, criterion_spk_bound},  {6, criterion_polyrings},
        {7, criterion_checkers},      {8, criterion_reduced_mode}, {9, criterion_determinism}};
    for (const auto& [id, run] : criteria) {
        try {
            run();
        } catch (const std::exception& e) {
            report(id, false, "criterion raised an exception", e.what());
        }
    }
    std::cout << (failures == 0 ? "acceptance: all criteria passed" : "acceptance: " + std::to_string(failures) +
                                                                          " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
