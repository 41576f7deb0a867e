#include "ebconst/polyring.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "ebconst/errors.hpp"
#include "ebconst/integers.hpp"

namespace ebconst {

namespace {

std::uint32_t inverse_in_field(std::uint32_t a, std::uint32_t p) {
    return static_cast<std::uint32_t>(pow_mod(a, p - 2, p));
}

void require_same_field(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    if (a.characteristic() != b.characteristic())
        throw DomainError("polynomials over different characteristics");
}

}  // namespace

PrimeFieldPoly::PrimeFieldPoly(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw DomainError("characteristic must be prime, got " + std::to_string(p));
}

PrimeFieldPoly::PrimeFieldPoly(std::uint32_t p, std::vector<std::int64_t> coeffs) : PrimeFieldPoly(p) {
    coeffs_.reserve(coeffs.size());
    const auto sp = static_cast<std::int64_t>(p);
    for (auto c : coeffs) coeffs_.push_back(static_cast<Coeff>(((c % sp) + sp) % sp));
    normalize();
}

PrimeFieldPoly PrimeFieldPoly::monomial(std::uint32_t p, std::size_t degree, Coeff c) {
    PrimeFieldPoly out(p);
    out.coeffs_.assign(degree + 1, 0);
    out.coeffs_[degree] = c % p;
    out.normalize();
    return out;
}

PrimeFieldPoly PrimeFieldPoly::from_index(std::uint32_t p, std::uint64_t index) {
    PrimeFieldPoly out(p);
    while (index > 0) {
        out.coeffs_.push_back(static_cast<Coeff>(index % p));
        index /= p;
    }
    out.normalize();
    return out;
}

void PrimeFieldPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::uint64_t PrimeFieldPoly::index() const noexcept {
    std::uint64_t idx = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) idx = idx * p_ + *it;
    return idx;
}

PrimeFieldPoly PrimeFieldPoly::scaled(Coeff c) const {
    PrimeFieldPoly out(*this);
    for (auto& x : out.coeffs_) x = static_cast<Coeff>(std::uint64_t{x} * c % p_);
    out.normalize();
    return out;
}

PrimeFieldPoly PrimeFieldPoly::monic() const {
    if (is_zero()) throw DomainError("zero polynomial has no monic associate");
    return scaled(inverse_in_field(leading(), p_));
}

std::string PrimeFieldPoly::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const Coeff c = coeffs_[i];
        if (c == 0) continue;
        if (!out.empty()) out += '+';
        if (i == 0 || c != 1) out += std::to_string(c);
        if (i >= 1) out += 't';
        if (i >= 2) out += '^' + std::to_string(i);
    }
    return out;
}

PrimeFieldPoly operator+(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    require_same_field(a, b);
    PrimeFieldPoly out(a);
    if (out.coeffs_.size() < b.coeffs_.size()) out.coeffs_.resize(b.coeffs_.size(), 0);
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out.coeffs_[i] = (out.coeffs_[i] + b.coeffs_[i]) % a.p_;
    out.normalize();
    return out;
}

PrimeFieldPoly operator-(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    require_same_field(a, b);
    PrimeFieldPoly out(a);
    if (out.coeffs_.size() < b.coeffs_.size()) out.coeffs_.resize(b.coeffs_.size(), 0);
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
        out.coeffs_[i] = (out.coeffs_[i] + a.p_ - b.coeffs_[i]) % a.p_;
    out.normalize();
    return out;
}

PrimeFieldPoly operator*(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    require_same_field(a, b);
    PrimeFieldPoly out(a.p_);
    if (a.is_zero() || b.is_zero()) return out;
    std::vector<std::uint64_t> acc(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            acc[i + j] = (acc[i + j] + std::uint64_t{a.coeffs_[i]} * b.coeffs_[j]) % a.p_;
    out.coeffs_.assign(acc.begin(), acc.end());
    out.normalize();
    return out;
}

std::pair<PrimeFieldPoly, PrimeFieldPoly> divmod(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    require_same_field(a, b);
    if (b.is_zero()) throw DomainError("division by the zero polynomial");
    const std::uint32_t p = a.characteristic();
    const std::uint32_t lead_inv = inverse_in_field(b.leading(), p);
    std::vector<std::int64_t> rem(a.coeffs().begin(), a.coeffs().end());
    const int db = b.degree();
    std::vector<std::int64_t> quot(static_cast<std::size_t>(std::max(a.degree() - db + 1, 0)), 0);
    for (int i = a.degree(); i >= db; --i) {
        const auto c = static_cast<std::uint64_t>(rem[static_cast<std::size_t>(i)] % p) * lead_inv % p;
        if (c == 0) continue;
        quot[static_cast<std::size_t>(i - db)] = static_cast<std::int64_t>(c);
        for (int j = 0; j <= db; ++j) {
            auto& r = rem[static_cast<std::size_t>(i - db + j)];
            r = (r + static_cast<std::int64_t>(p - c * b.coeffs()[static_cast<std::size_t>(j)] % p)) % p;
        }
    }
    return {PrimeFieldPoly(p, std::move(quot)), PrimeFieldPoly(p, std::move(rem))};
}

PrimeFieldPoly mod(const PrimeFieldPoly& a, const PrimeFieldPoly& b) { return divmod(a, b).second; }

PrimeFieldPoly gcd(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    PrimeFieldPoly x = a, y = b;
    while (!y.is_zero()) x = std::exchange(y, mod(x, y));
    return x.is_zero() ? x : x.monic();
}

PrimeFieldPoly poly_mul_mod(const PrimeFieldPoly& a, const PrimeFieldPoly& b, const PrimeFieldPoly& f) {
    require_same_field(a, b);
    require_same_field(a, f);
    if (f.degree() < 1) throw DomainError("modulus must have degree >= 1");
    return mod(a * b, f);
}

bool poly_less(const PrimeFieldPoly& a, const PrimeFieldPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.coeffs() < b.coeffs();
}

namespace {

/// Calls f(g) for every monic polynomial of degree d in base-p order; stops
/// when f returns true. Returns whether it stopped.
template <class F>
bool for_each_monic(std::uint32_t p, int d, F&& f) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    const std::uint64_t top = count;  // t^d
    for (std::uint64_t low = 0; low < count; ++low)
        if (f(PrimeFieldPoly::from_index(p, top + low))) return true;
    return false;
}

}  // namespace

bool is_irreducible(const PrimeFieldPoly& g) {
    if (g.degree() < 1) return false;
    for (int d = 1; 2 * d <= g.degree(); ++d) {
        const bool found = for_each_monic(g.characteristic(), d,
                                          [&](const PrimeFieldPoly& h) { return mod(g, h).is_zero(); });
        if (found) return false;
    }
    return true;
}

std::uint32_t PolyFactorization::big_omega() const noexcept {
    std::uint32_t total = 0;
    for (const auto& f : factors) total += f.second;
    return total;
}

PolyFactorization factor_poly(const PrimeFieldPoly& f) {
    if (f.degree() < 1) throw DomainError("cannot factor a constant polynomial");
    PolyFactorization out{f.monic(), f.leading(), {}};
    PrimeFieldPoly rest = out.f;
    for (int d = 1; 2 * d <= rest.degree(); ++d) {
        for_each_monic(f.characteristic(), d, [&](const PrimeFieldPoly& g) {
            std::uint32_t k = 0;
            for (;;) {
                auto [q, r] = divmod(rest, g);
                if (!r.is_zero()) break;
                rest = std::move(q);
                ++k;
            }
            if (k > 0) out.factors.emplace_back(g, k);
            return 2 * d > rest.degree();
        });
    }
    if (rest.degree() >= 1) {
        auto same = std::find_if(out.factors.begin(), out.factors.end(),
                                 [&](const auto& fk) { return fk.first == rest; });
        if (same != out.factors.end()) ++same->second;
        else out.factors.emplace_back(rest, 1);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
    return out;
}

PrimeFieldPoly PrimeFieldPoly::parse(std::uint32_t p, std::string_view text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty polynomial");

    auto parse_int = [&](std::string_view digits) -> std::int64_t {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw ParseError("bad integer '" + std::string(digits) + "' in polynomial '" + s + "'");
        return v;
    };

    std::vector<std::int64_t> coeffs;
    if (s.find('t') == std::string::npos) {
        std::size_t start = 0;
        for (;;) {
            const auto comma = s.find(',', start);
            const auto piece = std::string_view(s).substr(start, comma - start);
            if (piece.empty()) throw ParseError("empty coefficient in '" + s + "'");
            coeffs.push_back(parse_int(piece));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return PrimeFieldPoly(p, std::move(coeffs));
    }

    // Human form: signed terms c, ct, ct^k, c*t^k.
    std::size_t i = 0;
    while (i < s.size()) {
        std::int64_t sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw ParseError("expected '+' or '-' in '" + s + "'");
        }
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        const bool has_coeff = j > i;
        const std::int64_t c = has_coeff ? parse_int(std::string_view(s).substr(i, j - i)) : 1;
        i = j;
        const bool star = i < s.size() && s[i] == '*';
        if (star) ++i;
        std::size_t degree = 0;
        if (i < s.size() && s[i] == 't') {
            ++i;
            degree = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t k = i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == i) throw ParseError("missing exponent in '" + s + "'");
                degree = static_cast<std::size_t>(parse_int(std::string_view(s).substr(i, k - i)));
                i = k;
            }
        } else if (star || !has_coeff) {
            throw ParseError("incomplete term in '" + s + "'");
        }
        if (degree > 64) throw ParseError("degree too large in '" + s + "'");
        if (coeffs.size() <= degree) coeffs.resize(degree + 1, 0);
        coeffs[degree] += sign * c;
        if (i < s.size() && s[i] != '+' && s[i] != '-') throw ParseError("unexpected character in '" + s + "'");
    }
    return PrimeFieldPoly(p, std::move(coeffs));
}

FiniteCommutativeMonoid build_quotient_monoid(const PrimeFieldPoly& f_in, std::size_t cap) {
    if (f_in.degree() < 1) throw DomainError("modulus must have degree >= 1");
    const PrimeFieldPoly f = f_in.monic();
    const std::uint32_t p = f.characteristic();
    const auto d = static_cast<std::size_t>(f.degree());
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < d; ++i) {
        size *= p;
        if (size > cap) check_capacity(size, cap, "F_p[t]/(f)");
    }
    const std::size_t n = size;

    std::vector<std::uint64_t> place(d, 1);  // p^i
    for (std::size_t i = 1; i < d; ++i) place[i] = place[i - 1] * p;

    // digits[x * d + i] = coefficient of t^i in element x.
    std::vector<std::uint32_t> digits(n * d);
    std::vector<std::size_t> low_pos(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        std::size_t rest = x;
        bool found = false;
        for (std::size_t i = 0; i < d; ++i) {
            digits[x * d + i] = static_cast<std::uint32_t>(rest % p);
            if (!found && digits[x * d + i] != 0) {
                low_pos[x] = i;
                found = true;
            }
            rest /= p;
        }
    }

    // Row b is built incrementally over a: a = a' + c t^j with j the lowest
    // nonzero digit, so a*b = a'*b + c (t^j b mod f).
    std::vector<Element> table(n * n);
    std::vector<std::uint32_t> shifted(d * d);  // shifted[j * d + i]: coeff i of t^j b mod f
    std::vector<std::uint32_t> acc(n * d);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t i = 0; i < d; ++i) shifted[i] = digits[b * d + i];
        for (std::size_t j = 1; j < d; ++j) {
            const std::uint32_t top = shifted[(j - 1) * d + d - 1];
            for (std::size_t i = d; i-- > 0;) {
                const std::uint32_t lower = i == 0 ? 0 : shifted[(j - 1) * d + i - 1];
                shifted[j * d + i] = (lower + p - top * f.coeffs()[i] % p) % p;
            }
        }
        std::fill(acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(d), 0u);
        table[0 * n + b] = 0;
        for (std::size_t a = 1; a < n; ++a) {
            const std::size_t j = low_pos[a];
            const std::uint32_t c = digits[a * d + j];
            const std::size_t prev = a - c * place[j];
            std::uint64_t idx = 0;
            for (std::size_t i = d; i-- > 0;) {
                const std::uint32_t v = (acc[prev * d + i] + c * shifted[j * d + i]) % p;
                acc[a * d + i] = v;
                idx = idx * p + v;
            }
            table[a * n + b] = static_cast<Element>(idx);
        }
    }

    FiniteCommutativeMonoid monoid(n, std::move(table), static_cast<Element>(1));

    const auto fact = factor_poly(f);
    if (monoid.idempotents().count() != (std::size_t{1} << fact.omega()))
        throw InvariantFailure("idempotent count mismatch for modulus " + f.to_string());
    for (std::size_t x = 0; x < n; ++x) {
        const bool coprime = gcd(PrimeFieldPoly::from_index(p, x), f).degree() == 0;
        if (coprime != monoid.units().test(x))
            throw InvariantFailure("unit set disagrees with gcd test at element " + std::to_string(x));
    }
    return monoid;
}

}  // namespace ebconst
