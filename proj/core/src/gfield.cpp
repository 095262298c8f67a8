#include "qrac/gfield.hpp"

#include <algorithm>
#include <string>

#include "qrac/error.hpp"

namespace qrac {

namespace {

using Poly = std::vector<std::uint64_t>;

// Remainder of a modulo the monic polynomial m, coefficients mod p.
Poly poly_mod(Poly a, const Poly& m, std::uint64_t p) {
    const std::size_t dm = m.size() - 1;
    for (std::size_t t = a.size(); t-- > dm;) {
        const std::uint64_t c = a[t] % p;
        if (c == 0) continue;
        for (std::size_t s = 0; s <= dm; ++s) {
            std::uint64_t& x = a[t - dm + s];
            x = (x + (p - c) * m[s]) % p;
        }
    }
    a.resize(dm);
    return a;
}

Poly digits(std::uint64_t v, std::uint64_t p, std::size_t n) {
    Poly out(n);
    for (auto& c : out) {
        c = v % p;
        v /= p;
    }
    return out;
}

bool has_monic_factor(const Poly& m, std::uint64_t p, unsigned degree) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < degree; ++i) count *= p;
    for (std::uint64_t v = 0; v < count; ++v) {
        Poly f = digits(v, p, degree);
        f.push_back(1);
        const Poly r = poly_mod(m, f, p);
        if (std::all_of(r.begin(), r.end(), [](std::uint64_t c) { return c == 0; })) return true;
    }
    return false;
}

bool is_irreducible(const Poly& m, std::uint64_t p) {
    const unsigned k = static_cast<unsigned>(m.size() - 1);
    for (unsigned deg = 1; deg <= k / 2; ++deg) {
        if (has_monic_factor(m, p, deg)) return false;
    }
    return true;
}

Poly smallest_irreducible(std::uint64_t p, unsigned k) {
    if (k == 1) return {0, 1};
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) count *= p;
    for (std::uint64_t v = 0; v < count; ++v) {
        Poly m = digits(v, p, k);
        m.push_back(1);
        if (is_irreducible(m, p)) return m;
    }
    // Irreducible polynomials exist for every degree.
    throw Error(ErrorKind::NonPrime, "no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t i = 2; i * i <= n; ++i) {
        if (n % i == 0) return false;
    }
    return true;
}

PrimePower factor_prime_power(std::uint64_t d) noexcept {
    if (d < 2) return {};
    std::uint64_t p = 2;
    while (d % p != 0) ++p;
    unsigned k = 0;
    while (d % p == 0) {
        d /= p;
        ++k;
    }
    if (d != 1) return {};
    return {p, k};
}

FieldSpec::FieldSpec(std::uint64_t p, unsigned k) {
    if (!is_prime(p)) throw Error(ErrorKind::NonPrime, std::to_string(p) + " is not prime");
    if (k < 1) throw Error(ErrorKind::Overflow, "extension degree must be >= 1");
    std::uint64_t d = 1;
    for (unsigned i = 0; i < k; ++i) {
        d *= p;
        if (d > kMaxOrder) {
            throw Error(ErrorKind::Overflow,
                        std::to_string(p) + "^" + std::to_string(k) + " exceeds 2^20");
        }
    }
    p_ = static_cast<std::uint32_t>(p);
    k_ = k;
    d_ = static_cast<std::uint32_t>(d);
    const Poly m = smallest_irreducible(p, k);
    modulus_.assign(m.begin(), m.end());
}

FieldElem FieldSpec::zero() const { return FieldElem{std::vector<std::uint32_t>(k_, 0)}; }

FieldElem FieldSpec::one() const {
    FieldElem e = zero();
    e.coeffs[0] = 1;
    return e;
}

FieldElem FieldSpec::element(std::uint32_t index) const {
    FieldElem e = zero();
    for (auto& c : e.coeffs) {
        c = index % p_;
        index /= p_;
    }
    return e;
}

std::uint32_t FieldSpec::index_of(const FieldElem& a) const {
    std::uint32_t idx = 0;
    for (std::size_t i = a.coeffs.size(); i-- > 0;) idx = idx * p_ + a.coeffs[i];
    return idx;
}

FieldSpec gf_new(std::uint64_t p, unsigned k) { return FieldSpec(p, k); }

FieldElem gf_add(const FieldSpec& f, const FieldElem& a, const FieldElem& b) {
    FieldElem r = f.zero();
    for (unsigned i = 0; i < f.k(); ++i) r.coeffs[i] = (a.coeffs[i] + b.coeffs[i]) % f.p();
    return r;
}

FieldElem gf_neg(const FieldSpec& f, const FieldElem& a) {
    FieldElem r = f.zero();
    for (unsigned i = 0; i < f.k(); ++i) r.coeffs[i] = (f.p() - a.coeffs[i]) % f.p();
    return r;
}

FieldElem gf_mul(const FieldSpec& f, const FieldElem& a, const FieldElem& b) {
    const unsigned k = f.k();
    const std::uint64_t p = f.p();
    Poly prod(2 * k - 1, 0);
    for (unsigned i = 0; i < k; ++i) {
        if (a.coeffs[i] == 0) continue;
        for (unsigned j = 0; j < k; ++j) {
            prod[i + j] = (prod[i + j] + std::uint64_t{a.coeffs[i]} * b.coeffs[j]) % p;
        }
    }
    if (k == 1) return FieldElem{{static_cast<std::uint32_t>(prod[0])}};
    const Poly m(f.modulus().begin(), f.modulus().end());
    const Poly r = poly_mod(std::move(prod), m, p);
    FieldElem out = f.zero();
    for (unsigned i = 0; i < k; ++i) out.coeffs[i] = static_cast<std::uint32_t>(r[i]);
    return out;
}

FieldElem gf_pow(const FieldSpec& f, const FieldElem& a, std::uint64_t e) {
    FieldElem result = f.one();
    FieldElem base = a;
    while (e > 0) {
        if (e & 1U) result = gf_mul(f, result, base);
        base = gf_mul(f, base, base);
        e >>= 1U;
    }
    return result;
}

FieldElem gf_inv(const FieldSpec& f, const FieldElem& a) {
    if (a == f.zero()) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
    return gf_pow(f, a, std::uint64_t{f.order()} - 2);
}

std::uint32_t gf_trace(const FieldSpec& f, const FieldElem& a) {
    FieldElem sum = f.zero();
    FieldElem term = a;
    for (unsigned i = 0; i < f.k(); ++i) {
        sum = gf_add(f, sum, term);
        term = gf_pow(f, term, f.p());
    }
    return sum.coeffs[0];
}

}  // namespace qrac
