#pragma once

#include <cstdint>
#include <vector>

namespace qrac {

/// Element of GF(p^k) as a little-endian coefficient vector over Z_p,
/// always reduced modulo the field modulus.
struct FieldElem {
    std::vector<std::uint32_t> coeffs;

    bool operator==(const FieldElem&) const = default;
};

/// A prime-power Galois field GF(p^k).
///
/// The modulus is the smallest monic irreducible polynomial of degree k when
/// polynomials are ordered by their coefficient vector read as a base-p
/// number (leading coefficient most significant). For k = 1 the modulus is
/// the degenerate `x` and arithmetic is plain mod-p.
class FieldSpec {
public:
    static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;

    /// Throws Error{NonPrime} when p is not prime, Error{Overflow} when
    /// p^k exceeds 2^20.
    FieldSpec(std::uint64_t p, unsigned k);

    std::uint32_t p() const noexcept { return p_; }
    unsigned k() const noexcept { return k_; }
    std::uint32_t order() const noexcept { return d_; }
    /// Length k+1, leading coefficient 1.
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    FieldElem zero() const;
    FieldElem one() const;

    /// Canonical enumeration: coefficient vector read as base-p digits, little-endian.
    FieldElem element(std::uint32_t index) const;
    std::uint32_t index_of(const FieldElem& a) const;

private:
    std::uint32_t p_;
    unsigned k_;
    std::uint32_t d_;
    std::vector<std::uint32_t> modulus_;
};

FieldSpec gf_new(std::uint64_t p, unsigned k);

FieldElem gf_add(const FieldSpec& f, const FieldElem& a, const FieldElem& b);
FieldElem gf_neg(const FieldSpec& f, const FieldElem& a);
FieldElem gf_mul(const FieldSpec& f, const FieldElem& a, const FieldElem& b);
FieldElem gf_pow(const FieldSpec& f, const FieldElem& a, std::uint64_t e);
/// Throws Error{DivisionByZero} for a == 0.
FieldElem gf_inv(const FieldSpec& f, const FieldElem& a);

/// Absolute trace a + a^p + ... + a^{p^{k-1}}, an element of the prime subfield.
std::uint32_t gf_trace(const FieldSpec& f, const FieldElem& a);

bool is_prime(std::uint64_t n) noexcept;

/// Returns {p, k} with d = p^k, or {0, 0} when d is not a prime power.
struct PrimePower {
    std::uint64_t p = 0;
    unsigned k = 0;
};
PrimePower factor_prime_power(std::uint64_t d) noexcept;

}  // namespace qrac
