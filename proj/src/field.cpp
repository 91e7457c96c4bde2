#include "ffcons/field.hpp"

#include <stdexcept>
#include <string>

namespace ffcons {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
        if (n % d == 0) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(std::uint64_t p) : p_(0) {
    if (p > kMax) throw std::invalid_argument("modulus " + std::to_string(p) + " exceeds 2^31-1");
    if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
    p_ = static_cast<Residue>(p);
}

Residue PrimeModulus::pow(Residue a, std::uint64_t e) const noexcept {
    Residue result = 1 % p_;
    Residue base = a;
    while (e > 0) {
        if (e & 1U) result = mul(result, base);
        base = mul(base, base);
        e >>= 1U;
    }
    return result;
}

Residue PrimeModulus::inv(Residue a) const {
    if (a % p_ == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
    // extended Euclid on (a, p)
    std::int64_t r0 = p_, r1 = a;
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    return reduce(t0);
}

void require_same_modulus(PrimeModulus a, PrimeModulus b) {
    if (a != b) {
        throw std::invalid_argument("modulus mismatch: F_" + std::to_string(a.value()) + " vs F_" +
                                    std::to_string(b.value()));
    }
}

Scalar Scalar::inv() const { return {mod_, mod_.inv(value_)}; }

Scalar Scalar::pow(std::uint64_t e) const { return {mod_, mod_.pow(value_, e)}; }

Scalar Scalar::operator-() const { return {mod_, mod_.neg(value_)}; }

Scalar operator+(const Scalar& a, const Scalar& b) {
    require_same_modulus(a.mod_, b.mod_);
    return {a.mod_, a.mod_.add(a.value_, b.value_)};
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    require_same_modulus(a.mod_, b.mod_);
    return {a.mod_, a.mod_.sub(a.value_, b.value_)};
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    require_same_modulus(a.mod_, b.mod_);
    return {a.mod_, a.mod_.mul(a.value_, b.value_)};
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

}  // namespace ffcons
