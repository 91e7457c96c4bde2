#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ffcons/field.hpp"

namespace ffcons {

/// Univariate polynomial over F_p, coefficients in ascending degree.
/// Trailing zeros are stripped, so the zero polynomial has no coefficients.
class Poly {
public:
    explicit Poly(PrimeModulus m) : mod_(m) {}
    Poly(PrimeModulus m, const std::vector<std::int64_t>& ascending);

    static Poly constant(PrimeModulus m, Residue c);
    /// c * lambda^k
    static Poly monomial(PrimeModulus m, std::size_t k, Residue c = 1);
    static Poly from_residues(PrimeModulus m, std::vector<Residue> ascending);

    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] bool is_zero() const noexcept { return c_.empty(); }
    /// -1 for the zero polynomial.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    [[nodiscard]] Residue coeff(std::size_t k) const noexcept { return k < c_.size() ? c_[k] : 0; }
    [[nodiscard]] Residue leading() const noexcept { return c_.empty() ? 0 : c_.back(); }
    [[nodiscard]] const std::vector<Residue>& coeffs() const noexcept { return c_; }
    [[nodiscard]] bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }

    [[nodiscard]] Poly monic() const;
    [[nodiscard]] Scalar eval(const Scalar& x) const;

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    [[nodiscard]] Poly scaled(Residue c) const;

    friend bool operator==(const Poly&, const Poly&) = default;

    /// Human-readable form, e.g. "λ^4+2λ^3+λ+2".
    [[nodiscard]] std::string to_string(const std::string& var = "λ") const;

private:
    void trim();

    PrimeModulus mod_;
    std::vector<Residue> c_;
};

struct DivMod {
    Poly quotient;
    Poly remainder;
};

/// Throws std::domain_error when the divisor is zero.
[[nodiscard]] DivMod poly_divmod(const Poly& a, const Poly& b);
[[nodiscard]] Poly poly_mod(const Poly& a, const Poly& b);
/// Monic gcd; gcd(0, 0) = 0.
[[nodiscard]] Poly poly_gcd(Poly a, Poly b);
/// base^e mod m by repeated squaring.
[[nodiscard]] Poly poly_powmod(const Poly& base, std::uint64_t e, const Poly& m);

/// P = lambda^s * Q with Q(0) != 0.
struct NilpotentBijectiveSplit {
    int s;
    Poly q;
};

[[nodiscard]] NilpotentBijectiveSplit split_nilpotent_bijective(const Poly& p);

/// Rabin's test: x^(p^m) = x mod f and gcd(x^(p^(m/r)) - x, f) = 1 for each prime r | m.
[[nodiscard]] bool is_irreducible(const Poly& f);

struct Factor {
    Poly poly;  // monic irreducible
    int multiplicity;
};

struct Factorization {
    Residue unit;                 // leading coefficient of the input
    std::vector<Factor> factors;  // ascending by degree, then by coefficients
};

/// Trial division by monic candidates in increasing degree.
[[nodiscard]] Factorization factor(const Poly& f);

/// Smallest t >= 1 with lambda^t = 1 mod f. Requires deg f >= 1 and f(0) != 0.
[[nodiscard]] std::uint64_t order_of_x_mod(const Poly& f);

/// Prime factorisation by trial division, as (prime, exponent) pairs.
[[nodiscard]] std::vector<std::pair<std::uint64_t, int>> factor_integer(std::uint64_t n);

}  // namespace ffcons
