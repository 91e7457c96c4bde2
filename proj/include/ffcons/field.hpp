#pragma once

#include <cstdint>
#include <ostream>

namespace ffcons {

using Residue = std::uint32_t;

/// Characteristic of a prime field F_p. Construction rejects composite moduli.
class PrimeModulus {
public:
    /// Largest accepted modulus; keeps every product of two residues inside 64 bits.
    static constexpr std::uint64_t kMax = (1ULL << 31) - 1;

    explicit PrimeModulus(std::uint64_t p);

    [[nodiscard]] Residue value() const noexcept { return p_; }

    /// Maps any signed integer onto its canonical residue in [0, p-1].
    [[nodiscard]] Residue reduce(std::int64_t v) const noexcept {
        const std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<Residue>(r < 0 ? r + p_ : r);
    }

    [[nodiscard]] Residue add(Residue a, Residue b) const noexcept {
        const std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<Residue>(s >= p_ ? s - p_ : s);
    }
    [[nodiscard]] Residue sub(Residue a, Residue b) const noexcept {
        return a >= b ? a - b : static_cast<Residue>(std::uint64_t{a} + p_ - b);
    }
    [[nodiscard]] Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
    [[nodiscard]] Residue mul(Residue a, Residue b) const noexcept {
        return static_cast<Residue>((std::uint64_t{a} * b) % p_);
    }
    [[nodiscard]] Residue pow(Residue a, std::uint64_t e) const noexcept;
    /// Throws std::domain_error for a == 0.
    [[nodiscard]] Residue inv(Residue a) const;

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    Residue p_;
};

/// Deterministic trial division; adequate for moduli below 2^31.
[[nodiscard]] bool is_prime(std::uint64_t n) noexcept;

/// An element of F_p. The residue is canonical after every operation, so equality is structural.
class Scalar {
public:
    Scalar(PrimeModulus m, std::int64_t v) : mod_(m), value_(m.reduce(v)) {}

    static Scalar zero(PrimeModulus m) { return {m, 0}; }
    static Scalar one(PrimeModulus m) { return {m, 1}; }

    [[nodiscard]] Residue value() const noexcept { return value_; }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] bool is_zero() const noexcept { return value_ == 0; }

    [[nodiscard]] Scalar inv() const;
    [[nodiscard]] Scalar pow(std::uint64_t e) const;

    Scalar operator-() const;
    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);

    friend bool operator==(const Scalar&, const Scalar&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.value_; }

private:
    PrimeModulus mod_;
    Residue value_;
};

/// Throws std::invalid_argument when two operands live in different fields.
void require_same_modulus(PrimeModulus a, PrimeModulus b);

}  // namespace ffcons
