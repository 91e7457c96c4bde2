#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "ffcons/field.hpp"
#include "ffcons/poly.hpp"

namespace ffcons {

/// Dense row-major matrix over F_p. Column vectors are n x 1 matrices.
class Matrix {
public:
    Matrix(PrimeModulus m, std::size_t rows, std::size_t cols);
    /// Entries are reduced mod p; every row must have the same length.
    Matrix(PrimeModulus m, const std::vector<std::vector<std::int64_t>>& rows);

    static Matrix zeros(PrimeModulus m, std::size_t rows, std::size_t cols) { return {m, rows, cols}; }
    static Matrix identity(PrimeModulus m, std::size_t n);
    static Matrix column(PrimeModulus m, const std::vector<std::int64_t>& values);
    static Matrix row(PrimeModulus m, const std::vector<std::int64_t>& values);

    [[nodiscard]] PrimeModulus modulus() const noexcept { return mod_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] bool is_zero() const noexcept;

    [[nodiscard]] Residue operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    [[nodiscard]] Scalar at(std::size_t i, std::size_t j) const;
    /// Stores v mod p.
    void set(std::size_t i, std::size_t j, std::int64_t v);
    void set(std::size_t i, std::size_t j, const Scalar& v);

    [[nodiscard]] std::span<const Residue> data() const noexcept { return data_; }
    [[nodiscard]] std::vector<std::vector<std::int64_t>> to_rows() const;

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    [[nodiscard]] Matrix scaled(Residue c) const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Scalar& s, const Matrix& a);

    friend bool operator==(const Matrix&, const Matrix&) = default;
    friend std::ostream& operator<<(std::ostream& os, const Matrix& a);

private:
    PrimeModulus mod_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Residue> data_;
};

/// A^k by repeated squaring; A^0 = I.
[[nodiscard]] Matrix mat_pow(const Matrix& a, std::uint64_t k);

/// Gaussian elimination, pivot = first nonzero entry in column order.
[[nodiscard]] std::size_t rank(const Matrix& a);
[[nodiscard]] Scalar determinant(const Matrix& a);
/// Throws std::domain_error for singular input.
[[nodiscard]] Matrix inverse(const Matrix& a);

/// det(lambda I - A) by Berkowitz's division-free recurrence.
[[nodiscard]] Poly char_poly(const Matrix& a);

/// A^n == 0, checked with ceil(log2 n) squarings.
[[nodiscard]] bool is_nilpotent(const Matrix& a);
/// Smallest k with A^k = 0, or nullopt when A is not nilpotent. The empty matrix has degree 0.
[[nodiscard]] std::optional<std::size_t> nilpotent_degree(const Matrix& a);

[[nodiscard]] Matrix kron(const Matrix& a, const Matrix& b);

/// P A P^{-1} for the permutation matrix with P e_{perm[k]} = e_k,
/// i.e. result(k, l) = A(perm[k], perm[l]).
[[nodiscard]] Matrix permute_similarity(const Matrix& a, std::span<const std::size_t> perm);

/// Solves for coordinates of v in the column span of basis; nullopt if v is outside it.
[[nodiscard]] std::optional<std::vector<Residue>> solve_in_span(const Matrix& basis, const Matrix& v);

}  // namespace ffcons
