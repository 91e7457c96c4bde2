#include "ffcons/matrix.hpp"

#include <stdexcept>
#include <string>

namespace ffcons {

namespace {

std::string shape(const Matrix& a) { return std::to_string(a.rows()) + "x" + std::to_string(a.cols()); }

void require_square(const Matrix& a, const char* what) {
    if (!a.is_square()) throw std::invalid_argument(std::string(what) + " needs a square matrix, got " + shape(a));
}

// Row-reduces m in place to row echelon form; returns pivot columns.
std::vector<std::size_t> row_echelon(Matrix& m, std::size_t col_limit, Residue* det_sign_and_scale = nullptr) {
    const auto mod = m.modulus();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    Residue det = 1;
    for (std::size_t c = 0; c < col_limit && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                const Residue t = m(r, j);
                m.set(r, j, m(piv, j));
                m.set(piv, j, t);
            }
            det = mod.neg(det);
        }
        const Residue pv = m(r, c);
        det = mod.mul(det, pv);
        const Residue pinv = mod.inv(pv);
        for (std::size_t j = 0; j < m.cols(); ++j) m.set(r, j, mod.mul(m(r, j), pinv));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            const Residue f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, mod.sub(m(i, j), mod.mul(f, m(r, j))));
        }
        pivots.push_back(c);
        ++r;
    }
    if (det_sign_and_scale != nullptr) *det_sign_and_scale = det;
    return pivots;
}

}  // namespace

Matrix::Matrix(PrimeModulus m, std::size_t rows, std::size_t cols)
    : mod_(m), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(PrimeModulus m, const std::vector<std::vector<std::int64_t>>& rows)
    : mod_(m), rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged matrix rows");
        for (auto v : r) data_.push_back(m.reduce(v));
    }
}

Matrix Matrix::identity(PrimeModulus m, std::size_t n) {
    Matrix out(m, n, n);
    for (std::size_t i = 0; i < n; ++i) out.data_[i * n + i] = 1;
    return out;
}

Matrix Matrix::column(PrimeModulus m, const std::vector<std::int64_t>& values) {
    Matrix out(m, values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) out.data_[i] = m.reduce(values[i]);
    return out;
}

Matrix Matrix::row(PrimeModulus m, const std::vector<std::int64_t>& values) {
    Matrix out(m, 1, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.data_[i] = m.reduce(values[i]);
    return out;
}

bool Matrix::is_zero() const noexcept {
    for (auto v : data_) {
        if (v != 0) return false;
    }
    return true;
}

Scalar Matrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
    return {mod_, data_[i * cols_ + j]};
}

void Matrix::set(std::size_t i, std::size_t j, std::int64_t v) { data_[i * cols_ + j] = mod_.reduce(v); }

void Matrix::set(std::size_t i, std::size_t j, const Scalar& v) {
    require_same_modulus(mod_, v.modulus());
    data_[i * cols_ + j] = v.value();
}

std::vector<std::vector<std::int64_t>> Matrix::to_rows() const {
    std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(mod_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out.data_[j * rows_ + i] = (*this)(i, j);
    }
    return out;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block exceeds matrix bounds");
    Matrix out(mod_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) out.data_[i * nc + j] = (*this)(r0 + i, c0 + j);
    }
    return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    require_same_modulus(mod_, b.mod_);
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw std::out_of_range("block exceeds matrix bounds");
    for (std::size_t i = 0; i < b.rows_; ++i) {
        for (std::size_t j = 0; j < b.cols_; ++j) data_[(r0 + i) * cols_ + c0 + j] = b(i, j);
    }
}

Matrix Matrix::scaled(Residue c) const {
    Matrix out = *this;
    for (auto& v : out.data_) v = mod_.mul(v, c);
    return out;
}

Matrix& Matrix::operator+=(const Matrix& o) {
    require_same_modulus(mod_, o.mod_);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch: " + shape(*this) + " + " + shape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = mod_.add(data_[k], o.data_[k]);
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    require_same_modulus(mod_, o.mod_);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch: " + shape(*this) + " - " + shape(o));
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] = mod_.sub(data_[k], o.data_[k]);
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    require_same_modulus(a.mod_, b.mod_);
    if (a.cols_ != b.rows_) throw std::invalid_argument("shape mismatch: " + shape(a) + " * " + shape(b));
    const std::uint64_t p = a.mod_.value();
    Matrix out(a.mod_, a.rows_, b.cols_);
    // accumulate in 64 bits and reduce lazily; each product is below 2^62
    std::vector<std::uint64_t> acc(b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        std::fill(acc.begin(), acc.end(), 0);
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const std::uint64_t aik = a.data_[i * a.cols_ + k];
            if (aik == 0) continue;
            const Residue* brow = &b.data_[k * b.cols_];
            for (std::size_t j = 0; j < b.cols_; ++j) acc[j] = (acc[j] + aik * brow[j]) % p;
        }
        for (std::size_t j = 0; j < b.cols_; ++j) out.data_[i * b.cols_ + j] = static_cast<Residue>(acc[j]);
    }
    return out;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
    require_same_modulus(s.modulus(), a.mod_);
    return a.scaled(s.value());
}

std::ostream& operator<<(std::ostream& os, const Matrix& a) {
    os << '[';
    for (std::size_t i = 0; i < a.rows_; ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < a.cols_; ++j) os << (j ? "," : "") << a(i, j);
        os << ']';
    }
    return os << ']';
}

Matrix mat_pow(const Matrix& a, std::uint64_t k) {
    require_square(a, "mat_pow");
    Matrix result = Matrix::identity(a.modulus(), a.rows());
    Matrix base = a;
    while (k > 0) {
        if (k & 1U) result = result * base;
        k >>= 1U;
        if (k > 0) base = base * base;
    }
    return result;
}

std::size_t rank(const Matrix& a) {
    Matrix m = a;
    return row_echelon(m, m.cols()).size();
}

Scalar determinant(const Matrix& a) {
    require_square(a, "determinant");
    Matrix m = a;
    Residue det = 1;
    const auto piv = row_echelon(m, m.cols(), &det);
    if (piv.size() < a.rows()) return Scalar::zero(a.modulus());
    return {a.modulus(), det};
}

Matrix inverse(const Matrix& a) {
    require_square(a, "inverse");
    const std::size_t n = a.rows();
    Matrix aug(a.modulus(), n, 2 * n);
    aug.set_block(0, 0, a);
    aug.set_block(0, n, Matrix::identity(a.modulus(), n));
    if (row_echelon(aug, n).size() < n) throw std::domain_error("inverse of a singular matrix");
    return aug.block(0, n, n, n);
}

Poly char_poly(const Matrix& a) {
    require_square(a, "char_poly");
    const auto mod = a.modulus();
    const std::size_t n = a.rows();
    if (n == 0) return Poly::constant(mod, 1);

    // v holds det(lambda I - T) of the trailing principal block T, coefficients descending
    std::vector<Residue> v{1, mod.neg(a(n - 1, n - 1))};
    for (std::size_t k = n - 1; k-- > 0;) {
        const std::size_t m = n - k - 1;
        // Toeplitz column: 1, -a_kk, -R C, -R T C, ..., -R T^{m-1} C
        std::vector<Residue> t(m + 2, 0);
        t[0] = 1;
        t[1] = mod.neg(a(k, k));
        std::vector<Residue> col(m);
        for (std::size_t i = 0; i < m; ++i) col[i] = a(k + 1 + i, k);
        for (std::size_t pw = 0; pw < m; ++pw) {
            Residue rc = 0;
            for (std::size_t i = 0; i < m; ++i) rc = mod.add(rc, mod.mul(a(k, k + 1 + i), col[i]));
            t[pw + 2] = mod.neg(rc);
            if (pw + 1 == m) break;
            std::vector<Residue> next(m, 0);
            for (std::size_t i = 0; i < m; ++i) {
                Residue s = 0;
                for (std::size_t j = 0; j < m; ++j) s = mod.add(s, mod.mul(a(k + 1 + i, k + 1 + j), col[j]));
                next[i] = s;
            }
            col = std::move(next);
        }
        std::vector<Residue> nv(m + 2, 0);
        for (std::size_t i = 0; i < m + 2; ++i) {
            for (std::size_t j = 0; j <= std::min(i, m); ++j) nv[i] = mod.add(nv[i], mod.mul(t[i - j], v[j]));
        }
        v = std::move(nv);
    }
    return Poly::from_residues(mod, std::vector<Residue>(v.rbegin(), v.rend()));
}

bool is_nilpotent(const Matrix& a) {
    require_square(a, "is_nilpotent");
    if (a.rows() == 0) return true;
    // A^(2^k) for the first 2^k >= n
    Matrix m = a;
    std::size_t e = 1;
    while (e < a.rows()) {
        m = m * m;
        e *= 2;
        if (m.is_zero()) return true;
    }
    return m.is_zero();
}

std::optional<std::size_t> nilpotent_degree(const Matrix& a) {
    require_square(a, "nilpotent_degree");
    const std::size_t n = a.rows();
    if (n == 0) return 0;
    Matrix m = a;
    for (std::size_t k = 1; k <= n; ++k) {
        if (m.is_zero()) return k;
        m = m * a;
    }
    return std::nullopt;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    require_same_modulus(a.modulus(), b.modulus());
    const auto mod = a.modulus();
    Matrix out(mod, a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Residue aij = a(i, j);
            if (aij == 0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    out.set(i * b.rows() + k, j * b.cols() + l, mod.mul(aij, b(k, l)));
                }
            }
        }
    }
    return out;
}

Matrix permute_similarity(const Matrix& a, std::span<const std::size_t> perm) {
    require_square(a, "permute_similarity");
    const std::size_t n = a.rows();
    if (perm.size() != n) throw std::invalid_argument("permutation length does not match matrix size");
    std::vector<bool> seen(n, false);
    for (auto v : perm) {
        if (v >= n || seen[v]) throw std::invalid_argument("invalid permutation");
        seen[v] = true;
    }
    Matrix out(a.modulus(), n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) out.set(k, l, a(perm[k], perm[l]));
    }
    return out;
}

std::optional<std::vector<Residue>> solve_in_span(const Matrix& basis, const Matrix& v) {
    require_same_modulus(basis.modulus(), v.modulus());
    if (v.cols() != 1 || v.rows() != basis.rows()) throw std::invalid_argument("solve_in_span: shape mismatch");
    const std::size_t k = basis.cols();
    Matrix aug(basis.modulus(), basis.rows(), k + 1);
    aug.set_block(0, 0, basis);
    aug.set_block(0, k, v);
    const auto piv = row_echelon(aug, k + 1);
    if (!piv.empty() && piv.back() == k) return std::nullopt;
    std::vector<Residue> coords(k, 0);
    for (std::size_t r = 0; r < piv.size(); ++r) coords[piv[r]] = aug(r, k);
    return coords;
}

}  // namespace ffcons
