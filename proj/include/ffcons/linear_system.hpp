#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ffcons/matrix.hpp"
#include "ffcons/poly.hpp"

namespace ffcons {

/// Single-input system x(k+1) = A x(k) + b u(k) over F_p.
class LinearSystem {
public:
    LinearSystem(Matrix a, Matrix b);

    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] const Matrix& b() const noexcept { return b_; }
    [[nodiscard]] std::size_t dim() const noexcept { return a_.rows(); }
    [[nodiscard]] PrimeModulus modulus() const noexcept { return a_.modulus(); }

private:
    Matrix a_;
    Matrix b_;
};

/// Coordinates x_c = Q x splitting the system into a controllable companion block and
/// an uncontrollable remainder:
///
///   Q A Q^{-1} = [[A_c, A_cc], [0, A_uc]],   Q b = [e_s; 0]
///
/// A_c has ones on the superdiagonal and (a_1, ..., a_s) on its bottom row.
struct ControllabilityDecomposition {
    Matrix q;
    Matrix q_inv;
    std::size_t s;  // dimension of the controllable subspace
    Matrix a_c;
    Matrix a_cc;
    Matrix a_uc;
    Matrix b_c;
    std::vector<Residue> companion_coeffs;  // a_1 .. a_s

    /// [[A_c, A_cc], [0, A_uc]]
    [[nodiscard]] Matrix assembled() const;
};

/// Columns b, Ab, ..., A^{n-1} b.
[[nodiscard]] Matrix controllability_matrix(const LinearSystem& sys);

/// Krylov chain of b, controller-form basis inside the controllable subspace, then a
/// greedy extension by standard basis vectors e_1, e_2, ...
[[nodiscard]] ControllabilityDecomposition kalman_decompose(const LinearSystem& sys);

/// True iff the uncontrollable block is nilpotent.
[[nodiscard]] bool is_stabilizable(const LinearSystem& sys);
[[nodiscard]] bool is_stabilizable(const ControllabilityDecomposition& decomp);

/// Gain K (1 x n) with A - d b K nilpotent. Throws std::invalid_argument for d = 0 and
/// std::domain_error when the system is not stabilizable.
[[nodiscard]] Matrix deadbeat_gain(const ControllabilityDecomposition& decomp, const Scalar& d);

enum class CycleMethod { Enumeration, Polynomial };

/// Transient/periodic split of the autonomous map x -> A x.
struct CycleStructure {
    CycleMethod method = CycleMethod::Enumeration;
    /// Enumeration: longest transient before a state lands on a cycle.
    /// Polynomial: multiplicity of the root 0 of the characteristic polynomial.
    std::size_t tree_depth = 0;
    std::map<std::uint64_t, std::uint64_t> cycles;  // length -> number of cycles
    std::uint64_t periodic_states = 0;
    std::uint64_t transient_states = 0;  // enumeration only

    /// Cycle lengths as a sorted multiset.
    [[nodiscard]] std::vector<std::uint64_t> cycle_lengths() const;
    [[nodiscard]] std::uint64_t cycle_count() const;
};

inline constexpr std::uint64_t kDefaultEnumerationBound = 1'000'000;

/// Enumeration walks all p^n states (throws std::length_error past `bound`).
/// Polynomial mode reads the structure off the characteristic polynomial; it is exact
/// when the minimal and characteristic polynomials of A coincide.
[[nodiscard]] CycleStructure autonomous_cycle_structure(const Matrix& a, CycleMethod mode,
                                                        std::uint64_t bound = kDefaultEnumerationBound);

/// p^n, saturated at cap + 1.
[[nodiscard]] std::uint64_t state_count(std::uint64_t p, std::size_t n, std::uint64_t cap);

}  // namespace ffcons
