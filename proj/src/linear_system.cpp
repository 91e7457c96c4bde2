#include "ffcons/linear_system.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ffcons {

LinearSystem::LinearSystem(Matrix a, Matrix b) : a_(std::move(a)), b_(std::move(b)) {
    require_same_modulus(a_.modulus(), b_.modulus());
    if (!a_.is_square()) throw std::invalid_argument("system matrix A must be square");
    if (b_.rows() != a_.rows() || b_.cols() != 1) {
        throw std::invalid_argument("input vector b must be " + std::to_string(a_.rows()) + "x1");
    }
}

Matrix ControllabilityDecomposition::assembled() const {
    const std::size_t n = q.rows();
    Matrix out(q.modulus(), n, n);
    out.set_block(0, 0, a_c);
    out.set_block(0, s, a_cc);
    out.set_block(s, s, a_uc);
    return out;
}

Matrix controllability_matrix(const LinearSystem& sys) {
    const std::size_t n = sys.dim();
    Matrix out(sys.modulus(), n, n);
    Matrix v = sys.b();
    for (std::size_t k = 0; k < n; ++k) {
        out.set_block(0, k, v);
        v = sys.a() * v;
    }
    return out;
}

namespace {

Matrix columns(PrimeModulus m, std::size_t n, const std::vector<Matrix>& cols) {
    Matrix out(m, n, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) out.set_block(0, j, cols[j]);
    return out;
}

bool in_span(PrimeModulus m, std::size_t n, const std::vector<Matrix>& cols, const Matrix& v) {
    if (cols.empty()) return v.is_zero();
    return solve_in_span(columns(m, n, cols), v).has_value();
}

}  // namespace

ControllabilityDecomposition kalman_decompose(const LinearSystem& sys) {
    const auto mod = sys.modulus();
    const std::size_t n = sys.dim();
    const Matrix& a = sys.a();
    const Matrix& b = sys.b();

    std::vector<Matrix> krylov;
    Matrix v = b;
    while (krylov.size() < n && !in_span(mod, n, krylov, v)) {
        krylov.push_back(v);
        v = a * v;
    }
    const std::size_t s = krylov.size();

    // A^s b = sum_l c_l A^l b; these are the companion bottom-row entries
    std::vector<Residue> coeffs;
    if (s > 0) {
        auto c = solve_in_span(columns(mod, n, krylov), v);
        if (!c) throw std::logic_error("Krylov chain did not close");
        coeffs = std::move(*c);
    }

    // controller-form basis: t_s = b, t_{j-1} = A t_j - a_j b
    std::vector<Matrix> basis(s, Matrix(mod, n, 1));
    if (s > 0) {
        basis[s - 1] = b;
        for (std::size_t j = s; j-- > 1;) basis[j - 1] = a * basis[j] - b.scaled(coeffs[j]);
    }
    for (std::size_t i = 0; i < n && basis.size() < n; ++i) {
        Matrix e(mod, n, 1);
        e.set(i, 0, 1);
        if (!in_span(mod, n, basis, e)) basis.push_back(std::move(e));
    }

    Matrix t = columns(mod, n, basis);
    Matrix q = inverse(t);
    const Matrix aq = q * a * t;
    if (!aq.block(s, 0, n - s, s).is_zero()) throw std::logic_error("controllable subspace is not invariant");

    Matrix b_c(mod, s, 1);
    if (s > 0) b_c.set(s - 1, 0, 1);
    return ControllabilityDecomposition{
        .q = std::move(q),
        .q_inv = std::move(t),
        .s = s,
        .a_c = aq.block(0, 0, s, s),
        .a_cc = aq.block(0, s, s, n - s),
        .a_uc = aq.block(s, s, n - s, n - s),
        .b_c = std::move(b_c),
        .companion_coeffs = std::move(coeffs),
    };
}

bool is_stabilizable(const ControllabilityDecomposition& decomp) { return is_nilpotent(decomp.a_uc); }

bool is_stabilizable(const LinearSystem& sys) { return is_stabilizable(kalman_decompose(sys)); }

Matrix deadbeat_gain(const ControllabilityDecomposition& decomp, const Scalar& d) {
    if (d.is_zero()) throw std::invalid_argument("deadbeat gain needs a nonzero degree d");
    const auto mod = decomp.q.modulus();
    require_same_modulus(mod, d.modulus());
    if (!is_stabilizable(decomp)) {
        throw std::domain_error("system is not stabilizable: uncontrollable block " + [&] {
            std::ostringstream os;
            os << decomp.a_uc;
            return os.str();
        }() + " is not nilpotent");
    }
    const Residue d_inv = mod.inv(d.value());
    Matrix k_c(mod, 1, decomp.q.rows());
    for (std::size_t l = 0; l < decomp.s; ++l) k_c.set(0, l, mod.mul(decomp.companion_coeffs[l], d_inv));
    return k_c * decomp.q;
}

std::vector<std::uint64_t> CycleStructure::cycle_lengths() const {
    std::vector<std::uint64_t> out;
    for (auto [len, count] : cycles) out.insert(out.end(), count, len);
    return out;
}

std::uint64_t CycleStructure::cycle_count() const {
    std::uint64_t total = 0;
    for (auto [len, count] : cycles) total += count;
    return total;
}

std::uint64_t state_count(std::uint64_t p, std::size_t n, std::uint64_t cap) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / p) return cap + 1;
        total *= p;
    }
    return total > cap ? cap + 1 : total;
}

namespace {

CycleStructure enumerate_cycles(const Matrix& a, std::uint64_t bound) {
    const auto mod = a.modulus();
    const std::uint64_t p = mod.value();
    const std::size_t n = a.rows();
    const std::uint64_t total = state_count(p, n, bound);
    if (total > bound) {
        throw std::length_error("state space p^n exceeds the enumeration bound " + std::to_string(bound));
    }

    // successor table over base-p encoded states
    std::vector<std::uint64_t> next(total);
    std::vector<Residue> x(n, 0);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<Residue>(c % p);
            c /= p;
        }
        std::uint64_t out = 0;
        for (std::size_t i = n; i-- > 0;) {
            Residue yi = 0;
            for (std::size_t j = 0; j < n; ++j) yi = mod.add(yi, mod.mul(a(i, j), x[j]));
            out = out * p + yi;
        }
        next[code] = out;
    }

    constexpr std::uint64_t kUnknown = ~std::uint64_t{0};
    std::vector<std::uint8_t> colour(total, 0);  // 0 unseen, 1 on current walk, 2 done
    std::vector<std::uint64_t> depth(total, kUnknown);
    CycleStructure cs;
    cs.method = CycleMethod::Enumeration;
    std::vector<std::uint64_t> path;
    for (std::uint64_t start = 0; start < total; ++start) {
        if (colour[start] == 2) continue;
        path.clear();
        std::uint64_t u = start;
        while (colour[u] == 0) {
            colour[u] = 1;
            path.push_back(u);
            u = next[u];
        }
        if (colour[u] == 1) {
            // closed a new cycle at u
            std::uint64_t len = 0;
            std::uint64_t w = u;
            do {
                depth[w] = 0;
                w = next[w];
                ++len;
            } while (w != u);
            ++cs.cycles[len];
            cs.periodic_states += len;
        }
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            if (depth[*it] == kUnknown) depth[*it] = depth[next[*it]] + 1;
            colour[*it] = 2;
        }
    }
    for (auto d : depth) cs.tree_depth = std::max<std::size_t>(cs.tree_depth, d);
    cs.transient_states = total - cs.periodic_states;
    return cs;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > ~std::uint64_t{0} / a) throw std::overflow_error("cycle count overflow");
    return a * b;
}

CycleStructure polynomial_cycles(const Matrix& a) {
    const auto mod = a.modulus();
    const std::uint64_t p = mod.value();
    auto [s, q] = split_nilpotent_bijective(char_poly(a));
    CycleStructure cs;
    cs.method = CycleMethod::Polynomial;
    cs.tree_depth = static_cast<std::size_t>(s);

    // F_p[x]/(Q) splits into F_p[x]/(g^e) by CRT. Inside one component, the elements
    // annihilated exactly by g^j number p^{mj} - p^{m(j-1)} and share the period ord(x mod g^j).
    std::map<std::uint64_t, std::uint64_t> states{{1, 1}};  // period -> number of states
    if (q.degree() > 0) {
        for (const auto& [g, e] : factor(q).factors) {
            std::uint64_t pm = 1;
            for (int i = 0; i < g.degree(); ++i) pm = checked_mul(pm, p);
            std::map<std::uint64_t, std::uint64_t> comp{{1, 1}};
            Poly gj = Poly::constant(mod, 1);
            std::uint64_t below = 1;
            for (int j = 1; j <= e; ++j) {
                gj = gj * g;
                const std::uint64_t upto = checked_mul(below, pm);
                comp[order_of_x_mod(gj)] += upto - below;
                below = upto;
            }
            std::map<std::uint64_t, std::uint64_t> merged;
            for (auto [pa, ca] : states) {
                for (auto [pb, cb] : comp) merged[std::lcm(pa, pb)] += checked_mul(ca, cb);
            }
            states = std::move(merged);
        }
    }
    for (auto [period, count] : states) {
        cs.cycles[period] += count / period;
        cs.periodic_states += count;
    }
    return cs;
}

}  // namespace

CycleStructure autonomous_cycle_structure(const Matrix& a, CycleMethod mode, std::uint64_t bound) {
    if (!a.is_square()) throw std::invalid_argument("cycle structure needs a square matrix");
    return mode == CycleMethod::Enumeration ? enumerate_cycles(a, bound) : polynomial_cycles(a);
}

}  // namespace ffcons
