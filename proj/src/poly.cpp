#include "ffcons/poly.hpp"

#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ffcons {

Poly::Poly(PrimeModulus m, const std::vector<std::int64_t>& ascending) : mod_(m) {
    c_.reserve(ascending.size());
    for (auto v : ascending) c_.push_back(m.reduce(v));
    trim();
}

Poly Poly::constant(PrimeModulus m, Residue c) { return from_residues(m, {c % m.value()}); }

Poly Poly::monomial(PrimeModulus m, std::size_t k, Residue c) {
    std::vector<Residue> v(k + 1, 0);
    v[k] = c % m.value();
    return from_residues(m, std::move(v));
}

Poly Poly::from_residues(PrimeModulus m, std::vector<Residue> ascending) {
    Poly out(m);
    out.c_ = std::move(ascending);
    out.trim();
    return out;
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monic() const {
    if (is_zero()) return *this;
    return scaled(mod_.inv(leading()));
}

Poly Poly::scaled(Residue c) const {
    Poly out(mod_);
    out.c_.reserve(c_.size());
    for (auto v : c_) out.c_.push_back(mod_.mul(v, c));
    out.trim();
    return out;
}

Scalar Poly::eval(const Scalar& x) const {
    require_same_modulus(mod_, x.modulus());
    Residue acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = mod_.add(mod_.mul(acc, x.value()), *it);
    return {mod_, acc};
}

Poly& Poly::operator+=(const Poly& o) {
    require_same_modulus(mod_, o.mod_);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = mod_.add(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    require_same_modulus(mod_, o.mod_);
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = mod_.sub(c_[i], o.c_[i]);
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    require_same_modulus(a.mod_, b.mod_);
    if (a.is_zero() || b.is_zero()) return Poly(a.mod_);
    const auto& m = a.mod_;
    std::vector<Residue> out(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            out[i + j] = m.add(out[i + j], m.mul(a.c_[i], b.c_[j]));
        }
    }
    return Poly::from_residues(m, std::move(out));
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = c_.size(); k-- > 0;) {
        const Residue c = c_[k];
        if (c == 0) continue;
        if (!first) os << '+';
        first = false;
        if (k == 0) {
            os << c;
            continue;
        }
        if (c != 1) os << c;
        os << var;
        if (k > 1) os << '^' << k;
    }
    return os.str();
}

DivMod poly_divmod(const Poly& a, const Poly& b) {
    require_same_modulus(a.modulus(), b.modulus());
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    const auto m = a.modulus();
    if (a.degree() < b.degree()) return {Poly(m), a};

    std::vector<Residue> rem = a.coeffs();
    const auto& d = b.coeffs();
    const std::size_t db = d.size() - 1;
    const Residue lead_inv = m.inv(d.back());
    std::vector<Residue> quot(rem.size() - db, 0);
    for (std::size_t k = rem.size(); k-- > db;) {
        const Residue coef = m.mul(rem[k], lead_inv);
        quot[k - db] = coef;
        if (coef == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) {
            rem[k - db + j] = m.sub(rem[k - db + j], m.mul(coef, d[j]));
        }
    }
    rem.resize(db);
    return {Poly::from_residues(m, std::move(quot)), Poly::from_residues(m, std::move(rem))};
}

Poly poly_mod(const Poly& a, const Poly& b) { return poly_divmod(a, b).remainder; }

Poly poly_gcd(Poly a, Poly b) {
    require_same_modulus(a.modulus(), b.modulus());
    while (!b.is_zero()) {
        Poly r = poly_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly poly_powmod(const Poly& base, std::uint64_t e, const Poly& m) {
    Poly result = poly_mod(Poly::constant(base.modulus(), 1), m);
    Poly b = poly_mod(base, m);
    while (e > 0) {
        if (e & 1U) result = poly_mod(result * b, m);
        b = poly_mod(b * b, m);
        e >>= 1U;
    }
    return result;
}

NilpotentBijectiveSplit split_nilpotent_bijective(const Poly& p) {
    if (p.is_zero()) throw std::invalid_argument("split of the zero polynomial");
    const auto& c = p.coeffs();
    std::size_t s = 0;
    while (c[s] == 0) ++s;
    return {static_cast<int>(s),
            Poly::from_residues(p.modulus(), std::vector<Residue>(c.begin() + static_cast<long>(s), c.end()))};
}

std::vector<std::pair<std::uint64_t, int>> factor_integer(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, int>> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d != 0) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

namespace {

// x^(p^k) mod f, computed by k successive p-th powers.
Poly frobenius_power(const Poly& f, int k) {
    const auto m = f.modulus();
    Poly h = poly_mod(Poly::monomial(m, 1), f);
    for (int i = 0; i < k; ++i) h = poly_powmod(h, m.value(), f);
    return h;
}

std::uint64_t checked_pow(std::uint64_t base, int exp) {
    std::uint64_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<std::uint64_t>::max() / base) {
            throw std::overflow_error("p^m exceeds 64 bits");
        }
        out *= base;
    }
    return out;
}

// Order of x modulo an irreducible f with f(0) != 0: descend through divisors of p^m - 1.
std::uint64_t order_irreducible(const Poly& f) {
    const auto m = f.modulus();
    const Poly one = Poly::constant(m, 1);
    const Poly x = Poly::monomial(m, 1);
    std::uint64_t t = checked_pow(m.value(), f.degree()) - 1;
    for (auto [prime, exp] : factor_integer(t)) {
        for (int i = 0; i < exp; ++i) {
            if (poly_powmod(x, t / prime, f) == poly_mod(one, f)) {
                t /= prime;
            } else {
                break;
            }
        }
    }
    return t;
}

}  // namespace

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) throw std::invalid_argument("irreducibility of a constant polynomial");
    const int n = f.degree();
    if (n == 1) return true;
    const Poly g = f.monic();
    const Poly x = Poly::monomial(f.modulus(), 1);
    if (frobenius_power(g, n) != poly_mod(x, g)) return false;
    for (auto [r, e] : factor_integer(static_cast<std::uint64_t>(n))) {
        (void)e;
        const Poly h = frobenius_power(g, n / static_cast<int>(r)) - x;
        if (poly_gcd(h, g).degree() != 0) return false;
    }
    return true;
}

Factorization factor(const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("factorisation of the zero polynomial");
    const auto m = f.modulus();
    const Residue p = m.value();
    Factorization out{f.leading(), {}};
    Poly g = f.monic();

    for (int d = 1; 2 * d <= g.degree(); ++d) {
        if (is_irreducible(g)) break;
        // monic candidates of degree d, lower coefficients counted in base p
        std::vector<Residue> cand(static_cast<std::size_t>(d) + 1, 0);
        cand[static_cast<std::size_t>(d)] = 1;
        while (true) {
            const Poly c = Poly::from_residues(m, cand);
            int mult = 0;
            while (g.degree() >= d) {
                auto [q, r] = poly_divmod(g, c);
                if (!r.is_zero()) break;
                g = std::move(q);
                ++mult;
            }
            if (mult > 0) out.factors.push_back({c, mult});
            if (2 * d > g.degree()) break;
            std::size_t i = 0;
            while (i < static_cast<std::size_t>(d) && ++cand[i] == p) cand[i++] = 0;
            if (i == static_cast<std::size_t>(d)) break;
        }
    }
    if (g.degree() >= 1) out.factors.push_back({g, 1});
    return out;
}

std::uint64_t order_of_x_mod(const Poly& f) {
    if (f.degree() < 1) throw std::invalid_argument("order of x modulo a constant polynomial");
    if (f.coeff(0) == 0) throw std::invalid_argument("x is not invertible modulo f: f(0) = 0");
    const std::uint64_t p = f.modulus().value();
    // ord(g^e) = ord(g) * p^t with p^t >= e; ord(f) is the lcm over prime-power factors
    std::uint64_t order = 1;
    for (const auto& [g, e] : factor(f).factors) {
        std::uint64_t part = order_irreducible(g);
        std::uint64_t pt = 1;
        while (pt < static_cast<std::uint64_t>(e)) pt *= p;
        part *= pt;
        order = std::lcm(order, part);
    }
    return order;
}

}  // namespace ffcons
