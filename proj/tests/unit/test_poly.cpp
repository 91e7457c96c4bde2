#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "ffcons/poly.hpp"
#include "oracles.hpp"

using namespace ffcons;

namespace {

Poly random_poly(std::mt19937_64& rng, PrimeModulus m, int deg) {
    std::uniform_int_distribution<std::int64_t> u(0, m.value() - 1);
    std::vector<std::int64_t> c(deg + 1);
    for (auto& v : c) v = u(rng);
    return Poly(m, c);
}

// All monic polynomials of the given degree.
std::vector<Poly> monics(PrimeModulus m, int deg) {
    std::vector<Poly> out;
    std::uint64_t total = 1;
    for (int i = 0; i < deg; ++i) total *= m.value();
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::int64_t> c(deg + 1, 0);
        std::uint64_t x = code;
        for (int i = 0; i < deg; ++i, x /= m.value()) c[i] = static_cast<std::int64_t>(x % m.value());
        c[deg] = 1;
        out.emplace_back(m, c);
    }
    return out;
}

// Irreducible when no monic polynomial of degree 1..deg/2 divides it.
bool irreducible_by_trial(const Poly& f) {
    for (int d = 1; 2 * d <= f.degree(); ++d)
        for (const auto& g : monics(f.modulus(), d))
            if (poly_mod(f, g).is_zero()) return false;
    return true;
}

}  // namespace

TEST_CASE("construction trims and reduces") {
    const PrimeModulus m(3);
    const Poly f(m, {4, -1, 0, 0});
    CHECK(f.degree() == 1);
    CHECK(f.coeff(0) == 1);
    CHECK(f.coeff(1) == 2);
    CHECK(Poly(m).degree() == -1);
    CHECK(Poly(m, {0, 0}).is_zero());
}

TEST_CASE("printing") {
    const PrimeModulus m(3);
    CHECK(Poly(m, {2, 1, 0, 2, 1}).to_string() == "λ^4+2λ^3+λ+2");
    CHECK(Poly(m, {0, 1}).to_string("x") == "x");
    CHECK(Poly(m).to_string() == "0");
}

TEST_CASE("division reconstructs the dividend") {
    std::mt19937_64 rng(11);
    for (std::uint64_t p : {2, 3, 5, 7, 101}) {
        const PrimeModulus m(p);
        for (int t = 0; t < 200; ++t) {
            const Poly a = random_poly(rng, m, static_cast<int>(rng() % 9));
            Poly b = random_poly(rng, m, static_cast<int>(rng() % 5));
            if (b.is_zero()) b = Poly::constant(m, 1);
            const auto [q, r] = poly_divmod(a, b);
            Poly back = q * b;
            back += r;
            CHECK(back == a);
            CHECK(r.degree() < b.degree());
        }
    }
    CHECK_THROWS_AS(poly_divmod(Poly(PrimeModulus(3), {1, 1}), Poly(PrimeModulus(3))), std::domain_error);
}

TEST_CASE("gcd divides both arguments and is monic") {
    std::mt19937_64 rng(12);
    const PrimeModulus m(5);
    for (int t = 0; t < 200; ++t) {
        const Poly common = random_poly(rng, m, 2);
        const Poly a = random_poly(rng, m, 3) * common, b = random_poly(rng, m, 3) * common;
        const Poly g = poly_gcd(a, b);
        if (a.is_zero() && b.is_zero()) continue;
        CHECK(g.is_monic());
        CHECK(poly_mod(a, g).is_zero());
        CHECK(poly_mod(b, g).is_zero());
        if (!common.is_zero()) CHECK(poly_mod(g, common.monic()).is_zero());
    }
}

TEST_CASE("powmod matches repeated multiplication") {
    std::mt19937_64 rng(13);
    const PrimeModulus m(3);
    for (int t = 0; t < 50; ++t) {
        const Poly mod = random_poly(rng, m, 4) + Poly::monomial(m, 5);
        const Poly base = random_poly(rng, m, 3);
        Poly acc = Poly::constant(m, 1);
        for (std::uint64_t e = 0; e < 30; ++e) {
            CHECK(poly_powmod(base, e, mod) == poly_mod(acc, mod));
            acc = poly_mod(acc * base, mod);
        }
    }
}

TEST_CASE("nilpotent and bijective split") {
    const PrimeModulus m(3);
    const auto split = split_nilpotent_bijective(Poly(m, {0, 0, 2, 1}));
    CHECK(split.s == 2);
    CHECK(split.q == Poly(m, {2, 1}));
    CHECK_THROWS(split_nilpotent_bijective(Poly(m)));
}

TEST_CASE("irreducibility agrees with exhaustive trial division") {
    for (std::uint64_t p : {2, 3, 5}) {
        const PrimeModulus m(p);
        for (int deg = 1; deg <= (p == 5 ? 4 : 6); ++deg) {
            for (const auto& f : monics(m, deg)) {
                CAPTURE(f.to_string());
                CHECK(is_irreducible(f) == irreducible_by_trial(f));
            }
        }
    }
    CHECK_THROWS(is_irreducible(Poly::constant(PrimeModulus(3), 2)));
}

TEST_CASE("irreducible counts match the necklace formula") {
    // number of monic irreducibles of degree 4 over F_3 is (81 - 9) / 4 = 18
    int count = 0;
    for (const auto& f : monics(PrimeModulus(3), 4)) count += is_irreducible(f);
    CHECK(count == 18);
    count = 0;
    for (const auto& f : monics(PrimeModulus(2), 6)) count += is_irreducible(f);
    CHECK(count == 9);
}

TEST_CASE("factorization reproduces the polynomial with irreducible monic factors") {
    std::mt19937_64 rng(14);
    for (std::uint64_t p : {2, 3, 5, 7}) {
        const PrimeModulus m(p);
        for (int t = 0; t < 80; ++t) {
            Poly f = random_poly(rng, m, 1 + static_cast<int>(rng() % 7));
            if (f.degree() < 1) continue;
            const auto fac = factor(f);
            Poly prod = Poly::constant(m, fac.unit);
            for (const auto& [g, e] : fac.factors) {
                CHECK(g.is_monic());
                CHECK(is_irreducible(g));
                for (int i = 0; i < e; ++i) prod = prod * g;
            }
            CHECK(prod == f);
        }
    }
}

TEST_CASE("order of x agrees with stepping x^k") {
    for (std::uint64_t p : {2, 3, 5}) {
        const PrimeModulus m(p);
        for (int deg = 1; deg <= (p == 2 ? 7 : 4); ++deg) {
            for (const auto& f : monics(m, deg)) {
                if (f.coeff(0) == 0) continue;
                CAPTURE(f.to_string());
                std::vector<std::int64_t> c(f.coeffs().begin(), f.coeffs().end());
                CHECK(order_of_x_mod(f) == oracle::order_of_x(c, static_cast<std::int64_t>(p)));
            }
        }
    }
    CHECK_THROWS(order_of_x_mod(Poly(PrimeModulus(3), {0, 1, 1})));
    CHECK_THROWS(order_of_x_mod(Poly::constant(PrimeModulus(3), 1)));
}

TEST_CASE("primitive quartic over F_3 reaches the full order") {
    const PrimeModulus m(3);
    // x^4 + x + 2 is primitive over F_3
    CHECK(order_of_x_mod(Poly(m, {2, 1, 0, 0, 1})) == 80);
    CHECK(order_of_x_mod(Poly(m, {1, 2, 0, 1, 1})) == 20);
}

TEST_CASE("integer factorization") {
    CHECK(factor_integer(80) == std::vector<std::pair<std::uint64_t, int>>{{2, 4}, {5, 1}});
    CHECK(factor_integer(1).empty());
    CHECK(factor_integer(2147483647) == std::vector<std::pair<std::uint64_t, int>>{{2147483647, 1}});
}
