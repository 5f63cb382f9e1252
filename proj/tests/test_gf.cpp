#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "ffperm/gf.hpp"

using namespace ffperm;

namespace {

// Independent oracle: multiplicative inverse by exhaustive search.
elt inv_by_search(const Field& f, elt a) {
    for (std::uint32_t b = 0; b < f.q(); ++b)
        if (f.mul(a, static_cast<elt>(b)) == 1) return static_cast<elt>(b);
    FAIL("no inverse found");
    return 0;
}

bool map_is_bijection(const Field& f, const std::vector<elt>& image) {
    std::vector<bool> seen(f.q(), false);
    for (elt v : image) {
        if (seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

}  // namespace

TEST_CASE("build_field picks expected defaults") {
    Field f4 = build_field(2, 2);
    CHECK(f4.q() == 4);
    CHECK(f4.modulus() == std::vector<elt>{1, 1, 1});  // x^2 + x + 1

    Field f3 = build_field(3, 1);
    CHECK(f3.q() == 3);
    CHECK(f3.modulus() == std::vector<elt>{0, 1});  // x

    Field f8 = build_field(2, 3);
    CHECK(f8.modulus() == std::vector<elt>{1, 1, 0, 1});  // x^3 + x + 1
}

TEST_CASE("build_field accepts an explicitly irreducible modulus") {
    // Oracle: a cubic over Z_2 is irreducible iff it has no root in {0, 1}.
    auto eval_mod2 = [](const std::vector<int>& c, int x) {
        int v = 0;
        for (std::size_t i = c.size(); i-- > 0;) v = (v * x + c[i]) & 1;
        return v;
    };
    std::vector<int> cand{1, 1, 0, 1};
    REQUIRE(eval_mod2(cand, 0) != 0);
    REQUIRE(eval_mod2(cand, 1) != 0);

    Field f8 = build_field(2, 3, std::vector<elt>{1, 1, 0, 1});
    CHECK(f8.q() == 8);
}

TEST_CASE("build_field rejects bad inputs") {
    CHECK_THROWS_MATCHES(build_field(4, 1), error, Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::not_prime;
                         }));
    CHECK_THROWS_MATCHES(build_field(2, 3, std::vector<elt>{0, 0, 0, 1}), error,
                         Catch::Matchers::Predicate<error>(
                             [](const error& e) { return e.code() == errc::reducible_modulus; }));
    CHECK_THROWS_MATCHES(build_field(2, 17), error, Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::field_too_large;
                         }));
}

TEST_CASE("inverse examples") {
    Field f5 = build_field(5, 1);
    CHECK(f5.inv(1) == 1);
    CHECK(f5.inv(2) == 3);

    Field f4 = build_field(2, 2);
    // alpha has index 2; its inverse is alpha + 1 (index 3), per search oracle.
    CHECK(f4.inv(2) == inv_by_search(f4, 2));
    CHECK(f4.inv(2) == 3);
    CHECK_THROWS_AS(f4.inv(0), error);
}

TEST_CASE("field axioms hold exhaustively for q <= 64") {
    struct Spec {
        std::uint32_t p, m;
    };
    for (Spec s : {Spec{2, 1}, Spec{3, 1}, Spec{2, 2}, Spec{5, 1}, Spec{7, 1}, Spec{2, 3},
                   Spec{3, 2}, Spec{2, 4}, Spec{5, 2}, Spec{3, 3}, Spec{2, 5}, Spec{7, 2},
                   Spec{2, 6}}) {
        Field f = build_field(s.p, s.m);
        const std::uint32_t q = f.q();
        for (std::uint32_t a = 0; a < q; ++a) {
            if (a) REQUIRE(f.mul(static_cast<elt>(a), f.inv(static_cast<elt>(a))) == 1);
            for (std::uint32_t b = 0; b < q; ++b) {
                REQUIRE(f.add(static_cast<elt>(a), static_cast<elt>(b)) ==
                        f.add(static_cast<elt>(b), static_cast<elt>(a)));
                REQUIRE(f.mul(static_cast<elt>(a), static_cast<elt>(b)) ==
                        f.mul(static_cast<elt>(b), static_cast<elt>(a)));
                // Frobenius additivity.
                REQUIRE(f.pow(f.add(static_cast<elt>(a), static_cast<elt>(b)), f.p()) ==
                        f.add(f.pow(static_cast<elt>(a), f.p()), f.pow(static_cast<elt>(b), f.p())));
                for (std::uint32_t c = 0; c < q; ++c) {
                    elt ea = static_cast<elt>(a), eb = static_cast<elt>(b), ec = static_cast<elt>(c);
                    REQUIRE(f.add(f.add(ea, eb), ec) == f.add(ea, f.add(eb, ec)));
                    REQUIRE(f.mul(f.mul(ea, eb), ec) == f.mul(ea, f.mul(eb, ec)));
                    REQUIRE(f.mul(ea, f.add(eb, ec)) == f.add(f.mul(ea, eb), f.mul(ea, ec)));
                }
            }
        }
    }
}

TEST_CASE("square roots") {
    Field f7 = build_field(7, 1);
    CHECK(qr_sqrt(f7, 0) == elt{0});
    // Oracle: the nonzero squares mod 7 are exactly {1, 2, 4}.
    std::set<elt> squares;
    for (std::uint32_t e = 1; e < 7; ++e) squares.insert(f7.mul(static_cast<elt>(e), static_cast<elt>(e)));
    REQUIRE(squares == std::set<elt>{1, 2, 4});
    CHECK_FALSE(qr_sqrt(f7, 3).has_value());
    CHECK(qr_sqrt(f7, 2).has_value());

    // Odd characteristic: exactly (q+1)/2 elements have roots.
    for (std::uint32_t q : {3u, 5u, 7u}) {
        Field f = build_field(q, 1);
        std::uint32_t with_root = 0;
        for (std::uint32_t e = 0; e < q; ++e) {
            auto r = qr_sqrt(f, static_cast<elt>(e));
            if (r) {
                ++with_root;
                CHECK(f.mul(*r, *r) == e);
            }
        }
        CHECK(with_root == (q + 1) / 2);
    }

    // Even characteristic: every element has the unique root e^(q/2).
    Field f8 = build_field(2, 3);
    for (std::uint32_t e = 0; e < 8; ++e) {
        auto r = qr_sqrt(f8, static_cast<elt>(e));
        REQUIRE(r.has_value());
        CHECK(*r == f8.pow(static_cast<elt>(e), 4));
    }
}

TEST_CASE("cube roots") {
    Field f5 = build_field(5, 1);
    CHECK(cbrt(f5, 0) == 0);
    // Oracle: exhaustive cubing over F_5.
    for (std::uint32_t e = 0; e < 5; ++e) {
        elt c = cbrt(f5, static_cast<elt>(e));
        CHECK(f5.mul(f5.sqr(c), c) == e);
    }
    CHECK(cbrt(f5, 3) == 2);

    Field f7 = build_field(7, 1);
    CHECK_THROWS_MATCHES(cbrt(f7, 2), error, Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::cubing_not_bijective;
                         }));

    Field f8 = build_field(2, 3);
    for (std::uint32_t e = 0; e < 8; ++e) {
        elt c = cbrt(f8, static_cast<elt>(e));
        CHECK(f8.mul(f8.sqr(c), c) == e);
    }
}

TEST_CASE("linearized root sets") {
    Field f8 = build_field(2, 3);
    std::vector<elt> identity{1};
    CHECK(linearized_roots(f8, identity) == std::vector<elt>{0});

    Field f4 = build_field(2, 2);
    std::vector<elt> frob{0, 1};  // y^2
    CHECK(linearized_roots(f4, frob) == std::vector<elt>{0});

    // Quartic linearized polynomials A y^4 + C y^2 + D y over F_8: the root
    // set is {0} exactly when y -> L(y) is a bijection (brute-force oracle).
    for (std::uint32_t a = 0; a < 8; ++a)
        for (std::uint32_t c = 0; c < 8; ++c)
            for (std::uint32_t d = 0; d < 8; ++d) {
                std::vector<elt> L{static_cast<elt>(d), static_cast<elt>(c), static_cast<elt>(a)};
                std::vector<elt> image;
                for (std::uint32_t y = 0; y < 8; ++y)
                    image.push_back(eval_linearized(f8, L, static_cast<elt>(y)));
                auto roots = linearized_roots(f8, L);
                REQUIRE(!roots.empty());
                REQUIRE(roots.front() == 0);
                // Root-set size is a power of p.
                std::size_t n = roots.size();
                while (n % 2 == 0) n /= 2;
                REQUIRE(n == 1);
                REQUIRE((roots == std::vector<elt>{0}) == map_is_bijection(f8, image));
            }
}

TEST_CASE("x^3 + L(x) permutation analysis") {
    Field f8 = build_field(2, 3);
    std::vector<elt> theta_one{1, 1, 0};  // x + x^2, theta = 1
    CHECK(x3_plus_L_is_perm(f8, theta_one));
    std::vector<elt> just_x{1, 0, 0};
    CHECK_FALSE(x3_plus_L_is_perm(f8, just_x));

    Field f4 = build_field(2, 2);
    for (std::uint32_t l0 = 0; l0 < 4; ++l0)
        for (std::uint32_t l1 = 0; l1 < 4; ++l1) {
            if (!l0 && !l1) continue;
            std::vector<elt> L{static_cast<elt>(l0), static_cast<elt>(l1)};
            CHECK_FALSE(x3_plus_L_is_perm(f4, L));
        }

    Field f5 = build_field(5, 1);
    std::vector<elt> one{1};
    CHECK_THROWS_AS(x3_plus_L_is_perm(f5, one), error);
}

TEST_CASE("checked elements refuse cross-field mixing") {
    Field f4 = build_field(2, 2);
    Field f8 = build_field(2, 3);
    Elem a(f4, 2), b(f8, 2);
    CHECK_THROWS_MATCHES(a + b, error, Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::field_mismatch;
                         }));
    Elem c(f4, 3);
    CHECK(a * a.inverse() == Elem(f4, 1));
    CHECK((a + c).value() == f4.add(2, 3));
}

TEST_CASE("canonical choices are deterministic") {
    Field a = build_field(3, 2);
    Field b = build_field(3, 2);
    CHECK(a.generator() == b.generator());
    CHECK(a.modulus() == b.modulus());
    CHECK(build_field(5, 1).smallest_nonresidue() == 2);
    CHECK(build_field(3, 1).smallest_nonresidue() == 2);
}
