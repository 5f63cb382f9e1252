#include <catch2/catch_amalgamated.hpp>

#include <array>

#include "ffperm/equiv.hpp"
#include "ffperm/permoracle.hpp"

using namespace ffperm;

namespace {

PolySystem identity_system(const Field& f, std::uint32_t n) {
    std::vector<MultiPoly> polys;
    for (std::uint32_t i = 0; i < n; ++i) polys.push_back(MultiPoly::variable(f, n, i));
    return PolySystem(std::move(polys));
}

MultiPoly from_terms(const Field& f, std::uint32_t nvars,
                     std::initializer_list<std::pair<std::vector<std::uint32_t>, int>> ts) {
    MultiPoly p(f, nvars);
    for (auto& [exps, c] : ts) p.add_term(exps, f.scalar(c));
    return p;
}

}  // namespace

TEST_CASE("apply_linear") {
    Field f5 = build_field(5, 1);
    PolySystem id2 = identity_system(f5, 2);
    Matrix I = Matrix::identity(f5, 2);

    PolySystem F({from_terms(f5, 2, {{{1, 0}, 2}, {{0, 1}, 3}}),
                  from_terms(f5, 2, {{{2, 0}, 1}, {{0, 1}, 1}})});
    CHECK(apply_linear(F, I, I) == F.reduced());

    // F1 = (a5 y, b4 x) with rho(s, t) = (t/b4, s/a5) lands on the identity.
    const elt a5 = 3, b4 = 2;
    PolySystem F1({MultiPoly::variable(f5, 2, 1, a5), MultiPoly::variable(f5, 2, 0, b4)});
    Matrix rho = Matrix::from_rows(f5, {{0, f5.inv(b4)}, {f5.inv(a5), 0}});
    CHECK(apply_linear(F1, rho, I) == id2);

    Matrix swap = Matrix::from_rows(f5, {{0, 1}, {1, 0}});
    PolySystem swapped = apply_linear(id2, swap, I);
    CHECK(swapped[0] == MultiPoly::variable(f5, 2, 1));
    CHECK(swapped[1] == MultiPoly::variable(f5, 2, 0));

    Matrix sing = Matrix::from_rows(f5, {{1, 2}, {2, 4}});
    CHECK_THROWS_MATCHES(apply_linear(F, sing, I), error, Catch::Matchers::Predicate<error>([](const error& e) {
                             return e.code() == errc::singular_matrix;
                         }));
}

TEST_CASE("apply_cs_shift") {
    Field f5 = build_field(5, 1);

    SECTION("zero shifts change nothing") {
        PolySystem F({from_terms(f5, 2, {{{2, 0}, 1}, {{0, 1}, 1}}),
                      from_terms(f5, 2, {{{1, 1}, 1}})});
        std::vector<MultiPoly> zeros{MultiPoly::zero(f5, 2), MultiPoly::zero(f5, 2)};
        CHECK(apply_cs_shift(F, zeros) == F.reduced());
    }

    SECTION("shift in the variable pinned by the other coordinate") {
        // (y, x) plus h2(y) = (b3/b4) y^2 + (b5/b4) y on the second slot.
        const elt b3 = 2, b4 = 3, b5 = 1;
        PolySystem F({MultiPoly::variable(f5, 2, 1), MultiPoly::variable(f5, 2, 0)});
        MultiPoly h2(f5, 2);
        std::vector<std::uint32_t> y2{0, 2}, y1{0, 1};
        h2.add_term(y2, f5.div(b3, b4));
        h2.add_term(y1, f5.div(b5, b4));
        PolySystem G = apply_cs_shift(F, {MultiPoly::zero(f5, 2), h2});
        CHECK(G[0] == MultiPoly::variable(f5, 2, 1));
        CHECK(G[1] == MultiPoly::variable(f5, 2, 0).plus(h2).reduced());
    }

    SECTION("trivariate chain from a relabel") {
        // (x3, x1 + x3^2, x2 + x1 x3) relabeled by x1->x2, x2->x3, x3->x1
        // becomes (x1, x2 + x1^2, x3 + x1 x2), which strips to the identity.
        Field f3 = build_field(3, 1);
        PolySystem G({from_terms(f3, 3, {{{0, 0, 1}, 1}}),
                      from_terms(f3, 3, {{{1, 0, 0}, 1}, {{0, 0, 2}, 1}}),
                      from_terms(f3, 3, {{{0, 1, 0}, 1}, {{1, 0, 1}, 1}})});
        PolySystem R = apply_relabel(G, {1, 2, 0});
        CHECK(R == PolySystem({from_terms(f3, 3, {{{1, 0, 0}, 1}}),
                               from_terms(f3, 3, {{{0, 1, 0}, 1}, {{2, 0, 0}, 1}}),
                               from_terms(f3, 3, {{{0, 0, 1}, 1}, {{1, 1, 0}, 1}})}));
        std::vector<MultiPoly> strip{MultiPoly::zero(f3, 3),
                                     from_terms(f3, 3, {{{2, 0, 0}, -1}}),
                                     from_terms(f3, 3, {{{1, 1, 0}, -1}})};
        CHECK(apply_cs_shift(R, strip) == identity_system(f3, 3));

        EquivWitness w;
        w.relabel({1, 2, 0}).cs(strip);
        CHECK(verify_witness(G, identity_system(f3, 3), w));
    }

    SECTION("illegal dependencies are rejected") {
        // (x + y, y) + (0, x^2) breaks the triangular shape: the first
        // coordinate is no prefix and pins nothing by itself.
        PolySystem F({from_terms(f5, 2, {{{1, 0}, 1}, {{0, 1}, 1}}),
                      MultiPoly::variable(f5, 2, 1)});
        std::vector<MultiPoly> bad{MultiPoly::zero(f5, 2), from_terms(f5, 2, {{{2, 0}, 1}})};
        CHECK_THROWS_MATCHES(apply_cs_shift(F, bad), error, Catch::Matchers::Predicate<error>([](const error& e) {
                                 return e.code() == errc::illegal_shift_dependency;
                             }));
        // Same target coordinate but shifting in its own variable: also illegal.
        std::vector<MultiPoly> bad2{MultiPoly::zero(f5, 2), from_terms(f5, 2, {{{0, 2}, 1}})};
        CHECK_THROWS_AS(apply_cs_shift(F, bad2), error);
    }
}

TEST_CASE("verify_witness basics") {
    Field f3 = build_field(3, 1);
    PolySystem F({from_terms(f3, 2, {{{2, 0}, 1}, {{0, 1}, 1}}),
                  from_terms(f3, 2, {{{1, 0}, 1}})});
    CHECK(verify_witness(F, F, EquivWitness{}));

    EquivWitness wrong;
    wrong.left(Matrix::from_rows(f3, {{1, 1}, {0, 1}}));
    CHECK_FALSE(verify_witness(F, F, wrong));

    EquivWitness singular;
    singular.left(Matrix::from_rows(f3, {{0, 0}, {0, 1}}));
    CHECK_FALSE(verify_witness(F, F, singular));
}

TEST_CASE("every step type preserves the permutation verdict") {
    Rng rng(31337);
    for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
        Field f = q == 4 ? build_field(2, 2) : build_field(q, 1);
        for (int trial = 0; trial < 40; ++trial) {
            std::array<elt, 10> c{};
            for (auto& v : c) v = static_cast<elt>(rng.below(q));
            MultiPoly f1(f, 2), f2(f, 2);
            const std::uint32_t e[5][2] = {{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}};
            for (int i = 0; i < 5; ++i) {
                std::vector<std::uint32_t> exps{e[i][0], e[i][1]};
                f1.add_term(exps, c[i]);
                f2.add_term(exps, c[i + 5]);
            }
            PolySystem F({f1, f2});
            bool base = brute_force(F).is_perm;

            Matrix M(f, 2);
            do {
                for (std::uint32_t i = 0; i < 2; ++i)
                    for (std::uint32_t j = 0; j < 2; ++j) M.at(i, j) = static_cast<elt>(rng.below(q));
            } while (!M.invertible());
            CHECK(brute_force(apply_step(F, LeftLinear{M})).is_perm == base);
            CHECK(brute_force(apply_step(F, RightLinear{M})).is_perm == base);
            CHECK(brute_force(apply_step(F, Relabel{{1, 0}})).is_perm == base);

            // Random shift; apply only when the shape check accepts it.
            MultiPoly h(f, 2);
            std::vector<std::uint32_t> x2{2, 0}, x1{1, 0};
            h.add_term(x2, static_cast<elt>(rng.below(q)));
            h.add_term(x1, static_cast<elt>(rng.below(q)));
            try {
                PolySystem G = apply_cs_shift(F, {MultiPoly::zero(f, 2), h});
                CHECK(brute_force(G).is_perm == base);
            } catch (const error& e) {
                CHECK(e.code() == errc::illegal_shift_dependency);
            }
        }
    }
}

TEST_CASE("witness replay is stepwise-consistent") {
    Field f5 = build_field(5, 1);
    PolySystem F({from_terms(f5, 2, {{{0, 1}, 2}}), from_terms(f5, 2, {{{1, 0}, 3}, {{0, 2}, 1}})});
    EquivWitness w1, w2, joint;
    w1.left(Matrix::from_rows(f5, {{0, 1}, {1, 0}}));
    w2.right(Matrix::from_rows(f5, {{2, 1}, {1, 1}}));
    joint.append(w1).append(w2);
    CHECK(apply_witness(apply_witness(F, w1), w2) == apply_witness(F, joint));
}
