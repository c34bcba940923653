#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "gmtpp/field.hpp"

using namespace gmtpp;

namespace {

FieldPtr f9() { return make_field_tower(3, AutoDeg{1}, AutoDeg{2}); }

FieldElem ext(const FieldPtr& F, std::vector<int> idx) { return F->make_ext(std::move(idx)); }

} // namespace

TEST_CASE("tower construction picks the first irreducible moduli") {
    auto F = f9();
    CHECK(F->p == 3);
    CHECK(F->q == 3);
    CHECK(F->order == 9);
    // base modulus for m=1 is x itself; ext modulus is x^2 + 1, the first
    // monic quadratic over F_3 without a root
    CHECK(F->base_modulus == std::vector<int>{0, 1});
    CHECK(F->ext_modulus == std::vector<int>{1, 0, 1});

    auto F512 = make_field_tower(2, std::vector<int>{1, 1, 0, 1}, AutoDeg{3});
    CHECK(F512->q == 8);
    CHECK(F512->order == 512);

    CHECK_THROWS_AS(make_field_tower(4, AutoDeg{1}, AutoDeg{2}), Error);
    try {
        make_field_tower(4, AutoDeg{1}, AutoDeg{2});
    } catch (const Error& e) {
        CHECK(e.code() == errc::not_prime);
    }
    // x^2 + 2 = (x-1)(x+1) over F_3
    CHECK_THROWS_AS(make_field_tower(3, AutoDeg{1}, std::vector<std::vector<int>>{{2}, {0}, {1}}),
                    Error);
    CHECK_THROWS_AS(make_field_tower(3, AutoDeg{1}, AutoDeg{1}), Error);
}

TEST_CASE("arithmetic in F_9 = F_3[i]/(i^2+1)") {
    auto F = f9();
    FieldElem i = ext(F, {0, 1});
    FieldElem one = F->one(Level::ext);
    FieldElem two = F->from_int(Level::ext, 2);

    CHECK((one + i) * (one - i) == two); // 1 - i^2 = 2
    CHECK(F->pow(i, 4) == one);
    CHECK(F->pow(i, 2) == -one);

    for (i64 k = 1; k < 9; ++k) {
        FieldElem x = F->element(Level::ext, k);
        CHECK(x * F->inv(x) == one);
    }
    CHECK_THROWS_AS(F->inv(F->zero(Level::ext)), Error);
    FieldElem b = F->one(Level::base);
    CHECK_THROWS_AS(F->add(one, b), Error); // level mismatch
}

TEST_CASE("Frobenius on F_9") {
    auto F = f9();
    FieldElem i = ext(F, {0, 1});
    CHECK(F->frobenius_q(i, 1) == -i); // i^3 = -i
    for (i64 k = 0; k < 9; ++k) {
        FieldElem x = F->element(Level::ext, k);
        CHECK(F->frobenius_q(x, F->n) == x);
    }
    FieldElem c = F->from_int(Level::ext, 2);
    CHECK(F->frobenius_q(c, 1) == c); // subfield fixed
}

TEST_CASE("Frobenius is additive and multiplicative") {
    auto F = make_field_tower(2, std::vector<int>{1, 1, 0, 1}, AutoDeg{2}); // F_8 < F_64
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 64; ++trial) {
        FieldElem x = F->element(Level::ext, i64(rng() % F->order));
        FieldElem y = F->element(Level::ext, i64(rng() % F->order));
        CHECK(F->frobenius_q(x + y, 1) == F->frobenius_q(x, 1) + F->frobenius_q(y, 1));
        CHECK(F->frobenius_q(x * y, 1) == F->frobenius_q(x, 1) * F->frobenius_q(y, 1));
    }
}

TEST_CASE("trace and norm on F_9 over F_3") {
    auto F = f9();
    FieldElem i = ext(F, {0, 1});
    CHECK(F->trace(F->from_int(Level::ext, 2)) == F->from_int(Level::base, 1)); // 2+2 = 1 mod 3
    CHECK(F->trace(i) == F->zero(Level::base));
    CHECK(F->trace(F->zero(Level::ext)) == F->zero(Level::base));
    // norm(i) = i * i^3 = -i^2 = 1
    CHECK(F->norm(i) == F->one(Level::base));
}

TEST_CASE("trace is F_q-linear, exhaustively on small fields") {
    for (auto F : {make_field_tower(3, AutoDeg{1}, AutoDeg{2}),
                   make_field_tower(2, AutoDeg{2}, AutoDeg{2}),
                   make_field_tower(2, AutoDeg{1}, AutoDeg{3})}) {
        for (i64 a = 0; a < F->order; ++a) {
            FieldElem x = F->element(Level::ext, a);
            for (i64 b = 0; b < F->order; ++b) {
                FieldElem y = F->element(Level::ext, b);
                CHECK(F->trace(x + y) == F->trace(x) + F->trace(y));
            }
            for (i64 l = 0; l < F->q; ++l) {
                FieldElem lam = F->element(Level::base, l);
                CHECK(F->trace(F->lift(lam, Level::ext) * x) == lam * F->trace(x));
            }
        }
    }
}

TEST_CASE("mu equals the image of the (q-1)-power map") {
    for (auto F : {make_field_tower(3, AutoDeg{1}, AutoDeg{2}),
                   make_field_tower(2, AutoDeg{2}, AutoDeg{2}),
                   make_field_tower(5, AutoDeg{1}, AutoDeg{2})}) {
        i64 ell = F->mu_order();
        std::set<i64> lhs, rhs;
        for (i64 k = 1; k < F->order; ++k) {
            FieldElem x = F->element(Level::ext, k);
            if (F->pow(x, ell) == F->one(Level::ext)) lhs.insert(k);
            rhs.insert(F->index_of(F->pow(x, F->q - 1)));
        }
        CHECK(lhs == rhs);
        CHECK(i64(lhs.size()) == ell);
    }
}

TEST_CASE("generator and discrete log") {
    auto F = f9();
    FieldElem g = F->generator(Level::ext);
    CHECK(F->mult_order(g) == 8);
    CHECK(F->discrete_log(F->one(Level::ext)) == 0);
    CHECK(F->discrete_log(F->pow(g, 5)) == 5);
    // round-trip everywhere, against a linear scan oracle
    for (i64 k = 1; k < F->order; ++k) {
        FieldElem x = F->element(Level::ext, k);
        i64 lg = F->discrete_log(x);
        CHECK(F->pow(g, lg) == x);
        i64 scan = 0;
        FieldElem acc = F->one(Level::ext);
        while (acc != x) {
            acc = acc * g;
            ++scan;
        }
        CHECK(lg == scan);
    }
    CHECK_THROWS_AS(F->discrete_log(F->zero(Level::ext)), Error);
}

TEST_CASE("subprimitive order in F_9") {
    auto F = f9();
    // order-8 element -> 4
    FieldElem g = F->generator(Level::ext);
    CHECK(F->subprimitive_order(g) == 4);
    CHECK(F->subprimitive_order(F->from_int(Level::ext, 2)) == 1);
    FieldElem i = ext(F, {0, 1});
    CHECK(F->mult_order(i) == 4);
    CHECK(F->subprimitive_order(i) == 2);
    for (i64 k = 1; k < 9; ++k) {
        i64 e = F->subprimitive_order(F->element(Level::ext, k));
        CHECK((F->order - 1) / (F->q - 1) % e == 0); // e divides mu order? e | q^n-1 and x^e in F_q*
    }
    CHECK_THROWS_AS(F->subprimitive_order(F->zero(Level::ext)), Error);
}

TEST_CASE("x^(q^n - 1) = 1 for all nonzero x") {
    auto F = make_field_tower(2, AutoDeg{2}, AutoDeg{2}); // F_16 over F_4
    for (i64 k = 1; k < F->order; ++k)
        CHECK(F->pow(F->element(Level::ext, k), F->order - 1) == F->one(Level::ext));
}

TEST_CASE("Conway towers are reproducible and primitive") {
    CHECK(conway_polynomial(2, 1) == std::vector<int>{1, 1});
    CHECK(conway_polynomial(2, 3) == std::vector<int>{1, 1, 0, 1});
    CHECK(conway_polynomial(3, 1) == std::vector<int>{1, 1}); // x - 2 = x + 1
    CHECK(conway_polynomial(3, 2) == std::vector<int>{2, 2, 1});

    auto F = make_conway_tower(2, 3, 3); // F_8 < F_512
    CHECK(F->q == 8);
    CHECK(F->order == 512);
    // class of x is the canonical primitive element
    FieldElem t = F->element(Level::ext, F->q);
    CHECK(F->mult_order(t) == 511);
    CHECK(F->generator(Level::ext) == t);

    auto F729 = make_conway_tower(3, 2, 3);
    CHECK(F729->order == 729);
    FieldElem t9 = F729->element(Level::ext, F729->q);
    CHECK(F729->mult_order(t9) == 728);
}

TEST_CASE("field spec strings round-trip") {
    for (const char* spec :
         {"p=3;auto;n=2", "p=2;base=[1,1,0,1];n=3", "p=5;m=1;n=2", "p=2;m=2;n=2"}) {
        auto F = parse_field_spec(spec);
        auto G = parse_field_spec(field_spec_string(*F));
        CHECK(F->p == G->p);
        CHECK(F->base_modulus == G->base_modulus);
        CHECK(F->ext_modulus == G->ext_modulus);
    }
    auto Fc = parse_field_spec("p=2;m=3;n=3;conway");
    CHECK(Fc->conway);
    CHECK(Fc->order == 512);
    CHECK_THROWS_AS(parse_field_spec("p=3;n=2;banana=1"), Error);
    CHECK_THROWS_AS(parse_field_spec("m=2;n=2"), Error);
}

TEST_CASE("lift and project") {
    auto F = make_field_tower(2, AutoDeg{2}, AutoDeg{2});
    FieldElem b = F->element(Level::base, 2);
    FieldElem e = F->lift(b, Level::ext);
    CHECK(F->project(e, Level::base) == b);
    FieldElem t = F->element(Level::ext, F->q);
    CHECK_THROWS_AS(F->project(t, Level::base), Error);
}

TEST_CASE("unipoly basics") {
    auto F = f9();
    FieldElem one = F->one(Level::ext);
    UniPoly x = UniPoly::monomial(*F, Level::ext, 1, one);
    UniPoly p = x * x + x; // x^2 + x
    CHECK(p.degree() == 2);
    FieldElem i = ext(F, {0, 1});
    CHECK(p.eval(i) == F->pow(i, 2) + i);
    CHECK(p.support() == std::vector<i64>{1, 2});
    UniPoly z = UniPoly::zero(*F, Level::ext);
    CHECK(z.is_zero());
    CHECK((z + p) == p);
}
