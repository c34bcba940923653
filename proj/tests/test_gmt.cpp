#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "gmtpp/gmt.hpp"

using namespace gmtpp;

namespace {

FieldPtr f9() { return make_field_tower(3, AutoDeg{1}, AutoDeg{2}); }

GmtContext g9() {
    auto F = f9();
    static FieldPtr keep = F; // elements reference the context
    return gmt_context({keep->one(Level::ext), keep->make_ext({0, 1})});
}

Basis sample_basis(const FieldCtx& F, std::mt19937_64& rng) {
    for (;;) {
        Basis w;
        for (int i = 0; i < F.n; ++i)
            w.push_back(F.element(Level::ext, 1 + i64(rng() % (F.order - 1))));
        if (moore_matrix(w).is_basis) return w;
    }
}

const std::vector<FieldPtr>& small_fields() {
    static std::vector<FieldPtr> fields = {
        make_field_tower(2, AutoDeg{1}, AutoDeg{2}), make_field_tower(2, AutoDeg{1}, AutoDeg{3}),
        make_field_tower(3, AutoDeg{1}, AutoDeg{2}), make_field_tower(2, AutoDeg{2}, AutoDeg{2}),
        make_field_tower(5, AutoDeg{1}, AutoDeg{2}), make_field_tower(3, AutoDeg{1}, AutoDeg{3})};
    return fields;
}

} // namespace

TEST_CASE("mu membership") {
    auto F = f9();
    CHECK_THROWS_AS(to_mu(F->generator(Level::ext)), Error); // order 8, not in mu_4
    CHECK(mu_elements(*F).size() == 4);
}

TEST_CASE("T polynomials for W = (1, i) over F_9") {
    auto g = g9();
    const FieldCtx& F = *g.ctx;
    FieldElem i = F.make_ext({0, 1});
    FieldElem one = F.one(Level::ext);

    CHECK(g.det == i);
    CHECK(g.cofactors[0] == -i);
    CHECK(g.cofactors[1] == -one);
    CHECK(g.dual[0] == F.from_int(Level::ext, 2));
    CHECK(g.dual[1] == i);

    // T_0(x) = -i x + i^3 = -i x - i ; T_1(x) = x - 1
    CHECK(g.tcoef[0][0] == -i);
    CHECK(g.tcoef[0][1] == -i);
    CHECK(g.tcoef[1][0] == -one);
    CHECK(g.tcoef[1][1] == one);

    // constant term is the cofactor
    CHECK(t_unipoly(g, 0).eval(F.zero(Level::ext)) == g.cofactors[0]);
    CHECK(t_unipoly(g, 1).eval(F.zero(Level::ext)) == g.cofactors[1]);
    CHECK_THROWS_AS(t_eval(g, 2, to_mu(one)), Error);

    CHECK(t_eval(g, 0, to_mu(i)) == one - i);
    CHECK(t_eval(g, 1, to_mu(one)).is_zero());
}

TEST_CASE("psi on PG(1,3)") {
    auto g = g9();
    const FieldCtx& F = *g.ctx;
    FieldElem i = F.make_ext({0, 1});
    auto at = [&](std::vector<int> v) { return psi(g, canonical(F, v)).value; };
    CHECK(at({1, 0}) == F.one(Level::ext));
    CHECK(at({1, 1}) == -i);
    CHECK(at({2, 1}) == i);
    CHECK(at({0, 1}) == -F.one(Level::ext));
}

TEST_CASE("psi_inverse on F_9, both routes") {
    auto g = g9();
    const FieldCtx& F = *g.ctx;
    FieldElem i = F.make_ext({0, 1});
    CHECK(psi_inverse(g, to_mu(F.one(Level::ext))).coords == std::vector<int>{1, 0});
    CHECK(psi_inverse(g, to_mu(i)).coords == std::vector<int>{2, 1});
    CHECK(psi_inverse(g, to_mu(-F.one(Level::ext))).coords == std::vector<int>{0, 1});
    for (const auto& x : mu_elements(F)) {
        CHECK(psi_inverse(g, x, InverseRoute::t_poly) == psi_inverse(g, x, InverseRoute::trace));
    }
}

TEST_CASE("partition_index on F_9") {
    auto g = g9();
    const FieldCtx& F = *g.ctx;
    FieldElem i = F.make_ext({0, 1});
    CHECK(partition_index(g, F.from_int(Level::ext, 2)) == 0);
    CHECK(partition_index(g, i) == 1);
    CHECK(partition_index(g, to_mu(F.one(Level::ext))) == 0);
    CHECK_THROWS_AS(partition_index(g, F.zero(Level::ext)), Error);
    // consistency: index of y matches index of y^{q-1}
    for (i64 k = 1; k < F.order; ++k) {
        FieldElem y = F.element(Level::ext, k);
        CHECK(partition_index(g, y) == partition_index(g, to_mu(F.pow(y, F.q - 1))));
    }
}

TEST_CASE("verify_partitions sizes") {
    auto g = g9();
    auto rep = verify_partitions(g);
    CHECK(rep.s_sizes == std::vector<i64>{2, 6});
    CHECK(rep.z_sizes == std::vector<i64>{1, 3});
    CHECK(rep.c_sizes == std::vector<i64>{1, 3});

    auto F4 = make_field_tower(2, AutoDeg{1}, AutoDeg{2});
    auto g4 = gmt_context({F4->one(Level::ext), F4->element(Level::ext, 2)});
    auto rep4 = verify_partitions(g4);
    CHECK(rep4.z_sizes == std::vector<i64>{1, 2}); // |mu_3| = 3 = 1 + 2
}

TEST_CASE("psi is a bijection and round-trips, sampled bases") {
    std::mt19937_64 rng(48);
    for (const auto& F : small_fields()) {
        for (int trial = 0; trial < 5; ++trial) {
            auto g = gmt_context(sample_basis(*F, rng));
            std::set<i64> images;
            for (const auto& p : enumerate_pg(*F)) {
                MuElement x = psi(g, p);
                images.insert(F->index_of(x.value));
                CHECK(psi_inverse(g, x, InverseRoute::t_poly) == p);
                CHECK(psi_inverse(g, x, InverseRoute::trace) == p);
            }
            CHECK(i64(images.size()) == pg_size(*F));
            for (const auto& x : mu_elements(*F)) {
                CHECK(psi(g, psi_inverse(g, x)) == x);
                verify_partitions(g);
            }
        }
    }
}

TEST_CASE("T_{W,j}(x)^q = (-1)^(n-1) x^{-1} T_{W,j}(x) on mu") {
    std::mt19937_64 rng(49);
    for (const auto& F : small_fields()) {
        auto g = gmt_context(sample_basis(*F, rng));
        FieldElem sign = (F->n % 2 == 1) ? F->one(Level::ext) : -F->one(Level::ext);
        for (const auto& x : mu_elements(*F)) {
            FieldElem xi = F->inv(x.value);
            for (int j = 0; j < F->n; ++j) {
                FieldElem t = t_eval(g, j, x);
                CHECK(F->pow(t, F->q) == sign * xi * t);
            }
        }
    }
}

TEST_CASE("Tr(beta_i y) = det^{-1} y T_i(y^{q-1}) for all nonzero y") {
    std::mt19937_64 rng(50);
    for (const auto& F : small_fields()) {
        auto g = gmt_context(sample_basis(*F, rng));
        for (i64 k = 1; k < F->order; ++k) {
            FieldElem y = F->element(Level::ext, k);
            MuElement x = to_mu(F->pow(y, F->q - 1));
            for (int i = 0; i < F->n; ++i) {
                FieldElem lhs = F->lift(g.trace_beta(i, y), Level::ext);
                CHECK(lhs == g.det_inv * y * t_eval(g, i, x));
            }
        }
    }
}

TEST_CASE("scalar closure: c psi_W = psi_{c~ W}") {
    std::mt19937_64 rng(51);
    for (const auto& F : small_fields()) {
        auto w = sample_basis(*F, rng);
        auto g = gmt_context(w);
        FieldElem ctilde = F->element(Level::ext, 1 + i64(rng() % (F->order - 1)));
        FieldElem c = F->pow(ctilde, F->q - 1);
        Basis scaled;
        for (const auto& e : w) scaled.push_back(ctilde * e);
        auto g2 = gmt_context(scaled);
        for (const auto& p : enumerate_pg(*F))
            CHECK(c * psi(g, p).value == psi(g2, p).value);
    }
}

TEST_CASE("T polynomials have no common root in mu") {
    std::mt19937_64 rng(52);
    for (const auto& F : small_fields()) {
        auto g = gmt_context(sample_basis(*F, rng));
        for (const auto& x : mu_elements(*F)) {
            bool any = false;
            for (int i = 0; i < F->n; ++i) any = any || !t_eval(g, i, x).is_zero();
            CHECK(any);
        }
    }
}

TEST_CASE("normal basis T coefficients match the closed form") {
    // For W = (w, w^q, w^{q^2}): T_i(x) = a^{q^{i+1}} + a^{q^{i+2}} x + a^{q^{i+3}} x^{q+1}
    // with a = w^{q+1} - w^{2 q^2}.
    for (auto F : {make_field_tower(2, AutoDeg{1}, AutoDeg{3}),
                   make_field_tower(3, AutoDeg{1}, AutoDeg{3}),
                   make_field_tower(2, AutoDeg{3}, AutoDeg{3})}) {
        int found = 0;
        for (i64 k = 1; k < F->order && found < 2; ++k) {
            FieldElem w0 = F->element(Level::ext, k);
            Basis w = {w0, F->frobenius_q(w0, 1), F->frobenius_q(w0, 2)};
            if (!moore_matrix(w).is_basis) continue;
            ++found;
            auto g = gmt_context(w);
            REQUIRE(g.normal);
            FieldElem alpha =
                F->pow(w0, F->q + 1) - F->pow(F->frobenius_q(w0, 2), 2);
            for (int i = 0; i < 3; ++i) {
                CHECK(g.tcoef[i][0] == F->frobenius_q(alpha, (i + 1) % 3));
                CHECK(g.tcoef[i][1] == F->frobenius_q(alpha, (i + 2) % 3));
                CHECK(g.tcoef[i][2] == F->frobenius_q(alpha, i % 3));
            }
        }
        REQUIRE(found >= 1);
    }
}

TEST_CASE("t_unipoly agrees with t_eval on mu") {
    auto g = g9();
    const FieldCtx& F = *g.ctx;
    for (int i = 0; i < F.n; ++i) {
        UniPoly t = t_unipoly(g, i);
        for (const auto& x : mu_elements(F)) CHECK(t.eval(x.value) == t_eval(g, i, x));
    }
}
