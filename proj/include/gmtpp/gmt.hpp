#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmtpp/linalg.hpp"
#include "gmtpp/projective.hpp"

namespace gmtpp {

/// An element of mu_{(q^n-1)/(q-1)}, the (q^n-1)/(q-1)-th roots of unity.
/// Membership is checked at construction.
struct MuElement {
    FieldElem value;

    friend bool operator==(const MuElement& a, const MuElement& b) { return a.value == b.value; }
    friend bool operator<(const MuElement& a, const MuElement& b) { return a.value < b.value; }
};

inline MuElement to_mu(const FieldElem& x) {
    const FieldCtx& F = *x.ctx;
    check(x.level == Level::ext, errc::level_mismatch, "mu elements live at the ext level");
    check(F.pow(x, F.mu_order()) == F.one(Level::ext), errc::not_in_mu,
          "element is not a (q^n-1)/(q-1)-th root of unity");
    return MuElement{x};
}

/// All of mu, in element enumeration order.
inline std::vector<MuElement> mu_elements(const FieldCtx& F) {
    std::vector<MuElement> out;
    i64 ell = F.mu_order();
    for (i64 k = 1; k < F.order; ++k) {
        FieldElem x = F.element(Level::ext, k);
        if (F.pow(x, ell) == F.one(Level::ext)) out.push_back(MuElement{x});
    }
    return out;
}

/// Basis W with everything needed to run the transformation psi_W and its
/// inverses: the Moore determinant, the first-column cofactors c_i, the dual
/// basis, and the coefficients of the projective polynomials
///   T_{W,i}(x) = sum_k (-1)^{k(n-1)} c_i^{q^k} x^{(q^k-1)/(q-1)}.
struct GmtContext {
    const FieldCtx* ctx = nullptr;
    Basis w;
    FieldElem det;
    FieldElem det_inv;
    std::vector<FieldElem> cofactors;
    Basis dual;
    std::vector<i64> exps;                     // (q^k-1)/(q-1) as integers
    std::vector<std::vector<FieldElem>> tcoef; // tcoef[i][k]
    std::vector<std::vector<int>> dual_tr_row; // Tr(beta_j t^i) as base indices
    bool normal = false;

    i64 n() const { return ctx->n; }

    /// Tr(beta_j x) through the precomputed linear form.
    FieldElem trace_beta(int j, const FieldElem& x) const {
        const FieldCtx& F = *ctx;
        int acc = 0;
        for (int i = 0; i < F.n; ++i)
            acc = F.base_add_idx(acc, F.base_mul_idx(dual_tr_row[j][i], x.c[i]));
        return F.element(Level::base, acc);
    }
};

inline GmtContext gmt_context(const Basis& w) {
    check(!w.empty(), errc::wrong_length, "empty basis");
    const FieldCtx& F = *w[0].ctx;
    auto moore = moore_matrix(w);
    check(moore.is_basis, errc::not_a_basis, "tuple is not a basis");

    GmtContext g;
    g.ctx = &F;
    g.w = w;
    auto dc = det_and_cofactors(moore.matrix);
    g.det = dc.det;
    g.det_inv = F.inv(dc.det);
    g.cofactors = dc.cofactors;

    FieldElem sign = (F.n % 2 == 1) ? F.one(Level::ext) : -F.one(Level::ext);
    check(F.pow(g.det, F.q - 1) == sign, errc::internal_check,
          "det(M_W)^(q-1) != (-1)^(n-1)");

    g.normal = is_normal_orbit(w);
    if (g.normal) {
        auto shortcut = normal_cofactors_from_c0(F, g.cofactors[0]);
        check(shortcut == g.cofactors, errc::internal_check, "normal-basis cofactor shortcut failed");
    }

    for (int i = 0; i < F.n; ++i) g.dual.push_back(g.det_inv * g.cofactors[i]);
    for (int i = 0; i < F.n; ++i)
        for (int j = 0; j < F.n; ++j) {
            FieldElem t = F.trace(g.dual[i] * w[j]);
            check(t == ((i == j) ? F.one(Level::base) : F.zero(Level::base)), errc::internal_check,
                  "dual basis trace condition failed");
        }

    g.exps.resize(F.n);
    g.exps[0] = 0;
    for (int k = 1; k < F.n; ++k) g.exps[k] = g.exps[k - 1] * F.q + 1;

    g.tcoef.resize(F.n);
    for (int i = 0; i < F.n; ++i) {
        for (int k = 0; k < F.n; ++k) {
            FieldElem c = F.frobenius_q(g.cofactors[i], k);
            if ((i64(k) * (F.n - 1)) % 2 == 1) c = -c;
            g.tcoef[i].push_back(c);
        }
    }

    FieldElem t = F.element(Level::ext, F.q);
    g.dual_tr_row.assign(size_t(F.n), std::vector<int>(size_t(F.n)));
    for (int j = 0; j < F.n; ++j)
        for (int i = 0; i < F.n; ++i)
            g.dual_tr_row[j][i] = int(F.index_of(F.trace(g.dual[j] * F.pow(t, i))));
    return g;
}

/// psi_W(x_0 : ... : x_{n-1}) = (sum_j x_j w_j)^(q-1).
inline MuElement psi(const GmtContext& g, const ProjPoint& p) {
    const FieldCtx& F = *g.ctx;
    FieldElem s = F.zero(Level::ext);
    for (int j = 0; j < F.n; ++j) {
        if (p.coords[j] == 0) continue;
        s = s + F.ext_scale(p.coords[j], g.w[j]);
    }
    return to_mu(F.pow(s, F.q - 1));
}

/// T_{W,i}(x), exponents computed as integers 0, 1, q+1, q^2+q+1, ...
inline FieldElem t_eval(const GmtContext& g, int i, const MuElement& x) {
    const FieldCtx& F = *g.ctx;
    check(i >= 0 && i < F.n, errc::index_out_of_range, "T index");
    FieldElem acc = F.zero(Level::ext);
    FieldElem xp = F.one(Level::ext); // x^{exps[k]}, advanced via e_{k+1} = q e_k + 1
    for (int k = 0; k < F.n; ++k) {
        acc = acc + g.tcoef[i][k] * xp;
        if (k + 1 < F.n) xp = F.frobenius_q(xp, 1) * x.value;
    }
    return acc;
}

/// T_{W,i} in expanded exponent form, as a univariate polynomial.
inline UniPoly t_unipoly(const GmtContext& g, int i) {
    const FieldCtx& F = *g.ctx;
    check(i >= 0 && i < F.n, errc::index_out_of_range, "T index");
    UniPoly p = UniPoly::zero(F, Level::ext);
    for (int k = 0; k < F.n; ++k)
        p = p + UniPoly::monomial(F, Level::ext, g.exps[k], g.tcoef[i][k]);
    return p;
}

/// Unique class index j with T_{W,j}(x) != 0 and T_{W,i}(x) = 0 for i > j.
inline int partition_index(const GmtContext& g, const MuElement& x) {
    const FieldCtx& F = *g.ctx;
    for (int i = F.n - 1; i >= 0; --i)
        if (!t_eval(g, i, x).is_zero()) return i;
    fail(errc::report_violation, "all T_{W,i} vanish on a mu element");
}

/// Unique class index j with Tr(beta_j y) != 0 and Tr(beta_i y) = 0 for i > j.
inline int partition_index(const GmtContext& g, const FieldElem& y) {
    const FieldCtx& F = *g.ctx;
    check(!y.is_zero(), errc::zero_input, "partition index of zero");
    F.require_level(y, Level::ext);
    for (int i = F.n - 1; i >= 0; --i)
        if (!g.trace_beta(i, y).is_zero()) return i;
    fail(errc::report_violation, "all dual traces vanish on a nonzero element");
}

enum class InverseRoute { t_poly, trace };

/// Inverse of psi_W. The t_poly route reads the class index off the
/// T-polynomials and outputs T-value ratios; the trace route picks any y
/// with y^{q-1} = x and expands y in the dual basis.
inline ProjPoint psi_inverse(const GmtContext& g, const MuElement& x,
                             InverseRoute route = InverseRoute::t_poly) {
    const FieldCtx& F = *g.ctx;
    if (route == InverseRoute::t_poly) {
        std::vector<FieldElem> tv;
        for (int i = 0; i < F.n; ++i) tv.push_back(t_eval(g, i, x));
        int j = F.n - 1;
        while (j >= 0 && tv[size_t(j)].is_zero()) --j;
        check(j >= 0, errc::report_violation, "all T_{W,i} vanish on a mu element");
        ProjPoint p;
        p.level = j;
        p.coords.assign(size_t(F.n), 0);
        p.coords[size_t(j)] = 1;
        FieldElem inv = F.inv(tv[size_t(j)]);
        for (int i = 0; i < j; ++i) {
            FieldElem ratio = tv[size_t(i)] * inv;
            p.coords[size_t(i)] = int(F.index_of(F.project(ratio, Level::base)));
        }
        return p;
    }
    // trace route: exhaustive search for a (q-1)-th root; any root works
    for (i64 k = 1; k < F.order; ++k) {
        FieldElem y = F.element(Level::ext, k);
        if (F.pow(y, F.q - 1) != x.value) continue;
        std::vector<FieldElem> coords;
        for (int i = 0; i < F.n; ++i) coords.push_back(g.trace_beta(i, y));
        return canonical(F, coords);
    }
    fail(errc::not_in_mu, "no (q-1)-th root found");
}

// ---- partition verification -----------------------------------------------------

struct PartitionReport {
    std::vector<i64> s_sizes; // |S_{W,j}|, expected (q-1) q^j
    std::vector<i64> z_sizes; // |Z_{W,j}|, expected q^j
    std::vector<i64> c_sizes; // |class j of PG|, expected q^j
    bool ok = true;
};

/// Exhaustively confirms the three partitions and the set identities
/// Z_{W,j} = psi_W(class_j) = S_{W,j}^{q-1}. A violation indicates an
/// implementation bug and is reported as an error.
inline PartitionReport verify_partitions(const GmtContext& g) {
    const FieldCtx& F = *g.ctx;
    const int n = F.n;
    PartitionReport rep;
    rep.s_sizes.assign(size_t(n), 0);
    rep.z_sizes.assign(size_t(n), 0);
    rep.c_sizes.assign(size_t(n), 0);

    const auto nn = size_t(n);
    std::vector<std::set<i64>> s_class(nn), z_class(nn), psi_c(nn), s_pow(nn);

    // S classes from the trace definition; membership must be unique.
    for (i64 k = 1; k < F.order; ++k) {
        FieldElem y = F.element(Level::ext, k);
        int j = -1;
        for (int i = n - 1; i >= 0; --i)
            if (!g.trace_beta(i, y).is_zero()) {
                j = i;
                break;
            }
        check(j >= 0, errc::report_violation, "element outside every S class");
        ++rep.s_sizes[size_t(j)];
        s_class[size_t(j)].insert(k);
        s_pow[size_t(j)].insert(F.index_of(F.pow(y, F.q - 1)));
    }

    // Z classes from the T-polynomial definition over mu.
    auto mu = mu_elements(F);
    for (const auto& x : mu) {
        int j = -1;
        for (int i = n - 1; i >= 0; --i)
            if (!t_eval(g, i, x).is_zero()) {
                j = i;
                break;
            }
        check(j >= 0, errc::report_violation, "mu element outside every Z class");
        ++rep.z_sizes[size_t(j)];
        z_class[size_t(j)].insert(F.index_of(x.value));
    }

    // PG classes by canonical level, with psi images per class.
    for (const auto& p : enumerate_pg(F)) {
        ++rep.c_sizes[size_t(p.level)];
        psi_c[size_t(p.level)].insert(F.index_of(psi(g, p).value));
    }

    i64 powq = 1;
    i64 total_s = 0, total_z = 0, total_c = 0;
    for (int j = 0; j < n; ++j) {
        check(rep.s_sizes[size_t(j)] == (F.q - 1) * powq, errc::report_violation, "|S| size");
        check(rep.z_sizes[size_t(j)] == powq, errc::report_violation, "|Z| size");
        check(rep.c_sizes[size_t(j)] == powq, errc::report_violation, "|C| size");
        check(z_class[size_t(j)] == psi_c[size_t(j)], errc::report_violation,
              "Z != psi(C) for class " + std::to_string(j));
        check(z_class[size_t(j)] == s_pow[size_t(j)], errc::report_violation,
              "Z != S^(q-1) for class " + std::to_string(j));
        total_s += rep.s_sizes[size_t(j)];
        total_z += rep.z_sizes[size_t(j)];
        total_c += rep.c_sizes[size_t(j)];
        powq *= F.q;
    }
    check(total_s == F.order - 1, errc::report_violation, "S classes do not cover F*");
    check(total_z == F.mu_order(), errc::report_violation, "Z classes do not cover mu");
    check(total_c == pg_size(F), errc::report_violation, "C classes do not cover PG");
    return rep;
}

} // namespace gmtpp
