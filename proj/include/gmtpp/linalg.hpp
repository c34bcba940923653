#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "gmtpp/field.hpp"

namespace gmtpp {

/// Square matrix over the top field level.
struct FFMatrix {
    const FieldCtx* ctx = nullptr;
    int n = 0;
    std::vector<FieldElem> a; // row-major

    static FFMatrix zero(const FieldCtx& ctx, int n) {
        return FFMatrix{&ctx, n, std::vector<FieldElem>(size_t(n) * n, ctx.zero(Level::ext))};
    }
    static FFMatrix identity(const FieldCtx& ctx, int n) {
        FFMatrix m = zero(ctx, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = ctx.one(Level::ext);
        return m;
    }

    FieldElem& at(int i, int j) { return a[size_t(i) * n + j]; }
    const FieldElem& at(int i, int j) const { return a[size_t(i) * n + j]; }

    friend bool operator==(const FFMatrix& x, const FFMatrix& y) {
        return x.n == y.n && x.a == y.a;
    }

    FFMatrix mul(const FFMatrix& other) const {
        FFMatrix r = zero(*ctx, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                if (at(i, k).is_zero()) continue;
                for (int j = 0; j < n; ++j)
                    r.at(i, j) = r.at(i, j) + at(i, k) * other.at(k, j);
            }
        return r;
    }

    FFMatrix transpose() const {
        FFMatrix r = zero(*ctx, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r.at(j, i) = at(i, j);
        return r;
    }
};

/// Ordered tuple of ext-level elements intended as an F_q-basis of F_{q^n}.
using Basis = std::vector<FieldElem>;

/// Moore matrix of a tuple: entry (i,k) = s_i^{q^k}. Non-singular exactly
/// when the tuple is a basis.
struct MooreResult {
    FFMatrix matrix;
    bool is_basis = false;
};

inline FieldElem gauss_det(FFMatrix m) {
    const FieldCtx& F = *m.ctx;
    FieldElem det = F.one(Level::ext);
    for (int col = 0; col < m.n; ++col) {
        int pivot = -1;
        for (int r = col; r < m.n; ++r)
            if (!m.at(r, col).is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) return F.zero(Level::ext);
        if (pivot != col) {
            for (int j = 0; j < m.n; ++j) std::swap(m.at(pivot, j), m.at(col, j));
            det = -det;
        }
        det = det * m.at(col, col);
        FieldElem inv = F.inv(m.at(col, col));
        for (int r = col + 1; r < m.n; ++r) {
            if (m.at(r, col).is_zero()) continue;
            FieldElem f = m.at(r, col) * inv;
            for (int j = col; j < m.n; ++j) m.at(r, j) = m.at(r, j) - f * m.at(col, j);
        }
    }
    return det;
}

/// Leibniz expansion; factorial cost, kept as an oracle for n <= 4.
inline FieldElem leibniz_det(const FFMatrix& m) {
    const FieldCtx& F = *m.ctx;
    std::vector<int> perm(m.n);
    std::iota(perm.begin(), perm.end(), 0);
    FieldElem det = F.zero(Level::ext);
    do {
        int inversions = 0;
        for (int i = 0; i < m.n; ++i)
            for (int j = i + 1; j < m.n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        FieldElem term = F.one(Level::ext);
        for (int i = 0; i < m.n; ++i) term = term * m.at(i, perm[i]);
        det = (inversions % 2 == 0) ? det + term : det - term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

inline MooreResult moore_matrix(const Basis& w) {
    check(!w.empty(), errc::wrong_length, "empty tuple");
    const FieldCtx& F = *w[0].ctx;
    check(int(w.size()) == F.n, errc::wrong_length,
          "Moore matrix needs exactly n = " + std::to_string(F.n) + " elements");
    FFMatrix m = FFMatrix::zero(F, F.n);
    for (int i = 0; i < F.n; ++i) {
        FieldElem conj = w[i];
        for (int k = 0; k < F.n; ++k) {
            m.at(i, k) = conj;
            conj = F.frobenius_q(conj, 1);
        }
    }
    return MooreResult{m, !gauss_det(m).is_zero()};
}

inline FFMatrix minor_matrix(const FFMatrix& m, int drop_row, int drop_col) {
    FFMatrix r = FFMatrix::zero(*m.ctx, m.n - 1);
    int ri = 0;
    for (int i = 0; i < m.n; ++i) {
        if (i == drop_row) continue;
        int rj = 0;
        for (int j = 0; j < m.n; ++j) {
            if (j == drop_col) continue;
            r.at(ri, rj) = m.at(i, j);
            ++rj;
        }
        ++ri;
    }
    return r;
}

struct DetCofactors {
    FieldElem det;
    std::vector<FieldElem> cofactors; // (i,0)-cofactors, i = 0..n-1
};

/// Determinant by Gaussian elimination plus the first-column cofactors, each
/// minor eliminated independently. For n <= 4 the Leibniz expansion is run as
/// a consistency check on everything. Singular input is not an error.
inline DetCofactors det_and_cofactors(const FFMatrix& m) {
    const FieldCtx& F = *m.ctx;
    DetCofactors out{gauss_det(m), {}};
    for (int i = 0; i < m.n; ++i) {
        FieldElem c = gauss_det(minor_matrix(m, i, 0));
        if (i % 2 == 1) c = -c;
        out.cofactors.push_back(c);
    }
    if (m.n <= 4) {
        check(leibniz_det(m) == out.det, errc::internal_check, "det: Leibniz mismatch");
        for (int i = 0; i < m.n; ++i) {
            FieldElem c = leibniz_det(minor_matrix(m, i, 0));
            if (i % 2 == 1) c = -c;
            check(c == out.cofactors[i], errc::internal_check, "cofactor: Leibniz mismatch");
        }
    }
    return out;
}

/// Dual basis via first-column cofactors: beta_i = det(M_W)^{-1} cof(i,0).
/// The defining trace conditions Tr(beta_i w_j) = [i=j] are verified before
/// returning.
inline Basis dual_basis(const Basis& w) {
    auto moore = moore_matrix(w);
    check(moore.is_basis, errc::not_a_basis, "tuple is not a basis");
    const FieldCtx& F = *w[0].ctx;
    auto dc = det_and_cofactors(moore.matrix);
    FieldElem dinv = F.inv(dc.det);
    Basis b;
    for (int i = 0; i < F.n; ++i) b.push_back(dinv * dc.cofactors[i]);
    for (int i = 0; i < F.n; ++i)
        for (int j = 0; j < F.n; ++j) {
            FieldElem t = F.trace(b[i] * w[j]);
            FieldElem expect = (i == j) ? F.one(Level::base) : F.zero(Level::base);
            check(t == expect, errc::internal_check, "dual basis trace condition failed");
        }
    return b;
}

/// Independent route: solve the n^2 trace conditions as an F_q-linear system
/// in the monomial coordinates of each beta_i. Shares no code with the
/// cofactor computation.
inline Basis dual_basis_by_trace_solve(const Basis& w) {
    check(!w.empty(), errc::wrong_length, "empty tuple");
    const FieldCtx& F = *w[0].ctx;
    const int n = F.n;
    check(int(w.size()) == n, errc::wrong_length, "basis length");
    // rows: conditions Tr(beta t^k w_j) over j; unknowns: coords of beta
    std::vector<std::vector<int>> tr(n, std::vector<int>(n));
    FieldElem t = F.element(Level::ext, F.q);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            tr[j][k] = F.index_of(F.trace(F.pow(t, k) * w[j]));

    detail::BaseOps B{&F};
    Basis out;
    for (int i = 0; i < n; ++i) {
        // augmented system over F_q
        std::vector<std::vector<int>> A(n, std::vector<int>(n + 1, 0));
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) A[j][k] = tr[j][k];
            A[j][n] = (j == i) ? 1 : 0;
        }
        for (int col = 0, row = 0; col < n; ++col, ++row) {
            int pr = -1;
            for (int r = row; r < n; ++r)
                if (A[r][col] != 0) {
                    pr = r;
                    break;
                }
            check(pr >= 0, errc::not_a_basis, "trace system is singular");
            std::swap(A[row], A[pr]);
            int inv = B.inv(A[row][col]);
            for (int cc = col; cc <= n; ++cc) A[row][cc] = B.mul(A[row][cc], inv);
            for (int r = 0; r < n; ++r) {
                if (r == row || A[r][col] == 0) continue;
                int f = A[r][col];
                for (int cc = col; cc <= n; ++cc) A[r][cc] = B.sub(A[r][cc], B.mul(f, A[row][cc]));
            }
        }
        std::vector<int> coords(n);
        for (int k = 0; k < n; ++k) coords[k] = A[k][n];
        out.push_back(F.make_ext(coords));
    }
    return out;
}

/// Product formula for the Moore determinant:
///   det(M_S) = prod_j prod_{x_0..x_{j-1} in F_q} (sum_i x_i s_i + s_j).
inline FieldElem moore_det_product(const Basis& s) {
    const FieldCtx& F = *s[0].ctx;
    const int n = F.n;
    check(int(s.size()) == n, errc::wrong_length, "tuple length");
    FieldElem acc = F.one(Level::ext);
    for (int j = 0; j < n; ++j) {
        i64 combos = 1;
        for (int i = 0; i < j; ++i) combos *= F.q;
        for (i64 c = 0; c < combos; ++c) {
            FieldElem term = s[j];
            i64 t = c;
            for (int i = 0; i < j; ++i) {
                int xi = int(t % F.q);
                t /= F.q;
                if (xi != 0) term = term + F.ext_scale(xi, s[i]);
            }
            acc = acc * term;
        }
    }
    return acc;
}

/// True when w is exactly the Frobenius orbit (w0, w0^q, ..., w0^{q^{n-1}}).
inline bool is_normal_orbit(const Basis& w) {
    const FieldCtx& F = *w[0].ctx;
    FieldElem conj = w[0];
    for (int i = 1; i < F.n; ++i) {
        conj = F.frobenius_q(conj, 1);
        if (w[i] != conj) return false;
    }
    return true;
}

/// Normal-basis shortcut: c_i = (-1)^{(n-1)i} c_0^{q^i}.
inline std::vector<FieldElem> normal_cofactors_from_c0(const FieldCtx& F, const FieldElem& c0) {
    std::vector<FieldElem> out;
    for (int i = 0; i < F.n; ++i) {
        FieldElem ci = F.frobenius_q(c0, i);
        if ((F.n - 1) % 2 == 1 && i % 2 == 1) ci = -ci;
        out.push_back(ci);
    }
    return out;
}

} // namespace gmtpp
