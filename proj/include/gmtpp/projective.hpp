#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gmtpp/field.hpp"

namespace gmtpp {

/// Canonicalized point of PG(n-1,q): coordinates over F_q (as base-element
/// indices) with the rightmost nonzero coordinate scaled to 1. `level` is the
/// position of that coordinate.
struct ProjPoint {
    std::vector<int> coords;
    int level = 0;

    friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.coords == b.coords; }
    friend bool operator!=(const ProjPoint& a, const ProjPoint& b) { return !(a == b); }
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) { return a.coords < b.coords; }
};

inline int rightmost_nonzero(const std::vector<int>& v) {
    for (int i = int(v.size()) - 1; i >= 0; --i)
        if (v[i] != 0) return i;
    return -1;
}

/// Scale a nonzero vector so its rightmost nonzero coordinate becomes 1.
inline ProjPoint canonical(const FieldCtx& F, const std::vector<int>& v) {
    check(int(v.size()) == F.n, errc::wrong_length, "coordinate count");
    int j = rightmost_nonzero(v);
    check(j >= 0, errc::zero_vector, "zero vector has no projective class");
    ProjPoint p;
    p.level = j;
    p.coords.resize(F.n, 0);
    int inv = F.base_inv_idx(v[j]);
    for (int i = 0; i <= j; ++i) p.coords[i] = F.base_mul_idx(v[i], inv);
    return p;
}

inline ProjPoint canonical(const FieldCtx& F, const std::vector<FieldElem>& v) {
    std::vector<int> idx;
    for (const auto& e : v) {
        F.require_level(e, Level::base);
        idx.push_back(int(F.index_of(e)));
    }
    return canonical(F, idx);
}

inline i64 pg_size(const FieldCtx& F) { return F.mu_order(); }

/// Position of a canonical point in the enumeration: classes by level, the
/// free coordinates in odometer order (x_0 fastest).
inline i64 pg_index(const FieldCtx& F, const ProjPoint& p) {
    i64 offset = 0, powq = 1;
    for (int i = 0; i < p.level; ++i) {
        offset += powq;
        powq *= F.q;
    }
    i64 inner = 0;
    for (int i = p.level - 1; i >= 0; --i) inner = inner * F.q + p.coords[i];
    return offset + inner;
}

inline ProjPoint pg_point(const FieldCtx& F, i64 index) {
    check(index >= 0 && index < pg_size(F), errc::index_out_of_range, "PG point index");
    int j = 0;
    i64 powq = 1;
    while (index >= powq) {
        index -= powq;
        powq *= F.q;
        ++j;
    }
    ProjPoint p;
    p.level = j;
    p.coords.resize(F.n, 0);
    p.coords[j] = 1;
    for (int i = 0; i < j; ++i) {
        p.coords[i] = int(index % F.q);
        index /= F.q;
    }
    return p;
}

/// All (q^n-1)/(q-1) points; class j contributes q^j of them.
inline std::vector<ProjPoint> enumerate_pg(const FieldCtx& F) {
    std::vector<ProjPoint> out;
    out.reserve(size_t(pg_size(F)));
    for (i64 i = 0; i < pg_size(F); ++i) out.push_back(pg_point(F, i));
    return out;
}

// ---- vector-valued maps inducing projective maps ------------------------------

struct PgIdentityParams {};
struct PgCoordinatewiseParams {
    // h[j] is the value table of the permutation H_j of F_q, j = 1..n-1
    // (h[0] unused; H_0 is the identity).
    std::vector<std::vector<int>> h;
};
struct PgParityTwistParams {
    int delta = 0; // generator of F_q^*
    int alpha = 0; // an even power of delta
    i64 d = 1;     // gcd(d, q-1) = 1
};
struct PgSwap3Params {};
struct PgTableParams {};
using PgParams =
    std::variant<PgIdentityParams, PgCoordinatewiseParams, PgParityTwistParams, PgSwap3Params,
                 PgTableParams>;

/// A map g~ : F_q^n -> F_q^n given by a rule and tabulated on the whole
/// vector space at construction. The induced projective map reads off the
/// table; g~(0) is recorded but irrelevant projectively.
struct PGMap {
    const FieldCtx* ctx = nullptr;
    std::string kind;
    PgParams params;
    std::vector<std::vector<int>> table; // image vector per vector index

    i64 vec_index(const std::vector<int>& v) const {
        i64 idx = 0;
        for (int i = ctx->n - 1; i >= 0; --i) idx = idx * ctx->q + v[i];
        return idx;
    }
    std::vector<int> vec_at(i64 index) const {
        std::vector<int> v(ctx->n);
        for (int i = 0; i < ctx->n; ++i) {
            v[i] = int(index % ctx->q);
            index /= ctx->q;
        }
        return v;
    }

    const std::vector<int>& image_vec(const std::vector<int>& v) const { return table[vec_index(v)]; }

    /// Canonical image of a canonical point.
    ProjPoint image_point(const ProjPoint& p) const {
        const auto& w = table[vec_index(p.coords)];
        return canonical(*ctx, w);
    }
};

inline PGMap make_pgmap(const FieldCtx& F, std::string kind, PgParams params,
                        const std::function<std::vector<int>(const std::vector<int>&)>& rule) {
    PGMap g;
    g.ctx = &F;
    g.kind = std::move(kind);
    g.params = std::move(params);
    g.table.resize(size_t(F.order));
    g.table[0] = std::vector<int>(F.n, 0);
    for (i64 v = 1; v < F.order; ++v) g.table[size_t(v)] = rule(g.vec_at(v));
    return g;
}

// ---- well-definedness and bijectivity ------------------------------------------

struct PgVerdict {
    enum class Kind { not_well_defined, well_defined_not_bijective, bijection };
    Kind kind = Kind::not_well_defined;
    // not_well_defined: offending vector (common root, or scaling witness pair)
    std::vector<int> witness_vec;
    int witness_lambda = 0; // 0 when the witness is a common root
    // well_defined_not_bijective: two point indices sharing an image
    std::pair<i64, i64> collision{-1, -1};
    // bijection: sigma as a permutation of point indices
    std::vector<i64> sigma;

    bool is_bijection() const { return kind == Kind::bijection; }
};

/// Decides whether the induced projective map is well defined (no common
/// root away from 0, compatible with scalar scaling) and, if so, whether it
/// is a bijection. Everything is checked exhaustively on the tabulated map.
inline PgVerdict check_pg_map(const PGMap& g) {
    const FieldCtx& F = *g.ctx;
    PgVerdict v;
    for (i64 idx = 1; idx < F.order; ++idx) {
        const auto& img = g.table[size_t(idx)];
        if (rightmost_nonzero(img) < 0) {
            v.kind = PgVerdict::Kind::not_well_defined;
            v.witness_vec = g.vec_at(idx);
            v.witness_lambda = 0;
            return v;
        }
    }
    for (i64 idx = 1; idx < F.order; ++idx) {
        auto vec = g.vec_at(idx);
        ProjPoint base_img = canonical(F, g.table[size_t(idx)]);
        for (i64 lam = 2; lam < F.q; ++lam) {
            std::vector<int> scaled(F.n);
            for (int i = 0; i < F.n; ++i) scaled[i] = F.base_mul_idx(int(lam), vec[i]);
            if (canonical(F, g.image_vec(scaled)) != base_img) {
                v.kind = PgVerdict::Kind::not_well_defined;
                v.witness_vec = vec;
                v.witness_lambda = int(lam);
                return v;
            }
        }
    }
    // Image test on the underlying sets: with well-definedness established,
    // the map is a bijection iff points have pairwise distinct image points.
    const auto size = size_t(pg_size(F));
    std::vector<i64> sigma(size, 0);
    std::vector<i64> seen_by(size, -1);
    for (i64 i = 0; i < size; ++i) {
        ProjPoint img = g.image_point(pg_point(F, i));
        i64 j = pg_index(F, img);
        if (seen_by[size_t(j)] >= 0) {
            v.kind = PgVerdict::Kind::well_defined_not_bijective;
            v.collision = {seen_by[size_t(j)], i};
            return v;
        }
        seen_by[size_t(j)] = i;
        sigma[size_t(i)] = j;
    }
    v.kind = PgVerdict::Kind::bijection;
    v.sigma = std::move(sigma);
    return v;
}

// ---- builtin families -----------------------------------------------------------

namespace detail {

inline void validate_fq_permutation(const FieldCtx& F, const std::vector<int>& h) {
    check(i64(h.size()) == F.q, errc::bad_params, "H table must have q entries");
    std::vector<bool> seen(size_t(F.q), false);
    for (int v : h) {
        check(v >= 0 && v < F.q && !seen[size_t(v)], errc::bad_params,
              "H is not a permutation of F_q");
        seen[size_t(v)] = true;
    }
}

} // namespace detail

/// Coordinatewise family: on the class with rightmost nonzero coordinate j,
/// coordinate k maps to H_j(x_k / x_j) for k <= j and to 0 above, H_0 = id.
/// H_j must permute F_q; the induced map is a bijection of PG(n-1,q)
/// whenever H_j(1) != 0 (it rescales each class by H_j(1)).
inline PGMap make_coordinatewise_pgmap(const FieldCtx& F, std::vector<std::vector<int>> h_tables) {
    check(int(h_tables.size()) == F.n, errc::bad_params,
          "need n H-tables (index 0 is ignored and may be empty)");
    std::vector<int> ident(size_t(F.q));
    for (i64 i = 0; i < F.q; ++i) ident[size_t(i)] = int(i);
    h_tables[0] = ident; // H_0 is always the identity
    for (int j = 1; j < F.n; ++j) {
        if (h_tables[j].empty()) h_tables[j] = ident;
        detail::validate_fq_permutation(F, h_tables[j]);
    }

    auto rule = [&F, h = h_tables](const std::vector<int>& v) {
        std::vector<int> out(F.n, 0);
        int j = rightmost_nonzero(v);
        int inv = F.base_inv_idx(v[j]);
        for (int k = 0; k <= j; ++k) out[k] = h[j][size_t(F.base_mul_idx(v[k], inv))];
        return out;
    };
    return make_pgmap(F, "coordinatewise", PgCoordinatewiseParams{h_tables}, rule);
}

/// The closed polynomial form of the coordinatewise family,
///   g_k(x) = sum_{j>=k} H_j(x_k x_j^{q-2}) x_j^{q-1} prod_{i>j} (1 - x_i^{q-1}),
/// kept as an equivalence cross-check against the case rule.
inline std::vector<int> coordinatewise_closed_form(const FieldCtx& F,
                                                   const std::vector<std::vector<int>>& h,
                                                   const std::vector<int>& v) {
    auto bpow = [&F](int a, i64 e) {
        int r = 1;
        for (i64 i = 0; i < e; ++i) r = F.base_mul_idx(r, a);
        return r;
    };
    std::vector<int> ident(size_t(F.q));
    for (i64 i = 0; i < F.q; ++i) ident[size_t(i)] = int(i);
    std::vector<int> out(F.n, 0);
    for (int k = 0; k < F.n; ++k) {
        int acc = 0;
        for (int j = k; j < F.n; ++j) {
            const std::vector<int>& hj = (j == 0) ? ident : h[size_t(j)];
            int arg = F.base_mul_idx(v[k], bpow(v[j], F.q - 2));
            int term = F.base_mul_idx(hj[size_t(arg)], bpow(v[j], F.q - 1));
            for (int i = j + 1; i < F.n; ++i)
                term = F.base_mul_idx(term, F.base_add_idx(1, F.base_neg_idx(bpow(v[i], F.q - 1))));
            acc = F.base_add_idx(acc, term);
        }
        out[k] = acc;
    }
    return out;
}

inline PGMap make_identity_pgmap(const FieldCtx& F) {
    std::vector<std::vector<int>> h(size_t(F.n));
    PGMap g = make_coordinatewise_pgmap(F, h);
    g.kind = "identity";
    g.params = PgIdentityParams{};
    return g;
}

/// Parity-twist family (odd q): every class with j != 1 is fixed; on the
/// j = 1 class the point (x_0 : 1 : 0 : ... : 0) is fixed when x_0 is an odd
/// power of delta and sent to (alpha x_0^d : 1 : 0 : ... : 0) when x_0 is 0
/// or an even power.
inline PGMap make_parity_twist_pgmap(const FieldCtx& F, int delta, int alpha, i64 d) {
    check(F.q % 2 == 1, errc::bad_params, "parity twist needs odd q");
    check(delta > 0, errc::bad_params, "delta must be nonzero");
    FieldElem de = F.element(Level::base, delta);
    check(F.mult_order(de) == F.q - 1, errc::bad_params, "delta is not a generator of F_q^*");
    check(std::gcd(d, F.q - 1) == 1, errc::bad_params, "gcd(d, q-1) must be 1");
    // dlog table base delta on F_q^*
    std::vector<int> dlog(size_t(F.q), -1);
    {
        int cur = 1;
        for (i64 e = 0; e < F.q - 1; ++e) {
            dlog[size_t(cur)] = int(e);
            cur = F.base_mul_idx(cur, delta);
        }
    }
    check(alpha > 0 && dlog[size_t(alpha)] % 2 == 0, errc::bad_params,
          "alpha must be an even power of delta");

    auto bpow = [&F](int a, i64 e) {
        int r = 1;
        for (i64 i = 0; i < e; ++i) r = F.base_mul_idx(r, a);
        return r;
    };
    auto rule = [&F, dlog, alpha, d, bpow](const std::vector<int>& v) {
        ProjPoint c = canonical(F, v);
        if (c.level != 1) return c.coords;
        int x0 = c.coords[0];
        bool odd_power = (x0 != 0) && (dlog[size_t(x0)] % 2 == 1);
        if (odd_power) return c.coords;
        std::vector<int> out(F.n, 0);
        out[0] = F.base_mul_idx(alpha, bpow(x0, d));
        out[1] = 1;
        return out;
    };
    return make_pgmap(F, "parity_twist", PgParityTwistParams{delta, alpha, d}, rule);
}

/// The three-set swap on PG(2,q): it is a bijection that does not permute
/// any of the level classes.
///   (0:0:1) -> (1:0:0),   (x0:0:1) -> (x0:1:0) for x0 != 0,
///   (1:0:0) -> (0:1:0),   (x0:1:0) -> (x0:0:1),
///   (x0:x1:1) fixed for x1 != 0.
inline PGMap make_swap3_pgmap(const FieldCtx& F) {
    check(F.n == 3, errc::bad_params, "swap map is defined on PG(2,q)");
    auto rule = [&F](const std::vector<int>& v) {
        ProjPoint c = canonical(F, v);
        std::vector<int> out(3, 0);
        if (c.level == 0) {
            out[1] = 1; // (1:0:0) -> (0:1:0)
        } else if (c.level == 1) {
            out[0] = c.coords[0];
            out[2] = 1; // (x0:1:0) -> (x0:0:1)
        } else if (c.coords[1] != 0) {
            return c.coords; // (x0:x1:1) fixed
        } else if (c.coords[0] == 0) {
            out[0] = 1; // (0:0:1) -> (1:0:0)
        } else {
            out[0] = c.coords[0];
            out[1] = 1; // (x0:0:1) -> (x0:1:0)
        }
        return out;
    };
    return make_pgmap(F, "swap3", PgSwap3Params{}, rule);
}

} // namespace gmtpp
