#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "gmtpp/errors.hpp"

namespace gmtpp {

using i64 = std::int64_t;

/// Levels of the tower F_p < F_q = F_{p^m} < F_{q^n}.
enum class Level { prime, base, ext };

inline const char* level_name(Level l) {
    switch (l) {
        case Level::prime: return "prime";
        case Level::base: return "base";
        case Level::ext: return "ext";
    }
    return "?";
}

class FieldCtx;
using FieldPtr = std::shared_ptr<const FieldCtx>;

/// Element of one tower level.
///
/// Internal encoding of `c`:
///   prime : one entry, the residue in [0,p)
///   base  : m digits over F_p, ascending powers of the base generator
///   ext   : n entries, each the enumeration index of an F_q coefficient
///
/// Equality is coefficient-wise; elements must come from the same context to
/// be meaningfully compared or combined.
struct FieldElem {
    const FieldCtx* ctx = nullptr;
    Level level = Level::prime;
    std::vector<int> c;

    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
    }
    friend bool operator==(const FieldElem& a, const FieldElem& b) {
        return a.level == b.level && a.c == b.c;
    }
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
    friend bool operator<(const FieldElem& a, const FieldElem& b) {
        return a.c < b.c; // enumeration order within one level
    }
};

namespace detail {

inline bool is_prime_u(i64 v) {
    if (v < 2) return false;
    for (i64 d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

/// Index-based arithmetic over a coefficient domain of size `size()`.
/// Used for polynomial work over F_p (values are residues) and over F_q
/// (values are base-element enumeration indices).
struct PrimeOps {
    i64 p;
    i64 size() const { return p; }
    int add(int a, int b) const { return int((a + b) % p); }
    int sub(int a, int b) const { return int(((a - b) % p + p) % p); }
    int neg(int a) const { return int((p - a) % p); }
    int mul(int a, int b) const { return int((i64(a) * b) % p); }
    int inv(int a) const {
        check(a != 0, errc::division_by_zero, "inverse of zero");
        int r = 1, x = a;
        for (i64 e = p - 2; e > 0; e >>= 1) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
        }
        return r;
    }
};

/// Polynomials as ascending coefficient-index vectors over an Ops domain.
template <class Ops>
struct IdxPoly {
    static void trim(std::vector<int>& f) {
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    static int deg(const std::vector<int>& f) { return int(f.size()) - 1; }

    static std::vector<int> mul(const Ops& K, const std::vector<int>& a, const std::vector<int>& b) {
        if (a.empty() || b.empty()) return {};
        std::vector<int> r(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j)
                r[i + j] = K.add(r[i + j], K.mul(a[i], b[j]));
        }
        trim(r);
        return r;
    }

    /// Remainder of a by monic-or-not b (b nonzero).
    static std::vector<int> mod(const Ops& K, std::vector<int> a, const std::vector<int>& b) {
        int db = deg(b);
        int lead_inv = K.inv(b[db]);
        while (deg(a) >= db) {
            int k = deg(a);
            int f = K.mul(a[k], lead_inv);
            for (int j = 0; j <= db; ++j)
                a[k - db + j] = K.sub(a[k - db + j], K.mul(f, b[j]));
            trim(a);
        }
        return a;
    }

    static std::vector<int> mulmod(const Ops& K, const std::vector<int>& a, const std::vector<int>& b,
                                   const std::vector<int>& m) {
        return mod(K, mul(K, a, b), m);
    }

    static std::vector<int> powmod(const Ops& K, std::vector<int> a, i64 e, const std::vector<int>& m) {
        std::vector<int> r = {1};
        a = mod(K, std::move(a), m);
        while (e > 0) {
            if (e & 1) r = mulmod(K, r, a, m);
            a = mulmod(K, a, a, m);
            e >>= 1;
        }
        return r;
    }

    /// Exhaustive irreducibility test: trial division by every monic
    /// polynomial of degree 1..deg/2. The fields here are tiny by design.
    static bool irreducible(const Ops& K, const std::vector<int>& f) {
        int d = deg(f);
        if (d < 1) return false;
        for (int dd = 1; 2 * dd <= d; ++dd) {
            i64 count = 1;
            for (int i = 0; i < dd; ++i) count *= K.size();
            for (i64 k = 0; k < count; ++k) {
                std::vector<int> g(dd + 1, 0);
                i64 t = k;
                for (int i = 0; i < dd; ++i) {
                    g[i] = int(t % K.size());
                    t /= K.size();
                }
                g[dd] = 1;
                if (mod(K, f, g).empty()) return false;
            }
        }
        return true;
    }

    /// First monic irreducible of degree d, scanning the non-leading
    /// coefficients in counting order (constant coefficient fastest).
    static std::vector<int> first_irreducible(const Ops& K, int d) {
        i64 count = 1;
        for (int i = 0; i < d; ++i) count *= K.size();
        for (i64 k = 0; k < count; ++k) {
            std::vector<int> f(d + 1, 0);
            i64 t = k;
            for (int i = 0; i < d; ++i) {
                f[i] = int(t % K.size());
                t /= K.size();
            }
            f[d] = 1;
            if (irreducible(K, f)) return f;
        }
        fail(errc::internal_check, "no irreducible polynomial found");
    }
};

inline std::vector<i64> prime_factors(i64 v) {
    std::vector<i64> out;
    for (i64 d = 2; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            while (v % d == 0) v /= d;
        }
    }
    if (v > 1) out.push_back(v);
    return out;
}

} // namespace detail

struct AutoDeg {
    int degree = 1;
};
using BaseModulus = std::variant<AutoDeg, std::vector<int>>;
using ExtModulus = std::variant<AutoDeg, std::vector<std::vector<int>>>;

struct FieldLabels {
    std::string base = "a";
    std::string ext = "w";
};

/// Immutable description of a tower F_p < F_q = F_{p^m} < F_{q^n}, with the
/// arithmetic tables for both extension steps. Safe to share across threads
/// once constructed; all element operations are pure.
class FieldCtx {
public:
    i64 p = 0;
    int m = 1;
    int n = 2;
    i64 q = 0;      // p^m
    i64 order = 0;  // q^n
    std::vector<int> base_modulus;              // m+1 residues over F_p, monic
    std::vector<int> ext_modulus;               // n+1 base-element indices, monic
    FieldLabels labels;
    bool conway = false;                        // moduli chosen Conway-compatibly

    static constexpr i64 kMaxOrder = 1 << 20;

    // ---- elements ----------------------------------------------------------

    i64 element_count(Level l) const {
        switch (l) {
            case Level::prime: return p;
            case Level::base: return q;
            case Level::ext: return order;
        }
        return 0;
    }

    /// Elements enumerate in odometer order, least-significant coefficient
    /// fastest. Every "smallest element" rule refers to this order.
    FieldElem element(Level l, i64 index) const {
        check(index >= 0 && index < element_count(l), errc::index_out_of_range, "element index");
        FieldElem e;
        e.ctx = this;
        e.level = l;
        switch (l) {
            case Level::prime: e.c = {int(index)}; break;
            case Level::base: e.c = base_digits(index); break;
            case Level::ext:
                e.c.resize(n);
                for (int i = 0; i < n; ++i) {
                    e.c[i] = int(index % q);
                    index /= q;
                }
                break;
        }
        return e;
    }

    i64 index_of(const FieldElem& x) const {
        switch (x.level) {
            case Level::prime: return x.c[0];
            case Level::base: return base_index(x.c);
            case Level::ext: {
                i64 idx = 0;
                for (int i = n - 1; i >= 0; --i) idx = idx * q + x.c[i];
                return idx;
            }
        }
        return 0;
    }

    FieldElem zero(Level l) const { return element(l, 0); }
    FieldElem one(Level l) const { return element(l, 1); }

    /// The i-th coefficient of an ext element, as a base-level element.
    FieldElem ext_coeff(const FieldElem& x, int i) const {
        require_level(x, Level::ext);
        return element(Level::base, x.c[i]);
    }

    FieldElem make_ext(const std::vector<int>& base_indices) const {
        check(int(base_indices.size()) == n, errc::wrong_length, "ext coefficient count");
        FieldElem e;
        e.ctx = this;
        e.level = Level::ext;
        e.c = base_indices;
        return e;
    }

    // ---- arithmetic --------------------------------------------------------

    FieldElem add(const FieldElem& a, const FieldElem& b) const {
        require_pair(a, b);
        FieldElem r = a;
        switch (a.level) {
            case Level::prime: r.c[0] = int((a.c[0] + b.c[0]) % p); break;
            case Level::base:
                for (int i = 0; i < m; ++i) r.c[i] = int((a.c[i] + b.c[i]) % p);
                break;
            case Level::ext:
                for (int i = 0; i < n; ++i) r.c[i] = badd_[a.c[i] * q + b.c[i]];
                break;
        }
        return r;
    }

    FieldElem neg(const FieldElem& a) const {
        FieldElem r = a;
        switch (a.level) {
            case Level::prime: r.c[0] = int((p - a.c[0]) % p); break;
            case Level::base:
                for (int i = 0; i < m; ++i) r.c[i] = int((p - a.c[i]) % p);
                break;
            case Level::ext:
                for (int i = 0; i < n; ++i) r.c[i] = bneg_[a.c[i]];
                break;
        }
        return r;
    }

    FieldElem sub(const FieldElem& a, const FieldElem& b) const { return add(a, neg(b)); }

    FieldElem mul(const FieldElem& a, const FieldElem& b) const {
        require_pair(a, b);
        FieldElem r = a;
        switch (a.level) {
            case Level::prime: r.c[0] = int((i64(a.c[0]) * b.c[0]) % p); break;
            case Level::base: {
                int ia = int(base_index(a.c)), ib = int(base_index(b.c));
                r.c = base_digits(bmul_[i64(ia) * q + ib]);
                break;
            }
            case Level::ext: {
                r.c = ext_mul(a.c, b.c);
                break;
            }
        }
        return r;
    }

    FieldElem pow(const FieldElem& a, i64 e) const {
        if (e < 0) return pow(inv(a), -e);
        FieldElem r = one(a.level);
        FieldElem x = a;
        while (e > 0) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }

    FieldElem inv(const FieldElem& a) const {
        check(!a.is_zero(), errc::division_by_zero, "inverse of zero");
        i64 group = element_count(a.level) - 1;
        return pow(a, group - 1);
    }

    FieldElem div(const FieldElem& a, const FieldElem& b) const {
        check(!b.is_zero(), errc::division_by_zero, "division by zero");
        return mul(a, inv(b));
    }

    /// Scale an ext element by an F_q scalar (given as base index).
    FieldElem ext_scale(int base_idx, const FieldElem& x) const {
        require_level(x, Level::ext);
        FieldElem r = x;
        for (int i = 0; i < n; ++i) r.c[i] = bmul_[i64(base_idx) * q + x.c[i]];
        return r;
    }

    // ---- level moves -------------------------------------------------------

    /// Embed into a higher level (prime -> base -> ext).
    FieldElem lift(const FieldElem& x, Level to) const {
        if (x.level == to) return x;
        if (x.level == Level::prime && to == Level::base) {
            FieldElem r = zero(Level::base);
            r.c[0] = x.c[0];
            return r;
        }
        if (x.level == Level::prime && to == Level::ext) return lift(lift(x, Level::base), Level::ext);
        if (x.level == Level::base && to == Level::ext) {
            FieldElem r = zero(Level::ext);
            r.c[0] = int(base_index(x.c));
            return r;
        }
        fail(errc::level_mismatch, "cannot lift downward");
    }

    /// Project onto a lower level; the value must actually lie there.
    FieldElem project(const FieldElem& x, Level to) const {
        if (x.level == to) return x;
        if (x.level == Level::ext && to == Level::base) {
            for (int i = 1; i < n; ++i)
                check(x.c[i] == 0, errc::subfield_violation, "value not in base subfield");
            return element(Level::base, x.c[0]);
        }
        if (x.level == Level::base && to == Level::prime) {
            for (int i = 1; i < m; ++i)
                check(x.c[i] == 0, errc::subfield_violation, "value not in prime subfield");
            return element(Level::prime, x.c[0]);
        }
        if (x.level == Level::ext && to == Level::prime)
            return project(project(x, Level::base), Level::prime);
        fail(errc::level_mismatch, "cannot project upward");
    }

    bool in_base_subfield(const FieldElem& x) const {
        if (x.level != Level::ext) return true;
        return std::all_of(x.c.begin() + 1, x.c.end(), [](int v) { return v == 0; });
    }

    /// Integer scalar c -> c * 1 at the given level.
    FieldElem from_int(Level l, i64 v) const {
        v %= p;
        if (v < 0) v += p;
        FieldElem r = zero(l);
        r.c[0] = (l == Level::prime) ? int(v) : int(base_index_of_prime(int(v)));
        return r;
    }

    // ---- Frobenius, trace, norm -------------------------------------------

    /// x -> x^{q^k} on the top level, applied as k rounds of the q-power map.
    FieldElem frobenius_q(const FieldElem& x, int k) const {
        require_level(x, Level::ext);
        check(k >= 0, errc::index_out_of_range, "negative Frobenius power");
        FieldElem r = x;
        for (int round = 0; round < k; ++round) r = frobenius_once(r);
        return r;
    }

    /// Tr_q^{q^n}(x) = sum of the n Frobenius conjugates, projected to F_q.
    FieldElem trace(const FieldElem& x) const {
        require_level(x, Level::ext);
        FieldElem acc = zero(Level::base);
        for (int i = 0; i < n; ++i) {
            int t = bmul_[i64(tr_row_[i]) * q + x.c[i]];
            acc = add(acc, element(Level::base, t));
        }
        return acc;
    }

    /// N_q^{q^n}(x) = product of the n Frobenius conjugates.
    FieldElem norm(const FieldElem& x) const {
        require_level(x, Level::ext);
        FieldElem acc = one(Level::ext);
        FieldElem conj = x;
        for (int i = 0; i < n; ++i) {
            acc = mul(acc, conj);
            conj = frobenius_once(conj);
        }
        check(in_base_subfield(acc), errc::subfield_violation, "norm not in base subfield");
        return project(acc, Level::base);
    }

    // ---- multiplicative structure -------------------------------------------

    i64 mult_order(const FieldElem& x) const {
        check(!x.is_zero(), errc::zero_input, "order of zero");
        i64 group = element_count(x.level) - 1;
        i64 ord = group;
        for (i64 f : detail::prime_factors(group)) {
            while (ord % f == 0 && pow(x, ord / f) == one(x.level)) ord /= f;
        }
        return ord;
    }

    /// Fixed generator: the first element in enumeration order of full
    /// multiplicative order at its level.
    FieldElem generator(Level l = Level::ext) const {
        i64 group = element_count(l) - 1;
        for (i64 i = 1; i <= group; ++i) {
            FieldElem x = element(l, i);
            if (mult_order(x) == group) return x;
        }
        fail(errc::internal_check, "no generator found");
    }

    /// Discrete log base the fixed generator, by baby-step giant-step.
    /// Display machinery only; the core algorithms never call this.
    i64 discrete_log(const FieldElem& x) const {
        check(!x.is_zero(), errc::log_of_zero, "log of zero");
        FieldElem g = generator(x.level);
        i64 group = element_count(x.level) - 1;
        i64 step = 1;
        while (step * step < group) ++step;
        std::unordered_map<i64, i64> baby;
        FieldElem cur = one(x.level);
        for (i64 j = 0; j < step; ++j) {
            baby.emplace(index_of(cur), j);
            cur = mul(cur, g);
        }
        FieldElem giant = inv(pow(g, step));
        FieldElem y = x;
        for (i64 i = 0; i < step + 1; ++i) {
            auto it = baby.find(index_of(y));
            if (it != baby.end()) {
                i64 log = i * step + it->second;
                return log % group;
            }
            y = mul(y, giant);
        }
        fail(errc::internal_check, "BSGS failed");
    }

    /// Smallest e >= 1 with x^e in F_q^*. x is subprimitive iff this equals
    /// (q^n - 1)/(q - 1).
    i64 subprimitive_order(const FieldElem& x) const {
        check(!x.is_zero(), errc::zero_input, "subprimitive order of zero");
        require_level(x, Level::ext);
        FieldElem acc = x;
        i64 group = order - 1;
        for (i64 e = 1; e <= group; ++e) {
            if (in_base_subfield(acc)) return e;
            acc = mul(acc, x);
        }
        fail(errc::internal_check, "no power lands in the base subfield");
    }

    i64 mu_order() const { return (order - 1) / (q - 1); }

    // ---- rendering -----------------------------------------------------------

    std::string str(const FieldElem& x) const {
        if (x.is_zero()) return "0";
        switch (x.level) {
            case Level::prime: return std::to_string(x.c[0]);
            case Level::base: return poly_str(x.c, labels.base, [&](int d) { return std::to_string(d); });
            case Level::ext: {
                std::vector<int> idx = x.c;
                return poly_str(idx, labels.ext, [&](int bi) {
                    FieldElem b = element(Level::base, bi);
                    std::string s = str(b);
                    if (s.find('+') != std::string::npos || s.find('*') != std::string::npos)
                        s = "(" + s + ")";
                    return s;
                });
            }
        }
        return "?";
    }

    // ---- construction internals (public data, set by the factory) ----------

    std::vector<int> base_digits(i64 index) const {
        std::vector<int> d(m);
        for (int i = 0; i < m; ++i) {
            d[i] = int(index % p);
            index /= p;
        }
        return d;
    }
    i64 base_index(const std::vector<int>& digits) const {
        i64 idx = 0;
        for (int i = m - 1; i >= 0; --i) idx = idx * p + digits[i];
        return idx;
    }
    i64 base_index_of_prime(int v) const { return v; }

    int base_add_idx(int a, int b) const { return badd_[i64(a) * q + b]; }
    int base_mul_idx(int a, int b) const { return bmul_[i64(a) * q + b]; }
    int base_neg_idx(int a) const { return bneg_[a]; }
    int base_inv_idx(int a) const {
        check(a != 0, errc::division_by_zero, "inverse of zero");
        return binv_[a];
    }

    void require_level(const FieldElem& x, Level l) const {
        check(x.level == l, errc::level_mismatch,
              std::string("expected ") + level_name(l) + " level, got " + level_name(x.level));
    }
    void require_pair(const FieldElem& a, const FieldElem& b) const {
        check(a.ctx == b.ctx, errc::level_mismatch, "elements from different field contexts");
        check(a.level == b.level, errc::level_mismatch, "elements at different levels");
    }

    // Filled in by make_field_tower.
    std::vector<int> badd_, bmul_, bneg_, binv_; // F_q tables, indexed by element index
    std::vector<int> tr_row_;                    // Tr(t^i) as base indices
    std::vector<std::vector<int>> frob_t_;       // (t^i)^q as ext coefficient vectors

private:
    FieldElem frobenius_once(const FieldElem& x) const {
        // x = sum a_i t^i with a_i in F_q fixed by the q-power map, so
        // x^q = sum a_i (t^q)^i, a pre-tabulated F_q-linear map.
        FieldElem r = zero(Level::ext);
        for (int i = 0; i < n; ++i) {
            if (x.c[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
                int term = bmul_[i64(x.c[i]) * q + frob_t_[i][j]];
                r.c[j] = badd_[i64(r.c[j]) * q + term];
            }
        }
        return r;
    }

    std::vector<int> ext_mul(const std::vector<int>& a, const std::vector<int>& b) const {
        std::vector<int> conv(2 * n - 1, 0);
        for (int i = 0; i < n; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < n; ++j) {
                if (b[j] == 0) continue;
                int t = bmul_[i64(a[i]) * q + b[j]];
                conv[i + j] = badd_[i64(conv[i + j]) * q + t];
            }
        }
        // reduce by the monic ext modulus
        for (int k = 2 * n - 2; k >= n; --k) {
            int lead = conv[k];
            if (lead == 0) continue;
            conv[k] = 0;
            for (int j = 0; j < n; ++j) {
                int t = bmul_[i64(lead) * q + ext_modulus[j]];
                conv[k - n + j] = badd_[i64(conv[k - n + j]) * q + bneg_[t]];
            }
        }
        conv.resize(n);
        return conv;
    }

    template <class DigitStr>
    std::string poly_str(const std::vector<int>& coeffs, const std::string& var, DigitStr ds) const {
        std::string out;
        for (int i = 0; i < int(coeffs.size()); ++i) {
            if (coeffs[i] == 0) continue;
            std::string term = ds(coeffs[i]);
            if (i > 0) {
                std::string v = var + (i > 1 ? "^" + std::to_string(i) : "");
                term = (term == "1") ? v : term + "*" + v;
            }
            out = out.empty() ? term : out + " + " + term;
        }
        return out.empty() ? "0" : out;
    }
};

// ---- operators -------------------------------------------------------------

inline FieldElem operator+(const FieldElem& a, const FieldElem& b) { return a.ctx->add(a, b); }
inline FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a.ctx->sub(a, b); }
inline FieldElem operator*(const FieldElem& a, const FieldElem& b) { return a.ctx->mul(a, b); }
inline FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a.ctx->div(a, b); }
inline FieldElem operator-(const FieldElem& a) { return a.ctx->neg(a); }

// ---- tower construction ------------------------------------------------------

namespace detail {

struct BaseOps {
    const FieldCtx* ctx;
    i64 size() const { return ctx->q; }
    int add(int a, int b) const { return ctx->base_add_idx(a, b); }
    int sub(int a, int b) const { return ctx->base_add_idx(a, ctx->base_neg_idx(b)); }
    int neg(int a) const { return ctx->base_neg_idx(a); }
    int mul(int a, int b) const { return ctx->base_mul_idx(a, b); }
    int inv(int a) const { return ctx->base_inv_idx(a); }
};

} // namespace detail

/// Conway polynomial over F_p of degree k: the minimal monic primitive
/// polynomial (in the standard signed-word ordering) compatible with the
/// Conway polynomials of all proper divisors of k. Computed by search;
/// practical for the desk-scale degrees used here.
inline const std::vector<int>& conway_polynomial(i64 p, int k) {
    static std::map<std::pair<i64, int>, std::vector<int>> cache;
    auto key = std::make_pair(p, k);
    auto found = cache.find(key);
    if (found != cache.end()) return found->second;

    detail::PrimeOps K{p};
    using P = detail::IdxPoly<detail::PrimeOps>;

    i64 group = 1;
    for (int i = 0; i < k; ++i) group *= p;
    group -= 1; // p^k - 1
    auto rad = detail::prime_factors(group);

    std::vector<int> divisors;
    for (int d = 1; d < k; ++d)
        if (k % d == 0) divisors.push_back(d);
    for (int d : divisors) conway_polynomial(p, d); // populate cache bottom-up

    i64 words = 1;
    for (int i = 0; i < k; ++i) words *= p;
    for (i64 wnum = 0; wnum < words; ++wnum) {
        // word (a_{k-1},...,a_0) in lexicographic order; coefficient of x^i is
        // (-1)^{k-i} a_i
        std::vector<int> a(k);
        i64 t = wnum;
        for (int i = 0; i < k; ++i) {
            a[i] = int(t % p);
            t /= p;
        }
        std::vector<int> f(k + 1);
        f[k] = 1;
        for (int i = 0; i < k; ++i) f[i] = ((k - i) % 2 == 0) ? a[i] : K.neg(a[i]);
        if (f[0] == 0) continue; // primitive polynomials have nonzero constant term
        if (!P::irreducible(K, f)) continue;
        // primitivity of x mod f
        std::vector<int> x = {0, 1};
        bool primitive = true;
        for (i64 r : rad) {
            auto y = P::powmod(K, x, group / r, f);
            if (y.size() == 1 && y[0] == 1) {
                primitive = false;
                break;
            }
        }
        if (!primitive) continue;
        // compatibility with smaller Conway polynomials
        bool compatible = true;
        for (int d : divisors) {
            i64 sub = 1;
            for (int i = 0; i < d; ++i) sub *= p;
            i64 e = group / (sub - 1);
            auto y = P::powmod(K, x, e, f); // root^(e)
            const auto& cd = conway_polynomial(p, d);
            std::vector<int> acc = {};
            std::vector<int> ypow = {1};
            for (int i = 0; i <= d; ++i) {
                if (cd[i] != 0) {
                    std::vector<int> term = ypow;
                    for (auto& v : term) v = K.mul(v, cd[i]);
                    // acc += term
                    if (acc.size() < term.size()) acc.resize(term.size(), 0);
                    for (size_t j = 0; j < term.size(); ++j) acc[j] = K.add(acc[j], term[j]);
                }
                if (i < d) ypow = P::mulmod(K, ypow, y, f);
            }
            P::trim(acc);
            if (!acc.empty()) {
                compatible = false;
                break;
            }
        }
        if (!compatible) continue;
        return cache.emplace(key, std::move(f)).first->second;
    }
    fail(errc::internal_check, "Conway polynomial search exhausted");
}

namespace detail {

inline std::shared_ptr<FieldCtx> build_tower(i64 p, std::vector<int> base_mod,
                                             std::vector<std::vector<int>> ext_mod_digits,
                                             std::optional<int> auto_ext_degree, FieldLabels labels,
                                             bool conway_tag);

} // namespace detail

/// Construct and validate a tower. Moduli may be given explicitly
/// (ascending coefficients, monic) or chosen automatically as the first
/// monic irreducible of the requested degree in counting order.
inline FieldPtr make_field_tower(i64 p, const BaseModulus& base, const ExtModulus& ext,
                                 FieldLabels labels = {}) {
    check(detail::is_prime_u(p), errc::not_prime, std::to_string(p) + " is not prime");
    detail::PrimeOps K{p};
    using P = detail::IdxPoly<detail::PrimeOps>;

    std::vector<int> base_mod;
    if (std::holds_alternative<AutoDeg>(base)) {
        int md = std::get<AutoDeg>(base).degree;
        check(md >= 1, errc::degree_too_small, "base degree must be >= 1");
        base_mod = P::first_irreducible(K, md);
    } else {
        base_mod = std::get<std::vector<int>>(base);
        check(base_mod.size() >= 2, errc::degree_too_small, "base modulus degree must be >= 1");
        for (int& v : base_mod) {
            check(v >= 0 && v < p, errc::parse_error, "base modulus coefficient out of range");
        }
        check(base_mod.back() == 1, errc::reducible_modulus, "base modulus must be monic");
        check(P::irreducible(K, base_mod), errc::reducible_modulus,
              "base modulus is reducible over F_p");
    }

    if (std::holds_alternative<AutoDeg>(ext)) {
        int nd = std::get<AutoDeg>(ext).degree;
        check(nd >= 2, errc::degree_too_small, "ext degree must be >= 2");
        return detail::build_tower(p, std::move(base_mod), {}, nd, labels, false);
    }
    return detail::build_tower(p, std::move(base_mod), std::get<std::vector<std::vector<int>>>(ext),
                               std::nullopt, labels, false);
}

namespace detail {

inline std::shared_ptr<FieldCtx> build_tower(i64 p, std::vector<int> base_mod,
                                             std::vector<std::vector<int>> ext_mod_digits,
                                             std::optional<int> auto_ext_degree, FieldLabels labels,
                                             bool conway_tag) {
    auto ctx = std::make_shared<FieldCtx>();
    ctx->p = p;
    ctx->m = int(base_mod.size()) - 1;
    ctx->base_modulus = base_mod;
    ctx->labels = labels;
    ctx->conway = conway_tag;
    ctx->q = 1;
    for (int i = 0; i < ctx->m; ++i) ctx->q *= p;
    check(ctx->q <= (1 << 16), errc::field_too_large, "base field larger than 2^16");

    // F_q tables by direct polynomial arithmetic mod the base modulus.
    const i64 q = ctx->q;
    PrimeOps K{p};
    using P = IdxPoly<PrimeOps>;
    ctx->badd_.assign(q * q, 0);
    ctx->bmul_.assign(q * q, 0);
    ctx->bneg_.assign(q, 0);
    ctx->binv_.assign(q, 0);
    for (i64 a = 0; a < q; ++a) {
        auto da = ctx->base_digits(a);
        std::vector<int> nd(ctx->m);
        for (int i = 0; i < ctx->m; ++i) nd[i] = K.neg(da[i]);
        ctx->bneg_[a] = int(ctx->base_index(nd));
        for (i64 b = 0; b < q; ++b) {
            auto db = ctx->base_digits(b);
            std::vector<int> s(ctx->m);
            for (int i = 0; i < ctx->m; ++i) s[i] = K.add(da[i], db[i]);
            ctx->badd_[a * q + b] = int(ctx->base_index(s));
            auto prod = P::mulmod(K, da, db, base_mod);
            prod.resize(ctx->m, 0);
            ctx->bmul_[a * q + b] = int(ctx->base_index(prod));
        }
    }
    for (i64 a = 1; a < q; ++a) {
        // inverse by exponentiation in the table group
        i64 e = q - 2;
        i64 r = 1, x = a;
        auto tmul = [&](i64 u, i64 v) { return i64(ctx->bmul_[u * q + v]); };
        while (e > 0) {
            if (e & 1) r = tmul(r, x);
            x = tmul(x, x);
            e >>= 1;
        }
        ctx->binv_[a] = int(r);
    }

    // Ext modulus: validate the given one or scan for the first irreducible.
    BaseOps B{ctx.get()};
    using PB = IdxPoly<BaseOps>;
    if (auto_ext_degree) {
        ctx->n = *auto_ext_degree;
        auto f = PB::first_irreducible(B, ctx->n);
        ctx->ext_modulus = f;
    } else {
        check(ext_mod_digits.size() >= 3, errc::degree_too_small, "ext degree must be >= 2");
        ctx->n = int(ext_mod_digits.size()) - 1;
        std::vector<int> f;
        for (auto& digits : ext_mod_digits) {
            std::vector<int> d = digits;
            check(int(d.size()) <= ctx->m, errc::parse_error, "ext coefficient has too many digits");
            d.resize(ctx->m, 0);
            for (int v : d) check(v >= 0 && v < p, errc::parse_error, "ext coefficient digit out of range");
            f.push_back(int(ctx->base_index(d)));
        }
        check(f.back() == 1, errc::reducible_modulus, "ext modulus must be monic");
        check(PB::irreducible(B, f), errc::reducible_modulus, "ext modulus is reducible over F_q");
        ctx->ext_modulus = f;
    }
    check(ctx->n >= 2, errc::degree_too_small, "ext degree must be >= 2");
    ctx->order = 1;
    for (int i = 0; i < ctx->n; ++i) ctx->order *= ctx->q;
    check(ctx->order <= FieldCtx::kMaxOrder, errc::field_too_large, "field larger than 2^20");

    // Frobenius images (t^i)^q and the trace row Tr(t^i).
    const int n = ctx->n;
    std::vector<int> t(n, 0);
    if (n > 1) t[1] = 1;
    FieldElem te = ctx->make_ext(t);
    FieldElem tq = ctx->pow(te, ctx->q);
    ctx->frob_t_.resize(n);
    FieldElem acc = ctx->one(Level::ext);
    for (int i = 0; i < n; ++i) {
        ctx->frob_t_[i] = acc.c;
        acc = ctx->mul(acc, tq);
    }
    ctx->tr_row_.resize(n);
    for (int i = 0; i < n; ++i) {
        FieldElem ti = ctx->pow(te, i);
        FieldElem s = ctx->zero(Level::ext);
        FieldElem conj = ti;
        for (int k = 0; k < n; ++k) {
            s = ctx->add(s, conj);
            conj = ctx->frobenius_q(conj, 1);
        }
        check(ctx->in_base_subfield(s), errc::subfield_violation, "trace of basis power not in F_q");
        ctx->tr_row_[i] = s.c[0];
    }
    return ctx;
}

} // namespace detail

/// Conway-compatible tower: the base modulus is the Conway polynomial of
/// degree m, and the ext modulus is the minimal polynomial over F_q of the
/// canonical primitive element of F_{p^{mn}}. The class of x in the quotient
/// then corresponds to that canonical generator, which is what computer
/// algebra systems expose by default.
inline FieldPtr make_conway_tower(i64 p, int m, int n, FieldLabels labels = {}) {
    check(detail::is_prime_u(p), errc::not_prime, std::to_string(p) + " is not prime");
    check(m >= 1, errc::degree_too_small, "base degree must be >= 1");
    check(n >= 2, errc::degree_too_small, "ext degree must be >= 2");

    detail::PrimeOps K{p};
    using P = detail::IdxPoly<detail::PrimeOps>;
    const auto& cm = conway_polynomial(p, m);
    const auto& cmn = conway_polynomial(p, m * n);

    // Work in F_p[z]/cmn. w = z is the canonical generator; the F_q inside is
    // generated by wq = w^((p^{mn}-1)/(p^m-1)), a root of cm.
    const int mn = m * n;
    i64 pm = 1, pmn = 1;
    for (int i = 0; i < m; ++i) pm *= p;
    for (int i = 0; i < mn; ++i) pmn *= p;
    std::vector<int> w = {0, 1};
    auto wq = P::powmod(K, w, (pmn - 1) / (pm - 1), cmn);

    // wq powers as F_p vectors of length mn (columns of the subfield basis).
    std::vector<std::vector<int>> wq_pow(m);
    {
        std::vector<int> cur = {1};
        for (int j = 0; j < m; ++j) {
            wq_pow[j] = cur;
            wq_pow[j].resize(mn, 0);
            cur = P::mulmod(K, cur, wq, cmn);
        }
    }

    // Express v (an F_p vector of length mn known to lie in F_q) in the wq
    // basis by solving the mn x m linear system over F_p.
    auto to_subfield_digits = [&](std::vector<int> v) {
        v.resize(mn, 0);
        // Gaussian elimination on [wq_pow | v]
        std::vector<std::vector<int>> A(mn, std::vector<int>(m + 1, 0));
        for (int r = 0; r < mn; ++r) {
            for (int cidx = 0; cidx < m; ++cidx) A[r][cidx] = wq_pow[cidx][r];
            A[r][m] = v[r];
        }
        std::vector<int> digits(m, 0);
        std::vector<int> pivot_col(mn, -1);
        int row = 0;
        for (int col = 0; col < m && row < mn; ++col) {
            int pr = -1;
            for (int r = row; r < mn; ++r)
                if (A[r][col] != 0) {
                    pr = r;
                    break;
                }
            check(pr >= 0, errc::internal_check, "subfield basis is singular");
            std::swap(A[row], A[pr]);
            int inv = K.inv(A[row][col]);
            for (int cc = col; cc <= m; ++cc) A[row][cc] = K.mul(A[row][cc], inv);
            for (int r = 0; r < mn; ++r) {
                if (r == row || A[r][col] == 0) continue;
                int f = A[r][col];
                for (int cc = col; cc <= m; ++cc)
                    A[r][cc] = K.sub(A[r][cc], K.mul(f, A[row][cc]));
            }
            pivot_col[row] = col;
            ++row;
        }
        for (int r = 0; r < mn; ++r) {
            if (r < row) {
                digits[pivot_col[r]] = A[r][m];
            } else {
                check(A[r][m] == 0, errc::internal_check, "value not in the subfield");
            }
        }
        return digits;
    };

    // Minimal polynomial of w over F_q: product of (X - w^{q^k}).
    std::vector<std::vector<int>> minpoly = {{1}}; // coefficients in F_p[z]/cmn, ascending in X
    std::vector<int> conj = w;
    for (int k = 0; k < n; ++k) {
        std::vector<std::vector<int>> next(minpoly.size() + 1, std::vector<int>{});
        std::vector<int> negc(conj.size());
        for (size_t i = 0; i < conj.size(); ++i) negc[i] = K.neg(conj[i]);
        for (size_t i = 0; i < minpoly.size(); ++i) {
            // X * coef
            auto shifted = minpoly[i];
            if (next[i + 1].empty()) next[i + 1] = shifted;
            else {
                next[i + 1].resize(std::max(next[i + 1].size(), shifted.size()), 0);
                for (size_t j = 0; j < shifted.size(); ++j)
                    next[i + 1][j] = K.add(next[i + 1][j], shifted[j]);
            }
            // (-conj) * coef
            auto prod = P::mulmod(K, minpoly[i], negc, cmn);
            next[i].resize(std::max(next[i].size(), prod.size()), 0);
            for (size_t j = 0; j < prod.size(); ++j) next[i][j] = K.add(next[i][j], prod[j]);
        }
        minpoly = std::move(next);
        conj = P::powmod(K, conj, pm, cmn);
    }

    std::vector<std::vector<int>> ext_digits;
    for (auto& coef : minpoly) ext_digits.push_back(to_subfield_digits(coef));

    auto ctx = detail::build_tower(p, cm, ext_digits, std::nullopt, labels, true);
    return ctx;
}

// ---- generator-and-log convenience -------------------------------------------

struct GeneratorLog {
    FieldElem generator;
    std::optional<i64> log;
};

inline GeneratorLog generator_and_log(const FieldCtx& ctx,
                                      const std::optional<FieldElem>& x = std::nullopt) {
    GeneratorLog out{ctx.generator(Level::ext), std::nullopt};
    if (x) {
        check(!x->is_zero(), errc::log_of_zero, "log of zero");
        out.log = ctx.discrete_log(*x);
    }
    return out;
}

// ---- univariate polynomials ---------------------------------------------------

/// Dense univariate polynomial with coefficients at one tower level.
/// Invariant: no trailing zero coefficient (zero polynomial has empty coeffs).
struct UniPoly {
    const FieldCtx* ctx = nullptr;
    Level level = Level::ext;
    std::vector<FieldElem> coeffs; // ascending

    static UniPoly zero(const FieldCtx& ctx, Level l) { return UniPoly{&ctx, l, {}}; }

    static UniPoly make(const FieldCtx& ctx, Level l, std::vector<FieldElem> cs) {
        UniPoly p{&ctx, l, std::move(cs)};
        p.normalize();
        return p;
    }

    static UniPoly monomial(const FieldCtx& ctx, Level l, i64 e, const FieldElem& coeff) {
        UniPoly p{&ctx, l, {}};
        if (!coeff.is_zero()) {
            p.coeffs.assign(size_t(e) + 1, ctx.zero(l));
            p.coeffs[size_t(e)] = coeff;
        }
        return p;
    }

    void normalize() {
        while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    }

    bool is_zero() const { return coeffs.empty(); }
    i64 degree() const { return i64(coeffs.size()) - 1; } // -1 for the zero polynomial

    FieldElem eval(const FieldElem& x) const {
        ctx->require_level(x, level);
        FieldElem acc = ctx->zero(level);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        UniPoly r = a;
        if (r.coeffs.size() < b.coeffs.size()) r.coeffs.resize(b.coeffs.size(), a.ctx->zero(a.level));
        for (size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] = r.coeffs[i] + b.coeffs[i];
        r.normalize();
        return r;
    }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return zero(*a.ctx, a.level);
        UniPoly r{a.ctx, a.level,
                  std::vector<FieldElem>(a.coeffs.size() + b.coeffs.size() - 1, a.ctx->zero(a.level))};
        for (size_t i = 0; i < a.coeffs.size(); ++i) {
            if (a.coeffs[i].is_zero()) continue;
            for (size_t j = 0; j < b.coeffs.size(); ++j)
                r.coeffs[i + j] = r.coeffs[i + j] + a.coeffs[i] * b.coeffs[j];
        }
        r.normalize();
        return r;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) {
        return a.level == b.level && a.coeffs == b.coeffs;
    }

    /// Exponents carrying nonzero coefficients, ascending.
    std::vector<i64> support() const {
        std::vector<i64> s;
        for (size_t i = 0; i < coeffs.size(); ++i)
            if (!coeffs[i].is_zero()) s.push_back(i64(i));
        return s;
    }
};

// ---- field spec strings -------------------------------------------------------
//
// p=<prime>;base=[c0,...,1];ext=[d0,...,1]   coefficients ascending; ext entries
// are base-level coefficient vectors in brackets (plain integers are read as
// base-element enumeration indices). `m=<k>` / `n=<k>` / `auto` select automatic
// moduli; a trailing `;conway` selects the Conway-compatible tower.

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t nxt = s.find(sep, pos);
        if (nxt == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, nxt - pos));
        pos = nxt + 1;
    }
    return out;
}

inline i64 parse_int(const std::string& s) {
    try {
        size_t used = 0;
        i64 v = std::stoll(s, &used);
        check(used == s.size(), errc::parse_error, "bad integer '" + s + "'");
        return v;
    } catch (const Error&) {
        throw;
    } catch (...) {
        fail(errc::parse_error, "bad integer '" + s + "'");
    }
}

/// Parses "[a,b,[c,d],...]" into a list of digit vectors; a bare integer k
/// becomes the digit expansion of k later (kept as single-entry marker).
inline std::vector<std::vector<i64>> parse_bracket_list(const std::string& s) {
    check(s.size() >= 2 && s.front() == '[' && s.back() == ']', errc::parse_error,
          "expected [...] in '" + s + "'");
    std::vector<std::vector<i64>> out;
    std::string body = s.substr(1, s.size() - 2);
    size_t pos = 0;
    while (pos < body.size()) {
        if (body[pos] == ',') {
            ++pos;
            continue;
        }
        if (body[pos] == '[') {
            size_t end = body.find(']', pos);
            check(end != std::string::npos, errc::parse_error, "unbalanced brackets");
            std::vector<i64> entry;
            for (auto& tok : split(body.substr(pos + 1, end - pos - 1), ','))
                if (!tok.empty()) entry.push_back(parse_int(tok));
            out.push_back(entry);
            pos = end + 1;
        } else {
            size_t end = body.find(',', pos);
            if (end == std::string::npos) end = body.size();
            out.push_back({parse_int(body.substr(pos, end - pos)), -1}); // -1 marks scalar form
            pos = end;
        }
    }
    return out;
}

} // namespace detail

inline FieldPtr parse_field_spec(const std::string& spec) {
    i64 p = 0;
    std::optional<int> auto_m, auto_n;
    std::optional<std::vector<int>> base_mod;
    std::optional<std::vector<std::vector<int>>> ext_mod;
    bool conway = false;

    for (auto& raw : detail::split(spec, ';')) {
        std::string seg = raw;
        if (seg.empty()) continue;
        if (seg == "auto") {
            auto_m = 1;
            continue;
        }
        if (seg == "conway") {
            conway = true;
            continue;
        }
        auto eq = seg.find('=');
        check(eq != std::string::npos, errc::parse_error, "bad field spec segment '" + seg + "'");
        std::string key = seg.substr(0, eq), val = seg.substr(eq + 1);
        if (key == "p") {
            p = detail::parse_int(val);
        } else if (key == "m") {
            auto_m = int(detail::parse_int(val));
        } else if (key == "n") {
            auto_n = int(detail::parse_int(val));
        } else if (key == "base") {
            std::vector<int> digits;
            for (auto& e : detail::parse_bracket_list(val)) {
                check(e.size() == 2 && e[1] == -1, errc::parse_error,
                      "base modulus entries must be integers");
                digits.push_back(int(e[0]));
            }
            base_mod = digits;
        } else if (key == "ext") {
            ext_mod = std::vector<std::vector<int>>{};
            for (auto& e : detail::parse_bracket_list(val)) {
                if (e.size() == 2 && e[1] == -1)
                    ext_mod->push_back({int(e[0])}); // enumeration index, expanded below
                else {
                    std::vector<int> d;
                    for (i64 v : e) d.push_back(int(v));
                    ext_mod->push_back(d);
                }
            }
        } else {
            fail(errc::parse_error, "unknown field spec key '" + key + "'");
        }
    }
    check(p != 0, errc::parse_error, "field spec must set p");

    if (conway) {
        int m = base_mod ? int(base_mod->size()) - 1 : auto_m.value_or(1);
        check(auto_n.has_value(), errc::parse_error, "conway spec needs n=<degree>");
        return make_conway_tower(p, m, *auto_n);
    }

    BaseModulus bm = base_mod ? BaseModulus{*base_mod} : BaseModulus{AutoDeg{auto_m.value_or(1)}};
    if (ext_mod) {
        // Scalar ext entries are enumeration indices of F_q elements; expand
        // them to digit vectors using a throwaway prime-level view of q.
        // q is p^m; digits are base-p.
        int m = base_mod ? int(base_mod->size()) - 1 : auto_m.value_or(1);
        std::vector<std::vector<int>> expanded;
        for (auto& entry : *ext_mod) {
            if (entry.size() == 1 && m > 1) {
                i64 idx = entry[0];
                std::vector<int> d(m);
                for (int i = 0; i < m; ++i) {
                    d[i] = int(idx % p);
                    idx /= p;
                }
                expanded.push_back(d);
            } else {
                expanded.push_back(entry);
            }
        }
        return make_field_tower(p, bm, ExtModulus{expanded});
    }
    check(auto_n.has_value(), errc::parse_error, "field spec needs ext=[...] or n=<degree>");
    return make_field_tower(p, bm, ExtModulus{AutoDeg{*auto_n}});
}

inline std::string field_spec_string(const FieldCtx& ctx) {
    std::string s = "p=" + std::to_string(ctx.p) + ";base=[";
    for (size_t i = 0; i < ctx.base_modulus.size(); ++i)
        s += (i ? "," : "") + std::to_string(ctx.base_modulus[i]);
    s += "];ext=[";
    for (size_t i = 0; i < ctx.ext_modulus.size(); ++i) {
        if (i) s += ",";
        if (ctx.m == 1) {
            s += std::to_string(ctx.ext_modulus[i]);
        } else {
            auto d = ctx.base_digits(ctx.ext_modulus[i]);
            s += "[";
            for (size_t j = 0; j < d.size(); ++j) s += (j ? "," : "") + std::to_string(d[j]);
            s += "]";
        }
    }
    s += "]";
    return s;
}

} // namespace gmtpp
