#ifndef TORQ_RING_HPP
#define TORQ_RING_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torq/gb.hpp"
#include "torq/monoid.hpp"

namespace torq {

// Polynomial presentation of k[sigma^blocks]: one variable per monoid
// generator per block, modulo the toric presentation ideal in each block.
struct BlockRing {
    const AffineMonoid* sig;
    int blocks;
    int k;  // generators of sigma
    int nv; // blocks * k
    gb::MonOrder ord;

    BlockRing(const AffineMonoid& s, int b) : sig(&s), blocks(b), k((int)s.gens().size()) {
        nv = blocks * k;
        ord = gb::MonOrder::grevlex(nv);
    }

    int var(int b, int i) const { return b * k + i; }

    // sigma element carried by one block of an exponent vector
    ZVec block_deg(const gb::Expo& e, int b) const {
        ZVec s = zvec_zero(sig->dim());
        for (int i = 0; i < k; ++i)
            if (e[var(b, i)] != 0) s = s + mpz_class(e[var(b, i)]) * sig->gens()[i];
        return s;
    }

    ZVec mdeg(const gb::Expo& e) const {
        ZVec s = zvec_zero(sig->dim());
        for (int b = 0; b < blocks; ++b) s = s + block_deg(e, b);
        return s;
    }

    // exponent vector of a monomial representing s in the given block
    gb::Expo mono_expo(int b, const ZVec& s) const {
        auto w = sig->contains(s);
        if (!w) throw InvalidAmbient("mono_expo: " + zvec_str(s) + " not in sigma");
        gb::Expo e(nv, 0);
        for (int i = 0; i < k; ++i) e[var(b, i)] = (int)(*w)[i].get_si();
        return e;
    }

    template <class F>
    bool is_homogeneous(const gb::Poly<F>& p) const {
        if (p.empty()) return true;
        ZVec d0 = mdeg(p[0].e);
        for (const auto& t : p)
            if (mdeg(t.e) != d0) return false;
        return true;
    }

    // split into M-homogeneous components, deterministic order by degree key
    template <class F>
    std::vector<gb::Poly<F>> components(const F& field, const gb::Poly<F>& p) const {
        std::map<std::string, gb::Poly<F>> by_deg;
        for (const auto& t : p) by_deg[zvec_key(mdeg(t.e))].push_back(t);
        std::vector<gb::Poly<F>> out;
        for (auto& [key, terms] : by_deg) out.push_back(gb::poly_normalize(field, ord, terms));
        return out;
    }

    // presentation ideal of every block
    template <class F>
    std::vector<gb::Poly<F>> presentation_polys(const F& field) const {
        const ToricPresentation& P = sig->presentation();
        std::vector<gb::Poly<F>> out;
        for (int b = 0; b < blocks; ++b)
            for (const auto& [ea, eb] : P.diff_pairs) {
                gb::Expo e1(nv, 0), e2(nv, 0);
                for (int i = 0; i < k; ++i) {
                    e1[var(b, i)] = ea[i];
                    e2[var(b, i)] = eb[i];
                }
                out.push_back(gb::poly_normalize<F>(
                    field, ord, {{field.one(), e1}, {field.neg(field.one()), e2}}));
            }
        return out;
    }

    // x_{b1}^w - x_{b2}^w
    template <class F>
    gb::Poly<F> diff_poly(const F& field, const ZVec& w, int b1, int b2) const {
        return gb::poly_normalize<F>(
            field, ord,
            {{field.one(), mono_expo(b1, w)}, {field.neg(field.one()), mono_expo(b2, w)}});
    }

    template <class F>
    std::vector<gb::Poly<F>> diff_ideal(const F& field, const std::vector<ZVec>& W, int b1,
                                        int b2) const {
        std::vector<gb::Poly<F>> out;
        for (const auto& w : W) out.push_back(diff_poly(field, w, b1, b2));
        return out;
    }

    // map a polynomial of `from` (with fewer blocks) into this ring,
    // sending from-block i to block dest[i]
    template <class F>
    gb::Poly<F> inject(const F& field, const BlockRing& from, const gb::Poly<F>& p,
                       const std::vector<int>& dest) const {
        gb::Poly<F> out;
        for (const auto& t : p) {
            gb::Expo e(nv, 0);
            for (int b = 0; b < from.blocks; ++b)
                for (int i = 0; i < k; ++i) e[var(dest[b], i)] += t.e[from.var(b, i)];
            out.push_back({t.c, e});
        }
        return gb::poly_normalize(field, ord, std::move(out));
    }

    // collapse two blocks (substitution y -> x): add exponents of b_src into
    // b_dst, producing a polynomial of `to` (one fewer block is fine since
    // callers pass the matching target ring)
    template <class F>
    gb::Poly<F> collapse(const F& field, const BlockRing& to, const gb::Poly<F>& p,
                         const std::vector<int>& dest) const {
        gb::Poly<F> out;
        for (const auto& t : p) {
            gb::Expo e(to.nv, 0);
            for (int b = 0; b < blocks; ++b)
                for (int i = 0; i < k; ++i) e[to.var(dest[b], i)] += t.e[var(b, i)];
            out.push_back({t.c, e});
        }
        return gb::poly_normalize(field, to.ord, std::move(out));
    }

    // block order with `dominant` blocks leading (for finiteness tests)
    gb::MonOrder elimination_order(const std::vector<int>& block_rank) const {
        std::vector<int> blk(nv, 0);
        for (int b = 0; b < blocks; ++b)
            for (int i = 0; i < k; ++i) blk[var(b, i)] = block_rank[b];
        return gb::MonOrder::blocks_grevlex(blk);
    }
};

// ---------------------------------------------------------------------------
// Laurent polynomials in the unit characters of l(sigma) (rank r), with
// exponents in Z^r. Presented for GB work as k[u_1..u_r, w_1..w_r] modulo
// (u_i w_i - 1).
// ---------------------------------------------------------------------------

template <class F>
using UPoly = std::map<ZVec, typename F::Elem>; // exponent (length r) -> coeff

template <class F>
void up_add_term(const F& field, UPoly<F>& p, const ZVec& e, const typename F::Elem& c) {
    auto it = p.find(e);
    if (it == p.end()) {
        if (!field.is_zero(c)) p[e] = c;
        return;
    }
    it->second = field.add(it->second, c);
    if (field.is_zero(it->second)) p.erase(it);
}

template <class F>
UPoly<F> up_add(const F& field, const UPoly<F>& a, const UPoly<F>& b) {
    UPoly<F> r = a;
    for (const auto& [e, c] : b) up_add_term(field, r, e, c);
    return r;
}

template <class F>
UPoly<F> up_neg(const F& field, const UPoly<F>& a) {
    UPoly<F> r;
    for (const auto& [e, c] : a) r[e] = field.neg(c);
    return r;
}

template <class F>
UPoly<F> up_mul(const F& field, const UPoly<F>& a, const UPoly<F>& b) {
    UPoly<F> r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) up_add_term(field, r, ea + eb, field.mul(ca, cb));
    return r;
}

template <class F>
UPoly<F> up_one(const F& field, int r) {
    UPoly<F> p;
    p[zvec_zero(r)] = field.one();
    return p;
}

template <class F>
UPoly<F> up_char(const F& field, const ZVec& e, const typename F::Elem& c) {
    UPoly<F> p;
    if (!field.is_zero(c)) p[e] = c;
    return p;
}

// substitution of characters: remap exponents linearly (e.g. u -> (u, u) for
// the product character)
template <class F>
UPoly<F> up_subst(const F& field, const UPoly<F>& a,
                  const std::function<ZVec(const ZVec&)>& fn) {
    UPoly<F> r;
    for (const auto& [e, c] : a) up_add_term(field, r, fn(e), c);
    return r;
}

struct LaurentRing {
    int r;
    gb::MonOrder ord;
    explicit LaurentRing(int rr) : r(rr), ord(gb::MonOrder::grevlex(2 * rr)) {}

    template <class F>
    std::vector<gb::Poly<F>> rels(const F& field) const {
        std::vector<gb::Poly<F>> out;
        for (int i = 0; i < r; ++i) {
            gb::Expo e(2 * r, 0);
            e[i] = 1;
            e[r + i] = 1;
            out.push_back(gb::poly_normalize<F>(
                field, ord, {{field.one(), e}, {field.neg(field.one()), gb::Expo(2 * r, 0)}}));
        }
        return out;
    }

    template <class F>
    gb::Poly<F> from_upoly(const F& field, const UPoly<F>& p) const {
        std::vector<gb::Term<F>> ts;
        for (const auto& [e, c] : p) {
            gb::Expo ex(2 * r, 0);
            for (int i = 0; i < r; ++i) {
                if (e[i] > 0)
                    ex[i] = (int)e[i].get_si();
                else if (e[i] < 0)
                    ex[r + i] = (int)mpz_class(-e[i]).get_si();
            }
            ts.push_back({c, ex});
        }
        return gb::poly_normalize(field, ord, std::move(ts));
    }

    template <class F>
    UPoly<F> to_upoly(const F& field, const gb::Poly<F>& p) const {
        UPoly<F> out;
        for (const auto& t : p) {
            ZVec e = zvec_zero(r);
            for (int i = 0; i < r; ++i) e[i] = mpz_class(t.e[i]) - mpz_class(t.e[r + i]);
            up_add_term(field, out, e, t.c);
        }
        return out;
    }
};

// {s in sigma : s bounded by d in the cone order}, enumerated by generator
// closure; finite for pointed monoids
std::vector<ZVec> elements_below_degree(const AffineMonoid& sig, const ZVec& d,
                                        long budget = 100000);

// basis of the M-degree-`grade` component of the ideal generated by `gens`
// (presentation included by the caller), via linear algebra over normal
// forms; pointed monoids only
template <class F>
std::vector<gb::Poly<F>> graded_piece(const F& field, const BlockRing& R,
                                      const std::vector<gb::Poly<F>>& gens, const ZVec& grade,
                                      const gb::GbBudget& budget = gb::GbBudget{}) {
    if (!R.sig->pointed())
        throw NonPointedUnsupported(
            "graded_piece: component enumeration needs a pointed monoid; use the "
            "unit-character route for degree zero");
    auto G = gb::buchberger(field, R.ord, gens, budget);
    // all monomials of the block ring with total M-degree = grade
    std::vector<gb::Expo> monos;
    std::vector<ZVec> elems = elements_below_degree(*R.sig, grade);
    std::function<void(int, const ZVec&, gb::Expo)> rec = [&](int b, const ZVec& rem,
                                                              gb::Expo acc) {
        if (b == R.blocks - 1) {
            if (!R.sig->contains(rem)) return;
            gb::Expo e = R.mono_expo(b, rem);
            for (int i = 0; i < R.nv; ++i) e[i] += acc[i];
            monos.push_back(e);
            return;
        }
        for (const auto& s : elems) {
            if (!R.sig->in_cone(rem - s)) continue;
            gb::Expo e = R.mono_expo(b, s);
            for (int i = 0; i < R.nv; ++i) e[i] += acc[i];
            rec(b + 1, rem - s, e);
        }
    };
    rec(0, grade, gb::Expo(R.nv, 0));
    // linear algebra: kernel of (c_m) -> NF(sum c_m m)
    std::map<std::string, int> support;
    std::vector<std::vector<std::pair<int, typename F::Elem>>> cols;
    for (const auto& m : monos) {
        gb::Poly<F> mono{{field.one(), m}};
        auto nf = gb::normal_form(field, R.ord, mono, G.basis);
        std::vector<std::pair<int, typename F::Elem>> col;
        for (const auto& t : nf) {
            std::string k;
            for (int x : t.e) k += std::to_string(x) + ",";
            if (!support.count(k)) support[k] = (int)support.size();
            col.push_back({support[k], t.c});
        }
        cols.push_back(std::move(col));
    }
    int rows = (int)support.size();
    int n = (int)monos.size();
    // gaussian elimination for the kernel
    std::vector<std::vector<typename F::Elem>> A(rows,
                                                 std::vector<typename F::Elem>(n, field.zero()));
    for (int j = 0; j < n; ++j)
        for (const auto& [r, v] : cols[j]) A[r][j] = field.add(A[r][j], v);
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < n && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!field.is_zero(A[r][col])) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(A[piv], A[rank]);
        auto inv = field.inv(A[rank][col]);
        for (int c = 0; c < n; ++c) A[rank][c] = field.mul(A[rank][c], inv);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || field.is_zero(A[r][col])) continue;
            auto f = A[r][col];
            for (int c = 0; c < n; ++c) A[r][c] = field.sub(A[r][c], field.mul(f, A[rank][c]));
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_piv(n, false);
    for (int c : pivot_col) is_piv[c] = true;
    std::vector<gb::Poly<F>> out;
    for (int freec = 0; freec < n; ++freec) {
        if (is_piv[freec]) continue;
        std::vector<gb::Term<F>> terms{{field.one(), monos[freec]}};
        for (int r = 0; r < rank; ++r)
            if (!field.is_zero(A[r][freec]))
                terms.push_back({field.neg(A[r][freec]), monos[pivot_col[r]]});
        out.push_back(gb::poly_normalize(field, R.ord, std::move(terms)));
    }
    return out;
}

struct ExponentLattice {
    Lattice lat;                      // exponents s with u^s - 1 in the ideal
    bool difference_generated = false; // the differences regenerate the ideal
    bool unit_ideal = false;
};

// Exponent lattice of an ideal in the unit-character Laurent ring, harvested
// from the reduced basis and verified by regeneration.
template <class F>
ExponentLattice exponent_lattice(const F& field, int r, const std::vector<UPoly<F>>& gens,
                                 const gb::GbBudget& budget = gb::GbBudget{}) {
    ExponentLattice out;
    out.lat = lattice_zero(r);
    if (r == 0) {
        bool any = false;
        for (const auto& g : gens)
            if (!g.empty()) any = true;
        out.unit_ideal = any;
        out.difference_generated = !any;
        return out;
    }
    LaurentRing LR(r);
    std::vector<gb::Poly<F>> polys = LR.rels(field);
    for (const auto& g : gens) {
        auto p = LR.from_upoly(field, g);
        if (!p.empty()) polys.push_back(p);
    }
    auto G = gb::buchberger(field, LR.ord, polys, budget);
    std::vector<ZVec> cand;
    bool clean = true;
    for (const auto& g : G.basis) {
        if (g.size() == 1) {
            out.unit_ideal = true; // monomials are units in the Laurent ring
            continue;
        }
        if (g.size() != 2 || !field.eq(g[1].c, field.neg(field.one()))) {
            clean = false;
            continue;
        }
        ZVec chi = zvec_zero(r);
        for (int i = 0; i < r; ++i)
            chi[i] = mpz_class(g[0].e[i] - g[0].e[r + i]) -
                     mpz_class(g[1].e[i] - g[1].e[r + i]);
        if (!is_zero(chi)) cand.push_back(chi);
    }
    out.lat = lattice_from_rows(r, cand);
    if (out.unit_ideal) {
        out.difference_generated = false;
        return out;
    }
    // verify: the harvested differences regenerate the ideal
    std::vector<gb::Poly<F>> dgens = LR.rels(field);
    for (int i = 0; i < out.lat.rank(); ++i) {
        UPoly<F> diff;
        up_add_term(field, diff, out.lat.basis.row(i), field.one());
        up_add_term(field, diff, zvec_zero(r), field.neg(field.one()));
        dgens.push_back(LR.from_upoly(field, diff));
    }
    auto GD = gb::buchberger(field, LR.ord, dgens, budget);
    bool contained = true;
    for (const auto& g : gens) {
        auto p = LR.from_upoly(field, g);
        if (!gb::normal_form(field, LR.ord, p, GD.basis).empty()) contained = false;
    }
    out.difference_generated = contained && clean;
    // the reverse containment holds by construction (candidates came from
    // the reduced basis of the ideal)
    for (int i = 0; i < out.lat.rank() && contained; ++i) {
        UPoly<F> diff;
        up_add_term(field, diff, out.lat.basis.row(i), field.one());
        up_add_term(field, diff, zvec_zero(r), field.neg(field.one()));
        if (!gb::normal_form(field, LR.ord, LR.from_upoly(field, diff), G.basis).empty())
            throw InternalInvariantViolated("exponent_lattice: harvested vector not in ideal");
    }
    return out;
}

} // namespace torq

#endif
