#ifndef TORQ_GB_HPP
#define TORQ_GB_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "torq/errors.hpp"
#include "torq/field.hpp"

namespace torq {
namespace gb {

using Expo = std::vector<int>;

inline int total_deg(const Expo& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

inline bool divides(const Expo& a, const Expo& b) { // a | b
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Expo expo_add(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Expo expo_sub(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Expo expo_lcm(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

// Block monomial order. Blocks are compared from block 0 (most dominant)
// upward; within a block either graded reverse lex or pure lex.
struct MonOrder {
    int nvars = 0;
    std::vector<int> block;       // block index per variable
    std::vector<bool> block_lex;  // per block: true = lex, false = grevlex
    int nblocks = 1;

    static MonOrder grevlex(int nv) {
        MonOrder o;
        o.nvars = nv;
        o.block.assign(nv, 0);
        o.block_lex = {false};
        o.nblocks = 1;
        return o;
    }
    static MonOrder lex(int nv) {
        MonOrder o = grevlex(nv);
        o.block_lex = {true};
        return o;
    }
    // blocks: vector of block index per variable; grevlex in each block
    static MonOrder blocks_grevlex(const std::vector<int>& blk) {
        MonOrder o;
        o.nvars = static_cast<int>(blk.size());
        o.block = blk;
        o.nblocks = 0;
        for (int b : blk) o.nblocks = std::max(o.nblocks, b + 1);
        o.block_lex.assign(o.nblocks, false);
        return o;
    }

    // +1 if a > b
    int compare(const Expo& a, const Expo& b) const {
        for (int blk = 0; blk < nblocks; ++blk) {
            int da = 0, db = 0;
            for (int v = 0; v < nvars; ++v)
                if (block[v] == blk) { da += a[v]; db += b[v]; }
            if (da != db) return da > db ? 1 : -1;
            if (block_lex[blk]) {
                for (int v = 0; v < nvars; ++v) {
                    if (block[v] != blk || a[v] == b[v]) continue;
                    return a[v] > b[v] ? 1 : -1;
                }
            } else {
                for (int v = nvars - 1; v >= 0; --v) {
                    if (block[v] != blk || a[v] == b[v]) continue;
                    return a[v] < b[v] ? 1 : -1;
                }
            }
        }
        return 0;
    }
};

template <class F>
struct Term {
    typename F::Elem c;
    Expo e;
};

// Terms sorted descending in the active order, no zero coefficients,
// no repeated exponents.
template <class F>
using Poly = std::vector<Term<F>>;

template <class F>
Poly<F> poly_normalize(const F& field, const MonOrder& ord, std::vector<Term<F>> terms) {
    std::sort(terms.begin(), terms.end(),
              [&](const Term<F>& x, const Term<F>& y) { return ord.compare(x.e, y.e) > 0; });
    Poly<F> out;
    for (auto& t : terms) {
        if (!out.empty() && out.back().e == t.e)
            out.back().c = field.add(out.back().c, t.c);
        else
            out.push_back(t);
        if (!out.empty() && field.is_zero(out.back().c)) out.pop_back();
    }
    return out;
}

template <class F>
Poly<F> poly_add(const F& field, const MonOrder& ord, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int c = ord.compare(a[i].e, b[j].e);
        if (c > 0)
            r.push_back(a[i++]);
        else if (c < 0)
            r.push_back(b[j++]);
        else {
            auto s = field.add(a[i].c, b[j].c);
            if (!field.is_zero(s)) r.push_back({s, a[i].e});
            ++i;
            ++j;
        }
    }
    while (i < a.size()) r.push_back(a[i++]);
    while (j < b.size()) r.push_back(b[j++]);
    return r;
}

template <class F>
Poly<F> poly_scale(const F& field, const Poly<F>& a, const typename F::Elem& c) {
    if (field.is_zero(c)) return {};
    Poly<F> r = a;
    for (auto& t : r) t.c = field.mul(t.c, c);
    return r;
}

template <class F>
Poly<F> poly_neg(const F& field, const Poly<F>& a) {
    Poly<F> r = a;
    for (auto& t : r) t.c = field.neg(t.c);
    return r;
}

template <class F>
Poly<F> poly_sub(const F& field, const MonOrder& ord, const Poly<F>& a, const Poly<F>& b) {
    return poly_add(field, ord, a, poly_neg(field, b));
}

// a * (c * x^e)
template <class F>
Poly<F> poly_mul_term(const F& field, const Poly<F>& a, const typename F::Elem& c, const Expo& e) {
    if (field.is_zero(c)) return {};
    Poly<F> r = a;
    for (auto& t : r) {
        t.c = field.mul(t.c, c);
        t.e = expo_add(t.e, e);
    }
    return r; // multiplying by a monomial preserves the term order
}

template <class F>
Poly<F> poly_mul(const F& field, const MonOrder& ord, const Poly<F>& a, const Poly<F>& b) {
    std::vector<Term<F>> acc;
    acc.reserve(a.size() * b.size());
    for (const auto& ta : a)
        for (const auto& tb : b) acc.push_back({field.mul(ta.c, tb.c), expo_add(ta.e, tb.e)});
    return poly_normalize(field, ord, std::move(acc));
}

template <class F>
bool poly_eq(const F& field, const Poly<F>& a, const Poly<F>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].e != b[i].e || !field.eq(a[i].c, b[i].c)) return false;
    return true;
}

template <class F>
std::string poly_str(const F& field, const Poly<F>& p, const std::vector<std::string>& names) {
    if (p.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += " + ";
        s += field.str(p[i].c);
        for (std::size_t v = 0; v < p[i].e.size(); ++v)
            if (p[i].e[v] != 0) {
                s += "*" + (v < names.size() ? names[v] : "v" + std::to_string(v));
                if (p[i].e[v] != 1) s += "^" + std::to_string(p[i].e[v]);
            }
    }
    return s;
}

struct GbBudget {
    int max_deg = 40;
    int max_basis = 5000;
};

// Full normal form. If `cofactors` is non-null it receives, per basis
// element, the quotient polynomial so that f = sum cof_i * basis_i + NF.
template <class F>
Poly<F> normal_form(const F& field, const MonOrder& ord, const Poly<F>& f,
                    const std::vector<Poly<F>>& basis, std::vector<Poly<F>>* cofactors = nullptr) {
    if (cofactors) cofactors->assign(basis.size(), Poly<F>{});
    Poly<F> rem;
    Poly<F> work = f;
    while (!work.empty()) {
        const Term<F>& lt = work.front();
        int hit = -1;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (!basis[i].empty() && divides(basis[i][0].e, lt.e)) {
                hit = static_cast<int>(i);
                break;
            }
        }
        if (hit < 0) {
            rem.push_back(lt);
            work.erase(work.begin());
        } else {
            const Poly<F>& g = basis[hit];
            auto q = field.div(lt.c, g[0].c);
            Expo sh = expo_sub(lt.e, g[0].e);
            work = poly_sub(field, ord, work, poly_mul_term(field, g, q, sh));
            if (cofactors) {
                Poly<F> one_term{{q, sh}};
                (*cofactors)[hit] = poly_add(field, ord, (*cofactors)[hit], one_term);
            }
        }
    }
    return rem;
}

template <class F>
struct GBasis {
    std::vector<Poly<F>> basis;              // reduced, monic, sorted by leading monomial
    std::vector<std::vector<Poly<F>>> reps;  // if tracked: basis[i] = sum reps[i][k] * gens[k]
    bool tracked = false;
};

// Buchberger with normal selection strategy; deterministic.
template <class F>
GBasis<F> buchberger(const F& field, const MonOrder& ord, const std::vector<Poly<F>>& gens,
                     const GbBudget& budget = GbBudget{}, bool track = false) {
    GBasis<F> out;
    out.tracked = track;
    std::vector<Poly<F>>& basis = out.basis;
    auto& reps = out.reps;

    auto push_elem = [&](Poly<F> p, std::vector<Poly<F>> rep) {
        auto lc = p[0].c;
        p = poly_scale(field, p, field.inv(lc));
        if (track)
            for (auto& r : rep) r = poly_scale(field, r, field.inv(lc));
        if (total_deg(p[0].e) > budget.max_deg)
            throw DegreeBudgetExceeded("buchberger: basis degree exceeds " +
                                       std::to_string(budget.max_deg));
        basis.push_back(std::move(p));
        if (track) reps.push_back(std::move(rep));
        if (static_cast<int>(basis.size()) > budget.max_basis)
            throw DegreeBudgetExceeded("buchberger: basis size exceeds " +
                                       std::to_string(budget.max_basis));
    };

    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (gens[k].empty()) continue;
        std::vector<Poly<F>> rep;
        if (track) {
            rep.assign(gens.size(), Poly<F>{});
            rep[k] = Poly<F>{{field.one(), Expo(ord.nvars, 0)}};
        }
        push_elem(gens[k], std::move(rep));
    }

    struct Pair {
        int deg;
        Expo lcm;
        int i, j;
    };
    auto pair_less = [&](const Pair& a, const Pair& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        if (a.lcm != b.lcm) return a.lcm < b.lcm;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    };
    std::vector<Pair> pairs;
    auto add_pairs_for = [&](int j) {
        for (int i = 0; i < j; ++i) {
            Expo l = expo_lcm(basis[i][0].e, basis[j][0].e);
            if (l == expo_add(basis[i][0].e, basis[j][0].e)) continue; // coprime criterion
            pairs.push_back({total_deg(l), l, i, j});
        }
    };
    for (int j = 0; j < static_cast<int>(basis.size()); ++j) add_pairs_for(j);

    while (!pairs.empty()) {
        auto it = std::min_element(pairs.begin(), pairs.end(), pair_less);
        Pair pr = *it;
        pairs.erase(it);
        const Poly<F>&gi = basis[pr.i], &gj = basis[pr.j];
        Poly<F> s = poly_sub(
            field, ord, poly_mul_term(field, gi, field.one(), expo_sub(pr.lcm, gi[0].e)),
            poly_mul_term(field, gj, field.one(), expo_sub(pr.lcm, gj[0].e)));
        std::vector<Poly<F>> cof;
        Poly<F> r = normal_form(field, ord, s, basis, track ? &cof : nullptr);
        if (r.empty()) continue;
        std::vector<Poly<F>> rep;
        if (track) {
            rep.assign(gens.size(), Poly<F>{});
            Poly<F> mi{{field.one(), expo_sub(pr.lcm, gi[0].e)}};
            Poly<F> mj{{field.one(), expo_sub(pr.lcm, gj[0].e)}};
            for (std::size_t k2 = 0; k2 < gens.size(); ++k2) {
                Poly<F> t = poly_sub(field, ord, poly_mul(field, ord, mi, reps[pr.i][k2]),
                                     poly_mul(field, ord, mj, reps[pr.j][k2]));
                for (std::size_t b2 = 0; b2 < basis.size(); ++b2)
                    t = poly_sub(field, ord, t, poly_mul(field, ord, cof[b2], reps[b2][k2]));
                rep[k2] = std::move(t);
            }
        }
        push_elem(std::move(r), std::move(rep));
        add_pairs_for(static_cast<int>(basis.size()) - 1);
    }

    // minimalize: drop elements whose LM is divisible by another LM
    std::vector<char> keep(basis.size(), 1);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (i == j || !keep[i] || !keep[j]) continue;
            if (divides(basis[j][0].e, basis[i][0].e) &&
                (basis[j][0].e != basis[i][0].e || j < i))
                keep[i] = 0;
        }
    std::vector<Poly<F>> mb;
    std::vector<std::vector<Poly<F>>> mr;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (keep[i]) {
            mb.push_back(basis[i]);
            if (track) mr.push_back(reps[i]);
        }
    basis = std::move(mb);
    if (track) reps = std::move(mr);

    // interreduce tails
    for (std::size_t i = 0; i < basis.size(); ++i) {
        std::vector<Poly<F>> others;
        std::vector<std::size_t> omap;
        for (std::size_t j = 0; j < basis.size(); ++j)
            if (j != i) {
                others.push_back(basis[j]);
                omap.push_back(j);
            }
        std::vector<Poly<F>> cof;
        Poly<F> r = normal_form(field, ord, basis[i], others, track ? &cof : nullptr);
        basis[i] = r;
        if (track)
            for (std::size_t oj = 0; oj < others.size(); ++oj)
                for (std::size_t k2 = 0; k2 < gens.size(); ++k2)
                    reps[i][k2] = poly_sub(field, ord, reps[i][k2],
                                           poly_mul(field, ord, cof[oj], reps[omap[oj]][k2]));
    }

    // deterministic final order: ascending leading monomial
    std::vector<std::size_t> perm(basis.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
        return ord.compare(basis[x][0].e, basis[y][0].e) < 0;
    });
    std::vector<Poly<F>> fb;
    std::vector<std::vector<Poly<F>>> fr;
    for (std::size_t idx : perm) {
        fb.push_back(basis[idx]);
        if (track) fr.push_back(reps[idx]);
    }
    out.basis = std::move(fb);
    out.reps = std::move(fr);
    return out;
}

template <class F>
bool ideal_member(const F& field, const MonOrder& ord, const Poly<F>& f, const GBasis<F>& G) {
    return normal_form(field, ord, f, G.basis).empty();
}

// Cofactors of f over the original generating set used to build G
// (requires tracking). Exact: recombination is asserted.
template <class F>
std::optional<std::vector<Poly<F>>> member_certify(const F& field, const MonOrder& ord,
                                                   const Poly<F>& f,
                                                   const std::vector<Poly<F>>& gens,
                                                   const GBasis<F>& G) {
    if (!G.tracked) throw InternalInvariantViolated("member_certify needs a tracked basis");
    std::vector<Poly<F>> cof;
    Poly<F> r = normal_form(field, ord, f, G.basis, &cof);
    if (!r.empty()) return std::nullopt;
    std::vector<Poly<F>> out(gens.size());
    for (std::size_t k = 0; k < gens.size(); ++k) {
        Poly<F> acc;
        for (std::size_t b = 0; b < G.basis.size(); ++b)
            acc = poly_add(field, ord, acc, poly_mul(field, ord, cof[b], G.reps[b][k]));
        out[k] = std::move(acc);
    }
    // exactness check
    Poly<F> chk;
    for (std::size_t k = 0; k < gens.size(); ++k)
        chk = poly_add(field, ord, chk, poly_mul(field, ord, out[k], gens[k]));
    if (!poly_eq(field, chk, f))
        throw InternalInvariantViolated("member_certify: recombination mismatch");
    return out;
}

template <class F>
bool ideal_contains(const F& field, const MonOrder& ord, const std::vector<Poly<F>>& sub,
                    const GBasis<F>& big) {
    for (const auto& g : sub)
        if (!normal_form(field, ord, g, big.basis).empty()) return false;
    return true;
}

// (I : m) for a monomial m, via the intersection trick with one auxiliary
// elimination variable appended last (in a dominant block).
template <class F>
std::vector<Poly<F>> colon_monomial(const F& field, const MonOrder& ord,
                                    const std::vector<Poly<F>>& gens, const Expo& m,
                                    const GbBudget& budget = GbBudget{}) {
    int nv = ord.nvars;
    MonOrder ext;
    ext.nvars = nv + 1;
    ext.block.assign(nv + 1, 1);
    ext.block[nv] = 0; // t dominant
    ext.nblocks = 2;
    ext.block_lex = {false, false};

    auto lift = [&](const Poly<F>& p, int tpow) {
        Poly<F> q;
        for (const auto& t : p) {
            Expo e = t.e;
            e.push_back(tpow);
            q.push_back({t.c, e});
        }
        return poly_normalize(field, ext, std::move(q));
    };
    std::vector<Poly<F>> egens;
    for (const auto& g : gens) egens.push_back(lift(g, 1)); // t*g
    {
        Poly<F> mm{{field.one(), m}};
        Poly<F> a = lift(mm, 0);
        Poly<F> b = lift(mm, 1);
        egens.push_back(poly_sub(field, ext, a, b)); // (1 - t) * m
    }
    GBasis<F> G = buchberger(field, ext, egens, budget, false);
    std::vector<Poly<F>> out;
    for (const auto& g : G.basis) {
        bool has_t = false;
        for (const auto& t : g)
            if (t.e[nv] != 0) { has_t = true; break; }
        if (has_t) continue;
        // drop the t coordinate and divide by m
        Poly<F> q;
        for (const auto& t : g) {
            Expo e(t.e.begin(), t.e.end() - 1);
            if (!divides(m, e))
                throw InternalInvariantViolated("colon_monomial: element not divisible by m");
            q.push_back({t.c, expo_sub(e, m)});
        }
        out.push_back(poly_normalize(field, ord, std::move(q)));
    }
    return out;
}

// Saturation (I : m^infinity) by iterated colon.
template <class F>
std::vector<Poly<F>> saturate_monomial(const F& field, const MonOrder& ord,
                                       std::vector<Poly<F>> gens, const Expo& m,
                                       const GbBudget& budget = GbBudget{}) {
    GBasis<F> prev = buchberger(field, ord, gens, budget, false);
    for (;;) {
        std::vector<Poly<F>> nxt = colon_monomial(field, ord, prev.basis, m, budget);
        GBasis<F> G2 = buchberger(field, ord, nxt, budget, false);
        bool same = G2.basis.size() == prev.basis.size();
        if (same)
            for (std::size_t i = 0; i < G2.basis.size(); ++i)
                if (!poly_eq(field, G2.basis[i], prev.basis[i])) { same = false; break; }
        if (same) return prev.basis;
        prev = std::move(G2);
    }
}

template <class F>
bool is_binomial_poly(const Poly<F>& p) { return p.size() <= 2; }

// x^a - x^b with coefficients +1/-1 (after monic scaling).
template <class F>
bool is_difference_poly(const F& field, const Poly<F>& p) {
    if (p.size() != 2) return false;
    return field.eq(p[0].c, field.one()) && field.eq(p[1].c, field.neg(field.one()));
}

} // namespace gb
} // namespace torq

#endif
