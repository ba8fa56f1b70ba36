#ifndef TORQ_EQUIV_HPP
#define TORQ_EQUIV_HPP

#include <algorithm>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "torq/ring.hpp"
#include "torq/tensor.hpp"

namespace torq {

// ---------------------------------------------------------------------------
// Toric equivalence relations: the ideal I(x,y) in k[sigma^2], its axioms,
// and the effectivization into binomial differences x^w - y^w.
// ---------------------------------------------------------------------------

template <class F>
struct ToricRelation {
    const AffineMonoid* sig = nullptr;
    F field;
    std::shared_ptr<BlockRing> R1, R2, R3;
    std::vector<gb::Poly<F>> raw;   // input generators, 2-block ring
    bool toric = false;
    std::vector<gb::Poly<F>> comps; // homogeneous components when toric, else raw
    gb::GbBudget budget;
    TensorBudget fiber_budget;

    explicit ToricRelation(const F& f) : field(f) {}
};

template <class F>
gb::Poly<F> make_relation_poly(const F& field, const BlockRing& R2,
                               const std::vector<std::tuple<typename F::Elem, ZVec, ZVec>>& ts) {
    std::vector<gb::Term<F>> terms;
    for (const auto& [c, a, b] : ts) {
        gb::Expo e = R2.mono_expo(0, a);
        gb::Expo e2 = R2.mono_expo(1, b);
        for (int i = 0; i < R2.nv; ++i) e[i] += e2[i];
        terms.push_back({c, e});
    }
    return gb::poly_normalize(field, R2.ord, std::move(terms));
}

template <class F>
ToricRelation<F> relation_new(const AffineMonoid& sigma, const F& field,
                              const std::vector<gb::Poly<F>>& gens,
                              gb::GbBudget budget = gb::GbBudget{},
                              TensorBudget fiber = TensorBudget{}) {
    ToricRelation<F> R(field);
    R.sig = &sigma;
    R.budget = budget;
    R.fiber_budget = fiber;
    R.R1 = std::make_shared<BlockRing>(sigma, 1);
    R.R2 = std::make_shared<BlockRing>(sigma, 2);
    R.R3 = std::make_shared<BlockRing>(sigma, 3);
    for (const auto& g : gens) {
        if (!g.empty() && (int)g[0].e.size() != R.R2->nv)
            throw InvalidAmbient("relation_new: generator has wrong variable count");
        if (!g.empty()) R.raw.push_back(g);
    }
    // toricness: every M-homogeneous component must lie in the ideal
    std::vector<gb::Poly<F>> igens = R.raw;
    auto pres = R.R2->template presentation_polys<F>(field);
    igens.insert(igens.end(), pres.begin(), pres.end());
    auto G = gb::buchberger(field, R.R2->ord, igens, budget);
    bool toric = true;
    std::vector<gb::Poly<F>> comps;
    for (const auto& g : R.raw)
        for (const auto& c : R.R2->components(field, g)) {
            if (!gb::normal_form(field, R.R2->ord, c, G.basis).empty()) toric = false;
            comps.push_back(c);
        }
    R.toric = toric;
    if (toric)
        R.comps = comps;
    else
        R.comps = R.raw;
    return R;
}

struct AxiomReport {
    bool reflexive = false;
    bool symmetric = false;
    bool transitive = false;
    bool finite = false;
    // per-axiom budget failures; the corresponding flag is meaningless when
    // an entry names that axiom
    std::vector<std::string> budget_errors;
    bool equivalence() const { return budget_errors.empty() && reflexive && symmetric && transitive; }
};

// quotient is module-finite over the subring when every dominant-block
// variable has a pure power among the leading monomials
template <class F>
bool finite_over_vars(const F& field, const gb::MonOrder& ord,
                      const std::vector<gb::Poly<F>>& gens, const std::vector<int>& dep_vars,
                      const gb::GbBudget& budget) {
    auto G = gb::buchberger(field, ord, gens, budget);
    for (int v : dep_vars) {
        bool found = false;
        for (const auto& g : G.basis) {
            if (g.empty()) continue;
            const gb::Expo& lm = g[0].e;
            if (lm[v] == 0) continue;
            bool pure = true;
            for (std::size_t j = 0; j < lm.size(); ++j)
                if ((int)j != v && lm[j] != 0) pure = false;
            if (pure) { found = true; break; }
        }
        if (!found) return false;
    }
    return true;
}

template <class F>
AxiomReport verify_axioms(const ToricRelation<F>& R) {
    const F& field = R.field;
    AxiomReport rep;
    // reflexive: f(x,x) = 0 in k[sigma]
    try {
        auto pres1 = R.R1->template presentation_polys<F>(field);
        auto G1 = gb::buchberger(field, R.R1->ord, pres1, R.budget);
        rep.reflexive = true;
        for (const auto& g : R.raw) {
            auto collapsed = R.R2->collapse(field, *R.R1, g, {0, 0});
            if (!gb::normal_form(field, R.R1->ord, collapsed, G1.basis).empty())
                rep.reflexive = false;
        }
    } catch (const BudgetExceeded& e) {
        rep.budget_errors.push_back(std::string("reflexive: ") + e.what());
    }
    // symmetric: I(x,y) = I(y,x)
    try {
        std::vector<gb::Poly<F>> swapped;
        for (const auto& g : R.raw) swapped.push_back(R.R2->inject(field, *R.R2, g, {1, 0}));
        auto pres = R.R2->template presentation_polys<F>(field);
        std::vector<gb::Poly<F>> a = R.raw, b = swapped;
        a.insert(a.end(), pres.begin(), pres.end());
        b.insert(b.end(), pres.begin(), pres.end());
        auto GA = gb::buchberger(field, R.R2->ord, a, R.budget);
        auto GB_ = gb::buchberger(field, R.R2->ord, b, R.budget);
        rep.symmetric = gb::ideal_contains(field, R.R2->ord, swapped, GA) &&
                        gb::ideal_contains(field, R.R2->ord, R.raw, GB_);
    } catch (const BudgetExceeded& e) {
        rep.budget_errors.push_back(std::string("symmetric: ") + e.what());
    }
    // transitive: I(x,z) inside I(x,y) + I(y,z)
    try {
        std::vector<gb::Poly<F>> gens3 = R.R3->template presentation_polys<F>(field);
        for (const auto& g : R.raw) {
            gens3.push_back(R.R3->inject(field, *R.R2, g, {0, 1}));
            gens3.push_back(R.R3->inject(field, *R.R2, g, {1, 2}));
        }
        auto G3 = gb::buchberger(field, R.R3->ord, gens3, R.budget);
        rep.transitive = true;
        for (const auto& g : R.raw) {
            auto gxz = R.R3->inject(field, *R.R2, g, {0, 2});
            if (!gb::normal_form(field, R.R3->ord, gxz, G3.basis).empty())
                rep.transitive = false;
        }
    } catch (const BudgetExceeded& e) {
        rep.budget_errors.push_back(std::string("transitive: ") + e.what());
    }
    // finite: k[x,y]/I finite over k[x]
    try {
        gb::MonOrder ordf = R.R2->elimination_order({1, 0}); // y-block dominant
        std::vector<gb::Poly<F>> gens = R.raw;
        auto pres = R.R2->template presentation_polys<F>(field);
        gens.insert(gens.end(), pres.begin(), pres.end());
        std::vector<gb::Poly<F>> regens;
        for (auto g : gens) regens.push_back(gb::poly_normalize(field, ordf, g));
        std::vector<int> dep;
        for (int i = 0; i < R.R2->k; ++i) dep.push_back(R.R2->var(1, i));
        rep.finite = finite_over_vars(field, ordf, regens, dep, R.budget);
    } catch (const BudgetExceeded& e) {
        rep.budget_errors.push_back(std::string("finite: ") + e.what());
    }
    return rep;
}

struct ClassLog {
    ZVec gamma;          // common representative of the processed class
    int case_taken = 0;  // 0 = generators reduced to zero, 1 or 2 otherwise
    ZVec shift;          // case 1: s0; case 2: s1
    std::vector<ZVec> added;
};

struct EffectiveModel {
    std::vector<ZVec> W;
    std::vector<ZVec> tau_gens;
    ToricPresentation Y;
    bool verified = false;
    std::vector<ClassLog> transcript;
    bool deg0_symmetry_checked = false;
    bool deg0_symmetry_ok = true;
    long deg0_checks = 0;
    bool pq_relations_checked = false;
    bool pq_relations_ok = true;
    long pq_checks = 0;
};

struct EffectivizeOptions {
    bool check_deg0_symmetry = false;
    bool check_pq_relations = false;
    bool check_axioms = true;
};

namespace detail {

template <class F>
struct PQData {
    ZVec gamma;
    std::vector<UPoly<F>> p, q;
    // certificate matrices over (u,v)-characters, exponents in Z^{2 r0}
    std::vector<std::vector<UPoly<F>>> A, B;
    bool has_certificates = false;
};

// l(sigma)-coordinates of a unit element
inline ZVec lcoords(const AffineMonoid& sig, const ZVec& s) {
    auto c = lattice_member(sig.units(), s);
    if (!c) throw InternalInvariantViolated("lcoords: not a unit");
    return *c;
}

inline ZVec lembed(const AffineMonoid& sig, const ZVec& coords) {
    ZVec s = zvec_zero(sig.dim());
    for (int i = 0; i < sig.units().rank(); ++i) s = s + coords[i] * sig.units().basis.row(i);
    return s;
}

// rewrite homogeneous class-gamma generators into p_i x^gamma + q_i y^gamma
template <class F>
PQData<F> pq_rewrite(const ToricRelation<F>& R, const TensorContext& tctx,
                     const std::vector<gb::Poly<F>>& gens, const ZVec& gamma0,
                     bool with_certs, const std::vector<ZVec>& W) {
    const F& field = R.field;
    const AffineMonoid& sig = *R.sig;
    PQData<F> out;
    out.gamma = gamma0;
    for (const auto& g : gens) {
        ZVec gdeg = R.R2->mdeg(g[0].e);
        ZVec t = gdeg - gamma0; // unit shift onto the common representative
        if (!lattice_member(sig.units(), t))
            throw InternalInvariantViolated("pq_rewrite: class members differ by non-unit");
        UPoly<F> p, q;
        for (const auto& term : g) {
            ZVec a = R.R2->block_deg(term.e, 0) - t;
            ZVec b = R.R2->block_deg(term.e, 1);
            auto cx = tctx.unit_twist_solve(Tuple{a, b}, Tuple{gamma0, zvec_zero(sig.dim())});
            if (cx) {
                ZVec s = coset_residue(cx->lat, cx->base);
                up_add_term(field, p, lcoords(sig, s), term.c);
                continue;
            }
            auto cy = tctx.unit_twist_solve(Tuple{a, b}, Tuple{zvec_zero(sig.dim()), gamma0});
            if (cy) {
                ZVec s = coset_residue(cy->lat, cy->base);
                up_add_term(field, q, lcoords(sig, s), term.c);
                continue;
            }
            throw InternalInvariantViolated(
                "pq_rewrite: term admits neither rewrite (input not a toric equivalence "
                "relation?)");
        }
        out.p.push_back(std::move(p));
        out.q.push_back(std::move(q));
    }
    if (!with_certs) return out;

    // transitivity certificates a_ij, b_ij by member_certify in k[sigma^3]
    int m = (int)out.p.size();
    auto materialize = [&](const UPoly<F>& p, const UPoly<F>& q) {
        std::vector<gb::Term<F>> terms;
        for (const auto& [e, c] : p) {
            ZVec s = lembed(sig, e);
            gb::Expo ex = R.R2->mono_expo(0, gamma0 + s);
            gb::Expo ey = R.R2->mono_expo(1, -s);
            for (int i = 0; i < R.R2->nv; ++i) ex[i] += ey[i];
            terms.push_back({c, ex});
        }
        for (const auto& [e, c] : q) {
            ZVec s = lembed(sig, e);
            gb::Expo ex = R.R2->mono_expo(0, s);
            gb::Expo ey = R.R2->mono_expo(1, gamma0 - s);
            for (int i = 0; i < R.R2->nv; ++i) ex[i] += ey[i];
            terms.push_back({c, ex});
        }
        return gb::poly_normalize(field, R.R2->ord, std::move(terms));
    };
    std::vector<gb::Poly<F>> mats;
    for (int i = 0; i < m; ++i) mats.push_back(materialize(out.p[i], out.q[i]));
    std::vector<gb::Poly<F>> cgens;
    for (int j = 0; j < m; ++j) cgens.push_back(R.R3->inject(field, *R.R2, mats[j], {0, 1}));
    for (int j = 0; j < m; ++j) cgens.push_back(R.R3->inject(field, *R.R2, mats[j], {1, 2}));
    for (const auto& w : W) {
        cgens.push_back(R.R3->template diff_poly<F>(field, w, 0, 1));
        cgens.push_back(R.R3->template diff_poly<F>(field, w, 1, 2));
        cgens.push_back(R.R3->template diff_poly<F>(field, w, 0, 2));
    }
    auto pres3 = R.R3->template presentation_polys<F>(field);
    cgens.insert(cgens.end(), pres3.begin(), pres3.end());
    auto G3 = gb::buchberger(field, R.R3->ord, cgens, R.budget, true);
    out.A.assign(m, std::vector<UPoly<F>>(m));
    out.B.assign(m, std::vector<UPoly<F>>(m));
    for (int i = 0; i < m; ++i) {
        auto gxz = R.R3->inject(field, *R.R2, mats[i], {0, 2});
        auto cof = gb::member_certify(field, R.R3->ord, gxz, cgens, G3);
        if (!cof)
            throw NotAnEquivalenceRelation("pq_rewrite: transitivity certificate missing");
        // degree-0 components in (u,v) characters
        auto char_part = [&](const gb::Poly<F>& h) {
            UPoly<F> up;
            for (const auto& term : h) {
                if (!is_zero(R.R3->mdeg(term.e))) continue;
                ZVec a = R.R3->block_deg(term.e, 0);
                ZVec c3 = R.R3->block_deg(term.e, 2);
                ZVec chi = concat(lcoords(sig, a), lcoords(sig, -c3));
                up_add_term(field, up, chi, term.c);
            }
            return up;
        };
        for (int j = 0; j < m; ++j) {
            out.A[i][j] = char_part((*cof)[j]);
            out.B[i][j] = char_part((*cof)[m + j]);
        }
    }
    out.has_certificates = true;
    return out;
}

// degree-0 part of (Itilde : x^gamma) as unit-character generators
template <class F>
std::vector<UPoly<F>> colon_degree_zero(const ToricRelation<F>& R,
                                        const std::vector<gb::Poly<F>>& itilde_full,
                                        const ZVec& gamma) {
    const F& field = R.field;
    const AffineMonoid& sig = *R.sig;
    auto colon = gb::colon_monomial(field, R.R2->ord, itilde_full, R.R2->mono_expo(0, gamma),
                                    R.budget);
    auto GJ = gb::buchberger(field, R.R2->ord, colon, R.budget);
    std::vector<UPoly<F>> out;
    for (const auto& g : GJ.basis) {
        ZVec d = R.R2->mdeg(g[0].e);
        for (const auto& t : g)
            if (R.R2->mdeg(t.e) != d)
                throw InternalInvariantViolated("colon of a homogeneous ideal not homogeneous");
        if (!lattice_member(sig.units(), d)) continue;
        if (g.size() == 1)
            throw InternalInvariantViolated("monomial in the colon of a difference ideal");
        if (g.size() > 2)
            throw BinomialityViolated("colon of a binomial ideal has a non-binomial basis");
        ZVec chi = R.R2->block_deg(g[0].e, 0) - R.R2->block_deg(g[1].e, 0);
        UPoly<F> up;
        up_add_term(field, up, lcoords(sig, chi), g[0].c);
        up_add_term(field, up, zvec_zero(sig.units().rank()), g[1].c);
        out.push_back(std::move(up));
    }
    return out;
}

// 3-block analogue: degree-0 part of (Itilde(x,y,z) : x^gamma) as a lattice
// in the (u,v)-characters
template <class F>
Lattice colon3_degree_zero_lattice(const ToricRelation<F>& R, const std::vector<ZVec>& W,
                                   const ZVec& gamma) {
    const F& field = R.field;
    const AffineMonoid& sig = *R.sig;
    int r0 = sig.units().rank();
    std::vector<gb::Poly<F>> full = R.R3->template presentation_polys<F>(field);
    for (const auto& w : W) {
        full.push_back(R.R3->template diff_poly<F>(field, w, 0, 1));
        full.push_back(R.R3->template diff_poly<F>(field, w, 1, 2));
        full.push_back(R.R3->template diff_poly<F>(field, w, 0, 2));
    }
    gb::Expo m(R.R3->nv, 0);
    {
        gb::Expo e = R.R3->mono_expo(0, gamma);
        for (int i = 0; i < R.R3->nv; ++i) m[i] = e[i];
    }
    auto colon = gb::colon_monomial(field, R.R3->ord, full, m, R.budget);
    auto GJ = gb::buchberger(field, R.R3->ord, colon, R.budget);
    std::vector<ZVec> rows;
    for (const auto& g : GJ.basis) {
        ZVec d = R.R3->mdeg(g[0].e);
        if (!lattice_member(sig.units(), d)) continue;
        if (g.size() != 2) continue;
        ZVec a = R.R3->block_deg(g[0].e, 0) - R.R3->block_deg(g[1].e, 0);
        ZVec c3 = R.R3->block_deg(g[1].e, 2) - R.R3->block_deg(g[0].e, 2);
        rows.push_back(concat(lcoords(sig, a), lcoords(sig, c3)));
    }
    return lattice_from_rows(2 * r0, rows);
}

} // namespace detail

// Rewrite class-gamma generators as p_i x^gamma + q_i y^gamma with degree-0
// coefficients, optionally with the transitivity certificate matrices.
template <class F>
detail::PQData<F> pq_normalize(const ToricRelation<F>& R, const std::vector<ZVec>& W,
                               const std::vector<gb::Poly<F>>& gens_at_class,
                               const ZVec& gamma0, bool with_certificates = false) {
    TensorContext tctx(*R.sig, W, R.fiber_budget);
    return detail::pq_rewrite(R, tctx, gens_at_class, gamma0, with_certificates, W);
}

struct DichotomyResult {
    bool case1 = false;
    ZVec shift; // s with x^{gamma-s} = y^{gamma-s} mod Itilde, when case1
};

inline DichotomyResult dichotomy(const AffineMonoid& sig, const TensorContext& tctx,
                                 const ZVec& gamma) {
    DichotomyResult r;
    ZVec zero = zvec_zero(sig.dim());
    auto cos = tctx.unit_twist_solve(Tuple{gamma, zero}, Tuple{zero, gamma});
    if (cos) {
        r.case1 = true;
        r.shift = coset_residue(cos->lat, cos->base);
    }
    return r;
}

template <class F>
EffectiveModel effectivize(const ToricRelation<F>& R, EffectivizeOptions opts = {}) {
    const F& field = R.field;
    const AffineMonoid& sig = *R.sig;
    int r0 = sig.units().rank();
    if (!R.toric)
        throw NotToric("effectivize: some homogeneous component escapes the ideal");
    if (opts.check_axioms) {
        AxiomReport rep = verify_axioms(R);
        if (!rep.budget_errors.empty())
            throw BudgetExceeded("effectivize: axiom check hit a budget: " +
                                 rep.budget_errors.front());
        if (!rep.equivalence())
            throw NotAnEquivalenceRelation(
                std::string("effectivize: axioms fail (reflexive=") +
                (rep.reflexive ? "1" : "0") + " symmetric=" + (rep.symmetric ? "1" : "0") +
                " transitive=" + (rep.transitive ? "1" : "0") + ")");
    }

    EffectiveModel model;
    auto pres2 = R.R2->template presentation_polys<F>(field);

    // group homogeneous components by sigma-bar class of their degree
    struct ClassBucket {
        ZVec order_key, torsion;
        ZVec gamma0;
        std::vector<gb::Poly<F>> gens;
    };
    std::map<std::string, ClassBucket> buckets;
    for (const auto& c : R.comps) {
        if (c.empty()) continue;
        ZVec d = R.R2->mdeg(c[0].e);
        SigmaBarClass cls = sig.rbar_class(d);
        auto [okey, tor] = sig.class_order_tuple(d);
        auto& b = buckets[cls.key()];
        if (b.gens.empty()) {
            b.order_key = okey;
            b.torsion = tor;
            b.gamma0 = d;
        }
        b.gens.push_back(c);
    }
    std::vector<const ClassBucket*> order;
    for (const auto& [k, b] : buckets) order.push_back(&b);
    std::sort(order.begin(), order.end(), [](const ClassBucket* a, const ClassBucket* b) {
        int c = cmp_zvec(a->order_key, b->order_key);
        if (c != 0) return c < 0;
        return cmp_zvec(a->torsion, b->torsion) < 0;
    });

    for (const ClassBucket* bucket : order) {
        ClassLog log;
        log.gamma = bucket->gamma0;
        // current difference ideal
        std::vector<gb::Poly<F>> itilde = pres2;
        for (const auto& w : model.W) itilde.push_back(R.R2->template diff_poly<F>(field, w, 0, 1));
        auto GI = gb::buchberger(field, R.R2->ord, itilde, R.budget);
        std::vector<gb::Poly<F>> gens;
        for (const auto& g : bucket->gens) {
            auto nf = gb::normal_form(field, R.R2->ord, g, GI.basis);
            if (!nf.empty()) gens.push_back(nf);
        }
        if (gens.empty()) {
            log.case_taken = 0;
            model.transcript.push_back(std::move(log));
            continue;
        }
        TensorContext tctx(sig, model.W, R.fiber_budget);
        ZVec gamma0 = R.R2->mdeg(gens[0][0].e);
        log.gamma = gamma0;
        bool want_certs = opts.check_pq_relations;
        detail::PQData<F> pq = detail::pq_rewrite(R, tctx, gens, gamma0, want_certs, model.W);

        // degree-zero part of (Itilde : x^gamma), as unit-character generators
        std::vector<UPoly<F>> deg0_gens = detail::colon_degree_zero(R, itilde, gamma0);
        ExponentLattice el_deg0 = exponent_lattice(field, r0, deg0_gens, R.budget);
        if (el_deg0.unit_ideal || !el_deg0.difference_generated)
            throw NotAnEquivalenceRelation(
                "effectivize: the degree-zero colon part is not a subgroup-scheme ideal");
        std::vector<UPoly<F>> deg0_diffs;
        for (int i = 0; i < el_deg0.lat.rank(); ++i) {
            UPoly<F> d;
            up_add_term(field, d, el_deg0.lat.basis.row(i), field.one());
            up_add_term(field, d, zvec_zero(r0), field.neg(field.one()));
            deg0_diffs.push_back(std::move(d));
        }

        if (opts.check_deg0_symmetry) {
            model.deg0_symmetry_checked = true;
            ++model.deg0_checks;
            Lattice L3 = detail::colon3_degree_zero_lattice(R, model.W, gamma0);
            // permutation action on (u,v)-characters: swap x<->y sends (s,t)
            // to (t-s, t); swap y<->z sends (s,t) to (s, s-t)
            auto apply = [&](const Lattice& L, int which) {
                std::vector<ZVec> rows;
                for (int i = 0; i < L.rank(); ++i) {
                    ZVec r = L.basis.row(i);
                    ZVec s(r.begin(), r.begin() + r0), t(r.begin() + r0, r.end());
                    ZVec ns, nt;
                    if (which == 0) {
                        ns = t - s;
                        nt = t;
                    } else {
                        ns = s;
                        nt = s - t;
                    }
                    rows.push_back(concat(ns, nt));
                }
                return lattice_from_rows(2 * r0, rows);
            };
            if (!(apply(L3, 0) == L3) || !(apply(L3, 1) == L3)) model.deg0_symmetry_ok = false;
        }

        DichotomyResult dich = dichotomy(sig, tctx, gamma0);
        std::vector<ZVec> added;
        if (dich.case1) {
            log.case_taken = 1;
            log.shift = dich.shift;
            ZVec gprime = gamma0 - dich.shift;
            ZVec mscoord = detail::lcoords(sig, -dich.shift);
            std::vector<UPoly<F>> egens = deg0_diffs;
            for (std::size_t i = 0; i < pq.p.size(); ++i) {
                UPoly<F> shift_q = up_mul(field, pq.q[i], up_char(field, mscoord, field.one()));
                egens.push_back(up_add(field, pq.p[i], shift_q));
            }
            ExponentLattice el = exponent_lattice(field, r0, egens, R.budget);
            if (el.unit_ideal || !el.difference_generated)
                throw NotAnEquivalenceRelation("effectivize: case 1 ideal not difference-generated");
            for (int i = 0; i < el.lat.rank(); ++i) {
                ZVec b = el.lat.basis.row(i);
                if (lattice_member(el_deg0.lat, b)) continue; // already in the degree-zero lattice
                added.push_back(gprime + detail::lembed(sig, b));
            }
            if (added.empty())
                throw InternalInvariantViolated("effectivize: case 1 added no difference");
        } else {
            log.case_taken = 2;
            int m = (int)pq.p.size();
            LaurentRing LR(r0);
            std::vector<gb::Poly<F>> cert_gens;
            for (int i = 0; i < m; ++i) cert_gens.push_back(LR.from_upoly(field, pq.p[i]));
            for (const auto& d : deg0_diffs) cert_gens.push_back(LR.from_upoly(field, d));
            auto rels = LR.template rels<F>(field);
            cert_gens.insert(cert_gens.end(), rels.begin(), rels.end());
            auto GP = gb::buchberger(field, LR.ord, cert_gens, R.budget, true);
            gb::Poly<F> one{{field.one(), gb::Expo(2 * r0, 0)}};
            auto cof = gb::member_certify(field, LR.ord, one, cert_gens, GP);
            if (!cof)
                throw NotAnEquivalenceRelation(
                    "effectivize: the p_i do not generate the unit ideal");
            UPoly<F> q1;
            for (int i = 0; i < m; ++i) {
                UPoly<F> ci = LR.to_upoly(field, (*cof)[i]);
                q1 = up_add(field, q1, up_mul(field, ci, pq.q[i]));
            }
            // residual coefficient ideal: q_i - p_i q1 for all i, over the
            // degree-zero lattice
            std::vector<UPoly<F>> jt = deg0_diffs;
            for (int i = 0; i < m; ++i) {
                UPoly<F> t = up_add(field, pq.q[i],
                                    up_neg(field, up_mul(field, pq.p[i], q1)));
                if (!t.empty()) jt.push_back(std::move(t));
            }
            ExponentLattice el = exponent_lattice(field, r0, jt, R.budget);
            if (el.unit_ideal || !el.difference_generated)
                throw NotAnEquivalenceRelation(
                    "effectivize: the residual coefficient ideal is not a subgroup-scheme "
                    "ideal");
            // the distinguished coefficient must reduce to minus a character
            std::vector<gb::Poly<F>> jt_polys = LR.template rels<F>(field);
            for (const auto& g : jt) jt_polys.push_back(LR.from_upoly(field, g));
            auto GT = gb::buchberger(field, LR.ord, jt_polys, R.budget);
            auto nf = gb::normal_form(field, LR.ord, LR.from_upoly(field, q1), GT.basis);
            if (nf.size() != 1 || !field.eq(nf[0].c, field.neg(field.one())))
                throw InternalInvariantViolated(
                    "effectivize: leading coefficient is not minus a character");
            ZVec s1c = zvec_zero(r0);
            for (int i = 0; i < r0; ++i)
                s1c[i] = mpz_class(nf[0].e[i]) - mpz_class(nf[0].e[r0 + i]);
            ZVec s1 = detail::lembed(sig, s1c);
            log.shift = s1;
            added.push_back(gamma0 - s1);
            for (int i = 0; i < el.lat.rank(); ++i) {
                ZVec b = el.lat.basis.row(i);
                if (lattice_member(el_deg0.lat, b)) continue;
                added.push_back(gamma0 - s1 + detail::lembed(sig, b));
            }
            if (opts.check_pq_relations && pq.has_certificates) {
                model.pq_relations_checked = true;
                // cocycle relations P(uv)=A P(u), A Q(u) = -B P(v), Q(uv)=B Q(v),
                // reduced modulo the degree-zero lattice in both character blocks
                LaurentRing LR2(2 * r0);
                std::vector<gb::Poly<F>> dgens = LR2.template rels<F>(field);
                for (int i = 0; i < el_deg0.lat.rank(); ++i) {
                    ZVec b = el_deg0.lat.basis.row(i);
                    UPoly<F> du, dv;
                    up_add_term(field, du, concat(b, zvec_zero(r0)), field.one());
                    up_add_term(field, du, zvec_zero(2 * r0), field.neg(field.one()));
                    up_add_term(field, dv, concat(zvec_zero(r0), b), field.one());
                    up_add_term(field, dv, zvec_zero(2 * r0), field.neg(field.one()));
                    dgens.push_back(LR2.from_upoly(field, du));
                    dgens.push_back(LR2.from_upoly(field, dv));
                }
                auto GD = gb::buchberger(field, LR2.ord, dgens, R.budget);
                auto to_u = [&](const UPoly<F>& a) {
                    return up_subst<F>(field, a, [&](const ZVec& e) {
                        return concat(e, zvec_zero(r0));
                    });
                };
                auto to_v = [&](const UPoly<F>& a) {
                    return up_subst<F>(field, a, [&](const ZVec& e) {
                        return concat(zvec_zero(r0), e);
                    });
                };
                auto to_uv = [&](const UPoly<F>& a) {
                    return up_subst<F>(field, a, [&](const ZVec& e) { return concat(e, e); });
                };
                auto reduces_to_zero = [&](const UPoly<F>& a) {
                    return gb::normal_form(field, LR2.ord, LR2.from_upoly(field, a), GD.basis)
                        .empty();
                };
                for (int i = 0; i < m; ++i) {
                    ++model.pq_checks;
                    UPoly<F> r8 = to_uv(pq.p[i]);
                    UPoly<F> r9;
                    UPoly<F> r10 = to_uv(pq.q[i]);
                    for (int j = 0; j < m; ++j) {
                        r8 = up_add(field, r8,
                                    up_neg(field, up_mul(field, pq.A[i][j], to_u(pq.p[j]))));
                        r9 = up_add(field, r9, up_mul(field, pq.A[i][j], to_u(pq.q[j])));
                        r9 = up_add(field, r9, up_mul(field, pq.B[i][j], to_v(pq.p[j])));
                        r10 = up_add(field, r10,
                                     up_neg(field, up_mul(field, pq.B[i][j], to_v(pq.q[j]))));
                    }
                    if (!reduces_to_zero(r8) || !reduces_to_zero(r9) || !reduces_to_zero(r10))
                        model.pq_relations_ok = false;
                }
            }
        }
        for (const auto& w : added) {
            bool dup = false;
            for (const auto& ww : model.W)
                if (ww == w) dup = true;
            if (!dup && !is_zero(w)) model.W.push_back(w);
        }
        log.added = added;
        model.transcript.push_back(std::move(log));
    }

    // final verification: I equals the difference ideal of W
    {
        std::vector<gb::Poly<F>> a = R.raw, b;
        for (const auto& w : model.W) b.push_back(R.R2->template diff_poly<F>(field, w, 0, 1));
        std::vector<gb::Poly<F>> af = a, bf = b;
        af.insert(af.end(), pres2.begin(), pres2.end());
        bf.insert(bf.end(), pres2.begin(), pres2.end());
        auto GA = gb::buchberger(field, R.R2->ord, af, R.budget);
        auto GB_ = gb::buchberger(field, R.R2->ord, bf, R.budget);
        model.verified = gb::ideal_contains(field, R.R2->ord, b, GA) &&
                         gb::ideal_contains(field, R.R2->ord, a, GB_);
    }
    // sort W canonically
    std::sort(model.W.begin(), model.W.end(),
              [](const ZVec& a, const ZVec& b) { return cmp_zvec(a, b) < 0; });
    model.tau_gens = model.W;
    {
        std::vector<ZVec> tg = model.W;
        if (tg.empty()) tg.push_back(zvec_zero(sig.dim()));
        AffineMonoid tauM(sig.dim(), tg);
        model.Y = tauM.presentation();
    }
    return model;
}

// ---------------------------------------------------------------------------
// Invariant functions and the noneffectiveness certificate.
// ---------------------------------------------------------------------------

template <class F>
struct InvariantBasis {
    // each element: list of (sigma element, coefficient)
    std::vector<std::vector<std::pair<ZVec, typename F::Elem>>> basis;
    std::vector<ZVec> monomials; // candidate sigma elements used
};

namespace detail {

inline mpz_class l1(const ZVec& v) {
    mpz_class s = 0;
    for (const auto& x : v) s += abs(x);
    return s;
}

// all sigma elements of l1-norm <= D (sigma inside N^d required)
inline std::vector<ZVec> elements_upto(const AffineMonoid& sig, int D) {
    for (const auto& g : sig.gens())
        for (const auto& c : g)
            if (c < 0)
                throw InvalidAmbient(
                    "degree-bounded enumeration needs sigma inside N^d");
    std::vector<ZVec> out;
    std::set<std::string> seen;
    std::deque<ZVec> work;
    ZVec zero = zvec_zero(sig.dim());
    out.push_back(zero);
    seen.insert(zvec_key(zero));
    work.push_back(zero);
    while (!work.empty()) {
        ZVec cur = work.front();
        work.pop_front();
        for (const auto& g : sig.gens()) {
            ZVec nxt = cur + g;
            if (l1(nxt) > D) continue;
            if (!seen.insert(zvec_key(nxt)).second) continue;
            out.push_back(nxt);
            work.push_back(nxt);
        }
    }
    std::sort(out.begin(), out.end(), [](const ZVec& a, const ZVec& b) {
        return cmp_zvec(a, b) < 0;
    });
    return out;
}

// kernel basis of the linear map c -> sum c_i * cols_i over a field
template <class F>
std::vector<std::vector<typename F::Elem>> field_kernel(
    const F& field, const std::vector<std::vector<typename F::Elem>>& cols, int rows) {
    int n = (int)cols.size();
    std::vector<std::vector<typename F::Elem>> A(rows,
                                                 std::vector<typename F::Elem>(n, field.zero()));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < rows; ++i) A[i][j] = cols[j][i];
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
            for (int c = 0; c < n; ++c)
                A[r][c] = field.sub(A[r][c], field.mul(f, A[rank][c]));
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_piv(n, false);
    for (int c : pivot_col) is_piv[c] = true;
    std::vector<std::vector<typename F::Elem>> out;
    for (int freec = 0; freec < n; ++freec) {
        if (is_piv[freec]) continue;
        std::vector<typename F::Elem> v(n, field.zero());
        v[freec] = field.one();
        for (int r = 0; r < rank; ++r) v[pivot_col[r]] = field.neg(A[r][freec]);
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace detail

template <class F>
InvariantBasis<F> invariant_functions(const ToricRelation<F>& R, int D) {
    const F& field = R.field;
    InvariantBasis<F> out;
    out.monomials = detail::elements_upto(*R.sig, D);
    std::vector<gb::Poly<F>> igens = R.raw;
    auto pres = R.R2->template presentation_polys<F>(field);
    igens.insert(igens.end(), pres.begin(), pres.end());
    auto G = gb::buchberger(field, R.R2->ord, igens, R.budget);

    bool std_graded = true;
    for (const auto& g : R.raw) {
        mpz_class d0 = detail::l1(R.R2->mdeg(g[0].e));
        for (const auto& t : g)
            if (detail::l1(R.R2->mdeg(t.e)) != d0) std_graded = false;
    }
    // group candidates by total degree when the ideal is graded
    std::map<std::string, std::vector<int>> slices;
    for (std::size_t i = 0; i < out.monomials.size(); ++i) {
        std::string key = std_graded ? detail::l1(out.monomials[i]).get_str() : "all";
        slices[key].push_back((int)i);
    }
    for (const auto& [key, idxs] : slices) {
        // columns: NF(x^s - y^s) coefficients over the support monomials
        std::map<std::string, int> support;
        std::vector<std::vector<std::pair<int, typename F::Elem>>> sparse;
        for (int i : idxs) {
            const ZVec& s = out.monomials[i];
            auto diff = R.R2->template diff_poly<F>(field, s, 0, 1);
            auto nf = gb::normal_form(field, R.R2->ord, diff, G.basis);
            std::vector<std::pair<int, typename F::Elem>> col;
            for (const auto& t : nf) {
                std::string k2;
                for (int x : t.e) k2 += std::to_string(x) + ",";
                if (!support.count(k2)) support[k2] = (int)support.size();
                col.push_back({support[k2], t.c});
            }
            sparse.push_back(std::move(col));
        }
        int rows = (int)support.size();
        std::vector<std::vector<typename F::Elem>> cols;
        for (const auto& sc : sparse) {
            std::vector<typename F::Elem> c(rows, field.zero());
            for (const auto& [r, v] : sc) c[r] = field.add(c[r], v);
            cols.push_back(std::move(c));
        }
        auto ker = detail::field_kernel(field, cols, rows);
        for (const auto& v : ker) {
            std::vector<std::pair<ZVec, typename F::Elem>> f;
            for (std::size_t j = 0; j < v.size(); ++j)
                if (!field.is_zero(v[j])) f.push_back({out.monomials[idxs[j]], v[j]});
            out.basis.push_back(std::move(f));
        }
    }
    return out;
}

template <class F>
struct NoneffectiveCertificate {
    bool holds = false;
    InvariantBasis<F> basis;
};

template <class F>
NoneffectiveCertificate<F> certify_noneffective(const ToricRelation<F>& R,
                                                const gb::Poly<F>& g, int D) {
    const F& field = R.field;
    // g must be in I and homogeneous of total degree D
    std::vector<gb::Poly<F>> igens = R.raw;
    auto pres = R.R2->template presentation_polys<F>(field);
    igens.insert(igens.end(), pres.begin(), pres.end());
    auto G = gb::buchberger(field, R.R2->ord, igens, R.budget);
    if (!gb::normal_form(field, R.R2->ord, g, G.basis).empty())
        throw GNotInI("certify_noneffective: g is not in the ideal");
    for (const auto& t : g)
        if (detail::l1(R.R2->mdeg(t.e)) != D)
            throw InvalidAmbient("certify_noneffective: g not homogeneous of degree D");
    for (const auto& raw : R.raw) {
        mpz_class d0 = detail::l1(R.R2->mdeg(raw[0].e));
        for (const auto& t : raw)
            if (detail::l1(R.R2->mdeg(t.e)) != d0)
                throw InvalidAmbient(
                    "certify_noneffective: ideal is not graded by total degree");
    }

    NoneffectiveCertificate<F> cert;
    cert.basis = invariant_functions(R, D);
    std::vector<gb::Poly<F>> dgens = pres;
    for (const auto& f : cert.basis.basis) {
        std::vector<gb::Term<F>> terms;
        for (const auto& [s, c] : f) {
            terms.push_back({c, R.R2->mono_expo(0, s)});
            terms.push_back({field.neg(c), R.R2->mono_expo(1, s)});
        }
        auto p = gb::poly_normalize(field, R.R2->ord, std::move(terms));
        if (!p.empty()) dgens.push_back(p);
    }
    auto GD = gb::buchberger(field, R.R2->ord, dgens, R.budget);
    cert.holds = !gb::normal_form(field, R.R2->ord, g, GD.basis).empty();
    return cert;
}

} // namespace torq

#endif
