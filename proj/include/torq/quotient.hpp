#ifndef TORQ_QUOTIENT_HPP
#define TORQ_QUOTIENT_HPP

#include "torq/equiv.hpp"

namespace torq {

// ---------------------------------------------------------------------------
// Invariant subring, module-finiteness over it, and the existence of an
// effective geometric quotient.
// ---------------------------------------------------------------------------

struct InvariantMonoid {
    std::vector<ZVec> gens;   // minimal generators found up to the depth bound
    bool stabilized = false;  // heuristic: last two layers added nothing new
    int depth = 0;
};

// invariant elements {s : x^s - y^s in I} up to generator-depth D, reduced
// to a generating set
template <class F>
InvariantMonoid invariant_monoid(const ToricRelation<F>& R, int D) {
    const F& field = R.field;
    const AffineMonoid& sig = *R.sig;
    std::vector<gb::Poly<F>> igens = R.raw;
    auto pres = R.R2->template presentation_polys<F>(field);
    igens.insert(igens.end(), pres.begin(), pres.end());
    auto G = gb::buchberger(field, R.R2->ord, igens, R.budget);

    auto invariant = [&](const ZVec& s) {
        auto diff = R.R2->template diff_poly<F>(field, s, 0, 1);
        return gb::normal_form(field, R.R2->ord, diff, G.basis).empty();
    };

    // layer t = sums of exactly t generators
    std::map<std::string, int> first_depth;
    std::vector<std::pair<ZVec, int>> found; // invariant elements with depth
    std::set<std::string> layer_seen;
    std::vector<ZVec> layer{zvec_zero(sig.dim())};
    layer_seen.insert(zvec_key(layer[0]));
    for (int depth = 1; depth <= D; ++depth) {
        std::vector<ZVec> next;
        std::set<std::string> next_seen;
        for (const auto& cur : layer)
            for (const auto& g : sig.gens()) {
                ZVec s = cur + g;
                std::string k = zvec_key(s);
                if (!next_seen.insert(k).second) continue;
                next.push_back(s);
            }
        for (const auto& s : next) {
            std::string k = zvec_key(s);
            if (first_depth.count(k)) continue;
            if (invariant(s)) {
                first_depth[k] = depth;
                found.push_back({s, depth});
            }
        }
        layer = std::move(next);
    }
    // reduce to monoid generators, smallest first
    std::sort(found.begin(), found.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second < b.second;
        return cmp_zvec(a.first, b.first) < 0;
    });
    InvariantMonoid out;
    out.depth = D;
    int last_new_depth = 0;
    for (const auto& [s, depth] : found) {
        if (is_zero(s)) continue;
        bool redundant = false;
        if (!out.gens.empty()) {
            AffineMonoid part(sig.dim(), out.gens);
            redundant = part.contains(s).has_value();
        }
        if (!redundant) {
            out.gens.push_back(s);
            last_new_depth = depth;
        }
    }
    out.stabilized = (last_new_depth <= D - 2);
    return out;
}

struct Finiteness {
    bool cone_equal = false;
    bool index_finite = false;
    mpz_class group_index = 0;
};

// k[sigma] is a finite k[tau'] module iff the cones agree and grp(tau') has
// finite index in grp(sigma)
inline Finiteness finiteness(const AffineMonoid& sigma, const std::vector<ZVec>& tau_gens) {
    Finiteness out;
    if (tau_gens.empty()) {
        out.cone_equal = false;
        return out;
    }
    for (const auto& t : tau_gens)
        if (!sigma.contains(t)) throw NotASubmonoid("finiteness: tau not inside sigma");
    AffineMonoid tauM(sigma.dim(), tau_gens);
    out.cone_equal = true;
    for (const auto& g : sigma.gens())
        if (!tauM.in_cone(g)) out.cone_equal = false;
    auto q = lattice_quotient(tauM.grp(), sigma.grp());
    out.index_finite = q.finite;
    out.group_index = q.index;
    return out;
}

// finiteness of k[sigma] over k[tau'] through the graph ideal
// (w_j - x^{tau_j}) + presentation(sigma), x-block integral over the w's
template <class F>
bool graph_module_finite(const F& field, const AffineMonoid& sigma,
                         const std::vector<ZVec>& tau_gens,
                         const gb::GbBudget& budget = gb::GbBudget{}) {
    int k = (int)sigma.gens().size();
    int m = (int)tau_gens.size();
    int nv = k + m;
    std::vector<int> blk(nv, 1);
    for (int i = 0; i < k; ++i) blk[i] = 0; // x-block dominant
    gb::MonOrder ord = gb::MonOrder::blocks_grevlex(blk);
    std::vector<gb::Poly<F>> gens;
    const ToricPresentation& P = sigma.presentation();
    for (const auto& [ea, eb] : P.diff_pairs) {
        gb::Expo e1(nv, 0), e2(nv, 0);
        for (int i = 0; i < k; ++i) {
            e1[i] = ea[i];
            e2[i] = eb[i];
        }
        gens.push_back(gb::poly_normalize<F>(field, ord,
                                             {{field.one(), e1}, {field.neg(field.one()), e2}}));
    }
    for (int j = 0; j < m; ++j) {
        auto w = sigma.contains(tau_gens[j]);
        if (!w) throw NotASubmonoid("graph_module_finite: tau generator outside sigma");
        gb::Expo ew(nv, 0), ex(nv, 0);
        ew[k + j] = 1;
        for (int i = 0; i < k; ++i) ex[i] = (int)(*w)[i].get_si();
        gens.push_back(gb::poly_normalize<F>(field, ord,
                                             {{field.one(), ew}, {field.neg(field.one()), ex}}));
    }
    std::vector<int> dep;
    for (int i = 0; i < k; ++i) dep.push_back(i);
    return finite_over_vars(field, ord, gens, dep, budget);
}

struct QuotientReport {
    enum class Verdict { EffectiveGeometricQuotient, NoFiniteQuotient, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    EffectiveModel model;
    InvariantMonoid invariants;
    Finiteness fin;
    bool graph_finite = false;
    bool ideal_match = false; // difference ideal of tau' equals I
    ToricPresentation Y;
    // certificate for NoFiniteQuotient
    std::string certificate;
    ZVec facet;     // functional nonnegative on sigma
    ZVec witness;   // sigma generator with facet value 0
    bool sound_certificate = false; // true: proof; false: stabilized-prefix evidence
};

struct QuotientOptions {
    int depth = 8;
    EffectivizeOptions eff;
};

template <class F>
QuotientReport quotient_compute(const ToricRelation<F>& R, QuotientOptions opts = {}) {
    const F& field = R.field;
    const AffineMonoid& sig = *R.sig;
    QuotientReport rep;
    rep.model = effectivize(R, opts.eff);
    rep.invariants = invariant_monoid(R, opts.depth);

    // sound non-finiteness certificate: a facet functional of cone(sigma),
    // strictly positive on every tau generator but vanishing on some sigma
    // generator. Every nonzero invariant then has positive value, so no
    // multiple of that generator is invariant and the module is not finite.
    if (rep.model.verified && !rep.model.W.empty()) {
        for (const auto& f : sig.facets()) {
            bool pos_on_tau = true;
            for (const auto& w : rep.model.W)
                if (dot(f, w) <= 0) pos_on_tau = false;
            if (!pos_on_tau) continue;
            for (const auto& g : sig.gens()) {
                if (is_zero(g)) continue;
                if (dot(f, g) == 0) {
                    rep.verdict = QuotientReport::Verdict::NoFiniteQuotient;
                    rep.facet = f;
                    rep.witness = g;
                    rep.sound_certificate = true;
                    rep.certificate =
                        "cone separation: the facet functional is positive on every "
                        "invariant but vanishes on the generator, so no multiple of the "
                        "generator is invariant";
                    return rep;
                }
            }
        }
    }

    if (!rep.invariants.stabilized) {
        rep.verdict = QuotientReport::Verdict::Inconclusive;
        rep.certificate = "invariant generators did not stabilize within depth " +
                          std::to_string(opts.depth);
        return rep;
    }

    rep.fin = finiteness(sig, rep.invariants.gens);
    if (rep.fin.cone_equal && rep.fin.index_finite) {
        // verify the quotient presentation exactly: difference ideal of tau'
        // equals I
        std::vector<gb::Poly<F>> dgens;
        for (const auto& w : rep.invariants.gens)
            dgens.push_back(R.R2->template diff_poly<F>(field, w, 0, 1));
        auto pres = R.R2->template presentation_polys<F>(field);
        std::vector<gb::Poly<F>> a = R.raw, b = dgens;
        a.insert(a.end(), pres.begin(), pres.end());
        b.insert(b.end(), pres.begin(), pres.end());
        auto GA = gb::buchberger(field, R.R2->ord, a, R.budget);
        auto GB_ = gb::buchberger(field, R.R2->ord, b, R.budget);
        rep.ideal_match = gb::ideal_contains(field, R.R2->ord, dgens, GA) &&
                          gb::ideal_contains(field, R.R2->ord, R.raw, GB_);
        rep.graph_finite = graph_module_finite(field, sig, rep.invariants.gens, R.budget);
        if (rep.ideal_match && rep.graph_finite && rep.model.verified) {
            rep.verdict = QuotientReport::Verdict::EffectiveGeometricQuotient;
            AffineMonoid tauM(sig.dim(), rep.invariants.gens);
            rep.Y = tauM.presentation();
        } else {
            rep.verdict = QuotientReport::Verdict::Inconclusive;
            rep.certificate = "finiteness held but the verification chain failed";
        }
        return rep;
    }

    // cone separation on the stabilized prefix
    rep.verdict = QuotientReport::Verdict::NoFiniteQuotient;
    rep.sound_certificate = false;
    if (!rep.fin.cone_equal && !rep.invariants.gens.empty()) {
        AffineMonoid tauM(sig.dim(), rep.invariants.gens);
        for (const auto& g : sig.gens()) {
            if (tauM.in_cone(g)) continue;
            rep.witness = g;
            for (const auto& f : tauM.facets())
                if (dot(f, g) < 0) rep.facet = f;
            break;
        }
        rep.certificate = "cone(tau') does not contain cone(sigma) on the stabilized prefix";
    } else {
        rep.certificate = "grp(tau') has infinite index in grp(sigma) on the stabilized prefix";
    }
    return rep;
}

} // namespace torq

#endif
