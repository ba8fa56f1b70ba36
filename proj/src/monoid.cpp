#include "torq/monoid.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace torq {

namespace {

ZVec primitive(ZVec v) {
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

} // namespace

std::vector<ZVec> cone_facets(const std::vector<ZVec>& rays, int dim) {
    // Project {(lambda, x) : lambda >= 0, x = sum lambda_i g_i} onto x.
    int k = static_cast<int>(rays.size());
    int nv = k + dim;
    std::vector<ZVec> rows;
    for (int i = 0; i < k; ++i) {
        ZVec r = zvec_zero(nv);
        r[i] = 1;
        rows.push_back(r);
    }
    for (int j = 0; j < dim; ++j) {
        ZVec r = zvec_zero(nv);
        r[k + j] = 1;
        for (int i = 0; i < k; ++i) r[i] = -rays[i][j];
        rows.push_back(r);
        rows.push_back(-r);
    }
    auto dedupe = [&](std::vector<ZVec>& rs) {
        std::set<std::string> seen;
        std::vector<ZVec> out;
        for (auto& r : rs) {
            if (is_zero(r)) continue;
            ZVec p = primitive(r);
            if (seen.insert(zvec_key(p)).second) out.push_back(p);
        }
        rs = std::move(out);
    };
    dedupe(rows);
    for (int v = 0; v < k; ++v) {
        std::vector<ZVec> zero, pos, neg;
        for (auto& r : rows) {
            int s = sgn(r[v]);
            if (s == 0)
                zero.push_back(r);
            else if (s > 0)
                pos.push_back(r);
            else
                neg.push_back(r);
        }
        std::vector<ZVec> next = zero;
        for (const auto& p : pos)
            for (const auto& n : neg) next.push_back((-n[v]) * p + p[v] * n);
        dedupe(next);
        rows = std::move(next);
    }
    std::vector<ZVec> facets;
    std::set<std::string> seen;
    for (const auto& r : rows) {
        ZVec f(r.begin() + k, r.end());
        if (is_zero(f)) continue;
        f = primitive(f);
        if (seen.insert(zvec_key(f)).second) facets.push_back(f);
    }
    std::sort(facets.begin(), facets.end(),
              [](const ZVec& a, const ZVec& b) { return cmp_zvec(a, b) < 0; });
    return facets;
}

AffineMonoid::AffineMonoid(int d, std::vector<ZVec> generators, MonoidBudget budget)
    : d_(d), budget_(budget) {
    if (generators.empty()) throw EmptyGenerators("monoid_new: need at least one generator");
    std::set<std::string> seen;
    for (auto& g : generators) {
        if (static_cast<int>(g.size()) != d) throw DimensionMismatch("monoid_new: generator size");
        if (seen.insert(zvec_key(g)).second) gens_.push_back(g);
    }
    grp_ = lattice_from_rows(d_, gens_);
    satgrp_ = saturate(grp_);
    facets_ = cone_facets(gens_, d_);

    // l(sigma) = lattice generated by the generators lying in the lineality
    // space of cone(sigma); the unit block generates a group.
    {
        std::vector<ZVec> urows;
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            bool unit_dir = true;
            for (const auto& f : facets_)
                if (dot(f, gens_[i]) != 0) { unit_dir = false; break; }
            if (unit_dir) {
                unit_idx_.push_back(static_cast<int>(i));
                urows.push_back(gens_[i]);
            } else {
                nonunit_idx_.push_back(static_cast<int>(i));
            }
        }
        units_ = lattice_from_rows(d_, urows);
    }
    lsat_ = lattice_intersect(saturate(units_), grp_);
    pointed_ = (units_.rank() == 0);

    // class machinery: SNF of units_ in grp coordinates
    {
        int g = grp_.rank();
        int r0 = units_.rank();
        IntMat UC(r0, g);
        for (int i = 0; i < r0; ++i) {
            auto c = lattice_member(grp_, units_.basis.row(i));
            if (!c) throw InternalInvariantViolated("units not inside grp");
            UC.set_row(i, *c);
        }
        SnfResult s = snf(UC);
        // D = U*UC*V, so rowspace(UC) = span{d_i * w_i} with w_i = rows of
        // V^{-1}; coordinates in the w-basis are alpha = gc * V.
        alpha_map_ = s.V;
        if (s.rank != r0) throw InternalInvariantViolated("unit lattice rank drop");
        units_rank_ = s.rank;
        torsion_d_.assign(s.rank, mpz_class(0));
        for (int i = 0; i < s.rank; ++i) torsion_d_[i] = s.D.at(i, i);
        sigtil_dim_ = g - s.rank;
    }

    for (const auto& g : gens_) sigtil_gens_.push_back(sigtil_coords(g));
    sigtil_facets_ = cone_facets(sigtil_gens_, sigtil_dim_);
    // sigma-tilde must be pointed: every nonzero generator image sees a
    // strictly positive facet functional
    for (const auto& sg : sigtil_gens_) {
        if (is_zero(sg)) continue;
        bool pos = false;
        for (const auto& f : sigtil_facets_)
            if (dot(f, sg) > 0) { pos = true; break; }
        if (!pos) throw InternalInvariantViolated("sigma-tilde not pointed");
    }

    // N-expressions of -u over the unit-block generators
    int q = static_cast<int>(unit_idx_.size());
    for (int uj = 0; uj < q; ++uj) {
        ZVec target = -gens_[unit_idx_[uj]];
        std::optional<ZVec> found;
        for (long bound = 1; bound <= 4096 && !found; bound *= 2) {
            std::vector<long> mult(q, 0);
            std::function<bool(int, long, ZVec)> dfs = [&](int idx, long left, ZVec rem) -> bool {
                if (is_zero(rem)) {
                    ZVec w(q);
                    for (int t = 0; t < q; ++t) w[t] = mult[t];
                    found = w;
                    return true;
                }
                if (idx == q) return false;
                for (long m = left; m >= 0; --m) {
                    mult[idx] = m;
                    if (dfs(idx + 1, left - m, rem - mpz_class(m) * gens_[unit_idx_[idx]]))
                        return true;
                }
                mult[idx] = 0;
                return false;
            };
            dfs(0, bound, target);
        }
        if (!found)
            throw BudgetExceeded("monoid_new: could not invert unit generator " +
                                 zvec_str(gens_[unit_idx_[uj]]));
        neg_unit_expr_.push_back(*found);
    }
}

ZVec AffineMonoid::sigtil_coords(const ZVec& v) const {
    auto gc = lattice_member(grp_, v);
    if (!gc) throw InternalInvariantViolated("sigtil_coords: vector not in grp");
    int g = grp_.rank();
    ZVec alpha = zvec_zero(g);
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < g; ++i) alpha[j] += (*gc)[i] * alpha_map_.at(i, j);
    return ZVec(alpha.begin() + units_rank_, alpha.end());
}

ZVec AffineMonoid::sigtil_order_key(const ZVec& coords) const {
    ZVec key;
    for (const auto& f : sigtil_facets_) key.push_back(dot(f, coords));
    for (const auto& c : coords) key.push_back(c);
    return key;
}

SigmaBarClass AffineMonoid::rbar_class(const ZVec& v) const {
    auto gc = lattice_member(grp_, v);
    if (!gc) throw InternalInvariantViolated("rbar_class: vector not in grp");
    int g = grp_.rank();
    ZVec alpha = zvec_zero(g);
    for (int j = 0; j < g; ++j)
        for (int i = 0; i < g; ++i) alpha[j] += (*gc)[i] * alpha_map_.at(i, j);
    SigmaBarClass c;
    c.free_part = ZVec(alpha.begin() + units_rank_, alpha.end());
    for (int i = 0; i < units_rank_; ++i) {
        mpz_class m;
        mpz_fdiv_r(m.get_mpz_t(), alpha[i].get_mpz_t(), torsion_d_[i].get_mpz_t());
        c.torsion.push_back(m);
    }
    return c;
}

OrderRel AffineMonoid::rdeg_compare_classes(const SigmaBarClass& a, const SigmaBarClass& b) const {
    ZVec ka = sigtil_order_key(a.free_part);
    ZVec kb = sigtil_order_key(b.free_part);
    int c = cmp_zvec(ka, kb);
    if (c < 0) return OrderRel::LT;
    if (c > 0) return OrderRel::GT;
    return a.torsion == b.torsion ? OrderRel::EQ : OrderRel::INCOMPARABLE;
}

OrderRel AffineMonoid::rdeg_compare(const ZVec& a, const ZVec& b) const {
    return rdeg_compare_classes(rbar_class(a), rbar_class(b));
}

std::pair<ZVec, ZVec> AffineMonoid::class_order_tuple(const ZVec& v) const {
    SigmaBarClass c = rbar_class(v);
    return {sigtil_order_key(c.free_part), c.torsion};
}

bool AffineMonoid::in_cone(const ZVec& v) const {
    if (!lattice_member(satgrp_, v)) return false;
    for (const auto& f : facets_)
        if (dot(f, v) < 0) return false;
    return true;
}

std::optional<ZVec> AffineMonoid::contains(const ZVec& v) const {
    auto it = contains_cache_.find(v);
    if (it != contains_cache_.end()) return it->second;
    auto res = contains_uncached(v);
    contains_cache_[v] = res;
    return res;
}

std::optional<ZVec> AffineMonoid::contains_uncached(const ZVec& v) const {
    if (static_cast<int>(v.size()) != d_) throw DimensionMismatch("monoid_contains");
    if (!lattice_member(grp_, v)) return std::nullopt;
    for (const auto& f : facets_)
        if (dot(f, v) < 0) return std::nullopt;

    int q = static_cast<int>(nonunit_idx_.size());
    long nodes = 0;
    std::vector<long> mult(q, 0);
    std::optional<ZVec> witness;
    std::set<std::string> dead;

    // residual must land in l(sigma), the lattice of unit-block generators
    auto finish = [&](const ZVec& rem) -> bool {
        if (!lattice_member(units_, rem)) return false;
        int uq = static_cast<int>(unit_idx_.size());
        ZVec w = zvec_zero(gens_.size());
        for (int i2 = 0; i2 < q; ++i2) w[nonunit_idx_[i2]] = mult[i2];
        if (uq == 0) {
            if (!is_zero(rem)) return false;
            witness = w;
            return true;
        }
        IntMat A(d_, uq);
        for (int j = 0; j < uq; ++j)
            for (int c = 0; c < d_; ++c) A.at(c, j) = gens_[unit_idx_[j]][c];
        auto sol = solve_affine(A, rem);
        if (!sol) return false;
        for (int j = 0; j < uq; ++j) {
            const mpz_class& cj = sol->particular[j];
            if (cj >= 0) {
                w[unit_idx_[j]] += cj;
            } else {
                for (int t = 0; t < uq; ++t) w[unit_idx_[t]] += (-cj) * neg_unit_expr_[j][t];
            }
        }
        witness = w;
        return true;
    };

    std::function<bool(int, ZVec)> dfs = [&](int idx, ZVec rem) -> bool {
        if (++nodes > budget_.membership_nodes)
            throw BudgetExceeded("monoid_contains: node budget exceeded");
        for (const auto& f : facets_)
            if (dot(f, rem) < 0) return false;
        if (idx == q) return finish(rem);
        std::string key = std::to_string(idx) + "#" + zvec_key(rem);
        if (dead.count(key)) return false;
        const ZVec& g = gens_[nonunit_idx_[idx]];
        long mmax = -1;
        for (const auto& f : facets_) {
            mpz_class fg = dot(f, g);
            if (fg > 0) {
                mpz_class b = dot(f, rem) / fg;
                long bl = b.get_si();
                if (mmax < 0 || bl < mmax) mmax = bl;
            }
        }
        if (mmax < 0) throw InternalInvariantViolated("non-unit generator unbounded");
        for (long m = mmax; m >= 0; --m) {
            mult[idx] = m;
            if (dfs(idx + 1, rem - mpz_class(m) * g)) return true;
        }
        mult[idx] = 0;
        dead.insert(key);
        return false;
    };
    if (!dfs(0, v)) return std::nullopt;
    return witness;
}

QuotientMonoid rbar(const AffineMonoid& m) {
    QuotientMonoid q;
    q.source = &m;
    q.unit_lattice = &m.units();
    q.saturated_lattice = &m.saturated_units();
    q.sigtil_dim = m.sigtil_dim();
    q.torsion = m.torsion_invariants();
    return q;
}

MonoidHom hom_new(const AffineMonoid& tau, const AffineMonoid& sigma,
                  const std::vector<ZVec>& images) {
    if (images.size() != tau.gens().size())
        throw DimensionMismatch("hom_new: one image per source generator");
    for (const auto& im : images)
        if (!sigma.contains(im)) throw ImageNotInTarget("hom_new: image " + zvec_str(im));
    IntMat G(static_cast<int>(tau.gens().size()), tau.dim());
    for (std::size_t i = 0; i < tau.gens().size(); ++i)
        G.set_row(static_cast<int>(i), tau.gens()[i]);
    Lattice K = kernel_lattice(G);
    for (int i = 0; i < K.rank(); ++i) {
        ZVec comb = zvec_zero(sigma.dim());
        for (std::size_t j = 0; j < images.size(); ++j)
            for (int c = 0; c < sigma.dim(); ++c)
                comb[c] += K.basis.at(i, static_cast<int>(j)) * images[j][c];
        if (!is_zero(comb))
            throw RelationsNotRespected("hom_new: relation " + zvec_str(K.basis.row(i)));
    }
    return MonoidHom{&tau, &sigma, images};
}

std::string AffineMonoid::describe() const {
    std::ostringstream os;
    os << "AffineMonoid(d=" << d_ << ", gens=";
    for (const auto& g : gens_) os << zvec_str(g);
    os << ", pointed=" << (pointed_ ? "yes" : "no") << ")";
    return os.str();
}

} // namespace torq
