#ifndef TORQ_AMITSUR_HPP
#define TORQ_AMITSUR_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torq/field.hpp"
#include "torq/tensor.hpp"

namespace torq {

// Truncated Amitsur complex of the monoid-ring map k[tau] -> k[sigma].
// Fibered over sigma-degrees: C^{n-1} = B^{(x)n} with differentials
// d(b1 x ... x bm) = sum_{i=1}^{m+1} (-1)^i (unit inserted at slot i).
// Restricted to pointed sigma, where degree fibers are finite.
class AmitsurComplex {
public:
    AmitsurComplex(const AffineMonoid& sigma, std::vector<ZVec> tau_images,
                   TensorBudget budget = TensorBudget{});

    const AffineMonoid& sigma() const { return *sig_; }
    const TensorContext& tensor() const { return tctx_; }

    struct Fiber {
        std::vector<Tuple> reps;             // canonical class representatives
        std::map<std::string, int> class_of; // tuple key -> class index
    };

    // basis of the degree-d fiber of B^{(x)n}
    const Fiber& fiber(int n, const ZVec& d) const;

    int class_index(int n, const ZVec& d, const Tuple& t) const;

    // matrix of d : B^{(x)n} -> B^{(x)(n+1)} on the degree-d fiber
    // (rows = level n+1 classes, columns = level n classes, integer entries)
    IntMat differential(int n, const ZVec& d) const;

    struct DegreeEntry {
        ZVec degree;
        std::vector<int> dims;   // dim of B^{(x)n} fiber, n = 1..n_max+1
        std::vector<int> h;      // h^i for i = 1..n_max-1
        bool dd_zero = true;     // all compositions vanish
    };
    struct Table {
        std::string field;
        int n_max;
        std::vector<DegreeEntry> entries;
    };

    // exact ranks over Q (p = 0) or F_p
    Table cohomology_table(int n_max, const std::vector<ZVec>& degrees,
                           std::uint64_t p = 0) const;

    std::string tuple_key(const Tuple& t) const;

private:
    const AffineMonoid* sig_;
    TensorContext tctx_;
    TensorBudget budget_;
    mutable std::map<std::string, Fiber> fiber_cache_;

    std::vector<ZVec> elements_below(const ZVec& d) const; // sigma cap (d - cone)
};

int rank_over_q(const IntMat& M);
int rank_over_fp(const IntMat& M, std::uint64_t p);

// Sparse cochain keyed by canonical representatives.
template <class F>
struct Cochain {
    std::map<std::string, std::pair<Tuple, typename F::Elem>> terms;
};

template <class F>
void cochain_add(const F& field, const AmitsurComplex& C, Cochain<F>& dst, const Tuple& t,
                 const typename F::Elem& c) {
    Tuple canon = C.tensor().normalize(t);
    std::string k = C.tuple_key(canon);
    auto it = dst.terms.find(k);
    if (it == dst.terms.end()) {
        if (!field.is_zero(c)) dst.terms[k] = {canon, c};
        return;
    }
    it->second.second = field.add(it->second.second, c);
    if (field.is_zero(it->second.second)) dst.terms.erase(it);
}

template <class F>
Cochain<F> cochain_d(const F& field, const AmitsurComplex& C, const Cochain<F>& f) {
    Cochain<F> out;
    for (const auto& [k, tc] : f.terms) {
        const Tuple& m = tc.first;
        int n = static_cast<int>(m.size());
        for (int i = 1; i <= n + 1; ++i) {
            typename F::Elem s = (i % 2 == 1) ? field.neg(tc.second) : tc.second;
            cochain_add(field, C, out, C.tensor().xi(m, i), s);
        }
    }
    return out;
}

template <class F>
bool cochain_eq(const F& field, const Cochain<F>& a, const Cochain<F>& b) {
    if (a.terms.size() != b.terms.size()) return false;
    auto it = a.terms.begin();
    auto jt = b.terms.begin();
    for (; it != a.terms.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (!field.eq(it->second.second, jt->second.second)) return false;
    }
    return true;
}

// Constructive preimage from the exactness proof: given an (n-1)-cocycle f
// in B^{(x)n} (normalized terms), produce g with d(g) = f by descending on
// dominant terms. Verified exactly before returning.
template <class F>
Cochain<F> cocycle_reduce(const F& field, const AmitsurComplex& C, int n, const Cochain<F>& fin,
                          long max_steps = 200000) {
    for (const auto& [k, tc] : fin.terms)
        if (static_cast<int>(tc.first.size()) != n)
            throw DimensionMismatch("cocycle_reduce: term level mismatch");
    if (n < 2) throw DimensionMismatch("cocycle_reduce: need n >= 2");
    {
        Cochain<F> df = cochain_d(field, C, fin);
        if (!df.terms.empty()) throw NotACocycle("cocycle_reduce: d(f) != 0");
    }
    auto type_key = [&](const Tuple& t) {
        std::vector<int> ty;
        for (const auto& s : t) ty.push_back(is_zero(s) ? 0 : 1);
        return ty;
    };
    Cochain<F> f = fin;
    Cochain<F> g;
    long steps = 0;
    while (!f.terms.empty()) {
        if (++steps > max_steps)
            throw InternalInvariantViolated("cocycle_reduce: descent did not terminate");
        // dominant term: maximal type in the 1>0 lexicographic order
        const Tuple* dom = nullptr;
        typename F::Elem domc = field.zero();
        std::vector<int> domty;
        for (const auto& [k, tc] : f.terms) {
            auto ty = type_key(tc.first);
            if (!dom || ty > domty) {
                dom = &tc.first;
                domc = tc.second;
                domty = ty;
            }
        }
        Tuple m = *dom;
        int r = 0;
        for (int i = 0; i < n; ++i)
            if (!is_zero(m[i])) r = i + 1;
        Tuple p;
        if (r < n) {
            p = Tuple(m.begin(), m.end() - 1); // drop one trailing identity
        } else {
            // no trailing identities: the proof leaves only the single-slot
            // commuting case
            int nonzero = 0;
            for (const auto& s : m)
                if (!is_zero(s)) ++nonzero;
            if (nonzero != 1)
                throw InternalInvariantViolated(
                    "cocycle_reduce: dominant term admits no descent");
            ZVec s = m[r - 1];
            Tuple two0{s, zvec_zero(C.sigma().dim())};
            Tuple two1{zvec_zero(C.sigma().dim()), s};
            if (!C.tensor().equals(two0, two1))
                throw InternalInvariantViolated(
                    "cocycle_reduce: non-commuting single slot dominant");
            p = Tuple(n - 1, zvec_zero(C.sigma().dim()));
            p[0] = s;
        }
        Cochain<F> dp;
        for (int i = 1; i <= n; ++i) {
            typename F::Elem s = (i % 2 == 1) ? field.neg(field.one()) : field.one();
            cochain_add(field, C, dp, C.tensor().xi(p, i), s);
        }
        std::string mk = C.tuple_key(C.tensor().normalize(m));
        auto hit = dp.terms.find(mk);
        if (hit == dp.terms.end() || field.is_zero(hit->second.second))
            throw InternalInvariantViolated("cocycle_reduce: descent step misses dominant term");
        typename F::Elem lam = field.div(domc, hit->second.second);
        cochain_add(field, C, g, p, lam);
        for (const auto& [k2, tc2] : dp.terms)
            cochain_add(field, C, f, tc2.first, field.neg(field.mul(lam, tc2.second)));
    }
    // exact verification
    Cochain<F> check = cochain_d(field, C, g);
    if (!cochain_eq(field, check, fin))
        throw InternalInvariantViolated("cocycle_reduce: verification failed");
    return g;
}

} // namespace torq

#endif
