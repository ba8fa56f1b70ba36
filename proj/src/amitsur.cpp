#include "torq/amitsur.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace torq {

AmitsurComplex::AmitsurComplex(const AffineMonoid& sigma, std::vector<ZVec> tau_images,
                               TensorBudget budget)
    : sig_(&sigma), tctx_(sigma, tau_images, budget), budget_(budget) {
    if (!sigma.pointed())
        throw NonPointedUnsupported("amitsur: fiber enumeration needs a pointed monoid");
}

std::string AmitsurComplex::tuple_key(const Tuple& t) const {
    std::string k;
    for (const auto& s : t) k += zvec_key(s) + ";";
    return k;
}

std::vector<ZVec> AmitsurComplex::elements_below(const ZVec& d) const {
    // {s in sigma : d - s in cone(sigma)}, enumerated by generator closure
    std::vector<ZVec> out;
    std::set<std::string> seen;
    std::deque<ZVec> work;
    ZVec zero = zvec_zero(sig_->dim());
    if (!sig_->in_cone(d)) return out;
    work.push_back(zero);
    seen.insert(zvec_key(zero));
    while (!work.empty()) {
        ZVec cur = work.front();
        work.pop_front();
        out.push_back(cur);
        if (static_cast<long>(out.size()) > budget_.max_fiber_nodes)
            throw FiberBudgetExceeded("amitsur: degree fiber too large");
        for (const auto& g : sig_->gens()) {
            ZVec nxt = cur + g;
            if (seen.count(zvec_key(nxt))) continue;
            if (!sig_->in_cone(d - nxt)) continue;
            seen.insert(zvec_key(nxt));
            work.push_back(nxt);
        }
    }
    std::sort(out.begin(), out.end(), [&](const ZVec& a, const ZVec& b) {
        return cmp_zvec(tctx_.slot_key(a), tctx_.slot_key(b)) < 0;
    });
    return out;
}

const AmitsurComplex::Fiber& AmitsurComplex::fiber(int n, const ZVec& d) const {
    std::string key = std::to_string(n) + "|" + zvec_key(d);
    auto it = fiber_cache_.find(key);
    if (it != fiber_cache_.end()) return it->second;

    Fiber fb;
    std::vector<ZVec> elems = elements_below(d);
    std::set<std::string> elem_keys;
    for (const auto& e : elems) elem_keys.insert(zvec_key(e));

    std::vector<Tuple> tuples;
    Tuple acc;
    std::function<void(int, ZVec)> rec = [&](int slot, ZVec rem) {
        if (slot == n - 1) {
            if (elem_keys.count(zvec_key(rem))) {
                acc.push_back(rem);
                tuples.push_back(acc);
                acc.pop_back();
                if (static_cast<long>(tuples.size()) > budget_.max_fiber_nodes)
                    throw FiberBudgetExceeded("amitsur: tuple fiber too large");
            }
            return;
        }
        for (const auto& e : elems) {
            if (!sig_->in_cone(rem - e)) continue;
            acc.push_back(e);
            rec(slot + 1, rem - e);
            acc.pop_back();
        }
    };
    if (sig_->in_cone(d)) rec(0, d);

    // union-find over tuples by transfer moves
    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < tuples.size(); ++i)
        idx[tuple_key(tuples[i])] = static_cast<int>(i);
    std::vector<int> parent(tuples.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
        const Tuple& t = tuples[ti];
        for (int i = 0; i < n; ++i)
            for (const auto& tv : tctx_.tau()) {
                ZVec moved = t[i] - tv;
                if (!sig_->contains(moved)) continue;
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    Tuple nb = t;
                    nb[i] = moved;
                    nb[j] = t[j] + tv;
                    auto f = idx.find(tuple_key(nb));
                    if (f == idx.end())
                        throw InternalInvariantViolated("amitsur: move left the fiber");
                    unite(static_cast<int>(ti), f->second);
                }
            }
    }
    // canonical representative per class, matching TensorContext::normalize
    std::map<int, int> root_to_class;
    std::vector<Tuple> reps;
    std::vector<ZVec> repkeys;
    auto tuple_rank_key = [&](const Tuple& t) {
        ZVec key;
        mpz_class nz = 0;
        for (const auto& s : t)
            if (!is_zero(s)) nz += 1;
        key.push_back(nz);
        for (const auto& s : t) key.push_back(is_zero(s) ? 1 : 0);
        for (const auto& s : t) {
            ZVec sk = tctx_.slot_key(s);
            key.insert(key.end(), sk.begin(), sk.end());
        }
        return key;
    };
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        int r = find(static_cast<int>(i));
        ZVec key = tuple_rank_key(tuples[i]);
        auto f = root_to_class.find(r);
        if (f == root_to_class.end()) {
            root_to_class[r] = static_cast<int>(reps.size());
            reps.push_back(tuples[i]);
            repkeys.push_back(key);
        } else if (cmp_zvec(key, repkeys[f->second]) < 0) {
            reps[f->second] = tuples[i];
            repkeys[f->second] = key;
        }
    }
    std::vector<int> perm(reps.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return cmp_zvec(repkeys[a], repkeys[b]) < 0; });
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<int>(i);
    std::vector<Tuple> sorted_reps;
    for (int pi : perm) sorted_reps.push_back(reps[pi]);
    fb.reps = std::move(sorted_reps);
    for (std::size_t i = 0; i < tuples.size(); ++i)
        fb.class_of[tuple_key(tuples[i])] = inv[root_to_class[find(static_cast<int>(i))]];
    return fiber_cache_[key] = std::move(fb);
}

int AmitsurComplex::class_index(int n, const ZVec& d, const Tuple& t) const {
    const Fiber& fb = fiber(n, d);
    auto it = fb.class_of.find(tuple_key(t));
    if (it == fb.class_of.end())
        throw InternalInvariantViolated("amitsur: tuple outside its fiber");
    return it->second;
}

IntMat AmitsurComplex::differential(int n, const ZVec& d) const {
    const Fiber& src = fiber(n, d);
    const Fiber& dst = fiber(n + 1, d);
    IntMat M(static_cast<int>(dst.reps.size()), static_cast<int>(src.reps.size()));
    for (std::size_t c = 0; c < src.reps.size(); ++c) {
        const Tuple& m = src.reps[c];
        for (int i = 1; i <= n + 1; ++i) {
            Tuple t = tctx_.xi(m, i);
            int row = class_index(n + 1, d, t);
            M.at(row, static_cast<int>(c)) += (i % 2 == 1) ? -1 : 1;
        }
    }
    return M;
}

int rank_over_q(const IntMat& M) {
    IntMat A = M;
    int rank = 0;
    mpz_class prev = 1;
    for (int col = 0; col < A.cols && rank < A.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < A.rows; ++r)
            if (A.at(r, col) != 0) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c < A.cols; ++c) std::swap(A.at(piv, c), A.at(rank, c));
        for (int r = rank + 1; r < A.rows; ++r) {
            for (int c = col + 1; c < A.cols; ++c) {
                mpz_class t = A.at(r, c) * A.at(rank, col) - A.at(r, col) * A.at(rank, c);
                mpz_divexact(A.at(r, c).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            A.at(r, col) = 0;
        }
        prev = A.at(rank, col);
        ++rank;
    }
    return rank;
}

int rank_over_fp(const IntMat& M, std::uint64_t p) {
    FpField F(p);
    std::vector<std::vector<std::uint64_t>> A(M.rows, std::vector<std::uint64_t>(M.cols, 0));
    for (int i = 0; i < M.rows; ++i)
        for (int j = 0; j < M.cols; ++j) {
            mpz_class r = M.at(i, j) % mpz_class(static_cast<unsigned long>(p));
            if (r < 0) r += mpz_class(static_cast<unsigned long>(p));
            A[i][j] = r.get_ui();
        }
    int rank = 0;
    for (int col = 0; col < M.cols && rank < M.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < M.rows; ++r)
            if (A[r][col] % p != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(A[piv], A[rank]);
        std::uint64_t inv = F.inv(A[rank][col]);
        for (int r = rank + 1; r < M.rows; ++r) {
            if (A[r][col] % p == 0) continue;
            std::uint64_t f = F.mul(A[r][col], inv);
            for (int c = col; c < M.cols; ++c) A[r][c] = F.sub(A[r][c], F.mul(f, A[rank][c]));
        }
        ++rank;
    }
    return rank;
}

AmitsurComplex::Table AmitsurComplex::cohomology_table(int n_max,
                                                       const std::vector<ZVec>& degrees,
                                                       std::uint64_t p) const {
    Table tab;
    tab.field = p == 0 ? "Q" : "F" + std::to_string(p);
    tab.n_max = n_max;
    for (const auto& d : degrees) {
        DegreeEntry e;
        e.degree = d;
        std::vector<IntMat> D; // D[i] : C^i -> C^{i+1}, C^i = B^{(x)(i+1)}
        for (int lvl = 1; lvl <= n_max + 1; ++lvl)
            e.dims.push_back(static_cast<int>(fiber(lvl, d).reps.size()));
        for (int i = 0; i < n_max; ++i) D.push_back(differential(i + 1, d));
        for (std::size_t i = 0; i + 1 < D.size(); ++i) {
            IntMat comp = matmul(D[i + 1], D[i]);
            for (const auto& x : comp.a)
                if (x != 0) e.dd_zero = false;
        }
        auto rank = [&](const IntMat& M) {
            return p == 0 ? rank_over_q(M) : rank_over_fp(M, p);
        };
        std::vector<int> rk;
        for (const auto& M : D) rk.push_back(rank(M));
        for (int i = 1; i <= n_max - 1; ++i) {
            int dimCi = e.dims[i];
            int h = dimCi - rk[i] - rk[i - 1];
            e.h.push_back(h);
        }
        tab.entries.push_back(std::move(e));
    }
    return tab;
}

} // namespace torq
