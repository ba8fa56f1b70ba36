#include "torq/tensor.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace torq {

TensorContext::TensorContext(const AffineMonoid& sigma, std::vector<ZVec> tau_images,
                             TensorBudget budget)
    : sig_(&sigma), budget_(budget), r0_(sigma.units().rank()) {
    std::set<std::string> seen;
    for (auto& t : tau_images) {
        if (is_zero(t)) continue;
        if (!sigma.contains(t))
            throw ImageNotInTarget("tensor: tau image " + zvec_str(t) + " not in sigma");
        if (seen.insert(zvec_key(t)).second) tau_.push_back(t);
    }
}

void TensorContext::check_tuple(const Tuple& m) const {
    for (const auto& s : m)
        if (!sig_->contains(s))
            throw InvalidAmbient("tensor: slot " + zvec_str(s) + " not in sigma");
}

ZVec TensorContext::deg(const Tuple& m) const {
    ZVec d = zvec_zero(sig_->dim());
    for (const auto& s : m) d = d + s;
    return d;
}

Tuple TensorContext::mu(const Tuple& m, int i, int j) const {
    int n = static_cast<int>(m.size());
    if (i == j || i < 1 || j < 1 || i > n || j > n)
        throw DimensionMismatch("mu: slot indices out of range");
    Tuple r;
    for (int k = 0; k < n; ++k) {
        if (k == j - 1) continue;
        if (k == i - 1)
            r.push_back(m[i - 1] + m[j - 1]);
        else
            r.push_back(m[k]);
    }
    return r;
}

Tuple TensorContext::xi(const Tuple& m, int i) const {
    int n = static_cast<int>(m.size());
    if (i < 1 || i > n + 1) throw DimensionMismatch("xi: slot index out of range");
    Tuple r = m;
    r.insert(r.begin() + (i - 1), zvec_zero(sig_->dim()));
    return r;
}

std::string TensorContext::node_key(const Tuple& m) const {
    std::string k = std::to_string(m.size());
    for (const auto& s : m) k += ";" + sig_->rbar_class(s).key();
    return k;
}

ZVec TensorContext::offset_coords(const Tuple& m, const Tuple& base) const {
    ZVec out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        ZVec diff = m[i] - base[i];
        auto c = lattice_member(sig_->units(), diff);
        if (!c) throw InternalInvariantViolated("tensor: slot offset not a unit");
        out.insert(out.end(), c->begin(), c->end());
    }
    return out;
}

std::shared_ptr<TensorContext::Component> TensorContext::component_of(const Tuple& m) const {
    std::string key0 = node_key(m);
    auto it = comp_cache_.find(key0);
    if (it != comp_cache_.end()) return it->second;

    int n = static_cast<int>(m.size());
    auto comp = std::make_shared<Component>();
    comp->n = n;
    std::vector<ZVec> cycle_gens;

    auto add_node = [&](const Tuple& base, const ZVec& phi, const std::string& key) {
        Node nd;
        nd.base = base;
        nd.phi = phi;
        for (const auto& s : base) nd.class_keys.push_back(sig_->rbar_class(s).key());
        comp->index[key] = static_cast<int>(comp->nodes.size());
        comp->nodes.push_back(std::move(nd));
        if (static_cast<long>(comp->nodes.size()) > budget_.max_fiber_nodes)
            throw FiberBudgetExceeded("tensor: component node budget exceeded");
        return static_cast<int>(comp->nodes.size()) - 1;
    };

    add_node(m, zvec_zero(static_cast<std::size_t>(n) * r0_), key0);
    std::deque<int> work{0};
    while (!work.empty()) {
        int vid = work.front();
        work.pop_front();
        Tuple base = comp->nodes[vid].base;
        ZVec phi = comp->nodes[vid].phi;
        for (int i = 0; i < n; ++i) {
            for (const auto& t : tau_) {
                ZVec moved = base[i] - t;
                if (!sig_->contains(moved)) continue;
                for (int j = 0; j < n; ++j) {
                    if (j == i) continue;
                    Tuple nb = base;
                    nb[i] = moved;
                    nb[j] = base[j] + t;
                    std::string k = node_key(nb);
                    auto f = comp->index.find(k);
                    if (f == comp->index.end()) {
                        int nid = add_node(nb, phi, k); // fresh base, zero edge offset
                        work.push_back(nid);
                    } else {
                        const Node& tgt = comp->nodes[f->second];
                        ZVec delta = offset_coords(nb, tgt.base);
                        ZVec cyc = phi + delta - tgt.phi;
                        if (!is_zero(cyc)) cycle_gens.push_back(cyc);
                    }
                }
            }
        }
    }
    comp->H = lattice_from_rows(static_cast<int>(static_cast<std::size_t>(n) * r0_), cycle_gens);
    for (const auto& [k, id] : comp->index) comp_cache_[k] = comp;
    return comp;
}

bool TensorContext::equals(const Tuple& m1, const Tuple& m2) const {
    if (m1.size() != m2.size()) return false;
    check_tuple(m1);
    check_tuple(m2);
    if (deg(m1) != deg(m2)) return false;
    auto comp = component_of(m1);
    auto f = comp->index.find(node_key(m2));
    if (f == comp->index.end()) return false;
    if (r0_ == 0) return true; // pointed: node identity decides
    const Node& n1 = comp->nodes[comp->index.at(node_key(m1))];
    const Node& n2 = comp->nodes[f->second];
    ZVec u1 = offset_coords(m1, n1.base);
    ZVec u2 = offset_coords(m2, n2.base);
    ZVec need = u2 - u1 - (n2.phi - n1.phi);
    return lattice_member(comp->H, need).has_value();
}

std::optional<UnitCoset> TensorContext::unit_twist_solve(const Tuple& m1, const Tuple& m2,
                                                         int slotA, int slotB) const {
    int n = static_cast<int>(m1.size());
    if (static_cast<int>(m2.size()) != n || slotA == slotB || slotA < 1 || slotB < 1 ||
        slotA > n || slotB > n)
        throw DimensionMismatch("unit_twist_solve: slots");
    check_tuple(m1);
    check_tuple(m2);
    if (deg(m1) != deg(m2)) return std::nullopt; // twists preserve total degree
    auto comp = component_of(m1);
    auto f = comp->index.find(node_key(m2));
    if (f == comp->index.end()) return std::nullopt;
    const Node& n1 = comp->nodes[comp->index.at(node_key(m1))];
    const Node& n2 = comp->nodes[f->second];
    ZVec u1 = offset_coords(m1, n1.base);
    ZVec u2 = offset_coords(m2, n2.base);
    if (r0_ == 0) {
        UnitCoset out;
        out.base = zvec_zero(sig_->dim());
        out.lat = lattice_zero(sig_->dim());
        return out;
    }
    // solve Delta(lambda) - H^T mu = c, c = u1 + phi2 - phi1 - u2
    ZVec c = u1 + (n2.phi - n1.phi) - u2;
    int dim = n * r0_;
    int hrank = comp->H.rank();
    IntMat A(dim, r0_ + hrank);
    for (int k = 0; k < r0_; ++k) {
        A.at((slotA - 1) * r0_ + k, k) = 1;
        A.at((slotB - 1) * r0_ + k, k) = -1;
    }
    for (int h = 0; h < hrank; ++h)
        for (int row = 0; row < dim; ++row) A.at(row, r0_ + h) = -comp->H.basis.at(h, row);
    auto sol = solve_affine(A, c);
    if (!sol) return std::nullopt;
    auto embed = [&](const ZVec& lambda) {
        ZVec s = zvec_zero(sig_->dim());
        for (int k = 0; k < r0_; ++k) s = s + lambda[k] * sig_->units().basis.row(k);
        return s;
    };
    ZVec lam0(sol->particular.begin(), sol->particular.begin() + r0_);
    std::vector<ZVec> lrows;
    for (int i = 0; i < sol->kernel.rank(); ++i) {
        ZVec kr = sol->kernel.basis.row(i);
        ZVec lam(kr.begin(), kr.begin() + r0_);
        if (!is_zero(lam)) lrows.push_back(embed(lam));
    }
    UnitCoset out;
    out.base = embed(lam0);
    out.lat = lattice_from_rows(sig_->dim(), lrows);
    return out;
}

ZVec TensorContext::slot_key(const ZVec& s) const {
    ZVec key = sig_->sigtil_order_key(sig_->sigtil_coords(s));
    for (const auto& x : s) key.push_back(x);
    return key;
}

Tuple TensorContext::normalize(const Tuple& m) const {
    check_tuple(m);
    int n = static_cast<int>(m.size());
    auto comp = component_of(m);

    if (r0_ == 0) {
        // pointed: nodes are exact tuples; pick the minimum of
        // (#nonzero, zero-pattern, slot keys)
        const Tuple* best = nullptr;
        ZVec bestkey;
        for (const auto& nd : comp->nodes) {
            ZVec key;
            mpz_class nz = 0;
            for (const auto& s : nd.base)
                if (!is_zero(s)) nz += 1;
            key.push_back(nz);
            for (const auto& s : nd.base) key.push_back(is_zero(s) ? 1 : 0);
            for (const auto& s : nd.base) {
                ZVec sk = slot_key(s);
                key.insert(key.end(), sk.begin(), sk.end());
            }
            if (!best || cmp_zvec(key, bestkey) < 0) {
                best = &nd.base;
                bestkey = key;
            }
        }
        return *best;
    }

    const Node& n1 = comp->nodes[comp->index.at(node_key(m))];
    ZVec u1 = offset_coords(m, n1.base);
    std::string zero_class = sig_->rbar_class(zvec_zero(sig_->dim())).key();
    int dim = n * r0_;

    struct Cand {
        ZVec selkey;
        Tuple tuple;
    };
    std::optional<Cand> best;

    for (const auto& nd : comp->nodes) {
        ZVec c0 = u1 + (nd.phi - n1.phi); // reachable offsets over nd: c0 + H
        std::vector<int> zslots;
        for (int i = 0; i < n; ++i)
            if (nd.class_keys[i] == zero_class) zslots.push_back(i);
        int zs = static_cast<int>(zslots.size());
        std::vector<std::vector<int>> subsets;
        for (int mask = 0; mask < (1 << zs); ++mask) {
            std::vector<int> sub;
            for (int b = 0; b < zs; ++b)
                if (mask & (1 << b)) sub.push_back(zslots[b]);
            subsets.push_back(sub);
        }
        auto pattern_of = [&](const std::vector<int>& sub) {
            ZVec pat(n, mpz_class(0));
            for (int i : sub) pat[i] = 1;
            return pat;
        };
        std::stable_sort(subsets.begin(), subsets.end(),
                         [&](const std::vector<int>& a, const std::vector<int>& b) {
                             if (a.size() != b.size()) return a.size() > b.size();
                             return cmp_zvec(pattern_of(a), pattern_of(b)) < 0;
                         });
        for (const auto& sub : subsets) {
            int zc = static_cast<int>(sub.size());
            IntMat A(zc * r0_, comp->H.rank());
            ZVec rhs;
            bool ok = true;
            for (int zi = 0; zi < zc && ok; ++zi) {
                int slot = sub[zi];
                auto lc = lattice_member(sig_->units(), -nd.base[slot]);
                if (!lc) { ok = false; break; }
                for (int k = 0; k < r0_; ++k) {
                    for (int h = 0; h < comp->H.rank(); ++h)
                        A.at(zi * r0_ + k, h) = comp->H.basis.at(h, slot * r0_ + k);
                    rhs.push_back((*lc)[k] - c0[slot * r0_ + k]);
                }
            }
            if (!ok) continue;
            auto sol = solve_affine(A, rhs);
            if (!sol) continue;
            ZVec ustar = c0;
            for (int h = 0; h < comp->H.rank(); ++h)
                ustar = ustar + sol->particular[h] * comp->H.basis.row(h);
            std::vector<ZVec> fr;
            for (int i = 0; i < sol->kernel.rank(); ++i) {
                ZVec comb = zvec_zero(dim);
                for (int h = 0; h < comp->H.rank(); ++h)
                    comb = comb + sol->kernel.basis.at(i, h) * comp->H.basis.row(h);
                fr.push_back(comb);
            }
            auto to_tuple = [&](const ZVec& u) {
                Tuple t = nd.base;
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < r0_; ++k)
                        t[i] = t[i] + u[i * r0_ + k] * sig_->units().basis.row(k);
                return t;
            };
            auto flatten = [&](const Tuple& t) {
                ZVec flat;
                for (const auto& s : t) flat.insert(flat.end(), s.begin(), s.end());
                return flat;
            };
            Tuple t0 = to_tuple(ustar);
            ZVec a0 = flatten(t0);
            std::vector<ZVec> lam_rows;
            for (const auto& u : fr) {
                Tuple tt = to_tuple(u + ustar);
                lam_rows.push_back(flatten(tt) - a0);
            }
            Lattice Lam = lattice_from_rows(static_cast<int>(a0.size()), lam_rows);
            ZVec canon = coset_residue(Lam, a0);
            Tuple ct(n);
            int dd = sig_->dim();
            for (int i = 0; i < n; ++i)
                ct[i] = ZVec(canon.begin() + i * dd, canon.begin() + (i + 1) * dd);
            Cand cand;
            cand.tuple = ct;
            cand.selkey.push_back(mpz_class(n - zc));
            ZVec pat = pattern_of(sub);
            for (auto& x : pat) cand.selkey.push_back(x);
            for (int i = 0; i < n; ++i) {
                ZVec sk = slot_key(ct[i]);
                cand.selkey.insert(cand.selkey.end(), sk.begin(), sk.end());
            }
            if (!best || cmp_zvec(cand.selkey, best->selkey) < 0) best = cand;
            break; // subsets sorted by preference: first feasible wins per node
        }
    }
    if (!best) throw InternalInvariantViolated("normalize: no candidate");
    return best->tuple;
}

} // namespace torq
