#ifndef TORQ_MONOID_HPP
#define TORQ_MONOID_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torq/zlin.hpp"

namespace torq {

struct MonoidBudget {
    long membership_nodes = 1000000; // branch-and-bound node budget
};

// Facet inequalities a.x >= 0 of the cone generated by the given rays,
// valid on the linear span of the rays (pairs of opposite rows encode the
// span's equations). Exact Fourier-Motzkin.
std::vector<ZVec> cone_facets(const std::vector<ZVec>& rays, int dim);

// Class of an element of sigma in sigma-bar = sigma / l(sigma).
// `free_part` identifies the image in sigma-tilde = sigma / l (l = saturation
// of l(sigma) in grp(sigma)); `torsion` the coset of l(sigma) inside l.
struct SigmaBarClass {
    ZVec free_part;          // coordinates in sigma-tilde
    ZVec torsion;            // alpha_i mod d_i, entries only where d_i > 1
    bool operator==(const SigmaBarClass& o) const {
        return free_part == o.free_part && torsion == o.torsion;
    }
    std::string key() const { return zvec_key(free_part) + "|" + zvec_key(torsion); }
};

enum class OrderRel { LT, GT, EQ, INCOMPARABLE };

struct ToricPresentation {
    int k = 0; // one variable per monoid generator
    // binomial z^a - z^b, exponents over the k variables
    std::vector<std::pair<std::vector<int>, std::vector<int>>> diff_pairs;
};

class AffineMonoid {
public:
    AffineMonoid(int d, std::vector<ZVec> generators, MonoidBudget budget = MonoidBudget{});

    int dim() const { return d_; }
    const std::vector<ZVec>& gens() const { return gens_; }
    const Lattice& grp() const { return grp_; }
    const Lattice& units() const { return units_; }          // l(sigma)
    const Lattice& saturated_units() const { return lsat_; } // l, direct summand of grp
    bool pointed() const { return pointed_; }
    const std::vector<ZVec>& facets() const { return facets_; }
    const MonoidBudget& budget() const { return budget_; }

    // sigma-tilde data
    int sigtil_dim() const { return sigtil_dim_; }
    const std::vector<ZVec>& sigtil_facets() const { return sigtil_facets_; }
    ZVec sigtil_coords(const ZVec& v) const; // requires v in grp
    // total order key on sigma-tilde: facet functional values then coords
    ZVec sigtil_order_key(const ZVec& coords) const;

    SigmaBarClass rbar_class(const ZVec& v) const;
    OrderRel rdeg_compare(const ZVec& a, const ZVec& b) const;
    OrderRel rdeg_compare_classes(const SigmaBarClass& a, const SigmaBarClass& b) const;
    // (order key of sigma-tilde image, torsion coset): lexicographic compare
    // gives a linear extension of the partial order on sigma-bar
    std::pair<ZVec, ZVec> class_order_tuple(const ZVec& v) const;

    // membership with witness (multiplicities over gens());
    // distinct outcomes: witness / nullopt (definitely not) / BudgetExceeded.
    std::optional<ZVec> contains(const ZVec& v) const;
    bool in_cone(const ZVec& v) const; // rational cone + span test

    const std::vector<mpz_class>& torsion_invariants() const { return torsion_d_; }
    const std::vector<int>& unit_gen_indices() const { return unit_idx_; }

    const ToricPresentation& presentation() const; // cached, computed via gb

    std::string describe() const;

private:
    int d_;
    std::vector<ZVec> gens_;
    MonoidBudget budget_;
    Lattice grp_;
    Lattice satgrp_;
    std::vector<ZVec> facets_;
    Lattice units_; // l(sigma)
    Lattice lsat_;  // l, the direct summand of grp containing l(sigma)
    bool pointed_ = false;

    // SNF data for classes: units_ expressed in grp coordinates
    IntMat alpha_map_;               // grp-coord row vector * alpha_map_ = alpha
    std::vector<mpz_class> torsion_d_; // d_i per alpha coordinate < units rank
    int units_rank_ = 0;
    int sigtil_dim_ = 0;
    std::vector<ZVec> sigtil_gens_;
    std::vector<ZVec> sigtil_facets_;
    std::vector<int> unit_idx_, nonunit_idx_;
    std::vector<ZVec> neg_unit_expr_; // per unit gen: N-expression of its negative over gens

    mutable std::map<ZVec, std::optional<ZVec>> contains_cache_;
    mutable std::unique_ptr<ToricPresentation> pres_;

    std::optional<ZVec> contains_uncached(const ZVec& v) const;
};

// Bundled view of the reduction data of a monoid.
struct QuotientMonoid {
    const AffineMonoid* source;
    const Lattice* unit_lattice;      // l(sigma)
    const Lattice* saturated_lattice; // l
    int sigtil_dim;
    std::vector<mpz_class> torsion;
};

QuotientMonoid rbar(const AffineMonoid& m);

struct MonoidHom {
    const AffineMonoid* source; // tau
    const AffineMonoid* target; // sigma
    std::vector<ZVec> images;   // of source generators
};

MonoidHom hom_new(const AffineMonoid& tau, const AffineMonoid& sigma,
                  const std::vector<ZVec>& images);

} // namespace torq

#endif
