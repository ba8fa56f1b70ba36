#ifndef TORQ_TENSOR_HPP
#define TORQ_TENSOR_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "torq/monoid.hpp"

namespace torq {

// A representative of an element of sigma^{(x)_tau n}: one sigma element
// per slot.
using Tuple = std::vector<ZVec>;

struct TensorBudget {
    long max_fiber_nodes = 100000;
};

// Coset s0 + L inside l(sigma), or empty.
struct UnitCoset {
    ZVec base;  // ambient coordinates
    Lattice lat; // ambient coordinates
};

// The n-fold tensor powers of sigma over the submonoid generated by
// `tau_images`. Equality of representatives is decided on the move graph of
// reduced tuples: nodes are slotwise sigma-bar classes, edges transfer one
// tau generator between two slots, edge labels live in l(sigma)^n.
class TensorContext {
public:
    TensorContext(const AffineMonoid& sigma, std::vector<ZVec> tau_images,
                  TensorBudget budget = TensorBudget{});

    const AffineMonoid& sigma() const { return *sig_; }
    const std::vector<ZVec>& tau() const { return tau_; }

    ZVec deg(const Tuple& m) const;
    Tuple mu(const Tuple& m, int i, int j) const;  // 1-based, i != j
    Tuple xi(const Tuple& m, int i) const;         // 1-based, 1 <= i <= n+1

    bool equals(const Tuple& m1, const Tuple& m2) const;

    // {s in l(sigma) : m1 ~ m2 + (s at slotA, -s at slotB)}, as a coset.
    std::optional<UnitCoset> unit_twist_solve(const Tuple& m1, const Tuple& m2,
                                              int slotA = 1, int slotB = 2) const;

    // Canonical representative with the maximal number of identity slots.
    Tuple normalize(const Tuple& m) const;

    // total order key of a sigma element used for canonical choices
    ZVec slot_key(const ZVec& s) const;

private:
    const AffineMonoid* sig_;
    std::vector<ZVec> tau_;
    TensorBudget budget_;
    int r0_; // rank of l(sigma)

    struct Node {
        Tuple base;
        ZVec phi; // potential, length n*r0
        std::vector<std::string> class_keys;
    };
    struct Component {
        int n;
        std::map<std::string, int> index; // node key -> node id
        std::vector<Node> nodes;
        Lattice H; // cycle lattice in Z^{n*r0}
    };
    mutable std::map<std::string, std::shared_ptr<Component>> comp_cache_;

    std::string node_key(const Tuple& m) const;
    std::shared_ptr<Component> component_of(const Tuple& m) const;
    ZVec offset_coords(const Tuple& m, const Tuple& base) const; // l-coords per slot
    void check_tuple(const Tuple& m) const;
};

} // namespace torq

#endif
