#include "torq/gb.hpp"
#include "torq/monoid.hpp"

namespace torq {

// Defining toric ideal of k[sigma]: saturation of the lattice-basis binomial
// ideal of ker(Z^k -> grp(sigma)) with respect to the product of all
// variables. Coefficients are +1/-1, so one computation over Q serves every
// field.
const ToricPresentation& AffineMonoid::presentation() const {
    if (pres_) return *pres_;
    auto p = std::make_unique<ToricPresentation>();
    int k = static_cast<int>(gens_.size());
    p->k = k;

    IntMat G(k, d_);
    for (int i = 0; i < k; ++i) G.set_row(i, gens_[i]);
    Lattice K = kernel_lattice(G);

    if (K.rank() > 0) {
        QField f;
        gb::MonOrder ord = gb::MonOrder::grevlex(k);
        std::vector<gb::Poly<QField>> gens;
        for (int i = 0; i < K.rank(); ++i) {
            gb::Expo ep(k, 0), em(k, 0);
            for (int j = 0; j < k; ++j) {
                mpz_class c = K.basis.at(i, j);
                if (c > 0)
                    ep[j] = static_cast<int>(c.get_si());
                else if (c < 0)
                    em[j] = static_cast<int>(mpz_class(-c).get_si());
            }
            gens.push_back(gb::poly_normalize<QField>(
                f, ord, {{f.one(), ep}, {f.neg(f.one()), em}}));
        }
        gb::Expo prod(k, 1);
        auto sat = gb::saturate_monomial(f, ord, gens, prod);
        for (const auto& g : sat) {
            if (!gb::is_difference_poly(f, g))
                throw BinomialityViolated("presentation: saturated ideal not a difference ideal");
            p->diff_pairs.emplace_back(g[0].e, g[1].e);
        }
    }
    pres_ = std::move(p);
    return *pres_;
}

} // namespace torq
