#ifndef TORQ_ZLIN_HPP
#define TORQ_ZLIN_HPP

#include <optional>
#include <vector>

#include "torq/errors.hpp"
#include "torq/util.hpp"

namespace torq {

// Dense matrix over Z with exact (GMP) entries, row-major.
struct IntMat {
    int rows = 0;
    int cols = 0;
    std::vector<mpz_class> a;

    IntMat() = default;
    IntMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, mpz_class(0)) {}

    mpz_class& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const mpz_class& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    ZVec row(int r) const {
        ZVec v(cols);
        for (int c = 0; c < cols; ++c) v[c] = at(r, c);
        return v;
    }
    void set_row(int r, const ZVec& v) {
        for (int c = 0; c < cols; ++c) at(r, c) = v[c];
    }

    static IntMat identity(int n) {
        IntMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static IntMat from_rows(const std::vector<ZVec>& rs, int cols) {
        IntMat m(static_cast<int>(rs.size()), cols);
        for (int i = 0; i < m.rows; ++i) m.set_row(i, rs[i]);
        return m;
    }
    bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

IntMat matmul(const IntMat& A, const IntMat& B);
IntMat transpose(const IntMat& A);
mpz_class det(const IntMat& A); // square, Bareiss

struct HnfResult {
    IntMat H; // row Hermite normal form, zero rows at bottom
    IntMat U; // unimodular, U*M = H
    std::vector<int> pivot_cols;
    int rank = 0;
};

// Row HNF: echelon, positive pivots, entries above each pivot reduced into [0, pivot).
HnfResult hnf(const IntMat& M);

struct SnfResult {
    IntMat D;    // diagonal, d1 | d2 | ... | dr, nonnegative
    IntMat U;    // row ops
    IntMat V;    // col ops
    IntMat Vinv; // V^{-1}
    int rank = 0;
};

// Smith normal form: D = U * M * V.
SnfResult snf(const IntMat& M);

// A sublattice of Z^ambient, stored by its canonical HNF basis (rows,
// zero rows stripped). Equal lattices have identical bases.
struct Lattice {
    int ambient = 0;
    IntMat basis; // rank x ambient, row HNF

    int rank() const { return basis.rows; }
    bool operator==(const Lattice& o) const { return ambient == o.ambient && basis == o.basis; }
};

Lattice lattice_from_rows(int ambient, const std::vector<ZVec>& rows);
Lattice lattice_zero(int ambient);

// Coordinates of v in the HNF basis, if v lies in L.
std::optional<ZVec> lattice_member(const Lattice& L, const ZVec& v);

struct LatticeQuotient {
    bool finite = false;
    mpz_class index = 0;            // valid when finite
    std::vector<mpz_class> torsion; // invariant factors > 1
    int free_rank = 0;              // rank of the free part of L2/L1
};

// Structure of L2/L1 for L1 <= L2 (checked).
LatticeQuotient lattice_quotient(const Lattice& L1, const Lattice& L2);

// {x in Z^r : x * M = 0} for M with r rows.
Lattice kernel_lattice(const IntMat& M);

// {v in Z^ambient : N*v in L for some N >= 1}.
Lattice saturate(const Lattice& L);

// Intersection of two lattices in the same ambient.
Lattice lattice_intersect(const Lattice& A, const Lattice& B);

// Sum (join) of two lattices.
Lattice lattice_sum(const Lattice& A, const Lattice& B);

struct AffineSolution {
    ZVec particular;     // one solution x of A x = b
    Lattice kernel;      // right kernel {x : A x = 0}, rows = basis
};

// Integer solutions of A x = b (x a column vector of size A.cols).
std::optional<AffineSolution> solve_affine(const IntMat& A, const ZVec& b);

// Reduce v modulo L: canonical coset representative obtained by
// subtracting basis rows to bring pivot-column coordinates into [0, pivot).
ZVec coset_residue(const Lattice& L, const ZVec& v);

} // namespace torq

#endif
