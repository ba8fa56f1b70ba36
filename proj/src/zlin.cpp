#include "torq/zlin.hpp"

#include <algorithm>

namespace torq {

IntMat matmul(const IntMat& A, const IntMat& B) {
    IntMat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const mpz_class& aik = A.at(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < B.cols; ++j) C.at(i, j) += aik * B.at(k, j);
        }
    return C;
}

IntMat transpose(const IntMat& A) {
    IntMat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

mpz_class det(const IntMat& A) {
    // Bareiss fraction-free elimination.
    IntMat M = A;
    int n = M.rows;
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (M.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (M.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j);
                mpz_divexact(M.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = M.at(k, k);
    }
    return sign * M.at(n - 1, n - 1);
}

namespace {

void row_sub(IntMat& M, int dst, int src, const mpz_class& q) {
    if (q == 0) return;
    for (int c = 0; c < M.cols; ++c) M.at(dst, c) -= q * M.at(src, c);
}

void row_swap(IntMat& M, int r1, int r2) {
    if (r1 == r2) return;
    for (int c = 0; c < M.cols; ++c) std::swap(M.at(r1, c), M.at(r2, c));
}

void row_neg(IntMat& M, int r) {
    for (int c = 0; c < M.cols; ++c) M.at(r, c) = -M.at(r, c);
}

mpz_class fdiv(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

} // namespace

HnfResult hnf(const IntMat& M) {
    HnfResult res;
    res.H = M;
    res.U = IntMat::identity(M.rows);
    IntMat& H = res.H;
    IntMat& U = res.U;
    int row = 0;
    for (int col = 0; col < M.cols && row < M.rows; ++col) {
        // gcd-eliminate entries in this column below `row`
        while (true) {
            int best = -1;
            for (int r = row; r < M.rows; ++r) {
                if (H.at(r, col) == 0) continue;
                if (best < 0 || abs(H.at(r, col)) < abs(H.at(best, col))) best = r;
            }
            if (best < 0) break;
            row_swap(H, row, best);
            row_swap(U, row, best);
            bool clean = true;
            for (int r = row + 1; r < M.rows; ++r) {
                if (H.at(r, col) == 0) continue;
                mpz_class q = fdiv(H.at(r, col), H.at(row, col));
                row_sub(H, r, row, q);
                row_sub(U, r, row, q);
                if (H.at(r, col) != 0) clean = false;
            }
            if (clean) break;
        }
        if (H.at(row, col) == 0) continue; // no pivot in this column
        if (H.at(row, col) < 0) {
            row_neg(H, row);
            row_neg(U, row);
        }
        for (int r = 0; r < row; ++r) {
            mpz_class q = fdiv(H.at(r, col), H.at(row, col));
            row_sub(H, r, row, q);
            row_sub(U, r, row, q);
        }
        res.pivot_cols.push_back(col);
        ++row;
    }
    res.rank = row;
    return res;
}

SnfResult snf(const IntMat& M) {
    SnfResult res;
    res.D = M;
    res.U = IntMat::identity(M.rows);
    res.V = IntMat::identity(M.cols);
    res.Vinv = IntMat::identity(M.cols);
    IntMat& D = res.D;
    IntMat& U = res.U;
    IntMat& V = res.V;
    IntMat& Vi = res.Vinv;

    auto col_swap = [&](int c1, int c2) {
        if (c1 == c2) return;
        for (int r = 0; r < D.rows; ++r) std::swap(D.at(r, c1), D.at(r, c2));
        for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, c1), V.at(r, c2));
        row_swap(Vi, c1, c2);
    };
    auto col_sub = [&](int dst, int src, const mpz_class& q) {
        if (q == 0) return;
        for (int r = 0; r < D.rows; ++r) D.at(r, dst) -= q * D.at(r, src);
        for (int r = 0; r < V.rows; ++r) V.at(r, dst) -= q * V.at(r, src);
        // inverse: row src += q * row dst on Vinv
        for (int c = 0; c < Vi.cols; ++c) Vi.at(src, c) += q * Vi.at(dst, c);
    };
    auto col_neg = [&](int c) {
        for (int r = 0; r < D.rows; ++r) D.at(r, c) = -D.at(r, c);
        for (int r = 0; r < V.rows; ++r) V.at(r, c) = -V.at(r, c);
        for (int c2 = 0; c2 < Vi.cols; ++c2) Vi.at(c, c2) = -Vi.at(c, c2);
    };

    int n = std::min(M.rows, M.cols);
    int t = 0;
    while (t < n) {
        // find minimal nonzero entry in D[t.., t..]
        int bi = -1, bj = -1;
        for (int i = t; i < D.rows; ++i)
            for (int j = t; j < D.cols; ++j) {
                if (D.at(i, j) == 0) continue;
                if (bi < 0 || abs(D.at(i, j)) < abs(D.at(bi, bj))) { bi = i; bj = j; }
            }
        if (bi < 0) break;
        row_swap(D, t, bi);
        row_swap(U, t, bi);
        col_swap(t, bj);

        bool again = true;
        while (again) {
            again = false;
            for (int i = t + 1; i < D.rows; ++i) {
                if (D.at(i, t) == 0) continue;
                mpz_class q = fdiv(D.at(i, t), D.at(t, t));
                row_sub(D, i, t, q);
                row_sub(U, i, t, q);
                if (D.at(i, t) != 0) {
                    row_swap(D, t, i);
                    row_swap(U, t, i);
                    again = true;
                }
            }
            for (int j = t + 1; j < D.cols; ++j) {
                if (D.at(t, j) == 0) continue;
                mpz_class q = fdiv(D.at(t, j), D.at(t, t));
                col_sub(j, t, q);
                if (D.at(t, j) != 0) {
                    col_swap(t, j);
                    again = true;
                }
            }
        }
        // divisibility: d_t must divide everything below-right
        bool redo = false;
        for (int i = t + 1; i < D.rows && !redo; ++i)
            for (int j = t + 1; j < D.cols && !redo; ++j) {
                if (D.at(i, j) % D.at(t, t) != 0) {
                    // add row i to row t and restart this step
                    for (int c = 0; c < D.cols; ++c) D.at(t, c) += D.at(i, c);
                    for (int c = 0; c < U.cols; ++c) U.at(t, c) += U.at(i, c);
                    redo = true;
                }
            }
        if (redo) continue;
        if (D.at(t, t) < 0) col_neg(t);
        ++t;
    }
    res.rank = t;
    return res;
}

Lattice lattice_zero(int ambient) {
    Lattice L;
    L.ambient = ambient;
    L.basis = IntMat(0, ambient);
    return L;
}

Lattice lattice_from_rows(int ambient, const std::vector<ZVec>& rows) {
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != ambient)
            throw DimensionMismatch("lattice_from_rows: row size != ambient");
    IntMat M = IntMat::from_rows(rows, ambient);
    HnfResult h = hnf(M);
    Lattice L;
    L.ambient = ambient;
    L.basis = IntMat(h.rank, ambient);
    for (int i = 0; i < h.rank; ++i) L.basis.set_row(i, h.H.row(i));
    return L;
}

std::optional<ZVec> lattice_member(const Lattice& L, const ZVec& v) {
    if (static_cast<int>(v.size()) != L.ambient)
        throw DimensionMismatch("lattice_member: vector size != ambient");
    ZVec rem = v;
    ZVec coord(L.rank(), mpz_class(0));
    for (int i = 0; i < L.rank(); ++i) {
        int p = -1;
        for (int c = 0; c < L.ambient; ++c)
            if (L.basis.at(i, c) != 0) { p = c; break; }
        // basis rows are echelon; entries of rem before p must already be 0
        for (int c = 0; c < p; ++c)
            if (rem[c] != 0) return std::nullopt;
        if (rem[p] % L.basis.at(i, p) != 0) return std::nullopt;
        mpz_class q = rem[p] / L.basis.at(i, p);
        coord[i] = q;
        for (int c = 0; c < L.ambient; ++c) rem[c] -= q * L.basis.at(i, c);
    }
    if (!is_zero(rem)) return std::nullopt;
    return coord;
}

LatticeQuotient lattice_quotient(const Lattice& L1, const Lattice& L2) {
    if (L1.ambient != L2.ambient) throw DimensionMismatch("lattice_quotient: ambients differ");
    IntMat C(L1.rank(), L2.rank());
    for (int i = 0; i < L1.rank(); ++i) {
        auto coord = lattice_member(L2, L1.basis.row(i));
        if (!coord) throw NotASublattice("lattice_quotient: L1 is not contained in L2");
        C.set_row(i, *coord);
    }
    SnfResult s = snf(C);
    LatticeQuotient q;
    q.free_rank = L2.rank() - s.rank;
    q.finite = (q.free_rank == 0);
    q.index = 1;
    for (int i = 0; i < s.rank; ++i) {
        q.index *= s.D.at(i, i);
        if (s.D.at(i, i) > 1) q.torsion.push_back(s.D.at(i, i));
    }
    if (!q.finite) q.index = 0;
    return q;
}

Lattice kernel_lattice(const IntMat& M) {
    // HNF of [M | I]; rows whose M-part vanished give the kernel.
    IntMat A(M.rows, M.cols + M.rows);
    for (int i = 0; i < M.rows; ++i) {
        for (int j = 0; j < M.cols; ++j) A.at(i, j) = M.at(i, j);
        A.at(i, M.cols + i) = 1;
    }
    HnfResult h = hnf(A);
    std::vector<ZVec> rows;
    for (int i = 0; i < M.rows; ++i) {
        bool zero = true;
        for (int j = 0; j < M.cols; ++j)
            if (h.H.at(i, j) != 0) { zero = false; break; }
        if (!zero) continue;
        ZVec r(M.rows);
        for (int j = 0; j < M.rows; ++j) r[j] = h.H.at(i, M.cols + j);
        rows.push_back(r);
    }
    return lattice_from_rows(M.rows, rows);
}

Lattice saturate(const Lattice& L) {
    if (L.rank() == 0) return L;
    SnfResult s = snf(L.basis);
    // rowspace(L) = span{ d_i * (Vinv row i) }; saturation = span{ Vinv row i : i < rank }
    std::vector<ZVec> rows;
    for (int i = 0; i < s.rank; ++i) {
        ZVec r(L.ambient);
        for (int c = 0; c < L.ambient; ++c) r[c] = s.Vinv.at(i, c);
        rows.push_back(r);
    }
    return lattice_from_rows(L.ambient, rows);
}

Lattice lattice_intersect(const Lattice& A, const Lattice& B) {
    if (A.ambient != B.ambient) throw DimensionMismatch("lattice_intersect");
    if (A.rank() == 0 || B.rank() == 0) return lattice_zero(A.ambient);
    IntMat M(A.rank() + B.rank(), A.ambient);
    for (int i = 0; i < A.rank(); ++i) M.set_row(i, A.basis.row(i));
    for (int i = 0; i < B.rank(); ++i) M.set_row(A.rank() + i, B.basis.row(i));
    Lattice K = kernel_lattice(M); // (alpha|beta) with alpha*A + beta*B = 0
    std::vector<ZVec> rows;
    for (int i = 0; i < K.rank(); ++i) {
        ZVec comb = zvec_zero(A.ambient);
        for (int j = 0; j < A.rank(); ++j)
            for (int c = 0; c < A.ambient; ++c) comb[c] += K.basis.at(i, j) * A.basis.at(j, c);
        rows.push_back(comb);
    }
    return lattice_from_rows(A.ambient, rows);
}

Lattice lattice_sum(const Lattice& A, const Lattice& B) {
    if (A.ambient != B.ambient) throw DimensionMismatch("lattice_sum");
    std::vector<ZVec> rows;
    for (int i = 0; i < A.rank(); ++i) rows.push_back(A.basis.row(i));
    for (int i = 0; i < B.rank(); ++i) rows.push_back(B.basis.row(i));
    return lattice_from_rows(A.ambient, rows);
}

std::optional<AffineSolution> solve_affine(const IntMat& A, const ZVec& b) {
    if (static_cast<int>(b.size()) != A.rows) throw DimensionMismatch("solve_affine");
    SnfResult s = snf(A);
    // A x = b  <=>  D y = U b, x = V y
    ZVec ub(A.rows, mpz_class(0));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.rows; ++j) ub[i] += s.U.at(i, j) * b[j];
    ZVec y(A.cols, mpz_class(0));
    for (int i = 0; i < A.rows; ++i) {
        mpz_class d = (i < std::min(A.rows, A.cols)) ? s.D.at(i, i) : mpz_class(0);
        if (d == 0) {
            if (ub[i] != 0) return std::nullopt;
        } else {
            if (ub[i] % d != 0) return std::nullopt;
            y[i] = ub[i] / d;
        }
    }
    ZVec x(A.cols, mpz_class(0));
    for (int i = 0; i < A.cols; ++i)
        for (int j = 0; j < A.cols; ++j) x[i] += s.V.at(i, j) * y[j];
    // kernel: columns of V beyond rank
    std::vector<ZVec> krows;
    for (int j = s.rank; j < A.cols; ++j) {
        ZVec r(A.cols);
        for (int i = 0; i < A.cols; ++i) r[i] = s.V.at(i, j);
        krows.push_back(r);
    }
    AffineSolution sol;
    sol.particular = x;
    sol.kernel = lattice_from_rows(A.cols, krows);
    return sol;
}

ZVec coset_residue(const Lattice& L, const ZVec& v) {
    if (static_cast<int>(v.size()) != L.ambient) throw DimensionMismatch("coset_residue");
    ZVec r = v;
    for (int i = 0; i < L.rank(); ++i) {
        int p = -1;
        for (int c = 0; c < L.ambient; ++c)
            if (L.basis.at(i, c) != 0) { p = c; break; }
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), r[p].get_mpz_t(), L.basis.at(i, p).get_mpz_t());
        for (int c = 0; c < L.ambient; ++c) r[c] -= q * L.basis.at(i, c);
    }
    return r;
}

} // namespace torq
