#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <deque>
#include <set>

#include "torq/tensor.hpp"

using namespace torq;

namespace {

AffineMonoid mk(int d, std::initializer_list<std::initializer_list<long>> gens) {
    std::vector<ZVec> gs;
    for (auto& g : gens) {
        ZVec v;
        for (long x : g) v.emplace_back(x);
        gs.push_back(v);
    }
    return AffineMonoid(d, gs);
}

Tuple tup(std::initializer_list<std::initializer_list<long>> slots) {
    Tuple t;
    for (auto& s : slots) {
        ZVec v;
        for (long x : s) v.emplace_back(x);
        t.push_back(v);
    }
    return t;
}

Tuple tup1(std::initializer_list<long> slots) {
    Tuple t;
    for (long x : slots) t.push_back(ZVec{mpz_class(x)});
    return t;
}

// test oracle: naive breadth-first closure over raw tuples (pointed sigma)
std::set<std::string> naive_closure(const AffineMonoid& sig, const std::vector<ZVec>& tau,
                                    const Tuple& start, std::size_t cap = 5000) {
    auto key = [](const Tuple& t) {
        std::string k;
        for (const auto& s : t) k += zvec_key(s) + ";";
        return k;
    };
    std::set<std::string> seen{key(start)};
    std::deque<Tuple> work{start};
    while (!work.empty()) {
        Tuple cur = work.front();
        work.pop_front();
        int n = static_cast<int>(cur.size());
        for (int i = 0; i < n; ++i)
            for (const auto& t : tau) {
                ZVec moved = cur[i] - t;
                if (!sig.contains(moved)) continue;
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    Tuple nb = cur;
                    nb[i] = moved;
                    nb[j] = cur[j] + t;
                    if (seen.insert(key(nb)).second) {
                        work.push_back(nb);
                        REQUIRE(seen.size() <= cap);
                    }
                }
            }
    }
    return seen;
}

std::string tkey(const Tuple& t) {
    std::string k;
    for (const auto& s : t) k += zvec_key(s) + ";";
    return k;
}

int zero_count(const Tuple& t) {
    int z = 0;
    for (const auto& s : t)
        if (is_zero(s)) ++z;
    return z;
}

} // namespace

TEST_CASE("mu, xi, deg basics") {
    auto n1 = mk(1, {{1}});
    TensorContext T(n1, {ZVec{mpz_class(1)}});
    Tuple m = tup1({1, 2, 3});
    CHECK(T.mu(m, 1, 2) == tup1({3, 3}));
    CHECK(T.mu(m, 2, 3) == tup1({1, 5}));
    CHECK(T.xi(m, 2) == tup1({1, 0, 2, 3}));
    CHECK(T.xi(tup1({1, 2}), 2) == tup1({1, 0, 2}));
    CHECK(T.deg(m) == zvec_of({6}));
    CHECK(T.deg(tup1({0, 0})) == zvec_of({0}));
}

TEST_CASE("simplicial identities mu/xi on random tuples") {
    auto n2 = mk(2, {{1, 0}, {0, 1}});
    TensorContext T(n2, {zvec_of({1, 0})});
    Rng rng(5);
    for (int cs = 0; cs < 500; ++cs) {
        int n = static_cast<int>(rng.range(2, 4));
        Tuple m;
        for (int i = 0; i < n; ++i)
            m.push_back(zvec_of({rng.range(0, 3), rng.range(0, 3)}));
        int i = static_cast<int>(rng.range(1, n));
        // section identity: mu^i_{i+1}(xi_i(m)) = m
        CHECK(T.mu(T.xi(m, i), i, i + 1) == m);
        // degree preserved by mu
        int a = static_cast<int>(rng.range(1, n));
        int b = static_cast<int>(rng.range(1, n));
        if (a != b) CHECK(T.deg(T.mu(m, a, b)) == T.deg(m));
        CHECK(T.deg(T.xi(m, i)) == T.deg(m));
    }
}

TEST_CASE("tensor_equals basic examples") {
    auto n1 = mk(1, {{1}});
    TensorContext T(n1, {ZVec{mpz_class(2)}, ZVec{mpz_class(3)}});
    CHECK(T.equals(tup1({2, 0}), tup1({0, 2})));
    CHECK(!T.equals(tup1({1, 1}), tup1({2, 0})));
    CHECK(T.equals(tup1({1, 1}), tup1({1, 1})));
    // degree mismatch
    CHECK(!T.equals(tup1({2, 0}), tup1({0, 3})));
}

TEST_CASE("tensor_equals agrees with naive closure oracle (pointed)") {
    Rng rng(71);
    for (int cs = 0; cs < 40; ++cs) {
        auto sig = mk(1, {{1}});
        std::vector<ZVec> tau;
        int nt = static_cast<int>(rng.range(1, 2));
        for (int i = 0; i < nt; ++i) tau.push_back(ZVec{mpz_class(rng.range(2, 5))});
        TensorContext T(sig, tau);
        int n = static_cast<int>(rng.range(2, 3));
        Tuple m1;
        for (int i = 0; i < n; ++i) m1.push_back(ZVec{mpz_class(rng.range(0, 6))});
        auto closure = naive_closure(sig, T.tau(), m1);
        // sample other tuples of the same degree
        mpz_class d = T.deg(m1)[0];
        std::function<void(int, mpz_class, Tuple&)> rec = [&](int slot, mpz_class left, Tuple& acc) {
            if (slot == n - 1) {
                acc.push_back(ZVec{left});
                CHECK(T.equals(m1, acc) == (closure.count(tkey(acc)) > 0));
                acc.pop_back();
                return;
            }
            for (mpz_class v = 0; v <= left; ++v) {
                acc.push_back(ZVec{v});
                rec(slot + 1, left - v, acc);
                acc.pop_back();
            }
        };
        if (d <= 8) {
            Tuple acc;
            rec(0, d, acc);
        }
    }
}

TEST_CASE("tensor_equals with units agrees with box-bounded closure") {
    // sigma = Z, tau = <2,-2>: classes are parity-linked
    auto zz = mk(1, {{1}, {-1}});
    TensorContext T(zz, {ZVec{mpz_class(2)}, ZVec{mpz_class(-2)}});
    CHECK(T.equals(tup1({3, 0}), tup1({1, 2})));
    CHECK(T.equals(tup1({3, 0}), tup1({-1, 4})));
    CHECK(T.equals(tup1({3, 0}), tup1({5, -2})));
    CHECK(!T.equals(tup1({3, 0}), tup1({0, 3})));
    CHECK(!T.equals(tup1({3, 0}), tup1({2, 1})));
    // transfers of 2 preserve slot parity
    for (long a = -4; a <= 4; ++a) {
        bool eq = T.equals(tup1({3, 0}), tup1({a, 3 - a}));
        CHECK(eq == ((a % 2 != 0)));
    }
}

TEST_CASE("unit_twist_solve coset example") {
    auto zz = mk(1, {{1}, {-1}});
    TensorContext T(zz, {ZVec{mpz_class(2)}, ZVec{mpz_class(-2)}});
    auto c = T.unit_twist_solve(tup1({3, 0}), tup1({0, 3}));
    REQUIRE(c.has_value());
    // {s : (3,0) ~ (s, 3-s)} = 1 + 2Z
    REQUIRE(c->lat.rank() == 1);
    CHECK(c->lat.basis.at(0, 0) == 2);
    mpz_class b = c->base[0];
    CHECK(((b % 2) + 2) % 2 == 1);

    // pointed: coset is {0} or empty
    auto n1 = mk(1, {{1}});
    TensorContext TP(n1, {ZVec{mpz_class(2)}});
    auto c2 = TP.unit_twist_solve(tup1({2, 0}), tup1({0, 2}));
    REQUIRE(c2.has_value());
    CHECK(is_zero(c2->base));
    CHECK(c2->lat.rank() == 0);
    CHECK(!TP.unit_twist_solve(tup1({3, 0}), tup1({0, 3})).has_value());

    // m1 = m2: coset contains 0
    auto c3 = T.unit_twist_solve(tup1({3, 0}), tup1({3, 0}));
    REQUIRE(c3.has_value());
    ZVec res = coset_residue(c3->lat, c3->base);
    CHECK(lattice_member(c3->lat, c3->base - res).has_value());
    // 0 must be in the coset: base in lat
    CHECK(lattice_member(c3->lat, c3->base).has_value());
}

TEST_CASE("normalize examples") {
    auto n1 = mk(1, {{1}});
    TensorContext T2(n1, {ZVec{mpz_class(2)}});
    CHECK(T2.normalize(tup1({2, 0})) == tup1({2, 0}));
    CHECK(T2.normalize(tup1({0, 2})) == tup1({2, 0}));
    CHECK(T2.normalize(tup1({0, 0, 0})) == tup1({0, 0, 0}));

    TensorContext T23(n1, {ZVec{mpz_class(2)}, ZVec{mpz_class(3)}});
    CHECK(T23.normalize(tup({{2}, {3}, {0}})) == tup1({5, 0, 0}));
    // idempotent
    auto r = T23.normalize(tup1({2, 3, 0}));
    CHECK(T23.normalize(r) == r);
}

TEST_CASE("normalize canonical across class members (pointed)") {
    auto n1 = mk(1, {{1}});
    TensorContext T(n1, {ZVec{mpz_class(2)}, ZVec{mpz_class(3)}});
    Rng rng(9);
    for (int cs = 0; cs < 100; ++cs) {
        int n = static_cast<int>(rng.range(2, 3));
        Tuple m;
        for (int i = 0; i < n; ++i) m.push_back(ZVec{mpz_class(rng.range(0, 6))});
        auto cl = naive_closure(n1, T.tau(), m);
        Tuple canon = T.normalize(m);
        for (const auto& k : cl) {
            // parse key back: count handled by regenerating members via equals
            (void)k;
        }
        // all class members normalize to the same representative
        std::function<void(int, mpz_class, Tuple&)> rec = [&](int slot, mpz_class left,
                                                              Tuple& acc) {
            if (slot == n - 1) {
                acc.push_back(ZVec{left});
                if (cl.count(tkey(acc))) CHECK(T.normalize(acc) == canon);
                acc.pop_back();
                return;
            }
            for (mpz_class v = 0; v <= left; ++v) {
                acc.push_back(ZVec{v});
                rec(slot + 1, left - v, acc);
                acc.pop_back();
            }
        };
        mpz_class d = T.deg(m)[0];
        if (d <= 8) {
            Tuple acc;
            rec(0, d, acc);
        }
    }
}

TEST_CASE("normalize canonical with units") {
    auto zz = mk(1, {{1}, {-1}});
    TensorContext T(zz, {ZVec{mpz_class(2)}, ZVec{mpz_class(-2)}});
    // all equal representatives must normalize identically
    Tuple canon = T.normalize(tup1({3, 0}));
    for (long a = -5; a <= 5; a += 2) CHECK(T.normalize(tup1({a, 3 - a})) == canon);
    CHECK(T.equals(canon, tup1({3, 0})));
}

TEST_CASE("mu and xi descend to classes") {
    auto n1 = mk(1, {{1}});
    TensorContext T(n1, {ZVec{mpz_class(2)}, ZVec{mpz_class(3)}});
    Rng rng(13);
    int checked = 0;
    for (int cs = 0; cs < 400; ++cs) {
        int n = static_cast<int>(rng.range(2, 3));
        Tuple m1;
        for (int i = 0; i < n; ++i) m1.push_back(ZVec{mpz_class(rng.range(0, 5))});
        // random equal partner via random moves
        Tuple m2 = m1;
        for (int step = 0; step < 4; ++step) {
            int i = static_cast<int>(rng.range(0, n - 1));
            int j = static_cast<int>(rng.range(0, n - 1));
            long t = rng.range(0, 1) ? 2 : 3;
            if (i == j) continue;
            if (m2[i][0] >= t) {
                m2[i][0] -= t;
                m2[j][0] += t;
            }
        }
        REQUIRE(T.equals(m1, m2));
        int a = static_cast<int>(rng.range(1, n));
        int b = static_cast<int>(rng.range(1, n));
        if (a != b) {
            CHECK(T.equals(T.mu(m1, a, b), T.mu(m2, a, b)));
            ++checked;
        }
        int i = static_cast<int>(rng.range(1, n + 1));
        CHECK(T.equals(T.xi(m1, i), T.xi(m2, i)));
    }
    CHECK(checked > 100);
}

TEST_CASE("normalized representatives on random fibers") {
    auto n1 = mk(1, {{1}});
    TensorContext T(n1, {ZVec{mpz_class(2)}, ZVec{mpz_class(3)}});
    Rng rng(41);
    auto is_normalized = [&](const Tuple& m) {
        return zero_count(m) == zero_count(T.normalize(m));
    };
    int pairs_checked = 0;
    for (int cs = 0; cs < 250; ++cs) {
        int n = static_cast<int>(rng.range(2, 3));
        Tuple m;
        for (int i = 0; i < n; ++i) m.push_back(ZVec{mpz_class(rng.range(0, 5))});
        // a monomial is normalized iff xi_i of it is normalized, for all i
        bool nm = is_normalized(m);
        for (int i = 1; i <= n + 1; ++i) CHECK(is_normalized(T.xi(m, i)) == nm);

        // pairs of equal normalized monomials: same zero positions or a single
        // nonzero slot carrying the degree
        auto cl = naive_closure(n1, T.tau(), m);
        std::vector<Tuple> members;
        std::function<void(int, mpz_class, Tuple&)> rec = [&](int slot, mpz_class left,
                                                              Tuple& acc) {
            if (slot == n - 1) {
                acc.push_back(ZVec{left});
                if (cl.count(tkey(acc))) members.push_back(acc);
                acc.pop_back();
                return;
            }
            for (mpz_class v = 0; v <= left; ++v) {
                acc.push_back(ZVec{v});
                rec(slot + 1, left - v, acc);
                acc.pop_back();
            }
        };
        mpz_class d = T.deg(m)[0];
        if (d > 8) continue;
        Tuple acc;
        rec(0, d, acc);
        for (const auto& a : members)
            for (const auto& b : members) {
                if (!is_normalized(a) || !is_normalized(b)) continue;
                int nza = 0, nzb = 0;
                for (const auto& s : a)
                    if (!is_zero(s)) ++nza;
                for (const auto& s : b)
                    if (!is_zero(s)) ++nzb;
                bool single = (nza <= 1 && nzb <= 1);
                bool same_pattern = true;
                for (int i = 0; i < n; ++i)
                    if (is_zero(a[i]) != is_zero(b[i])) same_pattern = false;
                CHECK((single || same_pattern));
                ++pairs_checked;
            }
    }
    CHECK(pairs_checked > 500);
}

TEST_CASE("empty tau: classes are singletons") {
    auto n1 = mk(1, {{1}});
    TensorContext T(n1, {});
    CHECK(T.equals(tup1({2, 1}), tup1({2, 1})));
    CHECK(!T.equals(tup1({2, 1}), tup1({1, 2})));
}
