#ifndef TORQ_FIELD_HPP
#define TORQ_FIELD_HPP

#include <cstdint>
#include <gmpxx.h>
#include <string>

#include "torq/errors.hpp"

namespace torq {

// Exact rationals.
struct QField {
    using Elem = mpq_class;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_long(long x) const { return Elem(x); }
    Elem from_mpq(const mpq_class& q) const { return q; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem div(const Elem& a, const Elem& b) const { return a / b; }
    Elem inv(const Elem& a) const { return Elem(1) / a; }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool is_one(const Elem& a) const { return a == 1; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    std::string str(const Elem& a) const {
        mpq_class c(a);
        c.canonicalize();
        return c.get_str();
    }
    std::string name() const { return "Q"; }
};

// Prime field F_p, p < 2^31.
struct FpField {
    std::uint64_t p;

    explicit FpField(std::uint64_t prime) : p(prime) {
        if (p < 2 || p >= (1ull << 31)) throw InvalidAmbient("FpField: need 2 <= p < 2^31");
    }

    using Elem = std::uint64_t;

    Elem zero() const { return 0; }
    Elem one() const { return 1 % p; }
    Elem from_long(long x) const {
        long r = x % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        return static_cast<Elem>(r);
    }
    Elem from_mpq(const mpq_class& q) const {
        mpz_class num = q.get_num(), den = q.get_den(), pz(static_cast<unsigned long>(p));
        mpz_class dm = den % pz;
        if (dm == 0) throw InvalidAmbient("coefficient denominator divisible by p");
        mpz_class nm = num % pz;
        if (nm < 0) nm += pz;
        Elem n = nm.get_ui();
        Elem d = mpz_class(dm < 0 ? dm + pz : dm).get_ui();
        return mul(n, inv(d));
    }
    Elem add(Elem a, Elem b) const { return (a + b) % p; }
    Elem sub(Elem a, Elem b) const { return (a + p - b) % p; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p; }
    Elem inv(Elem a) const {
        // extended Euclid
        long t = 0, nt = 1;
        long r = static_cast<long>(p), nr = static_cast<long>(a % p);
        while (nr != 0) {
            long q = r / nr;
            long tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (r != 1) throw InternalInvariantViolated("FpField::inv of zero or non-unit");
        if (t < 0) t += static_cast<long>(p);
        return static_cast<Elem>(t);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    bool is_zero(Elem a) const { return a % p == 0; }
    bool is_one(Elem a) const { return a % p == 1 % p; }
    bool eq(Elem a, Elem b) const { return a % p == b % p; }
    std::string str(Elem a) const { return std::to_string(a % p); }
    std::string name() const { return "F" + std::to_string(p); }
};

} // namespace torq

#endif
