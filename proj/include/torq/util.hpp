#ifndef TORQ_UTIL_HPP
#define TORQ_UTIL_HPP

#include <cstdint>
#include <gmpxx.h>
#include <sstream>
#include <string>
#include <vector>

namespace torq {

using ZVec = std::vector<mpz_class>;

inline ZVec zvec_zero(std::size_t n) { return ZVec(n, mpz_class(0)); }

inline ZVec zvec_of(std::initializer_list<long> xs) {
    ZVec v;
    v.reserve(xs.size());
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline bool is_zero(const ZVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline ZVec operator+(const ZVec& a, const ZVec& b) {
    ZVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline ZVec operator-(const ZVec& a, const ZVec& b) {
    ZVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline ZVec operator-(const ZVec& a) {
    ZVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

inline ZVec operator*(const mpz_class& c, const ZVec& a) {
    ZVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline mpz_class dot(const ZVec& a, const ZVec& b) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline int cmp_zvec(const ZVec& a, const ZVec& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

inline std::string zvec_str(const ZVec& v) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i].get_str();
    }
    os << ")";
    return os.str();
}

// Compact canonical key, usable in ordered/unordered maps.
inline std::string zvec_key(const ZVec& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += v[i].get_str();
    }
    return s;
}

inline ZVec concat(const ZVec& a, const ZVec& b) {
    ZVec r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

// Deterministic PRNG for property tests and randomized suites.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        s_ ^= s_ << 13;
        s_ ^= s_ >> 7;
        s_ ^= s_ << 17;
        return s_;
    }
    // uniform in [lo, hi] inclusive
    long range(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t s_;
};

} // namespace torq

#endif
