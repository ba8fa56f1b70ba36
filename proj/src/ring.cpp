#include "torq/ring.hpp"

#include <deque>
#include <set>

namespace torq {

std::vector<ZVec> elements_below_degree(const AffineMonoid& sig, const ZVec& d, long budget) {
    std::vector<ZVec> out;
    if (!sig.in_cone(d)) return out;
    std::set<std::string> seen;
    std::deque<ZVec> work;
    ZVec zero = zvec_zero(sig.dim());
    out.push_back(zero);
    seen.insert(zvec_key(zero));
    work.push_back(zero);
    while (!work.empty()) {
        ZVec cur = work.front();
        work.pop_front();
        for (const auto& g : sig.gens()) {
            ZVec nxt = cur + g;
            if (seen.count(zvec_key(nxt))) continue;
            if (!sig.in_cone(d - nxt)) continue;
            seen.insert(zvec_key(nxt));
            out.push_back(nxt);
            work.push_back(nxt);
            if ((long)out.size() > budget)
                throw FiberBudgetExceeded("elements_below_degree: budget exceeded");
        }
    }
    std::sort(out.begin(), out.end(),
              [](const ZVec& a, const ZVec& b) { return cmp_zvec(a, b) < 0; });
    return out;
}

} // namespace torq
