#pragma once

#include <algorithm>
#include <vector>

#include "patoct/hermite.hpp"

namespace patoct {
namespace detail {

// beta_{k,l,m} tabulated once per assembly; the inner loops would otherwise
// re-derive the same lgamma ratios millions of times.
struct BetaTable {
    int kmax, lmax, mmax;
    std::vector<double> v;  // (k, l, m) with m <= min(k,l)
    BetaTable(int km, int lm)
        : kmax(km), lmax(lm), mmax(std::min(km, lm)), v((km + 1) * (lm + 1) * (mmax + 1)) {
        for (int k = 0; k <= km; ++k)
            for (int l = 0; l <= lm; ++l)
                for (int m = 0; m <= std::min(k, l); ++m)
                    v[(k * (lm + 1) + l) * (mmax + 1) + m] = feldheim_beta(k, l, m);
    }
    double operator()(int k, int l, int m) const {
        return v[(k * (lmax + 1) + l) * (mmax + 1) + m];
    }
};

}  // namespace detail
}  // namespace patoct
