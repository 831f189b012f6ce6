#ifndef RLPN_TESTS_HELPERS_HPP
#define RLPN_TESTS_HELPERS_HPP

// Independent reference implementations the main library must agree with.
// Deliberately naive: correctness over speed.

#include <cstdint>
#include <vector>

#include "rlpn/gf2poly.hpp"

namespace refimpl {

// polynomial as LSB-first coefficient bitmask (degree <= 62)
inline uint64_t ref_mul(uint64_t a, uint64_t b) {
    uint64_t r = 0;
    for (int i = 0; i < 32; i++)
        if ((b >> i) & 1) r ^= a << i;
    return r;
}

inline int ref_deg(uint64_t a) {
    int d = -1;
    for (int i = 0; i < 64; i++)
        if ((a >> i) & 1) d = i;
    return d;
}

inline uint64_t ref_mod(uint64_t a, uint64_t f) {
    int df = ref_deg(f);
    for (int i = 62; i >= df; i--)
        if ((a >> i) & 1) a ^= f << (i - df);
    return a;
}

// trial division by every polynomial of degree 1..deg/2
inline bool ref_irreducible(uint64_t f) {
    int d = ref_deg(f);
    if (d < 1) return false;
    if (d == 1) return true;
    for (int dd = 1; dd <= d / 2; dd++)
        for (uint64_t g = (uint64_t(1) << dd); g < (uint64_t(1) << (dd + 1)); g++)
            if (ref_mod(f, g) == 0) return false;
    return true;
}

inline uint64_t to_mask(const rlpn::Gf2Poly& p) {
    uint64_t m = 0;
    for (int e : p.support()) m |= uint64_t(1) << e;
    return m;
}

inline rlpn::Gf2Poly from_mask(uint64_t m) {
    std::vector<int> exps;
    for (int i = 0; i < 64; i++)
        if ((m >> i) & 1) exps.push_back(i);
    return rlpn::Gf2Poly::from_exponents(exps);
}

// Walsh transform, O(4^n) definition: F[w] = sum_a f[a] * (-1)^<w,a>
inline std::vector<int64_t> ref_fwht(const std::vector<int64_t>& f) {
    size_t n = f.size();
    std::vector<int64_t> out(n, 0);
    for (size_t w = 0; w < n; w++)
        for (size_t a = 0; a < n; a++) {
            int par = std::popcount(uint64_t(w & a)) & 1;
            out[w] += par ? -f[a] : f[a];
        }
    return out;
}

} // namespace refimpl

#endif
