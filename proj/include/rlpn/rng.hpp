#ifndef RLPN_RNG_HPP
#define RLPN_RNG_HPP

#include <cstdint>

#include "rlpn/bitvec.hpp"

namespace rlpn {

// splitmix64: the output at step i is a fixed mix of (state0 + i*gamma), so
// the stream is a pure counter hash and replays identically everywhere.
// Substream i of a master seed starts from state (seed + i); callers reserve
// disjoint substream indices to get order-independent parallel draws.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : s_(seed) {}

    static SplitMix64 substream(uint64_t seed, uint64_t index) { return SplitMix64(seed + index); }

    uint64_t next() {
        uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Exact Bernoulli(num/den) via rejection on the final partial block of
    // the 64-bit range; no floating point, no libc distributions.
    bool bernoulli(uint64_t num, uint64_t den) {
        if (num == 0) return false;
        uint64_t lim = ~uint64_t(0) - (~uint64_t(0) % den + 1) % den;
        for (;;) {
            uint64_t u = next();
            if (u <= lim || lim == ~uint64_t(0)) return (u % den) < num;
        }
    }

    // Uniform value in [0, n).
    uint64_t below(uint64_t n) {
        uint64_t lim = ~uint64_t(0) - (~uint64_t(0) % n + 1) % n;
        for (;;) {
            uint64_t u = next();
            if (u <= lim || lim == ~uint64_t(0)) return u % n;
        }
    }

    BitVec bits(size_t n) {
        BitVec v(n);
        for (size_t i = 0; i < v.words(); i++) v.word(i) = next();
        v.mask_tail();
        return v;
    }

  private:
    uint64_t s_;
};

} // namespace rlpn

#endif
