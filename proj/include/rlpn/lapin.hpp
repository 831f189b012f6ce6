#ifndef RLPN_LAPIN_HPP
#define RLPN_LAPIN_HPP

#include <cstdint>
#include <vector>

#include "rlpn/oracle.hpp"
#include "rlpn/ring.hpp"
#include "rlpn/rng.hpp"

namespace rlpn {

// Two-round authentication over GF(2)[x]/(f): the reader sends a challenge
// c, the tag answers (r, z) with z = r*(s*pi(c) + s') + e, and the reader
// accepts when the recomputed error weight stays under n*eta'.
struct LapinKeys {
    Gf2Poly s;
    Gf2Poly s_prime;
};

struct LapinTranscript {
    BitVec c;
    Gf2Poly r;
    Gf2Poly z;
};

// Challenge embedding: bit i of c becomes coefficient i. Injective for
// lambda <= deg f; when lambda is below every factor degree, any nonzero
// difference pi(c) - pi(c') is automatically a unit.
Gf2Poly pi_map(const BitVec& c, const RingSpec& ring);

LapinKeys lapin_keygen(const RingSpec& ring, uint64_t seed);

// One tag response: r resampled until it is a unit, then the protocol line.
LapinTranscript tag_respond(const RingSpec& ring, const LapinKeys& keys, const BitVec& c,
                            NoiseSpec noise, SplitMix64& rng);

// Reject when r is not a unit or wt(z - r*(s*pi(c)+s')) > n * eta'
// (exact rational comparison).
bool reader_verify(const RingSpec& ring, const LapinKeys& keys, const LapinTranscript& tr,
                   NoiseSpec eta_prime);

// count honest protocol runs, transcript i drawn from substream seed + i.
// With fixed_challenge, every run reuses that c, so the (r, z) pairs form a
// Ring-LPN sample set whose secret is s*pi(c) + s'.
std::vector<LapinTranscript> eavesdrop(const RingSpec& ring, const LapinKeys& keys,
                                       NoiseSpec noise, uint64_t count, uint64_t seed, int lambda,
                                       const BitVec* fixed_challenge = nullptr);

// Empirical probe of the unit-difference property: sample trial challenge
// pairs and count c != c' with pi(c) - pi(c') not a unit. Zero means the
// embedding behaved on every sampled pair.
uint64_t pi_unit_violations(const RingSpec& ring, int lambda, uint64_t seed, int trials);

} // namespace rlpn

#endif
