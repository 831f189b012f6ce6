#include "rlpn/lapin.hpp"

#include "rlpn/error.hpp"

namespace rlpn {

Gf2Poly pi_map(const BitVec& c, const RingSpec& ring) {
    require(int(c.size()) <= ring.degree(), errc::invalid_argument,
            "pi_map: challenge longer than the ring degree");
    return Gf2Poly::from_bits(c);
}

LapinKeys lapin_keygen(const RingSpec& ring, uint64_t seed) {
    SplitMix64 rng = SplitMix64::substream(seed, 0);
    LapinKeys keys;
    keys.s = Gf2Poly::from_bits(rng.bits(size_t(ring.degree())));
    keys.s_prime = Gf2Poly::from_bits(rng.bits(size_t(ring.degree())));
    return keys;
}

namespace {

Gf2Poly draw_error(const RingSpec& ring, NoiseSpec noise, SplitMix64& rng) {
    BitVec bits{size_t(ring.degree())};
    for (size_t i = 0; i < bits.size(); i++)
        if (rng.bernoulli(noise.num, noise.den)) bits.set(i, true);
    return Gf2Poly::from_bits(bits);
}

} // namespace

LapinTranscript tag_respond(const RingSpec& ring, const LapinKeys& keys, const BitVec& c,
                            NoiseSpec noise, SplitMix64& rng) {
    noise.validate();
    Gf2Poly r;
    do {
        r = Gf2Poly::from_bits(rng.bits(size_t(ring.degree())));
    } while (!ring.is_unit(r));
    Gf2Poly inner = (keys.s * pi_map(c, ring) + keys.s_prime).mod(ring.modulus());
    Gf2Poly e = draw_error(ring, noise, rng);
    LapinTranscript tr;
    tr.c = c;
    tr.r = r;
    tr.z = ring.mul_add(r, inner, e);
    return tr;
}

bool reader_verify(const RingSpec& ring, const LapinKeys& keys, const LapinTranscript& tr,
                   NoiseSpec eta_prime) {
    eta_prime.validate();
    require(eta_prime.num > 0, errc::invalid_argument,
            "reader_verify: the acceptance threshold must be positive");
    if (!ring.is_unit(tr.r)) return false;
    Gf2Poly inner = (keys.s * pi_map(tr.c, ring) + keys.s_prime).mod(ring.modulus());
    Gf2Poly err = tr.z + ring.mul(tr.r, inner);
    // reject iff wt * den > n * num
    return err.weight() * eta_prime.den <= uint64_t(ring.degree()) * eta_prime.num;
}

std::vector<LapinTranscript> eavesdrop(const RingSpec& ring, const LapinKeys& keys,
                                       NoiseSpec noise, uint64_t count, uint64_t seed, int lambda,
                                       const BitVec* fixed_challenge) {
    require(count >= 1, errc::invalid_argument, "eavesdrop: need at least one run");
    require(lambda >= 1 && lambda <= ring.degree(), errc::invalid_argument,
            "eavesdrop: challenge length must be in [1, deg f]");
    if (fixed_challenge)
        require(int(fixed_challenge->size()) == lambda, errc::invalid_argument,
                "eavesdrop: fixed challenge length mismatch");
    std::vector<LapinTranscript> out;
    out.reserve(size_t(count));
    for (uint64_t i = 0; i < count; i++) {
        SplitMix64 rng = SplitMix64::substream(seed, i);
        BitVec c = fixed_challenge ? *fixed_challenge : rng.bits(size_t(lambda));
        out.push_back(tag_respond(ring, keys, c, noise, rng));
    }
    return out;
}

uint64_t pi_unit_violations(const RingSpec& ring, int lambda, uint64_t seed, int trials) {
    require(lambda >= 1 && lambda <= ring.degree(), errc::invalid_argument,
            "pi check: challenge length must be in [1, deg f]");
    SplitMix64 rng(seed);
    uint64_t bad = 0;
    for (int i = 0; i < trials; i++) {
        BitVec c1 = rng.bits(size_t(lambda));
        BitVec c2 = rng.bits(size_t(lambda));
        if (c1 == c2) continue;
        Gf2Poly diff = pi_map(c1, ring) + pi_map(c2, ring);
        if (!ring.is_unit(diff)) bad++;
    }
    return bad;
}

} // namespace rlpn
