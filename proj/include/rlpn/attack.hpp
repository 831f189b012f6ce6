#ifndef RLPN_ATTACK_HPP
#define RLPN_ATTACK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rlpn/bitvec.hpp"
#include "rlpn/crtcode.hpp"
#include "rlpn/oracle.hpp"

namespace rlpn {

// One standard LPN sample: z = <a, s> + e.
struct LpnSample {
    BitVec a;
    uint8_t z = 0;
};

// Work tallies in the same units as the cost formulas: compress counts
// l(2l+1) per processed sample, merge counts l per bucketed sample plus 2l
// per emitted pair, transform counts table fills plus the n*2^n butterflies.
struct OpCounters {
    uint64_t compress = 0;
    uint64_t merge = 0;
    uint64_t transform = 0;
    uint64_t total() const { return compress + merge + transform; }
    OpCounters& operator+=(const OpCounters& o) {
        compress += o.compress;
        merge += o.merge;
        transform += o.transform;
        return *this;
    }
};

struct AttackParams {
    int k = 0;               // collision width (zeroed positions)
    uint64_t n_samples = 0;  // oracle queries N
    Relation relation;       // parity relation m (weight d or w)
    NoiseSpec noise;
    int threads = 1;
    uint64_t bucket_pair_cap = uint64_t(1) << 20;
    // every holdout_every-th merged sample is withheld from the transform and
    // used to recount the winner; <= 1 disables the holdout.
    int holdout_every = 10;
    bool validate = true;
};

struct AttackResult {
    // candidate bit q is the guess for coefficient secret_offset + q of the
    // small-ring secret: offset 0 for the generic pipeline, k for the
    // merged-row pipeline (which sees only the top l-k coefficients).
    BitVec candidate;
    int secret_offset = 0;
    BitVec second_candidate;
    int64_t score = 0;
    int64_t second_score = 0;
    uint64_t samples_used = 0; // merged samples fed to the transform
    uint64_t queries = 0;      // ring samples drawn
    bool inconclusive = false; // holdout recount margin below 1 null sigma
    int64_t holdout_margin = 0;
    uint64_t holdout_count = 0;
    OpCounters ops;
};

// a = m * tau(r), z = <m, vec(v)>; the sample must already be reduced to the
// small ring (both degrees below l).
LpnSample compress_sample(const RingLpnSample& sample, const Relation& relation,
                          const CrtCode& code);

// Bucket by the k highest-index bits of a, XOR all distinct pairs within each
// bucket (first pair_cap pairs in index order), drop the k zeroed positions.
// Output order is canonical (ascending bucket key, pairs in lexicographic
// index order) and independent of the worker count.
std::vector<LpnSample> birthday_merge(const std::vector<LpnSample>& samples, int k,
                                      uint64_t pair_cap = uint64_t(1) << 20, int threads = 1,
                                      OpCounters* ops = nullptr);

// In-place Walsh-Hadamard butterfly, integer exact; length must be a power
// of two. output[c] = sum_a input[a] * (-1)^<c,a>.
void fwht(std::vector<int64_t>& table);

// Accumulate f(a) += (-1)^z, transform, return the candidate maximizing |F|
// (ties: smallest index). Table is 2^dims entries; every a must fit in dims
// bits.
AttackResult distinguish(const std::vector<LpnSample>& samples, int dims, int threads = 1,
                         OpCounters* ops = nullptr);

// Advisory checks (exact arithmetic): N^2/2^k >= (1/eps)^(4d) sample-count
// bound and the l-k >= log2(N^2/2^k) transform-sizing assumption.
std::vector<std::string> param_warnings(const AttackParams& params, int l);

// Full pipeline, generic relation: batch N -> reduce mod f1 -> compress via
// relation -> merge on k -> distinguish l-k dims. Recovers coefficients
// [0, l-k) of the small-ring secret.
AttackResult run_generic(Oracle& oracle, const AttackParams& params, const CrtCode& code);
// Same pipeline over pre-collected samples (eavesdropped transcripts, dump
// replays); params.n_samples is ignored in favor of raw.size().
AttackResult run_generic_samples(const std::vector<RingLpnSample>& raw,
                                 const AttackParams& params, const CrtCode& code);

// Merged-row pipeline: collide raw small-ring samples on the top k
// coefficients of r; each merged pair's LPN vector is read off the merged
// polynomial directly (the last tau row of a polynomial of degree < l-k is
// [0..0, r'_{l-k-1}, ..., r'_0]), the observed bit is coefficient l-1 of v'.
// Requires the relation to be the last generator row, k >= 11, and k at
// least the second-highest exponent of f1 (so reduction terms cannot reach
// coefficient l-1). Recovers coefficients [k, l).
AttackResult run_improved(Oracle& oracle, const AttackParams& params, const CrtCode& code);
// Same pipeline over pre-collected samples.
AttackResult run_improved_samples(const std::vector<RingLpnSample>& raw,
                                  const AttackParams& params, const CrtCode& code);

struct DecisionResult {
    bool real = false;
    int64_t score = 0;
    double threshold = 0.0;     // midpoint of expected_peak and null_quantile
    double expected_peak = 0.0; // M * eps^(2w)
    double null_quantile = 0.0; // sqrt(2 M ln 2^dims)
    AttackResult detail;
};

// Distinguish real from uniform: run the merged-row pipeline and compare the
// peak against the midpoint threshold.
DecisionResult decision_test(Oracle& oracle, const AttackParams& params, const CrtCode& code);

// eps^n: the bias of a XOR of n bits that each have bias eps.
double piling_up(double epsilon, int n);

// Harness helper: compare the candidate against coefficients
// [secret_offset, secret_offset + dims) of the known small-ring secret.
bool matches_secret(const AttackResult& result, const Gf2Poly& secret_mod_f1);

} // namespace rlpn

#endif
