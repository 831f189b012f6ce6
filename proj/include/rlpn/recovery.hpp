#ifndef RLPN_RECOVERY_HPP
#define RLPN_RECOVERY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rlpn/attack.hpp"
#include "rlpn/crtcode.hpp"
#include "rlpn/gf2poly.hpp"
#include "rlpn/oracle.hpp"
#include "rlpn/ring.hpp"

namespace rlpn {

// Residues recovered so far: factor index -> s mod f_i (degree < deg f_i).
struct PartialSecret {
    std::map<size_t, Gf2Poly> known;
    std::vector<size_t> unknown;
};

// v + r * (sum of known s_i * t_i) mod f. What remains is
// r * (sum of unknown s_j * t_j) + e; with everything known, e itself.
// Adding the same correction twice restores the original v.
Gf2Poly strip_known(const RingLpnSample& sample, const PartialSecret& partial,
                    const RingSpec& ring);

// One LPN sample per coefficient row. For each unknown factor j (listed
// order) the useful columns are vec(r * t_j * x^i mod f) for i < deg f_j,
// since s_j has no higher coefficients; row p concatenates the p-th bits of
// those columns across factors, z is coefficient p of the stripped v. The
// hidden vector is vec(s_j1) || vec(s_j2) || ...
// Requires known and unknown to partition the factor set exactly.
std::vector<LpnSample> build_reduced_lpn(const RingLpnSample& sample, const PartialSecret& partial,
                                         const RingSpec& ring);

// Reduced-instance solver. Zero noise: Gaussian elimination, any dims,
// rank_deficient when free variables remain. Otherwise: collide on
// k = max(1, dims - fwht_budget) top coordinates, transform the rest, then
// pick the 2^k completion with the best vote on the raw samples; k is
// capped at 12, so dims may exceed the budget by at most 12.
BitVec solve_reduced(const std::vector<LpnSample>& samples, int dims, NoiseSpec noise,
                     int fwht_budget = 16, int threads = 1,
                     uint64_t pair_cap = uint64_t(1) << 17, OpCounters* ops = nullptr);

// Full residue s mod f1 from raw ring samples: coefficients [k, l) via the
// merged-row pipeline, coefficients [0, k) by folding the recovered bits
// out of the relation-compressed samples and transforming over 2^k.
struct ResidueResult {
    Gf2Poly residue;
    bool conclusive = true;
    AttackResult high; // merged-row stage
    AttackResult low;  // completion stage
};
ResidueResult recover_residue(const std::vector<RingLpnSample>& raw, const AttackParams& params,
                              const CrtCode& code);

// Staged schedule: attack_factors are recovered one at a time with
// recover_residue; reduced_factors are stripped and solved together as one
// concatenated LPN instance. Every factor must appear exactly once. A
// stage's AttackParams with an empty relation gets the factor's last
// generator row filled in.
struct RecoverPlan {
    std::vector<size_t> attack_factors;
    std::vector<size_t> reduced_factors;
    std::map<size_t, AttackParams> params;
    uint64_t reduced_samples = 256;
    int fwht_budget = 16;
    uint64_t reduced_pair_cap = uint64_t(1) << 17;
    int verify_samples = 64;
    int threads = 1;
};

struct StageReport {
    std::vector<size_t> factors;
    bool via_reduced = false;
    bool conclusive = true;
    int64_t score = 0;
    uint64_t samples_used = 0;
    OpCounters ops;
};

struct RecoverResult {
    Gf2Poly secret; // crt lift of the residues; zero until all are present
    std::map<size_t, Gf2Poly> residues;
    bool complete = false;      // every stage ran and was conclusive
    bool verified = false;      // fresh-sample residual weight under the cut
    double residual_rate = 0.0; // mean wt(v - r*candidate) / t
    double accept_rate = 0.0;   // cut: eta + (1/2 - eta)/2
    std::vector<StageReport> stages;
    std::vector<std::string> diagnostics;
    OpCounters total_ops; // sum of the per-stage counters
};

// Runs the schedule against the oracle, lifts the residues, then accepts
// when the mean residual weight on fresh samples stays under
// t * (eta + (1/2 - eta)/2). A failed or inconclusive stage downgrades the
// result to partial (diagnostics say which) instead of throwing.
RecoverResult full_recover(Oracle& oracle, const RecoverPlan& plan);

} // namespace rlpn

#endif
