#ifndef RLPN_CRTCODE_HPP
#define RLPN_CRTCODE_HPP

#include <cstdint>
#include <vector>

#include "rlpn/bitvec.hpp"
#include "rlpn/gf2poly.hpp"

namespace rlpn {

// The reduction map GF(2)[x]/(f) -> GF(2)[x]/(f_1) seen as a linear [t, l]
// code: generator column i is the coefficient vector of x^i mod f_1, so
// vec(e mod f_1) = G * vec(e). Rows double as codewords of the row space
// (message m -> m*G): a low-weight row is a low-weight parity relation on
// the ring error positions.
struct CrtCode {
    Gf2Poly f1;      // small-ring modulus
    int l = 0;       // deg f1
    int t = 0;       // ambient length (deg f)
    BitMatrix gen;   // l x t, leftmost l x l block is the identity
};

// m*G = codeword, weight = |support(codeword)|.
struct Relation {
    BitVec m;
    BitVec codeword;
    int weight = 0;
};

CrtCode build_generator(const Gf2Poly& f1, int t);

// Weight of each of the l rows.
std::vector<int> row_weights(const CrtCode& code);

Relation make_relation(const CrtCode& code, const BitVec& m);
Relation last_row_relation(const CrtCode& code);

// Exact minimum nonzero codeword weight by full message enumeration
// (Gray-code walk); l <= 24 enforced. Ties: lexicographically smallest m.
Relation min_weight_exact(const CrtCode& code);

// Information-set search: iteration 0 uses columns {0..l-1} (so the raw rows
// are always scanned), later iterations draw l random independent columns
// from a seeded substream (substream i = seed + i), invert, and scan the
// re-encoded generator's rows. Deterministic for fixed (seed, iterations).
Relation min_weight_randomized(const CrtCode& code, uint64_t seed, int iterations);

// Best known relation for downstream use: exact when l <= 24, otherwise the
// better of the randomized search and the minimum-weight raw row.
Relation best_relation(const CrtCode& code, uint64_t seed = 1, int iterations = 100);

// Largest d with sum_{i<=d-2} C(n-1, i) < 2^(n-k); exact big-int arithmetic.
int gv_bound(int n, int k);

} // namespace rlpn

#endif
