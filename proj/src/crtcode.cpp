#include "rlpn/crtcode.hpp"

#include <gmpxx.h>

#include <algorithm>

#include "rlpn/error.hpp"
#include "rlpn/rng.hpp"

namespace rlpn {

CrtCode build_generator(const Gf2Poly& f1, int t) {
    int l = f1.degree();
    require(l >= 1, errc::invalid_argument, "build_generator: deg f1 < 1");
    require(t >= l, errc::invalid_argument, "build_generator: t < deg f1");
    CrtCode code;
    code.f1 = f1;
    code.l = l;
    code.t = t;
    code.gen = BitMatrix(size_t(l), size_t(t));
    Gf2Poly p = Gf2Poly::one();
    for (int i = 0; i < t; i++) {
        for (int j : p.support()) code.gen.set(size_t(j), size_t(i), true);
        p.shift_reduce(f1);
    }
    return code;
}

std::vector<int> row_weights(const CrtCode& code) {
    std::vector<int> w(size_t(code.l));
    for (int r = 0; r < code.l; r++) w[size_t(r)] = int(code.gen.row_weight(size_t(r)));
    return w;
}

Relation make_relation(const CrtCode& code, const BitVec& m) {
    require(m.size() == size_t(code.l), errc::invalid_argument, "relation: m length != l");
    Relation rel;
    rel.m = m;
    rel.codeword = code.gen.vecmul_left(m);
    rel.weight = int(rel.codeword.popcount());
    return rel;
}

Relation last_row_relation(const CrtCode& code) {
    BitVec m(size_t(code.l));
    m.set(size_t(code.l - 1), true);
    return make_relation(code, m);
}

Relation min_weight_exact(const CrtCode& code) {
    require(code.l <= 24, errc::dimension_too_large,
            "min_weight_exact: l > 24, use the randomized search");
    size_t stride = code.gen.stride();
    std::vector<uint64_t> acc(stride, 0);
    BitVec best_m;
    uint64_t best_w = ~uint64_t(0);
    uint64_t count = uint64_t(1) << code.l;
    uint64_t gray_prev = 0;
    for (uint64_t idx = 1; idx < count; idx++) {
        uint64_t gray = idx ^ (idx >> 1);
        int bit = std::countr_zero(gray ^ gray_prev);
        gray_prev = gray;
        const uint64_t* row = code.gen.row_data(size_t(bit));
        uint64_t w = 0;
        for (size_t i = 0; i < stride; i++) {
            acc[i] ^= row[i];
            w += uint64_t(std::popcount(acc[i]));
        }
        if (w < best_w) {
            best_w = w;
            best_m = BitVec(size_t(code.l));
            best_m.word(0) = gray;
        } else if (w == best_w) {
            BitVec m(size_t(code.l));
            m.word(0) = gray;
            if (BitVec::lex_less(m, best_m)) best_m = m;
        }
    }
    return make_relation(code, best_m);
}

namespace {

// Invert the l x l column submatrix (cols) of gen; returns false if singular.
// On success, out = U with U * gen[:,cols] = I.
bool invert_submatrix(const BitMatrix& gen, const std::vector<int>& cols, BitMatrix& out) {
    size_t l = gen.rows();
    // augmented rows: [submatrix | I]
    BitMatrix aug(l, 2 * l);
    for (size_t r = 0; r < l; r++) {
        for (size_t c = 0; c < l; c++)
            if (gen.get(r, size_t(cols[c]))) aug.set(r, c, true);
        aug.set(r, l + r, true);
    }
    for (size_t c = 0; c < l; c++) {
        size_t piv = c;
        while (piv < l && !aug.get(piv, c)) piv++;
        if (piv == l) return false;
        if (piv != c)
            for (size_t i = 0; i < aug.stride(); i++)
                std::swap(aug.row_data(c)[i], aug.row_data(piv)[i]);
        for (size_t r = 0; r < l; r++)
            if (r != c && aug.get(r, c)) aug.row_xor(r, c);
    }
    out = BitMatrix(l, l);
    for (size_t r = 0; r < l; r++)
        for (size_t c = 0; c < l; c++)
            if (aug.get(r, l + c)) out.set(r, c, true);
    return true;
}

void consider(const CrtCode& code, const BitVec& m, Relation& best) {
    Relation rel = make_relation(code, m);
    if (rel.codeword.is_zero()) return;
    if (best.m.size() == 0 || rel.weight < best.weight ||
        (rel.weight == best.weight && BitVec::lex_less(rel.m, best.m)))
        best = std::move(rel);
}

} // namespace

Relation min_weight_randomized(const CrtCode& code, uint64_t seed, int iterations) {
    require(iterations >= 1, errc::invalid_argument, "min_weight_randomized: iterations < 1");
    size_t l = size_t(code.l);
    Relation best;

    // iteration 0: the systematic information set, i.e. the raw rows
    for (size_t r = 0; r < l; r++) {
        BitVec m(l);
        m.set(r, true);
        consider(code, m, best);
    }

    std::vector<int> cols(l);
    for (int it = 1; it < iterations; it++) {
        SplitMix64 rng = SplitMix64::substream(seed, uint64_t(it));
        BitMatrix u;
        bool ok = false;
        for (int attempt = 0; attempt < 32 && !ok; attempt++) {
            // draw l distinct columns
            std::vector<int> pool(size_t(code.t));
            for (int i = 0; i < code.t; i++) pool[size_t(i)] = i;
            for (size_t i = 0; i < l; i++) {
                size_t j = i + size_t(rng.below(uint64_t(pool.size() - i)));
                std::swap(pool[i], pool[j]);
                cols[i] = pool[i];
            }
            ok = invert_submatrix(code.gen, cols, u);
        }
        if (!ok) continue;
        // rows of U are messages whose codewords are systematic on cols
        for (size_t r = 0; r < l; r++) consider(code, u.row(r), best);
    }
    require(best.m.size() != 0, errc::rank_deficient,
            "min_weight_randomized: no information set found");
    return best;
}

Relation best_relation(const CrtCode& code, uint64_t seed, int iterations) {
    if (code.l <= 24) return min_weight_exact(code);
    return min_weight_randomized(code, seed, iterations);
}

int gv_bound(int n, int k) {
    require(n >= 1 && k >= 0 && k <= n, errc::invalid_argument, "gv_bound: need 0 <= k <= n");
    mpz_class bound = mpz_class(1) << (n - k);
    mpz_class vol = 0;   // sum_{i<=d-2} C(n-1, i)
    mpz_class binom = 1; // C(n-1, i)
    int d = 1;           // vol for d covers i upto d-2; d=1 -> empty sum
    for (int i = 0; i <= n - 1; i++) {
        // candidate d' = i + 2 needs vol + C(n-1, i_prev...) updated first
        vol += binom;
        if (vol < bound)
            d = i + 2;
        else
            break;
        // C(n-1, i+1) = C(n-1, i) * (n-1-i) / (i+1)
        binom *= (n - 1 - i);
        binom /= (i + 1);
    }
    return d;
}

} // namespace rlpn
