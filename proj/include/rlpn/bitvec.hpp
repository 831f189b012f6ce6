#ifndef RLPN_BITVEC_HPP
#define RLPN_BITVEC_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

#include "rlpn/error.hpp"

namespace rlpn {

// Fixed-length bit vector, bit i stored at word i/64, position i%64.
// Trailing bits of the last word are kept zero.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(size_t nbits) : n_(nbits), w_((nbits + 63) / 64, 0) {}

    size_t size() const { return n_; }
    size_t words() const { return w_.size(); }
    uint64_t word(size_t i) const { return w_[i]; }
    uint64_t& word(size_t i) { return w_[i]; }
    const uint64_t* data() const { return w_.data(); }

    bool get(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }
    void flip(size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }

    void xor_with(const BitVec& o) {
        for (size_t i = 0; i < w_.size(); i++) w_[i] ^= o.w_[i];
    }

    size_t popcount() const {
        size_t c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    bool is_zero() const {
        for (uint64_t w : w_)
            if (w) return false;
        return true;
    }

    // Value of bits [lo, lo+len) as an integer, len <= 64.
    uint64_t extract(size_t lo, size_t len) const {
        if (len == 0) return 0;
        size_t wi = lo >> 6, sh = lo & 63;
        uint64_t v = w_[wi] >> sh;
        if (sh && wi + 1 < w_.size()) v |= w_[wi + 1] << (64 - sh);
        return len == 64 ? v : v & ((uint64_t(1) << len) - 1);
    }

    // Keep the low nbits, shrinking the vector.
    void truncate(size_t nbits) {
        n_ = nbits;
        w_.resize((nbits + 63) / 64);
        mask_tail();
    }

    void clear() { std::fill(w_.begin(), w_.end(), 0); }

    void mask_tail() {
        if (n_ & 63) w_.back() &= (uint64_t(1) << (n_ & 63)) - 1;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

    // Lexicographic order on the bit sequence b_0, b_1, ...: the vector with a
    // 0 at the first differing index is the smaller one.
    static bool lex_less(const BitVec& a, const BitVec& b) {
        for (size_t i = 0; i < a.w_.size() && i < b.w_.size(); i++) {
            uint64_t d = a.w_[i] ^ b.w_[i];
            if (d) return ((a.w_[i] >> std::countr_zero(d)) & 1) == 0;
        }
        return a.n_ < b.n_;
    }

  private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Row-major bit matrix over GF(2).
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), stride_((cols + 63) / 64), w_(rows * stride_, 0) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    bool get(size_t r, size_t c) const { return (w_[r * stride_ + (c >> 6)] >> (c & 63)) & 1; }
    void set(size_t r, size_t c, bool v) {
        uint64_t m = uint64_t(1) << (c & 63);
        if (v)
            w_[r * stride_ + (c >> 6)] |= m;
        else
            w_[r * stride_ + (c >> 6)] &= ~m;
    }

    const uint64_t* row_data(size_t r) const { return w_.data() + r * stride_; }
    uint64_t* row_data(size_t r) { return w_.data() + r * stride_; }
    size_t stride() const { return stride_; }

    BitVec row(size_t r) const {
        BitVec v(cols_);
        std::memcpy(&v.word(0), row_data(r), stride_ * 8);
        return v;
    }

    void row_xor(size_t dst, size_t src) {
        uint64_t* d = row_data(dst);
        const uint64_t* s = row_data(src);
        for (size_t i = 0; i < stride_; i++) d[i] ^= s[i];
    }

    size_t row_weight(size_t r) const {
        size_t c = 0;
        const uint64_t* d = row_data(r);
        for (size_t i = 0; i < stride_; i++) c += std::popcount(d[i]);
        return c;
    }

    // Row vector times matrix: out_j = sum_i m_i * M[i][j].
    BitVec vecmul_left(const BitVec& m) const {
        require(m.size() == rows_, errc::invalid_argument, "vecmul_left: length mismatch");
        BitVec out(cols_);
        for (size_t r = 0; r < rows_; r++) {
            if (!m.get(r)) continue;
            const uint64_t* s = row_data(r);
            for (size_t i = 0; i < stride_; i++) out.word(i) ^= s[i];
        }
        return out;
    }

    // Matrix times column vector: out_i = <row_i, v>.
    BitVec mul_vec(const BitVec& v) const {
        require(v.size() == cols_, errc::invalid_argument, "mul_vec: length mismatch");
        BitVec out(rows_);
        for (size_t r = 0; r < rows_; r++) {
            uint64_t acc = 0;
            const uint64_t* d = row_data(r);
            for (size_t i = 0; i < stride_; i++) acc ^= d[i] & v.word(i);
            out.set(r, std::popcount(acc) & 1);
        }
        return out;
    }

    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && w_ == o.w_;
    }

  private:
    size_t rows_ = 0, cols_ = 0, stride_ = 0;
    std::vector<uint64_t> w_;
};

} // namespace rlpn

#endif
