#ifndef RLPN_GF2POLY_HPP
#define RLPN_GF2POLY_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rlpn/bitvec.hpp"

namespace rlpn {

// Polynomial over GF(2), coefficient of x^i stored at bit i (word i/64).
// Words are kept normalized: no trailing zero words.
class Gf2Poly {
  public:
    // degree() of the zero polynomial; a minus-infinity marker, deliberately
    // not representable as any real degree.
    static constexpr int kMinusInfinity = std::numeric_limits<int>::min();

    Gf2Poly() = default;

    static Gf2Poly zero() { return Gf2Poly(); }
    static Gf2Poly one() { return monomial(0); }
    static Gf2Poly monomial(int exp);
    static Gf2Poly from_exponents(const std::vector<int>& exps);
    static Gf2Poly from_bits(const BitVec& v);

    bool is_zero() const { return w_.empty(); }
    bool is_one() const { return w_.size() == 1 && w_[0] == 1; }
    int degree() const;

    bool coeff(int i) const {
        size_t wi = size_t(i) >> 6;
        return wi < w_.size() && ((w_[wi] >> (i & 63)) & 1);
    }
    void set_coeff(int i, bool v);

    size_t weight() const;
    std::vector<int> support() const;

    // Coefficients 0..n-1 as a bit vector (degree must be < n).
    BitVec to_bits(size_t n) const;

    Gf2Poly operator+(const Gf2Poly& o) const;
    Gf2Poly operator*(const Gf2Poly& o) const;
    bool operator==(const Gf2Poly& o) const { return w_ == o.w_; }

    // quotient/remainder; divisor must be nonzero.
    static void divrem(const Gf2Poly& a, const Gf2Poly& b, Gf2Poly& q, Gf2Poly& r);
    Gf2Poly mod(const Gf2Poly& f) const;

    // In-place p := p*x mod f; requires deg p < deg f.
    void shift_reduce(const Gf2Poly& f);

    static Gf2Poly gcd(Gf2Poly a, Gf2Poly b);
    // g = u*a + v*b; errors if both inputs are zero.
    static Gf2Poly ext_gcd(const Gf2Poly& a, const Gf2Poly& b, Gf2Poly& u, Gf2Poly& v);

    static Gf2Poly powmod(const Gf2Poly& base, uint64_t e, const Gf2Poly& f);
    // base^(2^d) mod f by d repeated squarings: exponents beyond 2^64 stay cheap.
    static Gf2Poly powmod_pow2(const Gf2Poly& base, unsigned d, const Gf2Poly& f);

    bool is_irreducible() const;

    // "x^127+x^8+x^7+x^3+1" or "[127,8,7,3,0]"; repeated exponents cancel.
    static Gf2Poly parse(const std::string& text);
    // Sum of monomials, descending exponents; zero polynomial prints "0".
    std::string format() const;

    const std::vector<uint64_t>& raw_words() const { return w_; }

  private:
    void normalize();
    std::vector<uint64_t> w_;
};

} // namespace rlpn

#endif
