#include "rlpn/gf2poly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>

#include "rlpn/error.hpp"

namespace rlpn {

void Gf2Poly::normalize() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
}

Gf2Poly Gf2Poly::monomial(int exp) {
    require(exp >= 0, errc::invalid_argument, "monomial: negative exponent");
    Gf2Poly p;
    p.w_.resize(size_t(exp) / 64 + 1, 0);
    p.w_[size_t(exp) / 64] = uint64_t(1) << (exp % 64);
    return p;
}

Gf2Poly Gf2Poly::from_exponents(const std::vector<int>& exps) {
    Gf2Poly p;
    for (int e : exps) {
        require(e >= 0, errc::parse, "negative exponent");
        size_t wi = size_t(e) / 64;
        if (wi >= p.w_.size()) p.w_.resize(wi + 1, 0);
        p.w_[wi] ^= uint64_t(1) << (e % 64);
    }
    p.normalize();
    return p;
}

Gf2Poly Gf2Poly::from_bits(const BitVec& v) {
    Gf2Poly p;
    p.w_.assign(v.data(), v.data() + v.words());
    p.normalize();
    return p;
}

int Gf2Poly::degree() const {
    if (w_.empty()) return kMinusInfinity;
    return int(w_.size() - 1) * 64 + 63 - std::countl_zero(w_.back());
}

void Gf2Poly::set_coeff(int i, bool v) {
    require(i >= 0, errc::invalid_argument, "set_coeff: negative index");
    size_t wi = size_t(i) / 64;
    if (v) {
        if (wi >= w_.size()) w_.resize(wi + 1, 0);
        w_[wi] |= uint64_t(1) << (i % 64);
    } else if (wi < w_.size()) {
        w_[wi] &= ~(uint64_t(1) << (i % 64));
        normalize();
    }
}

size_t Gf2Poly::weight() const {
    size_t c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
}

std::vector<int> Gf2Poly::support() const {
    std::vector<int> s;
    for (size_t i = 0; i < w_.size(); i++) {
        uint64_t w = w_[i];
        while (w) {
            s.push_back(int(i * 64) + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return s;
}

BitVec Gf2Poly::to_bits(size_t n) const {
    require(is_zero() || degree() < int(n), errc::invalid_argument, "to_bits: degree too large");
    BitVec v(n);
    for (size_t i = 0; i < w_.size(); i++) v.word(i) = w_[i];
    return v;
}

Gf2Poly Gf2Poly::operator+(const Gf2Poly& o) const {
    Gf2Poly r;
    r.w_.resize(std::max(w_.size(), o.w_.size()), 0);
    for (size_t i = 0; i < w_.size(); i++) r.w_[i] = w_[i];
    for (size_t i = 0; i < o.w_.size(); i++) r.w_[i] ^= o.w_[i];
    r.normalize();
    return r;
}

Gf2Poly Gf2Poly::operator*(const Gf2Poly& o) const {
    if (is_zero() || o.is_zero()) return Gf2Poly();
    Gf2Poly r;
    r.w_.assign(w_.size() + o.w_.size(), 0);
    // schoolbook carry-less word product, 4-bit windows of the left operand
    for (size_t i = 0; i < w_.size(); i++) {
        uint64_t a = w_[i];
        if (!a) continue;
        for (size_t j = 0; j < o.w_.size(); j++) {
            uint64_t b = o.w_[j];
            if (!b) continue;
            uint64_t lo = 0, hi = 0;
            for (int k = 0; k < 64; k += 4) {
                uint64_t nib = (a >> k) & 0xf;
                if (!nib) continue;
                for (int t = 0; t < 4; t++) {
                    if (!((nib >> t) & 1)) continue;
                    int sh = k + t;
                    lo ^= b << sh;
                    if (sh) hi ^= b >> (64 - sh);
                }
            }
            r.w_[i + j] ^= lo;
            r.w_[i + j + 1] ^= hi;
        }
    }
    r.normalize();
    return r;
}

void Gf2Poly::divrem(const Gf2Poly& a, const Gf2Poly& b, Gf2Poly& q, Gf2Poly& r) {
    require(!b.is_zero(), errc::invalid_argument, "divrem: zero divisor");
    r = a;
    q = Gf2Poly();
    int db = b.degree();
    int dr = r.degree();
    if (dr == kMinusInfinity || dr < db) return;
    q.w_.assign(size_t(dr - db) / 64 + 1, 0);
    while (!r.is_zero() && (dr = r.degree()) >= db) {
        int sh = dr - db;
        q.w_[size_t(sh) / 64] |= uint64_t(1) << (sh % 64);
        // r ^= b << sh
        size_t wo = size_t(sh) / 64;
        int bo = sh % 64;
        if (r.w_.size() < b.w_.size() + wo + 1) r.w_.resize(b.w_.size() + wo + 1, 0);
        for (size_t i = 0; i < b.w_.size(); i++) {
            r.w_[i + wo] ^= b.w_[i] << bo;
            if (bo) r.w_[i + wo + 1] ^= b.w_[i] >> (64 - bo);
        }
        r.normalize();
    }
    q.normalize();
}

Gf2Poly Gf2Poly::mod(const Gf2Poly& f) const {
    Gf2Poly q, r;
    divrem(*this, f, q, r);
    return r;
}

void Gf2Poly::shift_reduce(const Gf2Poly& f) {
    int df = f.degree();
    require(df >= 1, errc::invalid_argument, "shift_reduce: modulus degree < 1");
    bool top = coeff(df - 1);
    // multiply by x
    uint64_t carry = 0;
    for (size_t i = 0; i < w_.size(); i++) {
        uint64_t nc = w_[i] >> 63;
        w_[i] = (w_[i] << 1) | carry;
        carry = nc;
    }
    if (carry) w_.push_back(carry);
    if (top) {
        // knock out the x^df term with f
        if (w_.size() < f.w_.size()) w_.resize(f.w_.size(), 0);
        for (size_t i = 0; i < f.w_.size(); i++) w_[i] ^= f.w_[i];
    }
    normalize();
}

Gf2Poly Gf2Poly::gcd(Gf2Poly a, Gf2Poly b) {
    while (!b.is_zero()) {
        Gf2Poly r = a.mod(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Gf2Poly Gf2Poly::ext_gcd(const Gf2Poly& a, const Gf2Poly& b, Gf2Poly& u, Gf2Poly& v) {
    require(!a.is_zero() || !b.is_zero(), errc::invalid_argument, "ext_gcd: both inputs zero");
    Gf2Poly r0 = a, r1 = b;
    Gf2Poly s0 = Gf2Poly::one(), s1;
    Gf2Poly t0, t1 = Gf2Poly::one();
    while (!r1.is_zero()) {
        Gf2Poly q, r;
        divrem(r0, r1, q, r);
        Gf2Poly s = s0 + q * s1;
        Gf2Poly t = t0 + q * t1;
        r0 = std::move(r1); r1 = std::move(r);
        s0 = std::move(s1); s1 = std::move(s);
        t0 = std::move(t1); t1 = std::move(t);
    }
    u = s0;
    v = t0;
    return r0;
}

Gf2Poly Gf2Poly::powmod(const Gf2Poly& base, uint64_t e, const Gf2Poly& f) {
    require(f.degree() >= 1, errc::invalid_argument, "powmod: modulus degree < 1");
    Gf2Poly result = Gf2Poly::one().mod(f);
    Gf2Poly b = base.mod(f);
    while (e) {
        if (e & 1) result = (result * b).mod(f);
        b = (b * b).mod(f);
        e >>= 1;
    }
    return result;
}

Gf2Poly Gf2Poly::powmod_pow2(const Gf2Poly& base, unsigned d, const Gf2Poly& f) {
    require(f.degree() >= 1, errc::invalid_argument, "powmod: modulus degree < 1");
    Gf2Poly b = base.mod(f);
    for (unsigned i = 0; i < d; i++) b = (b * b).mod(f);
    return b;
}

namespace {

std::vector<int> prime_divisors(int n) {
    std::vector<int> ps;
    for (int p = 2; p * p <= n; p++) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

} // namespace

bool Gf2Poly::is_irreducible() const {
    int n = degree();
    require(n >= 1, errc::invalid_argument, "is_irreducible: degree < 1");
    if (n == 1) return true;
    // must have a constant term, else divisible by x
    if (!coeff(0)) return false;
    Gf2Poly x = monomial(1);
    // Frobenius: x^(2^n) == x mod f, and for each prime p | n the
    // intermediate power x^(2^(n/p)) - x must be coprime to f.
    if (powmod_pow2(x, unsigned(n), *this) != x.mod(*this)) return false;
    for (int p : prime_divisors(n)) {
        Gf2Poly g = gcd(powmod_pow2(x, unsigned(n / p), *this) + x, *this);
        if (!g.is_one()) return false;
    }
    return true;
}

namespace {

int parse_int(const std::string& s, size_t& i) {
    size_t start = i;
    while (i < s.size() && std::isdigit((unsigned char)s[i])) i++;
    require(i > start, errc::parse, "expected integer in polynomial text");
    long v = 0;
    for (size_t j = start; j < i; j++) {
        v = v * 10 + (s[j] - '0');
        require(v <= 1 << 26, errc::parse, "exponent out of range");
    }
    return int(v);
}

} // namespace

Gf2Poly Gf2Poly::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace((unsigned char)c)) s.push_back(c);
    require(!s.empty(), errc::parse, "empty polynomial text");

    std::vector<int> exps;
    if (s.front() == '[') {
        require(s.back() == ']', errc::parse, "unterminated exponent list");
        size_t i = 1;
        if (s[i] != ']') {
            for (;;) {
                exps.push_back(parse_int(s, i));
                require(i < s.size(), errc::parse, "unterminated exponent list");
                if (s[i] == ']') break;
                require(s[i] == ',', errc::parse, "expected ',' in exponent list");
                i++;
            }
        }
        return from_exponents(exps);
    }

    if (s == "0") return Gf2Poly();
    size_t i = 0;
    for (;;) {
        if (s[i] == '1') {
            exps.push_back(0);
            i++;
        } else if (s[i] == 'x' || s[i] == 'X') {
            i++;
            if (i < s.size() && s[i] == '^') {
                i++;
                exps.push_back(parse_int(s, i));
            } else {
                exps.push_back(1);
            }
        } else {
            fail(errc::parse, "unexpected character in polynomial text");
        }
        if (i == s.size()) break;
        require(s[i] == '+', errc::parse, "expected '+' in polynomial text");
        i++;
        require(i < s.size(), errc::parse, "trailing '+' in polynomial text");
    }
    return from_exponents(exps);
}

std::string Gf2Poly::format() const {
    if (is_zero()) return "0";
    std::vector<int> s = support();
    std::ostringstream out;
    for (size_t i = s.size(); i-- > 0;) {
        int e = s[i];
        if (e == 0)
            out << "1";
        else if (e == 1)
            out << "x";
        else
            out << "x^" << e;
        if (i) out << "+";
    }
    return out.str();
}

} // namespace rlpn
