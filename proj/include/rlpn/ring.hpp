#ifndef RLPN_RING_HPP
#define RLPN_RING_HPP

#include <memory>
#include <string>
#include <vector>

#include "rlpn/bitvec.hpp"
#include "rlpn/gf2poly.hpp"

namespace rlpn {

// One Ring-LPN sample (r, v) with both polynomials reduced mod the ring
// modulus; the owning oracle/ring provides the context.
struct RingLpnSample {
    Gf2Poly r;
    Gf2Poly v;
};

// Quotient ring GF(2)[x]/(f) with a known factorization f = f_1 ... f_m into
// pairwise coprime factors. Holds the CRT idempotents t_i (t_i = 1 mod f_i,
// 0 mod f_j for j != i, sum t_i = 1 mod f).
class RingSpec {
  public:
    // Validates: deg >= 1 factors, product == modulus, pairwise coprime.
    static std::shared_ptr<const RingSpec> make(Gf2Poly modulus, std::vector<Gf2Poly> factors,
                                                std::string name = "");
    // modulus taken as the factor product.
    static std::shared_ptr<const RingSpec> make_from_factors(std::vector<Gf2Poly> factors,
                                                             std::string name = "");

    const Gf2Poly& modulus() const { return f_; }
    int degree() const { return t_; }
    size_t factor_count() const { return factors_.size(); }
    const Gf2Poly& factor(size_t i) const { return factors_[i]; }
    int factor_degree(size_t i) const { return factors_[i].degree(); }
    const Gf2Poly& idempotent(size_t i) const { return idem_[i]; }
    const std::string& name() const { return name_; }

    Gf2Poly reduce(const Gf2Poly& p) const { return p.mod(f_); }
    Gf2Poly mul(const Gf2Poly& a, const Gf2Poly& b) const { return (a * b).mod(f_); }
    // r*s + e mod f
    Gf2Poly mul_add(const Gf2Poly& r, const Gf2Poly& s, const Gf2Poly& e) const {
        return (r * s + e).mod(f_);
    }

    // CRT residues (r mod f_1, ..., r mod f_m), factor order.
    std::vector<Gf2Poly> crt_split(const Gf2Poly& r) const;
    // Unique preimage of the residue list, via the idempotents.
    Gf2Poly crt_lift(const std::vector<Gf2Poly>& residues) const;

    bool is_unit(const Gf2Poly& r) const { return Gf2Poly::gcd(r, f_).is_one(); }

    // Multiplicative inverse mod f; r must be a unit.
    Gf2Poly inverse(const Gf2Poly& r) const;

    // JSON round trip ({"name":..., "modulus":..., "factors":[...]}).
    static std::shared_ptr<const RingSpec> from_json(const std::string& json_text);
    std::string to_json() const;

  private:
    RingSpec() = default;
    Gf2Poly f_;
    std::vector<Gf2Poly> factors_;
    std::vector<Gf2Poly> idem_;
    std::string name_;
    int t_ = 0;
};

// t x t matrix of multiplication by r in GF(2)[x]/(f): column i is the
// coefficient vector of r * x^i mod f, so M * vec(s) = vec(r*s mod f).
BitMatrix tau_matrix(const Gf2Poly& r, const Gf2Poly& f);

} // namespace rlpn

#endif
