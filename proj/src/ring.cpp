#include "rlpn/ring.hpp"

#include <nlohmann/json.hpp>

#include "rlpn/error.hpp"

namespace rlpn {

std::shared_ptr<const RingSpec> RingSpec::make(Gf2Poly modulus, std::vector<Gf2Poly> factors,
                                               std::string name) {
    require(!factors.empty(), errc::invalid_argument, "ring: no factors");
    Gf2Poly prod = Gf2Poly::one();
    for (const Gf2Poly& f : factors) {
        require(f.degree() >= 1, errc::invalid_argument, "ring: factor of degree < 1");
        prod = prod * f;
    }
    require(prod == modulus, errc::factorization_invalid,
            "ring: factor product does not equal modulus");
    for (size_t i = 0; i < factors.size(); i++)
        for (size_t j = i + 1; j < factors.size(); j++)
            require(Gf2Poly::gcd(factors[i], factors[j]).is_one(), errc::factors_not_coprime,
                    "ring: factors share a common divisor");

    auto ring = std::shared_ptr<RingSpec>(new RingSpec());
    ring->f_ = std::move(modulus);
    ring->factors_ = std::move(factors);
    ring->name_ = std::move(name);
    ring->t_ = ring->f_.degree();

    // t_i = (f/f_i) * u_i with u_i the inverse of f/f_i mod f_i
    for (const Gf2Poly& fi : ring->factors_) {
        Gf2Poly cof, rem;
        Gf2Poly::divrem(ring->f_, fi, cof, rem);
        Gf2Poly u, v;
        Gf2Poly g = Gf2Poly::ext_gcd(cof.mod(fi), fi, u, v);
        require(g.is_one(), errc::factors_not_coprime, "ring: cofactor not invertible");
        ring->idem_.push_back((cof * u).mod(ring->f_));
    }
    return ring;
}

std::shared_ptr<const RingSpec> RingSpec::make_from_factors(std::vector<Gf2Poly> factors,
                                                            std::string name) {
    require(!factors.empty(), errc::invalid_argument, "ring: no factors");
    Gf2Poly prod = Gf2Poly::one();
    for (const Gf2Poly& f : factors) {
        require(f.degree() >= 1, errc::invalid_argument, "ring: factor of degree < 1");
        prod = prod * f;
    }
    return make(std::move(prod), std::move(factors), std::move(name));
}

Gf2Poly RingSpec::inverse(const Gf2Poly& r) const {
    Gf2Poly u, v;
    Gf2Poly g = Gf2Poly::ext_gcd(r.mod(f_), f_, u, v);
    require(g.is_one(), errc::invalid_argument, "inverse: element is not a unit");
    return u.mod(f_);
}

std::vector<Gf2Poly> RingSpec::crt_split(const Gf2Poly& r) const {
    std::vector<Gf2Poly> out;
    out.reserve(factors_.size());
    for (const Gf2Poly& fi : factors_) out.push_back(r.mod(fi));
    return out;
}

Gf2Poly RingSpec::crt_lift(const std::vector<Gf2Poly>& residues) const {
    require(residues.size() == factors_.size(), errc::invalid_argument,
            "crt_lift: residue count mismatch");
    Gf2Poly acc;
    for (size_t i = 0; i < residues.size(); i++) {
        require(residues[i].is_zero() || residues[i].degree() < factors_[i].degree(),
                errc::invalid_argument, "crt_lift: residue not reduced");
        acc = acc + (residues[i] * idem_[i]).mod(f_);
    }
    return acc.mod(f_);
}

std::shared_ptr<const RingSpec> RingSpec::from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::parse, std::string("ring json: ") + e.what());
    }
    require(j.contains("factors") && j["factors"].is_array(), errc::parse,
            "ring json: missing \"factors\" array");
    std::vector<Gf2Poly> factors;
    for (const auto& f : j["factors"]) {
        require(f.is_string(), errc::parse, "ring json: factor must be a string");
        factors.push_back(Gf2Poly::parse(f.get<std::string>()));
    }
    std::string name = j.value("name", std::string());
    if (j.contains("modulus")) {
        require(j["modulus"].is_string(), errc::parse, "ring json: modulus must be a string");
        return make(Gf2Poly::parse(j["modulus"].get<std::string>()), std::move(factors),
                    std::move(name));
    }
    return make_from_factors(std::move(factors), std::move(name));
}

std::string RingSpec::to_json() const {
    nlohmann::json j;
    if (!name_.empty()) j["name"] = name_;
    j["modulus"] = f_.format();
    nlohmann::json fs = nlohmann::json::array();
    for (const Gf2Poly& f : factors_) fs.push_back(f.format());
    j["factors"] = fs;
    return j.dump();
}

BitMatrix tau_matrix(const Gf2Poly& r, const Gf2Poly& f) {
    int t = f.degree();
    require(t >= 1, errc::invalid_argument, "tau_matrix: modulus degree < 1");
    BitMatrix m{size_t(t), size_t(t)};
    Gf2Poly p = r.mod(f);
    for (int i = 0; i < t; i++) {
        for (size_t w = 0; w < p.raw_words().size(); w++) {
            uint64_t bits = p.raw_words()[w];
            while (bits) {
                int j = int(w * 64) + std::countr_zero(bits);
                bits &= bits - 1;
                m.set(size_t(j), size_t(i), true);
            }
        }
        p.shift_reduce(f);
    }
    return m;
}

} // namespace rlpn
