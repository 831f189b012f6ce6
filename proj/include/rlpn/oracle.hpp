#ifndef RLPN_ORACLE_HPP
#define RLPN_ORACLE_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rlpn/ring.hpp"
#include "rlpn/rng.hpp"

namespace rlpn {

// Error rate as an exact rational eta = num/den in [0, 1/2); the bias
// epsilon = 1 - 2*eta stays exact until a caller asks for a double.
struct NoiseSpec {
    uint64_t num = 1;
    uint64_t den = 6;

    void validate() const;
    double eta() const { return double(num) / double(den); }
    // epsilon = (den - 2*num) / den
    uint64_t eps_num() const { return den - 2 * num; }
    uint64_t eps_den() const { return den; }
    double epsilon() const { return double(eps_num()) / double(den); }

    static NoiseSpec parse(const std::string& text); // "1/6", "0.05", "0"
    std::string format() const;
};

enum class OracleMode { real, uniform };

// Deterministic Ring-LPN sample source. Sample j (counting from the oracle's
// creation) is drawn entirely from splitmix64 substream seed + 1 + j, so
// batches may be produced by any number of workers without changing the
// stream. Substream seed + 0 derives the secret when none is supplied.
class Oracle {
  public:
    Oracle(std::shared_ptr<const RingSpec> ring, NoiseSpec noise, uint64_t seed, OracleMode mode);
    Oracle(std::shared_ptr<const RingSpec> ring, NoiseSpec noise, uint64_t seed, OracleMode mode,
           Gf2Poly secret);

    const RingSpec& ring() const { return *ring_; }
    std::shared_ptr<const RingSpec> ring_ptr() const { return ring_; }
    const NoiseSpec& noise() const { return noise_; }
    uint64_t seed() const { return seed_; }
    OracleMode mode() const { return mode_; }
    // harness access for planted-secret verification
    const Gf2Poly& secret() const { return secret_; }
    uint64_t issued() const { return counter_; }

    RingLpnSample query();
    // next n samples; memory guard against the configured budget.
    std::vector<RingLpnSample> batch(uint64_t n, int threads = 1);

    // error polynomial draw alone (weight ~ Binomial(t, eta)), own substream
    Gf2Poly sample_error(SplitMix64& rng) const;
    Gf2Poly sample_uniform(SplitMix64& rng) const;

    void set_memory_budget(uint64_t bytes) { budget_bytes_ = bytes; }
    uint64_t memory_budget() const { return budget_bytes_; }

  private:
    RingLpnSample make_sample(uint64_t index) const;

    std::shared_ptr<const RingSpec> ring_;
    NoiseSpec noise_;
    uint64_t seed_;
    OracleMode mode_;
    Gf2Poly secret_;
    uint64_t counter_ = 0;
    uint64_t budget_bytes_ = uint64_t(1) << 30;
};

// Binary sample dump, little-endian:
//   "RLPN" | u32 version=1 | u32 t | u64 count | u64 seed
// then per sample ceil(t/8) bytes of r and ceil(t/8) bytes of v,
// coefficient 8*i+b at byte i bit b.
struct SampleDump {
    uint32_t t = 0;
    uint64_t seed = 0;
    std::vector<RingLpnSample> samples;
};

void write_samples(const std::string& path, const SampleDump& dump);
SampleDump read_samples(const std::string& path);

} // namespace rlpn

#endif
