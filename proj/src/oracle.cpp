#include "rlpn/oracle.hpp"

#include <cstdio>
#include <cstring>

#include "rlpn/error.hpp"
#include "rlpn/parallel.hpp"

namespace rlpn {

void NoiseSpec::validate() const {
    require(den > 0, errc::invalid_argument, "noise: zero denominator");
    require(2 * num < den || num == 0, errc::invalid_argument, "noise: eta must be in [0, 1/2)");
}

NoiseSpec NoiseSpec::parse(const std::string& text) {
    NoiseSpec n;
    size_t slash = text.find('/');
    size_t dot = text.find('.');
    try {
        if (slash != std::string::npos) {
            n.num = std::stoull(text.substr(0, slash));
            n.den = std::stoull(text.substr(slash + 1));
        } else if (dot != std::string::npos) {
            std::string frac = text.substr(dot + 1);
            require(frac.size() <= 18, errc::parse, "noise: too many decimal digits");
            std::string digits = text.substr(0, dot) + frac;
            n.num = std::stoull(digits.empty() ? "0" : digits);
            n.den = 1;
            for (size_t i = 0; i < frac.size(); i++) n.den *= 10;
        } else {
            n.num = std::stoull(text);
            n.den = 1;
        }
    } catch (const std::exception&) {
        fail(errc::parse, "noise: cannot parse \"" + text + "\"");
    }
    if (n.num == 0) n.den = 1;
    // reduce
    uint64_t a = n.num, b = n.den;
    while (b) {
        uint64_t r = a % b;
        a = b;
        b = r;
    }
    if (a > 1) {
        n.num /= a;
        n.den /= a;
    }
    n.validate();
    return n;
}

std::string NoiseSpec::format() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Oracle::Oracle(std::shared_ptr<const RingSpec> ring, NoiseSpec noise, uint64_t seed,
               OracleMode mode)
    : ring_(std::move(ring)), noise_(noise), seed_(seed), mode_(mode) {
    noise_.validate();
    SplitMix64 rng = SplitMix64::substream(seed_, 0);
    secret_ = sample_uniform(rng);
}

Oracle::Oracle(std::shared_ptr<const RingSpec> ring, NoiseSpec noise, uint64_t seed,
               OracleMode mode, Gf2Poly secret)
    : ring_(std::move(ring)), noise_(noise), seed_(seed), mode_(mode),
      secret_(ring_->reduce(secret)) {
    noise_.validate();
}

Gf2Poly Oracle::sample_uniform(SplitMix64& rng) const {
    return Gf2Poly::from_bits(rng.bits(size_t(ring_->degree())));
}

Gf2Poly Oracle::sample_error(SplitMix64& rng) const {
    int t = ring_->degree();
    BitVec bits{size_t(t)};
    for (int i = 0; i < t; i++)
        if (rng.bernoulli(noise_.num, noise_.den)) bits.set(size_t(i), true);
    return Gf2Poly::from_bits(bits);
}

RingLpnSample Oracle::make_sample(uint64_t index) const {
    SplitMix64 rng = SplitMix64::substream(seed_, 1 + index);
    RingLpnSample s;
    s.r = sample_uniform(rng);
    if (mode_ == OracleMode::uniform) {
        s.v = sample_uniform(rng);
    } else {
        Gf2Poly e = sample_error(rng);
        s.v = ring_->mul_add(s.r, secret_, e);
    }
    return s;
}

RingLpnSample Oracle::query() { return make_sample(counter_++); }

std::vector<RingLpnSample> Oracle::batch(uint64_t n, int threads) {
    uint64_t words = uint64_t((ring_->degree() + 63) / 64);
    uint64_t per_sample = 2 * words * 8 + sizeof(RingLpnSample);
    require(n <= budget_bytes_ / per_sample, errc::batch_too_large,
            "batch: sample count exceeds the memory budget");
    std::vector<RingLpnSample> out(size_t(n), RingLpnSample{});
    uint64_t base = counter_;
    parallel_for(n, threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t i = lo; i < hi; i++) out[size_t(i)] = make_sample(base + i);
    });
    counter_ += n;
    return out;
}

namespace {

void put_u32(std::string& s, uint32_t v) {
    for (int i = 0; i < 4; i++) s.push_back(char((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& s, uint64_t v) {
    for (int i = 0; i < 8; i++) s.push_back(char((v >> (8 * i)) & 0xff));
}

void put_poly(std::string& s, const Gf2Poly& p, size_t nbytes) {
    size_t base = s.size();
    s.resize(base + nbytes, 0);
    const auto& w = p.raw_words();
    for (size_t i = 0; i < nbytes; i++) {
        size_t wi = i / 8;
        if (wi < w.size()) s[base + i] = char((w[wi] >> (8 * (i % 8))) & 0xff);
    }
}

uint32_t get_u32(const std::string& s, size_t& off) {
    uint32_t v = 0;
    for (int i = 0; i < 4; i++) v |= uint32_t(uint8_t(s[off++])) << (8 * i);
    return v;
}
uint64_t get_u64(const std::string& s, size_t& off) {
    uint64_t v = 0;
    for (int i = 0; i < 8; i++) v |= uint64_t(uint8_t(s[off++])) << (8 * i);
    return v;
}

Gf2Poly get_poly(const std::string& s, size_t& off, size_t nbytes, uint32_t t) {
    BitVec bits(t);
    for (size_t i = 0; i < nbytes; i++) {
        uint8_t b = uint8_t(s[off + i]);
        if (!b) continue;
        for (int k = 0; k < 8; k++)
            if ((b >> k) & 1) {
                size_t idx = i * 8 + size_t(k);
                require(idx < t, errc::parse, "sample dump: stray bit beyond degree");
                bits.set(idx, true);
            }
    }
    off += nbytes;
    return Gf2Poly::from_bits(bits);
}

} // namespace

void write_samples(const std::string& path, const SampleDump& dump) {
    std::string buf;
    size_t nbytes = (size_t(dump.t) + 7) / 8;
    buf.reserve(28 + dump.samples.size() * 2 * nbytes);
    buf += "RLPN";
    put_u32(buf, 1);
    put_u32(buf, dump.t);
    put_u64(buf, uint64_t(dump.samples.size()));
    put_u64(buf, dump.seed);
    for (const RingLpnSample& s : dump.samples) {
        put_poly(buf, s.r, nbytes);
        put_poly(buf, s.v, nbytes);
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    require(f != nullptr, errc::io, "cannot open " + path + " for writing");
    size_t n = std::fwrite(buf.data(), 1, buf.size(), f);
    std::fclose(f);
    require(n == buf.size(), errc::io, "short write to " + path);
}

SampleDump read_samples(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    require(f != nullptr, errc::io, "cannot open " + path);
    std::string buf;
    char tmp[1 << 16];
    size_t n;
    while ((n = std::fread(tmp, 1, sizeof tmp, f)) > 0) buf.append(tmp, n);
    std::fclose(f);

    require(buf.size() >= 28, errc::parse, "sample dump: truncated header");
    require(buf.compare(0, 4, "RLPN") == 0, errc::parse, "sample dump: bad magic");
    size_t off = 4;
    uint32_t version = get_u32(buf, off);
    require(version == 1, errc::parse, "sample dump: unsupported version");
    SampleDump dump;
    dump.t = get_u32(buf, off);
    require(dump.t >= 1, errc::parse, "sample dump: degree must be >= 1");
    uint64_t count = get_u64(buf, off);
    dump.seed = get_u64(buf, off);
    size_t nbytes = (size_t(dump.t) + 7) / 8;
    require(buf.size() == 28 + count * 2 * nbytes, errc::parse, "sample dump: size mismatch");
    dump.samples.reserve(size_t(count));
    for (uint64_t i = 0; i < count; i++) {
        RingLpnSample s;
        s.r = get_poly(buf, off, nbytes, dump.t);
        s.v = get_poly(buf, off, nbytes, dump.t);
        dump.samples.push_back(std::move(s));
    }
    return dump;
}

} // namespace rlpn
