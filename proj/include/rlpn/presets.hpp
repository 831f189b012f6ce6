#ifndef RLPN_PRESETS_HPP
#define RLPN_PRESETS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rlpn/oracle.hpp"
#include "rlpn/ring.hpp"

namespace rlpn {

// Documented planted-secret test vector: plant this secret, seed the oracle
// with this seed, and every run of the suggested attack reproduces.
struct PresetVector {
    uint64_t seed = 0;
    std::string secret; // polynomial text, degree < deg f
};

struct PresetInfo {
    std::string name;
    std::string description;
    std::vector<std::string> factors;
    NoiseSpec noise;         // default error rate for the ring
    std::string attack_mode; // "improved" or "generic"
    int attack_k = 0;        // suggested collision width
    int attack_log2n = 0;    // suggested log2 sample count
    bool has_vector = false;
    PresetVector vector;
};

const std::vector<std::string>& preset_names();
const PresetInfo& preset_info(const std::string& name);
std::shared_ptr<const RingSpec> preset_ring(const std::string& name);

// Ring-file content for a preset: "modulus"/"factors" plus the preset's
// noise, attack, and test-vector blocks (loaders ignore the extra keys).
std::string preset_file_text(const std::string& name);

// Ring specification file: JSON with "factors" and optionally "modulus".
std::shared_ptr<const RingSpec> load_ring_file(const std::string& path);

// Preset name when it matches one, otherwise a ring-file path.
std::shared_ptr<const RingSpec> resolve_ring(const std::string& name_or_path);

} // namespace rlpn

#endif
