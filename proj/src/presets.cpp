#include "rlpn/presets.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

#include "rlpn/error.hpp"

namespace rlpn {

namespace {

const std::vector<PresetInfo>& preset_table() {
    static const std::vector<PresetInfo> table = {
        {"lapin-621",
         "five-factor degree-621 production modulus at eta 1/6; cost-model scale, not runnable",
         {"x^127+x^8+x^7+x^3+1", "x^126+x^9+x^6+x^5+1", "x^125+x^9+x^7+x^4+1",
          "x^122+x^7+x^4+x^3+1", "x^121+x^8+x^5+x+1"},
         {1, 6},
         "improved",
         65,
         63,
         false,
         {}},
        {"desk-33",
         "two-factor desk ring, degrees 17+16; single-stage attacks in seconds",
         {"x^17+x^7+x^4+x^3+1", "x^16+x^5+x^3+x^2+1"},
         {1, 20},
         "improved",
         11,
         15,
         true,
         {7, "x^31+x^24+x^17+x^12+x^8+x^5+x^2+1"}},
        {"desk-51",
         "three-factor desk ring, degrees 17+16+18; sized for staged recovery",
         {"x^17+x^7+x^4+x^3+1", "x^16+x^5+x^3+x^2+1", "x^18+x^8+x^7+x^5+1"},
         {1, 20},
         "improved",
         11,
         15,
         true,
         {7, "x^50+x^44+x^37+x^31+x^25+x^18+x^12+x^9+x^3+1"}},
        {"small-16",
         "two-factor smoke-test ring, degrees 7+9; generic pipeline only",
         {"x^7+x+1", "x^9+x^4+1"},
         {1, 20},
         "generic",
         3,
         12,
         true,
         {7, "x^15+x^11+x^6+x^4+x+1"}},
    };
    return table;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const PresetInfo& p : preset_table()) out.push_back(p.name);
        return out;
    }();
    return names;
}

const PresetInfo& preset_info(const std::string& name) {
    for (const PresetInfo& p : preset_table())
        if (p.name == name) return p;
    std::string known;
    for (const std::string& n : preset_names()) {
        if (!known.empty()) known += ", ";
        known += n;
    }
    fail(errc::invalid_argument, "unknown preset \"" + name + "\" (known: " + known + ")");
}

std::shared_ptr<const RingSpec> preset_ring(const std::string& name) {
    const PresetInfo& info = preset_info(name);
    std::vector<Gf2Poly> factors;
    for (const std::string& f : info.factors) factors.push_back(Gf2Poly::parse(f));
    return RingSpec::make_from_factors(std::move(factors), info.name);
}

std::string preset_file_text(const std::string& name) {
    const PresetInfo& info = preset_info(name);
    auto ring = preset_ring(name);
    nlohmann::ordered_json j;
    j["name"] = info.name;
    j["description"] = info.description;
    j["modulus"] = ring->modulus().format();
    j["factors"] = info.factors;
    j["noise"] = info.noise.format();
    j["attack"] = {{"mode", info.attack_mode}, {"k", info.attack_k}, {"log2_n", info.attack_log2n}};
    if (info.has_vector)
        j["test_vector"] = {{"seed", info.vector.seed}, {"secret", info.vector.secret}};
    return j.dump(2) + "\n";
}

std::shared_ptr<const RingSpec> load_ring_file(const std::string& path) {
    std::ifstream in(path);
    require(bool(in), errc::io, "cannot open ring file \"" + path + "\"");
    std::ostringstream text;
    text << in.rdbuf();
    require(!in.bad(), errc::io, "read error on ring file \"" + path + "\"");
    return RingSpec::from_json(text.str());
}

std::shared_ptr<const RingSpec> resolve_ring(const std::string& name_or_path) {
    for (const PresetInfo& p : preset_table())
        if (p.name == name_or_path) return preset_ring(name_or_path);
    return load_ring_file(name_or_path);
}

} // namespace rlpn
