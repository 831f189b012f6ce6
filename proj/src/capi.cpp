#include "rlpn.h"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "rlpn/error.hpp"
#include "rlpn/gf2poly.hpp"
#include "rlpn/oracle.hpp"
#include "rlpn/presets.hpp"
#include "rlpn/ring.hpp"
#include "rlpn/runners.hpp"

#define RLPN_API __attribute__((visibility("default")))

struct rlpn_poly {
    rlpn::Gf2Poly p;
};
struct rlpn_ring {
    std::shared_ptr<const rlpn::RingSpec> r;
};
struct rlpn_oracle {
    rlpn::Oracle o;
};

namespace {

thread_local std::string g_last_error;

// strings cross the boundary as malloc blocks so rlpn_string_free pairs
// with free() regardless of how the library was built
char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

rlpn_status arg_error(const char* msg) {
    g_last_error = msg;
    return RLPN_ERR_INVALID_ARGUMENT;
}

template <typename F>
rlpn_status wrap(F&& body) {
    try {
        body();
        return RLPN_OK;
    } catch (const rlpn::Error& e) {
        g_last_error = e.what();
        return static_cast<rlpn_status>(static_cast<int>(e.code()));
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return RLPN_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RLPN_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

RLPN_API const char* rlpn_version(void) {
    return "1.0.0";
}

RLPN_API const char* rlpn_last_error(void) {
    return g_last_error.c_str();
}

RLPN_API void rlpn_string_free(char* s) {
    std::free(s);
}

RLPN_API rlpn_status rlpn_poly_parse(const char* text, rlpn_poly** out) {
    if (!text || !out) return arg_error("text and out must not be NULL");
    return wrap([&] { *out = new rlpn_poly{rlpn::Gf2Poly::parse(text)}; });
}

RLPN_API rlpn_status rlpn_poly_format(const rlpn_poly* p, char** out) {
    if (!p || !out) return arg_error("poly and out must not be NULL");
    return wrap([&] { *out = dup_string(p->p.format()); });
}

RLPN_API int rlpn_poly_degree(const rlpn_poly* p) {
    return p ? p->p.degree() : -1;
}

RLPN_API int rlpn_poly_weight(const rlpn_poly* p) {
    return p ? p->p.weight() : 0;
}

RLPN_API int rlpn_poly_is_irreducible(const rlpn_poly* p) {
    return p && p->p.is_irreducible() ? 1 : 0;
}

RLPN_API void rlpn_poly_free(rlpn_poly* p) {
    delete p;
}

RLPN_API rlpn_status rlpn_ring_open(const char* name_or_path, rlpn_ring** out) {
    if (!name_or_path || !out) return arg_error("name_or_path and out must not be NULL");
    return wrap([&] { *out = new rlpn_ring{rlpn::resolve_ring(name_or_path)}; });
}

RLPN_API rlpn_status rlpn_ring_from_json(const char* json_text, rlpn_ring** out) {
    if (!json_text || !out) return arg_error("json_text and out must not be NULL");
    return wrap([&] { *out = new rlpn_ring{rlpn::RingSpec::from_json(json_text)}; });
}

RLPN_API int rlpn_ring_degree(const rlpn_ring* ring) {
    return ring ? ring->r->degree() : 0;
}

RLPN_API size_t rlpn_ring_factor_count(const rlpn_ring* ring) {
    return ring ? ring->r->factor_count() : 0;
}

RLPN_API rlpn_status rlpn_ring_factor(const rlpn_ring* ring, size_t index, rlpn_poly** out) {
    if (!ring || !out) return arg_error("ring and out must not be NULL");
    return wrap([&] {
        rlpn::require(index < ring->r->factor_count(), rlpn::errc::invalid_argument,
                      "factor index out of range (ring has " +
                          std::to_string(ring->r->factor_count()) + " factors)");
        *out = new rlpn_poly{ring->r->factor(index)};
    });
}

RLPN_API rlpn_status rlpn_ring_to_json(const rlpn_ring* ring, char** out) {
    if (!ring || !out) return arg_error("ring and out must not be NULL");
    return wrap([&] { *out = dup_string(ring->r->to_json()); });
}

RLPN_API void rlpn_ring_free(rlpn_ring* ring) {
    delete ring;
}

RLPN_API rlpn_status rlpn_preset_names(char** json_out) {
    if (!json_out) return arg_error("json_out must not be NULL");
    return wrap([&] {
        nlohmann::json names = nlohmann::json::array();
        for (const std::string& n : rlpn::preset_names()) names.push_back(n);
        *json_out = dup_string(names.dump());
    });
}

RLPN_API rlpn_status rlpn_preset_describe(const char* name, char** json_out) {
    if (!name || !json_out) return arg_error("name and json_out must not be NULL");
    return wrap([&] { *json_out = dup_string(rlpn::preset_file_text(name)); });
}

RLPN_API rlpn_status rlpn_oracle_new(const rlpn_ring* ring, const char* noise, uint64_t seed,
                                     int uniform_v, rlpn_oracle** out) {
    if (!ring || !noise || !out) return arg_error("ring, noise, and out must not be NULL");
    return wrap([&] {
        rlpn::NoiseSpec spec = rlpn::NoiseSpec::parse(noise);
        spec.validate();
        rlpn::OracleMode mode = uniform_v ? rlpn::OracleMode::uniform : rlpn::OracleMode::real;
        *out = new rlpn_oracle{rlpn::Oracle(ring->r, spec, seed, mode)};
    });
}

RLPN_API rlpn_status rlpn_oracle_new_with_secret(const rlpn_ring* ring, const char* noise,
                                                 uint64_t seed, int uniform_v,
                                                 const char* secret_poly, rlpn_oracle** out) {
    if (!ring || !noise || !secret_poly || !out)
        return arg_error("ring, noise, secret_poly, and out must not be NULL");
    return wrap([&] {
        rlpn::NoiseSpec spec = rlpn::NoiseSpec::parse(noise);
        spec.validate();
        rlpn::Gf2Poly secret = rlpn::Gf2Poly::parse(secret_poly);
        rlpn::require(secret.degree() < ring->r->degree(), rlpn::errc::invalid_argument,
                      "planted secret degree must be below the modulus degree");
        rlpn::OracleMode mode = uniform_v ? rlpn::OracleMode::uniform : rlpn::OracleMode::real;
        *out = new rlpn_oracle{rlpn::Oracle(ring->r, spec, seed, mode, std::move(secret))};
    });
}

RLPN_API rlpn_status rlpn_oracle_secret(const rlpn_oracle* oracle, char** out) {
    if (!oracle || !out) return arg_error("oracle and out must not be NULL");
    return wrap([&] { *out = dup_string(oracle->o.secret().format()); });
}

RLPN_API rlpn_status rlpn_oracle_sample(rlpn_oracle* oracle, char** r_out, char** v_out) {
    if (!oracle || !r_out || !v_out)
        return arg_error("oracle, r_out, and v_out must not be NULL");
    return wrap([&] {
        rlpn::RingLpnSample s = oracle->o.query();
        char* r = dup_string(s.r.format());
        try {
            *v_out = dup_string(s.v.format());
        } catch (...) {
            std::free(r);
            throw;
        }
        *r_out = r;
    });
}

RLPN_API void rlpn_oracle_free(rlpn_oracle* oracle) {
    delete oracle;
}

RLPN_API rlpn_status rlpn_run(const char* ring, uint64_t seed, int threads,
                              uint64_t memory_budget, const char* command,
                              const char* options_json, char** records_out,
                              int* conclusive_out) {
    if (!ring || !command || !records_out)
        return arg_error("ring, command, and records_out must not be NULL");
    return wrap([&] {
        rlpn::RunConfig cfg;
        cfg.ring = ring;
        cfg.seed = seed;
        cfg.threads = threads <= 0 ? 1 : threads;
        if (memory_budget != 0) cfg.memory_budget = memory_budget;
        rlpn::RunOutput out =
            rlpn::run_command(cfg, command, options_json ? options_json : "");
        *records_out = dup_string(out.records);
        if (conclusive_out) *conclusive_out = out.conclusive ? 1 : 0;
    });
}

} // extern "C"
