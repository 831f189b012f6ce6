#include "rlpn/runners.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rlpn/attack.hpp"
#include "rlpn/complexity.hpp"
#include "rlpn/crtcode.hpp"
#include "rlpn/error.hpp"
#include "rlpn/lapin.hpp"
#include "rlpn/presets.hpp"
#include "rlpn/recovery.hpp"
#include "rlpn/rng.hpp"

namespace rlpn {

namespace {

using nlohmann::json;

// A ring plus whatever defaults travel with it: presets carry them in the
// table, ring files carry them as optional JSON keys next to the factors.
struct RingSource {
    std::shared_ptr<const RingSpec> ring;
    std::string label;
    bool is_preset = false;
    bool has_noise = false;
    NoiseSpec noise{1, 6};
    std::string attack_mode;
    int attack_k = 0;
    int attack_log2n = 0;
    bool has_vector = false;
    PresetVector vector;
};

RingSource resolve_source(const std::string& name_or_path) {
    RingSource src;
    src.label = name_or_path;
    for (const std::string& n : preset_names()) {
        if (n != name_or_path) continue;
        const PresetInfo& info = preset_info(n);
        src.ring = preset_ring(n);
        src.is_preset = true;
        src.has_noise = true;
        src.noise = info.noise;
        src.attack_mode = info.attack_mode;
        src.attack_k = info.attack_k;
        src.attack_log2n = info.attack_log2n;
        src.has_vector = info.has_vector;
        src.vector = info.vector;
        return src;
    }
    std::ifstream in(name_or_path);
    require(bool(in), errc::io, "cannot open ring file \"" + name_or_path + "\"");
    std::ostringstream text;
    text << in.rdbuf();
    require(!in.bad(), errc::io, "read error on ring file \"" + name_or_path + "\"");
    src.ring = RingSpec::from_json(text.str());
    json j = json::parse(text.str(), nullptr, false);
    if (j.contains("noise") && j["noise"].is_string()) {
        src.noise = NoiseSpec::parse(j["noise"].get<std::string>());
        src.has_noise = true;
    }
    if (j.contains("attack") && j["attack"].is_object()) {
        const json& a = j["attack"];
        if (a.contains("mode") && a["mode"].is_string()) src.attack_mode = a["mode"];
        if (a.contains("k") && a["k"].is_number_integer()) src.attack_k = a["k"].get<int>();
        if (a.contains("log2_n") && a["log2_n"].is_number_integer())
            src.attack_log2n = a["log2_n"].get<int>();
    }
    if (j.contains("test_vector") && j["test_vector"].is_object()) {
        const json& v = j["test_vector"];
        if (v.contains("seed") && v["seed"].is_number_unsigned() && v.contains("secret") &&
            v["secret"].is_string()) {
            src.has_vector = true;
            src.vector.seed = v["seed"].get<uint64_t>();
            src.vector.secret = v["secret"].get<std::string>();
        }
    }
    return src;
}

NoiseSpec pick_noise(const RingSource& src, const std::string& override_text) {
    if (!override_text.empty()) return NoiseSpec::parse(override_text);
    require(src.has_noise, errc::invalid_argument,
            "no error rate on record for \"" + src.label + "\"; pass a noise option like \"1/20\"");
    return src.noise;
}

void emit(std::string& out, const json& rec) {
    out += rec.dump();
    out += '\n';
}

json config_record(const RunConfig& cfg, const char* command, json options) {
    json j;
    j["record"] = "config";
    j["command"] = command;
    j["ring"] = cfg.ring;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["memory_budget"] = cfg.memory_budget;
    j["options"] = std::move(options);
    return j;
}

json ops_json(const OpCounters& ops) {
    return json{{"compress", ops.compress},
                {"merge", ops.merge},
                {"transform", ops.transform},
                {"total", ops.total()}};
}

// candidate bit q, printed left to right, is the guess for coefficient
// secret_offset + q
std::string bits_string(const BitVec& v) {
    std::string s(v.size(), '0');
    for (size_t i = 0; i < v.size(); i++)
        if (v.get(i)) s[i] = '1';
    return s;
}

std::string eps_text(const NoiseSpec& noise) {
    return std::to_string(noise.eps_num()) + "/" + std::to_string(noise.eps_den());
}

// "" = oracle-derived, "vector" = the source's documented test vector,
// anything else parses as a polynomial
Gf2Poly pick_secret(const RingSource& src, const std::string& choice, bool* planted) {
    *planted = !choice.empty();
    if (choice.empty()) return Gf2Poly::zero();
    if (choice == "vector") {
        require(src.has_vector, errc::invalid_argument,
                "\"" + src.label + "\" has no documented test vector");
        return Gf2Poly::parse(src.vector.secret);
    }
    Gf2Poly secret = Gf2Poly::parse(choice);
    require(secret.degree() < src.ring->degree(), errc::invalid_argument,
            "planted secret degree must be below the modulus degree");
    return secret;
}

uint64_t word0(const Gf2Poly& p) {
    return p.raw_words().empty() ? 0 : p.raw_words()[0];
}

} // namespace

RunOutput run_analyze(const RunConfig& cfg, const AnalyzeOptions& opt) {
    RingSource src = resolve_source(cfg.ring);
    const RingSpec& ring = *src.ring;
    require(opt.factor >= 0 && size_t(opt.factor) <= ring.factor_count(), errc::invalid_argument,
            "factor index out of range (ring has " + std::to_string(ring.factor_count()) +
                " factors)");
    require(opt.target_bits >= 1, errc::invalid_argument, "target_bits must be >= 1");
    require(opt.iterations >= 1, errc::invalid_argument, "iterations must be >= 1");
    NoiseSpec noise = pick_noise(src, opt.noise);
    noise.validate();

    RunOutput out;
    emit(out.records, config_record(cfg, "analyze",
                                    json{{"factor", opt.factor},
                                         {"noise", noise.format()},
                                         {"target_bits", opt.target_bits},
                                         {"iterations", opt.iterations}}));

    SecurityReport sec = security_advisor(ring, noise.eps_num(), noise.eps_den(), opt.target_bits,
                                          cfg.seed, opt.iterations);
    for (size_t j = 0; j < ring.factor_count(); j++) {
        if (opt.factor != 0 && size_t(opt.factor) != j + 1) continue;
        CrtCode code = build_generator(ring.factor(j), ring.degree());
        std::vector<int> ws = row_weights(code);
        const FactorSecurity& fs = sec.factors[j];
        json rec;
        rec["record"] = "analyze";
        rec["factor"] = j + 1;
        rec["modulus"] = ring.factor(j).format();
        rec["l"] = code.l;
        rec["t"] = code.t;
        rec["row0_weight"] = ws.front();
        rec["last_row_weight"] = ws.back();
        rec["min_row_weight"] = *std::min_element(ws.begin(), ws.end());
        rec["best_relation_weight"] = fs.d;
        rec["gv_bound"] = fs.gv;
        rec["epsilon"] = eps_text(noise);
        rec["log2_sample_floor"] = fs.log2_floor;
        rec["target_bits"] = opt.target_bits;
        rec["flagged_below_target"] = fs.flagged;
        emit(out.records, rec);
    }
    if (!sec.note.empty()) emit(out.records, json{{"record", "note"}, {"text", sec.note}});
    return out;
}

RunOutput run_attack(const RunConfig& cfg, const AttackOptions& opt) {
    RingSource src = resolve_source(cfg.ring);
    const RingSpec& ring = *src.ring;
    require(opt.factor >= 1 && size_t(opt.factor) <= ring.factor_count(), errc::invalid_argument,
            "factor index out of range (ring has " + std::to_string(ring.factor_count()) +
                " factors)");
    std::string mode = opt.mode.empty() ? src.attack_mode : opt.mode;
    require(mode == "improved" || mode == "generic" || mode == "decision", errc::invalid_argument,
            "mode must be improved, generic, or decision (got \"" + mode + "\")");
    int k = opt.k > 0 ? opt.k : src.attack_k;
    int log2n = opt.log2n > 0 ? opt.log2n : src.attack_log2n;
    require(k >= 1, errc::invalid_argument, "no collision width on record; pass k");
    require(log2n >= 1 && log2n <= 40, errc::invalid_argument,
            "log2_n must be in [1, 40] for a runnable attack");
    NoiseSpec noise = pick_noise(src, opt.noise);
    noise.validate();

    std::string oracle_mode = opt.oracle_mode.empty() ? "real" : opt.oracle_mode;
    require(oracle_mode == "real" || oracle_mode == "uniform", errc::invalid_argument,
            "oracle must be real or uniform (got \"" + oracle_mode + "\")");
    OracleMode omode = oracle_mode == "real" ? OracleMode::real : OracleMode::uniform;

    bool planted = false;
    Gf2Poly secret = pick_secret(src, opt.secret, &planted);

    size_t fj = size_t(opt.factor) - 1;
    CrtCode code = build_generator(ring.factor(fj), ring.degree());
    AttackParams p;
    p.k = k;
    p.n_samples = uint64_t(1) << log2n;
    p.relation = last_row_relation(code);
    p.noise = noise;
    p.threads = cfg.threads;

    RunOutput out;
    emit(out.records, config_record(cfg, "attack",
                                    json{{"mode", mode},
                                         {"factor", opt.factor},
                                         {"k", k},
                                         {"log2_n", log2n},
                                         {"noise", noise.format()},
                                         {"oracle", oracle_mode},
                                         {"planted", planted}}));

    std::vector<std::string> warns = param_warnings(p, code.l);
    if (!warns.empty()) emit(out.records, json{{"record", "warnings"}, {"messages", warns}});

    Oracle oracle = planted ? Oracle(src.ring, noise, cfg.seed, omode, secret)
                            : Oracle(src.ring, noise, cfg.seed, omode);
    oracle.set_memory_budget(cfg.memory_budget);

    if (mode == "decision") {
        DecisionResult d = decision_test(oracle, p, code);
        json rec;
        rec["record"] = "decision";
        rec["factor"] = opt.factor;
        rec["verdict"] = d.real ? "real" : "uniform";
        rec["truth"] = oracle_mode;
        rec["correct"] = d.real == (omode == OracleMode::real);
        rec["score"] = d.score;
        rec["threshold"] = d.threshold;
        rec["expected_peak"] = d.expected_peak;
        rec["null_quantile"] = d.null_quantile;
        rec["samples_used"] = d.detail.samples_used;
        rec["queries"] = d.detail.queries;
        rec["ops"] = ops_json(d.detail.ops);
        emit(out.records, rec);
        return out;
    }

    AttackResult r =
        mode == "improved" ? run_improved(oracle, p, code) : run_generic(oracle, p, code);
    json rec;
    rec["record"] = "attack";
    rec["factor"] = opt.factor;
    rec["mode"] = mode;
    rec["l"] = code.l;
    rec["relation_weight"] = p.relation.weight;
    rec["dims"] = r.candidate.size();
    rec["secret_offset"] = r.secret_offset;
    rec["candidate_bits"] = bits_string(r.candidate);
    rec["score"] = r.score;
    rec["second_score"] = r.second_score;
    rec["samples_used"] = r.samples_used;
    rec["queries"] = r.queries;
    rec["inconclusive"] = r.inconclusive;
    rec["holdout_margin"] = r.holdout_margin;
    rec["ops"] = ops_json(r.ops);
    if (omode == OracleMode::real)
        rec["matches_secret"] = matches_secret(r, oracle.secret().mod(ring.factor(fj)));
    emit(out.records, rec);
    out.conclusive = !r.inconclusive;
    return out;
}

RunOutput run_recover(const RunConfig& cfg, const RecoverOptions& opt) {
    RingSource src = resolve_source(cfg.ring);
    const RingSpec& ring = *src.ring;
    const size_t m = ring.factor_count();
    NoiseSpec noise = pick_noise(src, opt.noise);
    noise.validate();
    int k = opt.k > 0 ? opt.k : src.attack_k;
    int log2n = opt.log2n > 0 ? opt.log2n : src.attack_log2n;
    require(k >= 1, errc::invalid_argument, "no collision width on record; pass k");
    require(log2n >= 1 && log2n <= 40, errc::invalid_argument,
            "log2_n must be in [1, 40] for a runnable recovery");

    std::vector<int> attack = opt.attack_factors;
    std::vector<int> reduced = opt.reduced_factors;
    if (attack.empty() && reduced.empty()) {
        if (m == 1) {
            attack = {1};
        } else {
            for (size_t j = 0; j + 1 < m; j++) attack.push_back(int(j) + 1);
            reduced = {int(m)};
        }
    }

    RecoverPlan plan;
    for (int j : attack) {
        require(j >= 1 && size_t(j) <= m, errc::invalid_argument,
                "attack factor index out of range");
        plan.attack_factors.push_back(size_t(j) - 1);
    }
    for (int j : reduced) {
        require(j >= 1 && size_t(j) <= m, errc::invalid_argument,
                "reduced factor index out of range");
        plan.reduced_factors.push_back(size_t(j) - 1);
    }
    plan.reduced_samples = opt.reduced_samples;
    require(opt.verify_samples >= 1, errc::invalid_argument, "verify_samples must be >= 1");
    plan.verify_samples = opt.verify_samples;
    plan.threads = cfg.threads;
    for (size_t j : plan.attack_factors) {
        AttackParams p;
        p.k = k;
        p.n_samples = uint64_t(1) << log2n;
        p.noise = noise;
        p.threads = cfg.threads;
        plan.params[j] = p;
    }

    bool planted = false;
    Gf2Poly secret = pick_secret(src, opt.secret, &planted);
    Oracle oracle = planted ? Oracle(src.ring, noise, cfg.seed, OracleMode::real, secret)
                            : Oracle(src.ring, noise, cfg.seed, OracleMode::real);
    oracle.set_memory_budget(cfg.memory_budget);

    RunOutput out;
    emit(out.records, config_record(cfg, "recover",
                                    json{{"attack_factors", attack},
                                         {"reduced_factors", reduced},
                                         {"k", k},
                                         {"log2_n", log2n},
                                         {"noise", noise.format()},
                                         {"planted", planted},
                                         {"reduced_samples", opt.reduced_samples},
                                         {"verify_samples", opt.verify_samples}}));

    RecoverResult r = full_recover(oracle, plan);
    for (const StageReport& s : r.stages) {
        json fs = json::array();
        for (size_t j : s.factors) fs.push_back(j + 1);
        json rec;
        rec["record"] = "recover-stage";
        rec["factors"] = fs;
        rec["via"] = s.via_reduced ? "reduced" : "attack";
        rec["conclusive"] = s.conclusive;
        rec["score"] = s.score;
        rec["samples_used"] = s.samples_used;
        rec["ops"] = ops_json(s.ops);
        emit(out.records, rec);
    }
    json rec;
    rec["record"] = "recover";
    rec["complete"] = r.complete;
    rec["verified"] = r.verified;
    rec["residual_rate"] = r.residual_rate;
    rec["accept_rate"] = r.accept_rate;
    json res = json::object();
    for (const auto& [j, poly] : r.residues) res[std::to_string(j + 1)] = poly.format();
    rec["residues"] = res;
    if (r.complete) {
        rec["secret"] = r.secret.format();
        rec["matches_oracle_secret"] = r.secret == oracle.secret();
    }
    if (!r.diagnostics.empty()) rec["diagnostics"] = r.diagnostics;
    rec["ops"] = ops_json(r.total_ops);
    emit(out.records, rec);
    out.conclusive = r.complete;
    return out;
}

RunOutput run_simulate(const RunConfig& cfg, const SimulateOptions& opt) {
    RingSource src = resolve_source(cfg.ring);
    const RingSpec& ring = *src.ring;
    require(opt.runs >= 1 && opt.runs <= (uint64_t(1) << 24), errc::invalid_argument,
            "runs must be in [1, 2^24]");
    NoiseSpec noise = pick_noise(src, opt.noise);
    noise.validate();
    NoiseSpec eta_prime = NoiseSpec::parse(opt.eta_prime.empty() ? "1/4" : opt.eta_prime);

    int min_deg = ring.factor_degree(0);
    for (size_t j = 1; j < ring.factor_count(); j++)
        min_deg = std::min(min_deg, ring.factor_degree(j));
    int lambda = opt.lambda > 0 ? opt.lambda : std::min(80, min_deg - 1);
    require(lambda >= 1 && lambda <= ring.degree(), errc::invalid_argument,
            "lambda must be in [1, deg f]");

    RunOutput out;
    emit(out.records, config_record(cfg, "simulate",
                                    json{{"runs", opt.runs},
                                         {"noise", noise.format()},
                                         {"eta_prime", eta_prime.format()},
                                         {"lambda", lambda}}));
    if (lambda >= min_deg)
        emit(out.records,
             json{{"record", "warnings"},
                  {"messages",
                   json::array({"lambda reaches a factor degree; challenge differences are no "
                                "longer guaranteed units"})}});

    LapinKeys keys = lapin_keygen(ring, cfg.seed);
    Oracle sampler(src.ring, noise, cfg.seed, OracleMode::uniform);

    // honest transcript i uses substream cfg.seed + 1 + i, so chunking with a
    // shifted base seed reproduces the unchunked stream; tampered z draws
    // live past 2*runs to stay clear of it
    uint64_t accepted = 0, uniform_rejected = 0;
    const uint64_t chunk = 4096;
    for (uint64_t done = 0; done < opt.runs; done += chunk) {
        uint64_t n = std::min(chunk, opt.runs - done);
        std::vector<LapinTranscript> batch =
            eavesdrop(ring, keys, noise, n, cfg.seed + 1 + done, lambda);
        for (uint64_t i = 0; i < n; i++) {
            if (reader_verify(ring, keys, batch[i], eta_prime)) accepted++;
            SplitMix64 rng = SplitMix64::substream(cfg.seed, 2 * opt.runs + 1 + done + i);
            LapinTranscript tampered = batch[i];
            tampered.z = sampler.sample_uniform(rng);
            if (!reader_verify(ring, keys, tampered, eta_prime)) uniform_rejected++;
        }
    }

    uint64_t trials = std::min<uint64_t>(opt.runs, 1000);
    uint64_t violations = pi_unit_violations(ring, lambda, cfg.seed + 3, int(trials));

    json rec;
    rec["record"] = "simulate";
    rec["runs"] = opt.runs;
    rec["lambda"] = lambda;
    rec["accepted"] = accepted;
    rec["accept_rate"] = double(accepted) / double(opt.runs);
    rec["uniform_rejected"] = uniform_rejected;
    rec["uniform_reject_rate"] = double(uniform_rejected) / double(opt.runs);
    rec["unit_violation_trials"] = trials;
    rec["unit_violations"] = violations;
    emit(out.records, rec);
    return out;
}

RunOutput run_tables(const RunConfig& cfg) {
    require(cfg.ring == "lapin-621", errc::invalid_argument,
            "tables reproduces the published degree-621 parameter set; run it on the "
            "\"lapin-621\" preset");
    RunOutput out;
    emit(out.records, config_record(cfg, "tables", json::object()));

    // regression pins for the computed column; drift is a FAIL even on the
    // rows whose reference figures read as transposed
    const double pinned[] = {70.56795607541547, 70.29920801838728, 69.96289600533726,
                             71.39231742277876, 74.98584193700334};
    std::vector<ReferenceRow> rows = reference_table();
    bool all_pass = true;
    std::vector<CostReport> reports;
    for (size_t i = 0; i < rows.size(); i++) {
        const ReferenceRow& r = rows[i];
        reports.push_back(r.report);
        bool regression_ok = std::abs(r.log2_computed - pinned[i]) <= 1e-6;
        bool pass = regression_ok && (r.within || r.swap_suspect);
        all_pass = all_pass && pass;
        json rec;
        rec["record"] = "table-row";
        rec["factor"] = i + 1;
        rec["modulus"] = r.modulus;
        rec["l"] = r.l;
        rec["k"] = r.k;
        rec["w"] = r.w;
        rec["log2_n"] = r.log2n;
        rec["log2_c_star"] = r.log2_computed;
        rec["log2_reference"] = r.log2_reference;
        rec["within_reference"] = r.within;
        rec["swap_suspect"] = r.swap_suspect;
        rec["condition_ok"] = r.report.condition_ok;
        rec["table_ok"] = r.report.table_ok;
        rec["log2_queries"] = log2_exact(r.report.queries);
        rec["log2_memory"] = r.report.log2_memory();
        rec["status"] = pass ? "PASS" : "FAIL";
        if (r.swap_suspect)
            rec["note"] = "computed value lands on another row's reference figure; the "
                          "published pair reads as transposed";
        emit(out.records, rec);
    }

    HeadlineCosts h = headline_costs();
    struct Agg {
        const char* name;
        double computed;
        double reference;
    };
    const Agg aggs[] = {
        {"search_queries", h.log2_search_queries, 63.0},
        {"search_time", h.log2_search_time, 71.9},
        {"search_memory", h.log2_search_memory, 70.0},
        {"decision_queries", h.log2_decision_queries, 62.0},
        {"decision_time", h.log2_decision_time, 70.0},
        {"decision_memory", h.log2_decision_memory, 69.0},
    };
    for (const Agg& a : aggs) {
        bool pass = std::abs(a.computed - a.reference) <= 0.05;
        all_pass = all_pass && pass;
        json rec;
        rec["record"] = "table-aggregate";
        rec["name"] = a.name;
        rec["log2_computed"] = a.computed;
        rec["log2_reference"] = a.reference;
        rec["status"] = pass ? "PASS" : "FAIL";
        emit(out.records, rec);
    }

    // full-schedule sum, reported against the coarse upper bound with no
    // tolerance attached
    AggregateCost agg = aggregate_search_cost(reports);
    json sum_rec;
    sum_rec["record"] = "table-aggregate";
    sum_rec["name"] = "all_stage_sum";
    sum_rec["log2_computed"] = log2_exact(agg.all_sum);
    sum_rec["log2_reference"] = 75.05;
    sum_rec["status"] = "INFO";
    emit(out.records, sum_rec);

    // external baselines, echoed as published constants
    struct Ext {
        const char* name;
        double queries, time, memory;
    };
    const Ext ext[] = {
        {"levieil-fouque", 82.0, 103.4, 100.6},
        {"bernstein-lange", 79.3, 102.9, 97.9},
    };
    for (const Ext& e : ext) {
        json rec;
        rec["record"] = "table-external";
        rec["name"] = e.name;
        rec["log2_queries"] = e.queries;
        rec["log2_time"] = e.time;
        rec["log2_memory"] = e.memory;
        rec["source"] = "published external constant";
        emit(out.records, rec);
    }

    emit(out.records, json{{"record", "table-summary"},
                           {"rows", rows.size()},
                           {"aggregates", 6},
                           {"pass", all_pass}});
    out.conclusive = all_pass;
    return out;
}

RunOutput run_bench(const RunConfig& cfg, const BenchOptions& opt) {
    using clock = std::chrono::steady_clock;
    RingSource src = resolve_source(cfg.ring);
    const RingSpec& ring = *src.ring;
    require(opt.log2n >= 4 && opt.log2n <= 24, errc::invalid_argument,
            "log2_n must be in [4, 24] for bench");
    NoiseSpec noise = src.has_noise ? src.noise : NoiseSpec{1, 6};

    RunOutput out;
    emit(out.records, config_record(cfg, "bench", json{{"log2_n", opt.log2n}}));

    auto report = [&](const char* op, uint64_t items, uint64_t checksum, clock::duration dt) {
        json rec;
        rec["record"] = "bench";
        rec["op"] = op;
        rec["items"] = items;
        rec["checksum"] = checksum;
        rec["elapsed_ns"] =
            uint64_t(std::chrono::duration_cast<std::chrono::nanoseconds>(dt).count());
        emit(out.records, rec);
    };

    Oracle oracle(src.ring, noise, cfg.seed, OracleMode::real);
    oracle.set_memory_budget(cfg.memory_budget);

    {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, 1);
        Gf2Poly a = oracle.sample_uniform(rng);
        Gf2Poly b = oracle.sample_uniform(rng);
        const uint64_t iters = 2000;
        uint64_t sum = 0;
        auto t0 = clock::now();
        for (uint64_t i = 0; i < iters; i++) {
            a = ring.mul(a, b);
            sum ^= word0(a);
        }
        report("ring-mul", iters, sum, clock::now() - t0);
    }

    const uint64_t n = uint64_t(1) << opt.log2n;
    std::vector<RingLpnSample> raw;
    {
        auto t0 = clock::now();
        raw = oracle.batch(n, cfg.threads);
        report("oracle-batch", n, word0(raw.back().r) ^ word0(raw.back().v), clock::now() - t0);
    }

    CrtCode code = build_generator(ring.factor(0), ring.degree());
    Relation rel = last_row_relation(code);
    std::vector<LpnSample> compressed;
    compressed.reserve(raw.size());
    {
        auto t0 = clock::now();
        uint64_t zsum = 0;
        for (const RingLpnSample& s : raw) {
            RingLpnSample small;
            small.r = s.r.mod(code.f1);
            small.v = s.v.mod(code.f1);
            compressed.push_back(compress_sample(small, rel, code));
            zsum += compressed.back().z;
        }
        report("compress", raw.size(), zsum ^ compressed.front().a.word(0), clock::now() - t0);
    }

    {
        int k = std::min(11, code.l - 1);
        auto t0 = clock::now();
        std::vector<LpnSample> merged =
            birthday_merge(compressed, k, uint64_t(1) << 20, cfg.threads);
        uint64_t sum = merged.size();
        for (const LpnSample& s : merged) sum ^= s.a.word(0) + s.z;
        report("birthday-merge", merged.size(), sum, clock::now() - t0);
    }

    {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, 2);
        std::vector<int64_t> table(size_t(1) << 16);
        for (int64_t& v : table) v = (rng.next() & 1) ? 1 : -1;
        auto t0 = clock::now();
        fwht(table);
        int64_t best = 0;
        size_t arg = 0;
        for (size_t i = 0; i < table.size(); i++) {
            int64_t mag = table[i] < 0 ? -table[i] : table[i];
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        report("fwht-16", table.size(), uint64_t(best) ^ arg, clock::now() - t0);
    }

    return out;
}

RunOutput run_command(const RunConfig& cfg, const std::string& command,
                      const std::string& options_json) {
    json j = json::object();
    if (!options_json.empty()) {
        j = json::parse(options_json, nullptr, false);
        require(!j.is_discarded() && j.is_object(), errc::parse,
                "options must be a JSON object");
    }
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, value] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || key == a;
            if (ok) continue;
            std::string names;
            for (const char* a : allowed) {
                if (!names.empty()) names += ", ";
                names += a;
            }
            fail(errc::invalid_argument,
                 "unknown option \"" + key + "\" for " + command + " (allowed: " + names + ")");
        }
    };
    auto get_int = [&](const char* key, int64_t def) -> int64_t {
        if (!j.contains(key)) return def;
        require(j[key].is_number_integer(), errc::parse,
                "option \"" + std::string(key) + "\" must be an integer");
        return j[key].get<int64_t>();
    };
    auto get_u64 = [&](const char* key, uint64_t def) -> uint64_t {
        if (!j.contains(key)) return def;
        require(j[key].is_number_unsigned(), errc::parse,
                "option \"" + std::string(key) + "\" must be a nonnegative integer");
        return j[key].get<uint64_t>();
    };
    auto get_str = [&](const char* key, const std::string& def) -> std::string {
        if (!j.contains(key)) return def;
        require(j[key].is_string(), errc::parse,
                "option \"" + std::string(key) + "\" must be a string");
        return j[key].get<std::string>();
    };
    auto get_int_list = [&](const char* key) -> std::vector<int> {
        std::vector<int> out;
        if (!j.contains(key)) return out;
        require(j[key].is_array(), errc::parse,
                "option \"" + std::string(key) + "\" must be an array of integers");
        for (const auto& v : j[key]) {
            require(v.is_number_integer(), errc::parse,
                    "option \"" + std::string(key) + "\" must be an array of integers");
            out.push_back(v.get<int>());
        }
        return out;
    };

    if (command == "analyze") {
        check_keys({"factor", "noise", "target_bits", "iterations"});
        AnalyzeOptions opt;
        opt.factor = int(get_int("factor", 0));
        opt.noise = get_str("noise", "");
        opt.target_bits = int(get_int("target_bits", 80));
        opt.iterations = int(get_int("iterations", 100));
        return run_analyze(cfg, opt);
    }
    if (command == "attack") {
        check_keys({"mode", "factor", "k", "log2_n", "noise", "secret", "oracle"});
        AttackOptions opt;
        opt.mode = get_str("mode", "");
        opt.factor = int(get_int("factor", 1));
        opt.k = int(get_int("k", 0));
        opt.log2n = int(get_int("log2_n", 0));
        opt.noise = get_str("noise", "");
        opt.secret = get_str("secret", "");
        opt.oracle_mode = get_str("oracle", "");
        return run_attack(cfg, opt);
    }
    if (command == "recover") {
        check_keys({"attack_factors", "reduced_factors", "k", "log2_n", "noise", "secret",
                    "reduced_samples", "verify_samples"});
        RecoverOptions opt;
        opt.attack_factors = get_int_list("attack_factors");
        opt.reduced_factors = get_int_list("reduced_factors");
        opt.k = int(get_int("k", 0));
        opt.log2n = int(get_int("log2_n", 0));
        opt.noise = get_str("noise", "");
        opt.secret = get_str("secret", "");
        opt.reduced_samples = get_u64("reduced_samples", 256);
        opt.verify_samples = int(get_int("verify_samples", 64));
        return run_recover(cfg, opt);
    }
    if (command == "simulate") {
        check_keys({"runs", "noise", "eta_prime", "lambda"});
        SimulateOptions opt;
        opt.runs = get_u64("runs", 1000);
        opt.noise = get_str("noise", "");
        opt.eta_prime = get_str("eta_prime", "");
        opt.lambda = int(get_int("lambda", 0));
        return run_simulate(cfg, opt);
    }
    if (command == "tables") {
        check_keys({});
        return run_tables(cfg);
    }
    if (command == "bench") {
        check_keys({"log2_n"});
        BenchOptions opt;
        opt.log2n = int(get_int("log2_n", 12));
        return run_bench(cfg, opt);
    }
    fail(errc::invalid_argument,
         "unknown command \"" + command +
             "\" (known: analyze, attack, recover, simulate, tables, bench)");
}

} // namespace rlpn
