#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "rlpn.h"

using nlohmann::json;

namespace {

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

std::string yesno(bool v) {
    return v ? "yes" : "no";
}

void print_pretty(const json& r) {
    const std::string kind = r.at("record");
    if (kind == "config") {
        std::printf("# %s on %s  seed %" PRIu64 "  threads %d\n",
                    r.at("command").get<std::string>().c_str(),
                    r.at("ring").get<std::string>().c_str(), r.at("seed").get<uint64_t>(),
                    r.at("threads").get<int>());
        std::printf("# options %s\n", r.at("options").dump().c_str());
    } else if (kind == "analyze") {
        std::printf("factor %d: %s\n", r.at("factor").get<int>(),
                    r.at("modulus").get<std::string>().c_str());
        std::printf("  code [%d, %d], row weights first %d last %d min %d\n", r.at("t").get<int>(),
                    r.at("l").get<int>(), r.at("row0_weight").get<int>(),
                    r.at("last_row_weight").get<int>(), r.at("min_row_weight").get<int>());
        std::printf("  best relation weight %d, random-code distance bound %d\n",
                    r.at("best_relation_weight").get<int>(), r.at("gv_bound").get<int>());
        std::printf("  epsilon %s, sample floor 2^%s, below %d-bit target: %s\n",
                    r.at("epsilon").get<std::string>().c_str(),
                    fmt("%.2f", r.at("log2_sample_floor").get<double>()).c_str(),
                    r.at("target_bits").get<int>(),
                    yesno(r.at("flagged_below_target").get<bool>()).c_str());
    } else if (kind == "note") {
        std::printf("note: %s\n", r.at("text").get<std::string>().c_str());
    } else if (kind == "warnings") {
        for (const auto& m : r.at("messages"))
            std::printf("warning: %s\n", m.get<std::string>().c_str());
    } else if (kind == "attack") {
        std::printf("attack factor %d (%s, l=%d): %zu bits at offset %d: %s\n",
                    r.at("factor").get<int>(), r.at("mode").get<std::string>().c_str(),
                    r.at("l").get<int>(), r.at("candidate_bits").get<std::string>().size(),
                    r.at("secret_offset").get<int>(),
                    r.at("candidate_bits").get<std::string>().c_str());
        std::printf("  score %lld vs second %lld, samples %" PRIu64 ", queries %" PRIu64 "%s\n",
                    static_cast<long long>(r.at("score").get<int64_t>()),
                    static_cast<long long>(r.at("second_score").get<int64_t>()),
                    r.at("samples_used").get<uint64_t>(), r.at("queries").get<uint64_t>(),
                    r.at("inconclusive").get<bool>() ? ", INCONCLUSIVE" : "");
        if (r.contains("matches_secret"))
            std::printf("  matches oracle secret: %s\n",
                        yesno(r.at("matches_secret").get<bool>()).c_str());
    } else if (kind == "decision") {
        std::printf("decision factor %d: verdict %s (truth %s, %s)\n", r.at("factor").get<int>(),
                    r.at("verdict").get<std::string>().c_str(),
                    r.at("truth").get<std::string>().c_str(),
                    r.at("correct").get<bool>() ? "correct" : "WRONG");
        std::printf("  score %lld, threshold %s, expected peak %s, null quantile %s\n",
                    static_cast<long long>(r.at("score").get<int64_t>()),
                    fmt("%.1f", r.at("threshold").get<double>()).c_str(),
                    fmt("%.1f", r.at("expected_peak").get<double>()).c_str(),
                    fmt("%.1f", r.at("null_quantile").get<double>()).c_str());
    } else if (kind == "recover-stage") {
        std::string factors;
        for (const auto& f : r.at("factors")) {
            if (!factors.empty()) factors += ",";
            factors += std::to_string(f.get<int>());
        }
        std::printf("stage [%s] via %s: %s, score %lld, samples %" PRIu64 "\n", factors.c_str(),
                    r.at("via").get<std::string>().c_str(),
                    r.at("conclusive").get<bool>() ? "conclusive" : "INCONCLUSIVE",
                    static_cast<long long>(r.at("score").get<int64_t>()),
                    r.at("samples_used").get<uint64_t>());
    } else if (kind == "recover") {
        std::printf("recover: %s, %s (residual rate %s vs cut %s)\n",
                    r.at("complete").get<bool>() ? "complete" : "PARTIAL",
                    r.at("verified").get<bool>() ? "verified" : "NOT VERIFIED",
                    fmt("%.4f", r.at("residual_rate").get<double>()).c_str(),
                    fmt("%.4f", r.at("accept_rate").get<double>()).c_str());
        for (const auto& [idx, poly] : r.at("residues").items())
            std::printf("  s mod f%s = %s\n", idx.c_str(), poly.get<std::string>().c_str());
        if (r.contains("secret"))
            std::printf("  secret = %s\n", r.at("secret").get<std::string>().c_str());
        if (r.contains("matches_oracle_secret"))
            std::printf("  matches oracle secret: %s\n",
                        yesno(r.at("matches_oracle_secret").get<bool>()).c_str());
        if (r.contains("diagnostics"))
            for (const auto& d : r.at("diagnostics"))
                std::printf("  diagnostic: %s\n", d.get<std::string>().c_str());
    } else if (kind == "simulate") {
        uint64_t runs = r.at("runs").get<uint64_t>();
        std::printf("simulate: %" PRIu64 " runs, lambda %d\n", runs, r.at("lambda").get<int>());
        std::printf("  honest accepts %" PRIu64 "/%" PRIu64 " (rate %s)\n",
                    r.at("accepted").get<uint64_t>(), runs,
                    fmt("%.4f", r.at("accept_rate").get<double>()).c_str());
        std::printf("  tampered rejects %" PRIu64 "/%" PRIu64 " (rate %s)\n",
                    r.at("uniform_rejected").get<uint64_t>(), runs,
                    fmt("%.4f", r.at("uniform_reject_rate").get<double>()).c_str());
        std::printf("  unit violations %" PRIu64 "/%" PRIu64 "\n",
                    r.at("unit_violations").get<uint64_t>(),
                    r.at("unit_violation_trials").get<uint64_t>());
    } else if (kind == "table-row") {
        std::printf("factor %d %-22s l=%-3d k=%-2d w=%-2d log2N=%d  C* 2^%s (ref 2^%s)  %s\n",
                    r.at("factor").get<int>(), r.at("modulus").get<std::string>().c_str(),
                    r.at("l").get<int>(), r.at("k").get<int>(), r.at("w").get<int>(),
                    r.at("log2_n").get<int>(),
                    fmt("%.3f", r.at("log2_c_star").get<double>()).c_str(),
                    fmt("%.2f", r.at("log2_reference").get<double>()).c_str(),
                    r.at("status").get<std::string>().c_str());
        if (r.contains("note")) std::printf("  note: %s\n", r.at("note").get<std::string>().c_str());
    } else if (kind == "table-aggregate") {
        std::printf("aggregate %-16s 2^%s (ref 2^%s)  %s\n",
                    r.at("name").get<std::string>().c_str(),
                    fmt("%.3f", r.at("log2_computed").get<double>()).c_str(),
                    fmt("%.2f", r.at("log2_reference").get<double>()).c_str(),
                    r.at("status").get<std::string>().c_str());
    } else if (kind == "table-external") {
        std::printf("external %-16s queries 2^%s time 2^%s memory 2^%s\n",
                    r.at("name").get<std::string>().c_str(),
                    fmt("%.1f", r.at("log2_queries").get<double>()).c_str(),
                    fmt("%.1f", r.at("log2_time").get<double>()).c_str(),
                    fmt("%.1f", r.at("log2_memory").get<double>()).c_str());
    } else if (kind == "table-summary") {
        std::printf("summary: %d rows, %d aggregates, %s\n", r.at("rows").get<int>(),
                    r.at("aggregates").get<int>(), r.at("pass").get<bool>() ? "PASS" : "FAIL");
    } else if (kind == "bench") {
        std::printf("bench %-14s %8" PRIu64 " items  checksum %" PRIu64 "  %.3f ms\n",
                    r.at("op").get<std::string>().c_str(), r.at("items").get<uint64_t>(),
                    r.at("checksum").get<uint64_t>(),
                    double(r.at("elapsed_ns").get<uint64_t>()) / 1e6);
    } else {
        std::printf("%s\n", r.dump().c_str());
    }
}

int render(const char* records, bool pretty) {
    if (!pretty) {
        std::fputs(records, stdout);
        return 0;
    }
    std::string text = records;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        print_pretty(json::parse(text.substr(pos, nl - pos)));
        pos = nl + 1;
    }
    return 0;
}

int list_rings(const std::string& name, bool pretty) {
    if (!name.empty()) {
        char* text = nullptr;
        if (rlpn_preset_describe(name.c_str(), &text) != RLPN_OK) {
            std::fprintf(stderr, "error: %s\n", rlpn_last_error());
            return 2;
        }
        std::fputs(text, stdout);
        rlpn_string_free(text);
        return 0;
    }
    char* names_text = nullptr;
    if (rlpn_preset_names(&names_text) != RLPN_OK) {
        std::fprintf(stderr, "error: %s\n", rlpn_last_error());
        return 2;
    }
    json names = json::parse(names_text);
    rlpn_string_free(names_text);
    for (const auto& n : names) {
        char* info_text = nullptr;
        if (rlpn_preset_describe(n.get<std::string>().c_str(), &info_text) != RLPN_OK) continue;
        json info = json::parse(info_text);
        rlpn_string_free(info_text);
        if (pretty)
            std::printf("%-10s %s\n", info.at("name").get<std::string>().c_str(),
                        info.at("description").get<std::string>().c_str());
        else
            std::printf("%s\n", json{{"record", "ring"},
                                     {"name", info.at("name")},
                                     {"description", info.at("description")},
                                     {"factors", info.at("factors").size()}}
                                    .dump()
                                    .c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ring-LPN toolkit: CRT-structured rings, low-weight relations, birthday "
                 "collisions, and transform-based distinguishers"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string ring = "lapin-621";
    uint64_t seed = 1;
    int threads = 1;
    uint64_t memory_budget = 0;
    bool pretty = false;
    app.add_option("-r,--ring", ring,
                   "preset name (see the rings subcommand) or path to a ring file");
    CLI::Option* seed_opt =
        app.add_option("-s,--seed", seed, "run seed; RLPN_SEED overrides the default");
    app.add_option("-t,--threads", threads, "worker threads (results are thread-invariant)");
    app.add_option("--memory-budget", memory_budget, "sample buffer cap in bytes");
    app.add_flag("-p,--pretty", pretty, "human-readable report instead of JSON lines");

    json opts = json::object();

    CLI::App* analyze = app.add_subcommand("analyze", "code shape and security margins per factor");
    int factor = 0;
    std::string noise, secret, mode, oracle_mode, eta_prime;
    int target_bits = 0, iterations = 0, k = 0, log2n = 0, lambda = 0, verify_samples = 0;
    uint64_t runs = 0, reduced_samples = 0;
    std::vector<int> attack_factors, reduced_factors;
    CLI::Option* o_factor = analyze->add_option("-f,--factor", factor, "1-based factor, 0 = all");
    CLI::Option* o_noise = analyze->add_option("--noise", noise, "error rate, e.g. 1/6");
    CLI::Option* o_target = analyze->add_option("--target-bits", target_bits, "security target");
    CLI::Option* o_iters =
        analyze->add_option("--iterations", iterations, "relation search effort");
    analyze->callback([&] {
        if (o_factor->count()) opts["factor"] = factor;
        if (o_noise->count()) opts["noise"] = noise;
        if (o_target->count()) opts["target_bits"] = target_bits;
        if (o_iters->count()) opts["iterations"] = iterations;
    });

    CLI::App* attack = app.add_subcommand("attack", "single-factor key recovery or decision");
    CLI::Option* a_mode =
        attack->add_option("-m,--mode", mode, "improved, generic, or decision");
    CLI::Option* a_factor = attack->add_option("-f,--factor", factor, "1-based factor to hit");
    CLI::Option* a_k = attack->add_option("-k", k, "collision width in bits");
    CLI::Option* a_log2n = attack->add_option("-n,--log2-n", log2n, "log2 of the sample count");
    CLI::Option* a_noise = attack->add_option("--noise", noise, "error rate, e.g. 1/6");
    CLI::Option* a_secret = attack->add_option(
        "--secret", secret, "planted secret: a polynomial, or \"vector\" for the shipped one");
    CLI::Option* a_oracle = attack->add_option("--oracle", oracle_mode, "real or uniform");
    attack->callback([&] {
        if (a_mode->count()) opts["mode"] = mode;
        if (a_factor->count()) opts["factor"] = factor;
        if (a_k->count()) opts["k"] = k;
        if (a_log2n->count()) opts["log2_n"] = log2n;
        if (a_noise->count()) opts["noise"] = noise;
        if (a_secret->count()) opts["secret"] = secret;
        if (a_oracle->count()) opts["oracle"] = oracle_mode;
    });

    CLI::App* recover = app.add_subcommand("recover", "staged full-key recovery across factors");
    CLI::Option* r_attack = recover->add_option("--attack-factors", attack_factors,
                                                "factors recovered by collision attack")
                                ->delimiter(',');
    CLI::Option* r_reduced = recover->add_option("--reduced-factors", reduced_factors,
                                                 "factors solved on the reduced instance")
                                 ->delimiter(',');
    CLI::Option* r_k = recover->add_option("-k", k, "collision width in bits");
    CLI::Option* r_log2n = recover->add_option("-n,--log2-n", log2n, "log2 of the sample count");
    CLI::Option* r_noise = recover->add_option("--noise", noise, "error rate, e.g. 1/6");
    CLI::Option* r_secret = recover->add_option(
        "--secret", secret, "planted secret: a polynomial, or \"vector\" for the shipped one");
    CLI::Option* r_rs = recover->add_option("--reduced-samples", reduced_samples,
                                            "fresh samples for the reduced stage");
    CLI::Option* r_vs =
        recover->add_option("--verify-samples", verify_samples, "fresh samples for the check");
    recover->callback([&] {
        if (r_attack->count()) opts["attack_factors"] = attack_factors;
        if (r_reduced->count()) opts["reduced_factors"] = reduced_factors;
        if (r_k->count()) opts["k"] = k;
        if (r_log2n->count()) opts["log2_n"] = log2n;
        if (r_noise->count()) opts["noise"] = noise;
        if (r_secret->count()) opts["secret"] = secret;
        if (r_rs->count()) opts["reduced_samples"] = reduced_samples;
        if (r_vs->count()) opts["verify_samples"] = verify_samples;
    });

    CLI::App* simulate =
        app.add_subcommand("simulate", "authentication transcripts: accept and reject rates");
    CLI::Option* s_runs = simulate->add_option("--runs", runs, "protocol runs");
    CLI::Option* s_noise = simulate->add_option("--noise", noise, "tag error rate");
    CLI::Option* s_eta =
        simulate->add_option("--eta-prime", eta_prime, "reader acceptance threshold rate");
    CLI::Option* s_lambda = simulate->add_option("--lambda", lambda, "challenge bits");
    simulate->callback([&] {
        if (s_runs->count()) opts["runs"] = runs;
        if (s_noise->count()) opts["noise"] = noise;
        if (s_eta->count()) opts["eta_prime"] = eta_prime;
        if (s_lambda->count()) opts["lambda"] = lambda;
    });

    app.add_subcommand("tables", "reproduce the published cost table for the degree-621 set");

    CLI::App* bench = app.add_subcommand("bench", "time the core kernels");
    CLI::Option* b_log2n = bench->add_option("-n,--log2-n", log2n, "log2 of the batch size");
    bench->callback([&] {
        if (b_log2n->count()) opts["log2_n"] = log2n;
    });

    CLI::App* rings = app.add_subcommand("rings", "list built-in rings, or show one in full");
    std::string ring_name;
    rings->add_option("name", ring_name, "preset name to show");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (rings->parsed()) return list_rings(ring_name, pretty);

    if (!seed_opt->count()) {
        if (const char* env = std::getenv("RLPN_SEED")) seed = std::strtoull(env, nullptr, 10);
    }

    const char* command = app.get_subcommands().front()->get_name().c_str();
    char* records = nullptr;
    int conclusive = 1;
    rlpn_status status = rlpn_run(ring.c_str(), seed, threads, memory_budget, command,
                                  opts.dump().c_str(), &records, &conclusive);
    if (status != RLPN_OK) {
        std::fprintf(stderr, "error: %s\n", rlpn_last_error());
        return 2;
    }
    render(records, pretty);
    rlpn_string_free(records);
    if (!conclusive) {
        std::fprintf(stderr, "inconclusive: the evidence stayed below threshold\n");
        return 3;
    }
    return 0;
}
