#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "rlpn/error.hpp"
#include "rlpn/runners.hpp"

using namespace rlpn;
using nlohmann::json;

namespace {

RunConfig base_config(const std::string& ring) {
    RunConfig cfg;
    cfg.ring = ring;
    cfg.seed = 7;
    return cfg;
}

std::vector<json> records_of(const RunOutput& out) {
    std::vector<json> recs;
    std::istringstream in(out.records);
    std::string line;
    while (std::getline(in, line)) {
        REQUIRE(!line.empty());
        recs.push_back(json::parse(line));
    }
    return recs;
}

json find_record(const std::vector<json>& recs, const std::string& kind) {
    for (const json& r : recs)
        if (r.at("record") == kind) return r;
    FAIL("no record of kind ", kind);
    return json();
}

bool has_record(const std::vector<json>& recs, const std::string& kind) {
    for (const json& r : recs)
        if (r.at("record") == kind) return true;
    return false;
}

// records after the config line, for comparisons that ignore run metadata
std::string tail_of(const RunOutput& out) {
    size_t nl = out.records.find('\n');
    REQUIRE(nl != std::string::npos);
    return out.records.substr(nl + 1);
}

std::string strip_field(const std::string& records, const std::string& key) {
    std::istringstream in(records);
    std::string line, out;
    while (std::getline(in, line)) {
        json j = json::parse(line);
        j.erase(key);
        out += j.dump();
        out += '\n';
    }
    return out;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& text)
        : path("/tmp/rlpn_runner_" + name) {
        std::ofstream out(path);
        out << text;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("analyze emits one record per factor plus the advisor note") {
    RunConfig cfg = base_config("lapin-621");
    RunOutput out = run_analyze(cfg, AnalyzeOptions{});
    std::vector<json> recs = records_of(out);
    REQUIRE(recs.size() == 7);

    const json& conf = recs[0];
    CHECK(conf.at("record") == "config");
    CHECK(conf.at("command") == "analyze");
    CHECK(conf.at("ring") == "lapin-621");
    CHECK(conf.at("seed") == 7);
    CHECK(conf.at("threads") == 1);
    CHECK(conf.at("options").at("noise") == "1/6");
    CHECK(conf.at("options").at("target_bits") == 80);

    const json& f1 = recs[1];
    CHECK(f1.at("record") == "analyze");
    CHECK(f1.at("factor") == 1);
    CHECK(f1.at("modulus") == "x^127+x^8+x^7+x^3+1");
    CHECK(f1.at("l") == 127);
    CHECK(f1.at("t") == 621);
    CHECK(f1.at("row0_weight") == 26);
    CHECK(f1.at("last_row_weight") == 25);
    CHECK(f1.at("min_row_weight") == 25);
    CHECK(f1.at("best_relation_weight") == 25);
    CHECK(f1.at("gv_bound") == 154);
    CHECK(f1.at("epsilon") == "4/6");
    CHECK(f1.at("log2_sample_floor").get<double>() ==
          doctest::Approx(58.49625007211561).epsilon(1e-12));
    CHECK(f1.at("flagged_below_target") == true);

    for (size_t i = 1; i <= 5; i++) CHECK(recs[i].at("factor") == i);
    CHECK(recs[6].at("record") == "note");
    CHECK(recs[6].at("text").get<std::string>().find("beat the target") != std::string::npos);

    AnalyzeOptions one;
    one.factor = 3;
    std::vector<json> only = records_of(run_analyze(cfg, one));
    REQUIRE(only.size() >= 2);
    CHECK(only[1].at("factor") == 3);
    CHECK(only[1].at("l") == 125);
}

TEST_CASE("analyze validates its inputs") {
    RunConfig cfg = base_config("desk-33");
    AnalyzeOptions opt;
    opt.factor = 6;
    CHECK_THROWS_WITH_AS(run_analyze(cfg, opt), doctest::Contains("factor index"), Error);
    opt.factor = 0;
    opt.target_bits = 0;
    CHECK_THROWS_AS(run_analyze(cfg, opt), Error);
    opt.target_bits = 80;
    opt.iterations = 0;
    CHECK_THROWS_AS(run_analyze(cfg, opt), Error);

    cfg.ring = "/nonexistent/ring.json";
    try {
        run_analyze(cfg, AnalyzeOptions{});
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::io);
    }

    TempFile bare("bare.json", "{\"factors\": [\"x^7+x+1\", \"x^9+x^4+1\"]}\n");
    cfg.ring = bare.path;
    CHECK_THROWS_WITH_AS(run_analyze(cfg, AnalyzeOptions{}),
                         doctest::Contains("no error rate on record"), Error);
    AnalyzeOptions with_noise;
    with_noise.noise = "1/20";
    std::vector<json> recs = records_of(run_analyze(cfg, with_noise));
    CHECK(recs[1].at("l") == 7);
    CHECK(recs[2].at("l") == 9);
}

TEST_CASE("attack defaults come from the source and the planted vector is recovered") {
    RunConfig cfg = base_config("desk-33");
    AttackOptions opt;
    opt.secret = "vector";
    RunOutput out = run_attack(cfg, opt);
    std::vector<json> recs = records_of(out);

    const json& conf = recs[0];
    CHECK(conf.at("options").at("mode") == "improved");
    CHECK(conf.at("options").at("k") == 11);
    CHECK(conf.at("options").at("log2_n") == 15);
    CHECK(conf.at("options").at("noise") == "1/20");
    CHECK(conf.at("options").at("oracle") == "real");
    CHECK(conf.at("options").at("planted") == true);

    CHECK(has_record(recs, "warnings"));
    const json& rec = find_record(recs, "attack");
    CHECK(rec.at("factor") == 1);
    CHECK(rec.at("l") == 17);
    CHECK(rec.at("relation_weight") == 4);
    CHECK(rec.at("dims") == 6);
    CHECK(rec.at("secret_offset") == 11);
    CHECK(rec.at("candidate_bits").get<std::string>().size() == 6);
    CHECK(rec.at("queries") == 32768);
    CHECK(rec.at("inconclusive") == false);
    CHECK(rec.at("matches_secret") == true);
    CHECK(rec.at("score").get<int64_t>() > rec.at("second_score").get<int64_t>());
    CHECK(rec.at("ops").at("total").get<uint64_t>() > 0);
    CHECK(out.conclusive);

    RunOutput again = run_attack(cfg, opt);
    CHECK(out.records == again.records);

    // a ring file carrying the same defaults reproduces everything after the
    // config echo
    cfg.ring = std::string(RLPN_PRESET_DIR) + "/desk-33.json";
    RunOutput from_file = run_attack(cfg, opt);
    CHECK(tail_of(from_file) == tail_of(out));
}

TEST_CASE("attack on a uniform oracle stays inconclusive") {
    RunConfig cfg = base_config("small-16");
    AttackOptions opt;
    opt.mode = "generic";
    opt.secret = "vector";
    opt.oracle_mode = "uniform";
    RunOutput out = run_attack(cfg, opt);
    const json rec = find_record(records_of(out), "attack");
    CHECK(!rec.contains("matches_secret"));
    CHECK(rec.at("secret_offset") == 0);
    CHECK(rec.at("inconclusive") == true);
    CHECK(!out.conclusive);
}

TEST_CASE("attack validates mode, factor, and parameter ranges") {
    RunConfig cfg = base_config("desk-33");
    AttackOptions opt;
    opt.mode = "sideways";
    CHECK_THROWS_WITH_AS(run_attack(cfg, opt), doctest::Contains("mode must be"), Error);
    opt.mode = "";
    opt.factor = 3;
    CHECK_THROWS_WITH_AS(run_attack(cfg, opt), doctest::Contains("factor index"), Error);
    opt.factor = 1;
    opt.log2n = 41;
    CHECK_THROWS_WITH_AS(run_attack(cfg, opt), doctest::Contains("log2_n"), Error);
    opt.log2n = 0;
    opt.oracle_mode = "noisy";
    CHECK_THROWS_WITH_AS(run_attack(cfg, opt), doctest::Contains("oracle must be"), Error);
    opt.oracle_mode = "";
    opt.secret = "x^40";
    CHECK_THROWS_WITH_AS(run_attack(cfg, opt), doctest::Contains("below the modulus degree"),
                         Error);

    // the production preset records analysis-scale parameters, not runnable
    // ones, so attack demands an explicit sample count
    cfg = base_config("lapin-621");
    CHECK_THROWS_WITH_AS(run_attack(cfg, AttackOptions{}), doctest::Contains("log2_n"), Error);

    cfg = base_config("small-16");
    AttackOptions vec;
    vec.mode = "generic";
    vec.secret = "vector";
    RunOutput out = run_attack(cfg, vec);
    CHECK(find_record(records_of(out), "attack").at("matches_secret") == true);
}

TEST_CASE("decision verdicts track the oracle mode") {
    RunConfig cfg = base_config("desk-33");
    AttackOptions opt;
    opt.mode = "decision";

    RunOutput real_out = run_attack(cfg, opt);
    const json real_rec = find_record(records_of(real_out), "decision");
    CHECK(real_rec.at("verdict") == "real");
    CHECK(real_rec.at("truth") == "real");
    CHECK(real_rec.at("correct") == true);
    CHECK(real_rec.at("score").get<double>() > real_rec.at("threshold").get<double>());
    CHECK(real_rec.at("expected_peak").get<double>() >
          real_rec.at("null_quantile").get<double>());
    CHECK(real_rec.at("samples_used").get<uint64_t>() > 0);

    opt.oracle_mode = "uniform";
    RunOutput unif_out = run_attack(cfg, opt);
    const json unif_rec = find_record(records_of(unif_out), "decision");
    CHECK(unif_rec.at("verdict") == "uniform");
    CHECK(unif_rec.at("truth") == "uniform");
    CHECK(unif_rec.at("correct") == true);
    CHECK(unif_rec.at("score").get<double>() < unif_rec.at("threshold").get<double>());
}

TEST_CASE("recover runs the default schedule and lifts the secret") {
    RunConfig cfg = base_config("desk-51");
    RunOutput out = run_recover(cfg, RecoverOptions{});
    std::vector<json> recs = records_of(out);

    const json& conf = recs[0];
    CHECK(conf.at("options").at("attack_factors") == json::array({1, 2}));
    CHECK(conf.at("options").at("reduced_factors") == json::array({3}));
    CHECK(conf.at("options").at("k") == 11);
    CHECK(conf.at("options").at("log2_n") == 15);

    REQUIRE(recs.size() == 5);
    CHECK(recs[1].at("record") == "recover-stage");
    CHECK(recs[1].at("factors") == json::array({1}));
    CHECK(recs[1].at("via") == "attack");
    CHECK(recs[2].at("factors") == json::array({2}));
    CHECK(recs[2].at("via") == "attack");
    CHECK(recs[3].at("factors") == json::array({3}));
    CHECK(recs[3].at("via") == "reduced");
    for (size_t i = 1; i <= 3; i++) CHECK(recs[i].at("conclusive") == true);

    const json& rec = recs[4];
    CHECK(rec.at("record") == "recover");
    CHECK(rec.at("complete") == true);
    CHECK(rec.at("verified") == true);
    CHECK(rec.at("matches_oracle_secret") == true);
    CHECK(rec.at("residues").size() == 3);
    CHECK(rec.at("residual_rate").get<double>() < 0.10);
    CHECK(!rec.contains("diagnostics"));
    CHECK(out.conclusive);

    RunOutput again = run_recover(cfg, RecoverOptions{});
    CHECK(out.records == again.records);
}

TEST_CASE("recover handles explicit schedules and rejects bad ones") {
    RunConfig cfg = base_config("desk-33");
    RunOutput out = run_recover(cfg, RecoverOptions{});
    std::vector<json> recs = records_of(out);
    CHECK(recs[0].at("options").at("attack_factors") == json::array({1}));
    CHECK(recs[0].at("options").at("reduced_factors") == json::array({2}));
    CHECK(recs.back().at("complete") == true);
    CHECK(recs.back().at("matches_oracle_secret") == true);

    RecoverOptions both;
    both.attack_factors = {1, 2};
    RunOutput all_attack = run_recover(cfg, both);
    std::vector<json> arecs = records_of(all_attack);
    REQUIRE(arecs.size() == 4);
    CHECK(arecs[1].at("via") == "attack");
    CHECK(arecs[2].at("via") == "attack");
    CHECK(arecs.back().at("complete") == true);

    RecoverOptions bad;
    bad.attack_factors = {4};
    CHECK_THROWS_WITH_AS(run_recover(cfg, bad), doctest::Contains("attack factor index"), Error);
    bad.attack_factors = {1};
    bad.reduced_factors = {1};
    CHECK_THROWS_AS(run_recover(cfg, bad), Error);
    RecoverOptions zero;
    zero.verify_samples = 0;
    CHECK_THROWS_WITH_AS(run_recover(cfg, zero), doctest::Contains("verify_samples"), Error);
}

TEST_CASE("simulate counts honest accepts, tampered rejects, and unit violations") {
    RunConfig cfg = base_config("desk-33");
    SimulateOptions opt;
    opt.runs = 2000;
    RunOutput out = run_simulate(cfg, opt);
    std::vector<json> recs = records_of(out);

    CHECK(recs[0].at("options").at("eta_prime") == "1/4");
    CHECK(recs[0].at("options").at("lambda") == 15);

    const json rec = find_record(recs, "simulate");
    CHECK(rec.at("runs") == 2000);
    CHECK(rec.at("lambda") == 15);
    CHECK(rec.at("accept_rate").get<double>() >= 0.999);
    CHECK(rec.at("uniform_reject_rate").get<double>() >= 0.99);
    CHECK(rec.at("unit_violation_trials") == 1000);
    CHECK(rec.at("unit_violations") == 0);

    RunOutput again = run_simulate(cfg, opt);
    CHECK(out.records == again.records);

    // chunking is seamless: a run count past the chunk size gives the same
    // accept counts on its first-chunk prefix as the short run
    SimulateOptions shorter;
    shorter.runs = 1000;
    const json small = find_record(records_of(run_simulate(cfg, shorter)), "simulate");
    CHECK(small.at("accepted").get<uint64_t>() >= 999);

    SimulateOptions warn;
    warn.runs = 10;
    warn.lambda = 20;
    std::vector<json> wrecs = records_of(run_simulate(cfg, warn));
    CHECK(has_record(wrecs, "warnings"));

    SimulateOptions bad;
    bad.lambda = 40;
    CHECK_THROWS_WITH_AS(run_simulate(cfg, bad), doctest::Contains("lambda"), Error);
    bad.lambda = 0;
    bad.runs = 0;
    CHECK_THROWS_WITH_AS(run_simulate(cfg, bad), doctest::Contains("runs"), Error);
}

TEST_CASE("tables reproduces the published cost table") {
    RunConfig cfg = base_config("lapin-621");
    RunOutput out = run_tables(cfg);
    std::vector<json> recs = records_of(out);
    CHECK(out.conclusive);

    std::vector<json> rows, aggs, ext;
    for (const json& r : recs) {
        if (r.at("record") == "table-row") rows.push_back(r);
        if (r.at("record") == "table-aggregate") aggs.push_back(r);
        if (r.at("record") == "table-external") ext.push_back(r);
    }
    REQUIRE(rows.size() == 5);
    REQUIRE(aggs.size() == 7);
    REQUIRE(ext.size() == 2);

    const double pinned[] = {70.56795607541547, 70.29920801838728, 69.96289600533726,
                             71.39231742277876, 74.98584193700334};
    for (size_t i = 0; i < 5; i++) {
        CHECK(rows[i].at("status") == "PASS");
        CHECK(rows[i].at("condition_ok") == true);
        CHECK(rows[i].at("log2_c_star").get<double>() ==
              doctest::Approx(pinned[i]).epsilon(1e-12));
        bool swapped = i >= 3;
        CHECK(rows[i].at("within_reference") == !swapped);
        CHECK(rows[i].at("swap_suspect") == swapped);
        CHECK(rows[i].at("table_ok") == !swapped);
        CHECK(rows[i].contains("note") == swapped);
    }
    CHECK(rows[0].at("log2_queries") == 63.0);
    CHECK(rows[0].at("log2_memory").get<double>() ==
          doctest::Approx(69.98868468677216).epsilon(1e-12));

    for (const json& a : aggs) {
        if (a.at("name") == "all_stage_sum") {
            CHECK(a.at("status") == "INFO");
            CHECK(a.at("log2_computed").get<double>() ==
                  doctest::Approx(75.24792751344359).epsilon(1e-12));
        } else {
            CHECK(a.at("status") == "PASS");
        }
    }

    CHECK(ext[0].at("name") == "levieil-fouque");
    CHECK(ext[0].at("log2_queries") == 82.0);
    CHECK(ext[0].at("log2_time") == 103.4);
    CHECK(ext[0].at("log2_memory") == 100.6);
    CHECK(ext[1].at("name") == "bernstein-lange");
    CHECK(ext[1].at("log2_queries") == 79.3);
    CHECK(ext[1].at("log2_time") == 102.9);
    CHECK(ext[1].at("log2_memory") == 97.9);

    const json summary = find_record(recs, "table-summary");
    CHECK(summary.at("pass") == true);

    RunConfig other = base_config("desk-33");
    CHECK_THROWS_WITH_AS(run_tables(other), doctest::Contains("lapin-621"), Error);
}

TEST_CASE("bench is deterministic apart from the clock") {
    RunConfig cfg = base_config("desk-33");
    BenchOptions opt;
    opt.log2n = 10;
    RunOutput out = run_bench(cfg, opt);
    std::vector<json> recs = records_of(out);
    REQUIRE(recs.size() == 6);

    const char* ops[] = {"ring-mul", "oracle-batch", "compress", "birthday-merge", "fwht-16"};
    const uint64_t items[] = {2000, 1024, 1024, 256, 65536};
    const uint64_t checksums[] = {6490332375u, 6235451489u, 98350u, 304u, 32619u};
    for (size_t i = 0; i < 5; i++) {
        const json& r = recs[i + 1];
        CHECK(r.at("record") == "bench");
        CHECK(r.at("op") == ops[i]);
        CHECK(r.at("items") == items[i]);
        CHECK(r.at("checksum") == checksums[i]);
        CHECK(r.contains("elapsed_ns"));
    }

    RunOutput again = run_bench(cfg, opt);
    CHECK(strip_field(out.records, "elapsed_ns") == strip_field(again.records, "elapsed_ns"));

    BenchOptions bad;
    bad.log2n = 30;
    CHECK_THROWS_WITH_AS(run_bench(cfg, bad), doctest::Contains("log2_n"), Error);
}

TEST_CASE("run_command round-trips the typed interfaces and rejects junk") {
    RunConfig cfg = base_config("desk-33");

    AnalyzeOptions aopt;
    aopt.factor = 1;
    CHECK(run_command(cfg, "analyze", "{\"factor\": 1}").records ==
          run_analyze(cfg, aopt).records);

    AttackOptions topt;
    topt.secret = "vector";
    CHECK(run_command(cfg, "attack", "{\"secret\": \"vector\"}").records ==
          run_attack(cfg, topt).records);

    RecoverOptions ropt;
    ropt.attack_factors = {1, 2};
    CHECK(run_command(cfg, "recover", "{\"attack_factors\": [1, 2]}").records ==
          run_recover(cfg, ropt).records);

    SimulateOptions sopt;
    sopt.runs = 50;
    CHECK(run_command(cfg, "simulate", "{\"runs\": 50}").records ==
          run_simulate(cfg, sopt).records);

    RunConfig prod = base_config("lapin-621");
    CHECK(run_command(prod, "tables", "").records == run_tables(prod).records);

    CHECK_THROWS_WITH_AS(run_command(cfg, "attack", "{\"bogus\": 1}"),
                         doctest::Contains("allowed: mode, factor"), Error);
    CHECK_THROWS_WITH_AS(run_command(cfg, "frobnicate", ""),
                         doctest::Contains("known: analyze, attack"), Error);
    CHECK_THROWS_WITH_AS(run_command(cfg, "analyze", "[]"),
                         doctest::Contains("JSON object"), Error);
    CHECK_THROWS_WITH_AS(run_command(cfg, "analyze", "{\"factor\": \"x\"}"),
                         doctest::Contains("must be an integer"), Error);
    CHECK_THROWS_WITH_AS(run_command(cfg, "simulate", "{\"runs\": -4}"),
                         doctest::Contains("nonnegative"), Error);
}

TEST_CASE("worker count changes nothing but the config echo") {
    RunConfig one = base_config("desk-33");
    RunConfig four = base_config("desk-33");
    four.threads = 4;

    AttackOptions opt;
    opt.secret = "vector";
    CHECK(tail_of(run_attack(one, opt)) == tail_of(run_attack(four, opt)));
    CHECK(tail_of(run_recover(one, RecoverOptions{})) ==
          tail_of(run_recover(four, RecoverOptions{})));
}
