#ifndef RLPN_RUNNERS_HPP
#define RLPN_RUNNERS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace rlpn {

// Shared run configuration. The first emitted record echoes all of it plus
// the per-command options, so a run is reproducible from its own output.
struct RunConfig {
    std::string ring = "lapin-621"; // preset name or ring-file path
    uint64_t seed = 1;
    int threads = 1;
    uint64_t memory_budget = uint64_t(1) << 30;
};

// JSON-lines text (one record per line). conclusive drops to false when an
// attack or recovery ran but could not commit to an answer.
struct RunOutput {
    std::string records;
    bool conclusive = true;
};

struct AnalyzeOptions {
    int factor = 0;       // 1-based; 0 = every factor
    std::string noise;    // "" = ring default
    int target_bits = 80; // security floor flag threshold
    int iterations = 100; // relation search effort
};
RunOutput run_analyze(const RunConfig& cfg, const AnalyzeOptions& opt);

struct AttackOptions {
    std::string mode;        // "improved", "generic", "decision"; "" = ring default
    int factor = 1;          // 1-based target factor
    int k = 0;               // 0 = ring default
    int log2n = 0;           // 0 = ring default
    std::string noise;       // "" = ring default
    std::string secret;      // "" = derived, "vector" = documented, else polynomial
    std::string oracle_mode; // "real" (default) or "uniform" (decision runs)
};
RunOutput run_attack(const RunConfig& cfg, const AttackOptions& opt);

struct RecoverOptions {
    std::vector<int> attack_factors;  // 1-based; empty = all but the last
    std::vector<int> reduced_factors; // 1-based; empty = the last factor
    int k = 0;                        // 0 = ring default, shared by attack stages
    int log2n = 0;                    // 0 = ring default
    std::string noise;                // "" = ring default
    std::string secret;               // as in AttackOptions
    uint64_t reduced_samples = 256;
    int verify_samples = 64;
};
RunOutput run_recover(const RunConfig& cfg, const RecoverOptions& opt);

struct SimulateOptions {
    uint64_t runs = 1000;
    std::string noise;     // tag error rate; "" = ring default
    std::string eta_prime; // verifier threshold, default "1/4"
    int lambda = 0;        // challenge bits; 0 = min(80, smallest factor degree - 1)
};
RunOutput run_simulate(const RunConfig& cfg, const SimulateOptions& opt);

// Reproduces the published degree-621 parameter table and the headline
// aggregate figures, with PASS/FAIL per tolerance. cfg.ring must name the
// lapin-621 preset.
RunOutput run_tables(const RunConfig& cfg);

struct BenchOptions {
    int log2n = 12; // sample-count scale for the pipeline timings
};
RunOutput run_bench(const RunConfig& cfg, const BenchOptions& opt);

// Dispatch by command name with options supplied as a JSON object; unknown
// command or malformed options throw invalid_argument/parse.
RunOutput run_command(const RunConfig& cfg, const std::string& command,
                      const std::string& options_json);

} // namespace rlpn

#endif
