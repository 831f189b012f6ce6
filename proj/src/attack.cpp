#include "rlpn/attack.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "rlpn/error.hpp"
#include "rlpn/parallel.hpp"

namespace rlpn {

LpnSample compress_sample(const RingLpnSample& sample, const Relation& relation,
                          const CrtCode& code) {
    size_t l = size_t(code.l);
    require(relation.m.size() == l, errc::invalid_argument,
            "compress: relation length does not match the code dimension");
    require(sample.r.degree() < code.l && sample.v.degree() < code.l, errc::invalid_argument,
            "compress: sample is not reduced to the small ring");
    LpnSample out;
    out.a = BitVec(l);
    // column p of tau(r) is vec(r * x^p mod f1); walk p and dot with m
    Gf2Poly g = sample.r;
    for (size_t p = 0; p < l; p++) {
        uint64_t acc = 0;
        const auto& gw = g.raw_words();
        for (size_t i = 0; i < gw.size(); i++) acc ^= gw[i] & relation.m.word(i);
        if (std::popcount(acc) & 1) out.a.set(p, true);
        g.shift_reduce(code.f1);
    }
    uint64_t acc = 0;
    const auto& vw = sample.v.raw_words();
    for (size_t i = 0; i < vw.size(); i++) acc ^= vw[i] & relation.m.word(i);
    out.z = uint8_t(std::popcount(acc) & 1);
    return out;
}

std::vector<LpnSample> birthday_merge(const std::vector<LpnSample>& samples, int k,
                                      uint64_t pair_cap, int threads, OpCounters* ops) {
    require(k >= 1 && k <= 63, errc::invalid_argument, "merge: k must be in [1, 63]");
    require(pair_cap >= 1, errc::invalid_argument, "merge: pair cap must be positive");
    if (samples.empty()) return {};
    size_t alen = samples[0].a.size();
    require(size_t(k) < alen, errc::invalid_argument, "merge: k must be below the vector length");
    for (const LpnSample& s : samples)
        require(s.a.size() == alen, errc::invalid_argument, "merge: mixed vector lengths");

    // group indices by the top-k key, ascending
    std::vector<std::pair<uint64_t, uint32_t>> keyed(samples.size());
    for (size_t i = 0; i < samples.size(); i++)
        keyed[i] = {samples[i].a.extract(alen - size_t(k), size_t(k)), uint32_t(i)};
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    // bucket boundaries and capped pair counts
    struct Bucket {
        size_t begin, end;
        uint64_t pairs, offset;
    };
    std::vector<Bucket> buckets;
    uint64_t total_pairs = 0;
    size_t i = 0;
    while (i < keyed.size()) {
        size_t j = i;
        while (j < keyed.size() && keyed[j].first == keyed[i].first) j++;
        uint64_t n = j - i;
        uint64_t pairs = n * (n - 1) / 2;
        if (pairs > pair_cap) pairs = pair_cap;
        if (pairs) buckets.push_back({i, j, pairs, total_pairs});
        total_pairs += pairs;
        i = j;
    }

    size_t out_len = alen - size_t(k);
    std::vector<LpnSample> out{size_t(total_pairs), LpnSample{}};
    parallel_for(buckets.size(), threads, [&](uint64_t blo, uint64_t bhi) {
        for (uint64_t b = blo; b < bhi; b++) {
            const Bucket& bk = buckets[size_t(b)];
            uint64_t emitted = 0;
            for (size_t x = bk.begin; x < bk.end && emitted < bk.pairs; x++) {
                for (size_t y = x + 1; y < bk.end && emitted < bk.pairs; y++) {
                    const LpnSample& sx = samples[keyed[x].second];
                    const LpnSample& sy = samples[keyed[y].second];
                    LpnSample m;
                    m.a = sx.a;
                    m.a.xor_with(sy.a);
                    m.a.truncate(out_len);
                    m.z = sx.z ^ sy.z;
                    out[size_t(bk.offset + emitted)] = std::move(m);
                    emitted++;
                }
            }
        }
    });
    if (ops) ops->merge += uint64_t(alen) * samples.size() + 2 * uint64_t(alen) * total_pairs;
    return out;
}

void fwht(std::vector<int64_t>& table) {
    size_t n = table.size();
    require(n >= 1 && (n & (n - 1)) == 0, errc::invalid_argument,
            "fwht: length must be a power of two");
    for (size_t h = 1; h < n; h <<= 1) {
        for (size_t base = 0; base < n; base += h << 1) {
            for (size_t idx = base; idx < base + h; idx++) {
                int64_t x = table[idx], y = table[idx + h];
                table[idx] = x + y;
                table[idx + h] = x - y;
            }
        }
    }
}

AttackResult distinguish(const std::vector<LpnSample>& samples, int dims, int threads,
                         OpCounters* ops) {
    require(!samples.empty(), errc::invalid_argument, "distinguish: no samples");
    require(dims >= 0, errc::invalid_argument, "distinguish: negative dimension");
    require(dims <= 26, errc::dimension_too_large,
            "distinguish: table of 2^dims counters exceeds the memory budget");
    size_t size = size_t(1) << dims;

    // sequential guard pass: every vector must fit in the table dimension
    // (throwing inside a worker thread would terminate)
    for (const LpnSample& s : samples) {
        uint64_t idx = s.a.extract(0, size_t(dims) < s.a.size() ? size_t(dims) : s.a.size());
        require(s.a.popcount() == size_t(std::popcount(idx)), errc::invalid_argument,
                "distinguish: sample has bits beyond the table dimension");
    }
    // per-chunk histograms, merged in fixed order
    int nw = threads < 1 ? 1 : threads;
    if (dims > 20) nw = 1; // one table is already hundreds of MB
    uint64_t chunks = chunk_count(samples.size(), nw);
    std::vector<std::vector<int64_t>> tables(size_t(chunks), std::vector<int64_t>(size, 0));
    parallel_for_indexed(samples.size(), nw, [&](uint64_t widx, uint64_t lo, uint64_t hi) {
        std::vector<int64_t>& t = tables[size_t(widx)];
        for (uint64_t si = lo; si < hi; si++) {
            const LpnSample& s = samples[size_t(si)];
            uint64_t idx = s.a.extract(0, size_t(dims) < s.a.size() ? size_t(dims) : s.a.size());
            t[size_t(idx)] += s.z ? -1 : 1;
        }
    });
    std::vector<int64_t> f = std::move(tables[0]);
    for (size_t w = 1; w < size_t(chunks); w++)
        for (size_t c = 0; c < size; c++) f[c] += tables[w][c];

    fwht(f);

    int64_t best = -1, second = -1;
    size_t best_idx = 0, second_idx = 0;
    for (size_t c = 0; c < size; c++) {
        int64_t v = f[c] < 0 ? -f[c] : f[c];
        if (v > best) {
            second = best;
            second_idx = best_idx;
            best = v;
            best_idx = c;
        } else if (v > second) {
            second = v;
            second_idx = c;
        }
    }
    AttackResult res;
    res.candidate = BitVec(size_t(dims));
    res.second_candidate = BitVec(size_t(dims));
    for (int q = 0; q < dims; q++) {
        if ((best_idx >> q) & 1) res.candidate.set(size_t(q), true);
        if ((second_idx >> q) & 1) res.second_candidate.set(size_t(q), true);
    }
    res.score = best;
    res.second_score = second < 0 ? 0 : second;
    res.samples_used = samples.size();
    if (ops) {
        ops->transform += samples.size() + uint64_t(dims) * size;
        res.ops = *ops;
    }
    return res;
}

std::vector<std::string> param_warnings(const AttackParams& params, int l) {
    std::vector<std::string> out;
    int d = params.relation.weight;
    mpz_class n2 = mpz_class(params.n_samples) * mpz_class(params.n_samples);
    // N^2 * eps_num^(4d) >= 2^k * eps_den^(4d), all exact
    mpz_class eps_num = params.noise.eps_num(), eps_den = params.noise.eps_den();
    mpz_class lhs, num_pow, den_pow;
    mpz_pow_ui(num_pow.get_mpz_t(), eps_num.get_mpz_t(), 4 * unsigned(d));
    mpz_pow_ui(den_pow.get_mpz_t(), eps_den.get_mpz_t(), 4 * unsigned(d));
    lhs = n2 * num_pow;
    mpz_class rhs = den_pow << unsigned(params.k);
    if (lhs < rhs)
        out.push_back("sample count below the theorem bound: N^2/2^k < (1/eps)^(4w)");
    // l - k >= log2(N^2/2^k)  <=>  2^l >= N^2
    mpz_class cap = mpz_class(1) << unsigned(l);
    if (cap < n2)
        out.push_back("transform table smaller than the merged sample count: "
                      "l-k < log2(N^2/2^k)");
    return out;
}

double piling_up(double epsilon, int n) {
    require(epsilon >= 0.0 && epsilon <= 1.0, errc::invalid_argument,
            "piling_up: bias must be in [0, 1]");
    require(n >= 0, errc::invalid_argument, "piling_up: negative count");
    return std::pow(epsilon, n);
}

bool matches_secret(const AttackResult& result, const Gf2Poly& secret_mod_f1) {
    for (size_t q = 0; q < result.candidate.size(); q++)
        if (result.candidate.get(q) != secret_mod_f1.coeff(result.secret_offset + int(q)))
            return false;
    return true;
}

namespace {

// Holdout recount: both finalists rescored on withheld samples; the winner
// must lead by at least one null-sigma (sqrt of the holdout size).
void validate_result(AttackResult& res, const std::vector<LpnSample>& holdout, int dims) {
    res.holdout_count = holdout.size();
    if (holdout.empty() || dims == 0) return;
    int64_t top = 0, second = 0;
    for (const LpnSample& s : holdout) {
        uint64_t idx = s.a.extract(0, size_t(dims) < s.a.size() ? size_t(dims) : s.a.size());
        uint64_t ct = 0, cs = 0;
        for (int q = 0; q < dims; q++) {
            if (res.candidate.get(size_t(q)) && ((idx >> q) & 1)) ct ^= 1;
            if (res.second_candidate.get(size_t(q)) && ((idx >> q) & 1)) cs ^= 1;
        }
        top += (uint8_t(ct) ^ s.z) ? -1 : 1;
        second += (uint8_t(cs) ^ s.z) ? -1 : 1;
    }
    if (top < 0) top = -top;
    if (second < 0) second = -second;
    res.holdout_margin = top - second;
    int64_t sigma = int64_t(std::sqrt(double(holdout.size())));
    if (res.holdout_margin < sigma) res.inconclusive = true;
}

AttackResult finish_attack(std::vector<LpnSample>&& merged, int dims, int offset,
                           const AttackParams& params, uint64_t queries, OpCounters ops) {
    require(!merged.empty(), errc::infeasible,
            "attack: no colliding samples; raise N or lower k");
    std::vector<LpnSample> main_set, holdout;
    if (params.validate && params.holdout_every > 1) {
        size_t he = size_t(params.holdout_every);
        main_set.reserve(merged.size() - merged.size() / he);
        holdout.reserve(merged.size() / he);
        for (size_t i = 0; i < merged.size(); i++)
            (((i + 1) % he == 0) ? holdout : main_set).push_back(std::move(merged[i]));
    } else {
        main_set = std::move(merged);
    }
    require(!main_set.empty(), errc::infeasible, "attack: every merged sample was held out");
    AttackResult res = distinguish(main_set, dims, params.threads, &ops);
    res.secret_offset = offset;
    res.queries = queries;
    validate_result(res, holdout, dims);
    res.ops = ops;
    return res;
}

int second_highest_exponent(const Gf2Poly& f) {
    std::vector<int> sup = f.support();
    return sup.size() >= 2 ? sup[sup.size() - 2] : 0;
}

} // namespace

AttackResult run_generic_samples(const std::vector<RingLpnSample>& raw,
                                 const AttackParams& params, const CrtCode& code) {
    int l = code.l, k = params.k;
    require(k >= 1 && k < l, errc::invalid_argument, "attack: k must be in [1, l)");
    require(raw.size() >= 2, errc::invalid_argument, "attack: need at least two samples");
    // checked here so compress_sample cannot throw inside a worker
    require(params.relation.m.size() == size_t(l), errc::invalid_argument,
            "attack: relation length does not match the code dimension");
    OpCounters ops;
    std::vector<LpnSample> lpn(raw.size());
    parallel_for(raw.size(), params.threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t i = lo; i < hi; i++) {
            RingLpnSample red;
            red.r = raw[size_t(i)].r.mod(code.f1);
            red.v = raw[size_t(i)].v.mod(code.f1);
            lpn[size_t(i)] = compress_sample(red, params.relation, code);
        }
    });
    ops.compress += uint64_t(raw.size()) * uint64_t(l) * uint64_t(2 * l + 1);
    std::vector<LpnSample> merged =
        birthday_merge(lpn, k, params.bucket_pair_cap, params.threads, &ops);
    return finish_attack(std::move(merged), l - k, 0, params, raw.size(), ops);
}

AttackResult run_generic(Oracle& oracle, const AttackParams& params, const CrtCode& code) {
    require(params.n_samples >= 2, errc::invalid_argument, "attack: need at least two samples");
    return run_generic_samples(oracle.batch(params.n_samples, params.threads), params, code);
}

AttackResult run_improved_samples(const std::vector<RingLpnSample>& raw,
                                  const AttackParams& params, const CrtCode& code) {
    int l = code.l, k = params.k;
    require(k >= 11, errc::invalid_argument,
            "improved attack: k must exceed 10 for the merged-row shortcut");
    int e2 = second_highest_exponent(code.f1);
    require(k >= e2, errc::invalid_argument,
            "improved attack: k below the second-highest exponent of f1, so reduction "
            "terms could reach coefficient l-1");
    require(k < l, errc::invalid_argument, "improved attack: k must be below deg f1");
    require(params.relation.m.size() == size_t(l) && params.relation.m.popcount() == 1 &&
                params.relation.m.get(size_t(l - 1)),
            errc::invalid_argument, "improved attack: relation must be the last generator row");
    require(raw.size() >= 2, errc::invalid_argument, "attack: need at least two samples");
    int dims = l - k;
    OpCounters ops;
    // no tau matrices: the collision vector is vec(r mod f1) itself and the
    // observed bit is coefficient l-1 of v mod f1
    std::vector<LpnSample> pre(raw.size());
    parallel_for(raw.size(), params.threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t i = lo; i < hi; i++) {
            Gf2Poly rhat = raw[size_t(i)].r.mod(code.f1);
            Gf2Poly vhat = raw[size_t(i)].v.mod(code.f1);
            pre[size_t(i)].a = rhat.to_bits(size_t(l));
            pre[size_t(i)].z = uint8_t(vhat.coeff(l - 1));
        }
    });
    std::vector<LpnSample> merged =
        birthday_merge(pre, k, params.bucket_pair_cap, params.threads, &ops);
    // last tau row of the merged polynomial (degree < l-k) reversed into LPN
    // layout: vector bit q pairs with secret coefficient k+q
    parallel_for(merged.size(), params.threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t i = lo; i < hi; i++) {
            BitVec& a = merged[size_t(i)].a;
            BitVec rev{size_t(dims)};
            for (int q = 0; q < dims; q++)
                if (a.get(size_t(dims - 1 - q))) rev.set(size_t(q), true);
            a = std::move(rev);
        }
    });
    return finish_attack(std::move(merged), dims, k, params, raw.size(), ops);
}

AttackResult run_improved(Oracle& oracle, const AttackParams& params, const CrtCode& code) {
    require(params.n_samples >= 2, errc::invalid_argument, "attack: need at least two samples");
    return run_improved_samples(oracle.batch(params.n_samples, params.threads), params, code);
}

DecisionResult decision_test(Oracle& oracle, const AttackParams& params, const CrtCode& code) {
    DecisionResult dec;
    dec.detail = run_improved(oracle, params, code);
    double m = double(dec.detail.samples_used);
    int dims = code.l - params.k;
    dec.expected_peak = m * std::pow(params.noise.epsilon(), 2 * params.relation.weight);
    dec.null_quantile = std::sqrt(2.0 * m * double(dims) * std::log(2.0));
    dec.threshold = 0.5 * (dec.expected_peak + dec.null_quantile);
    dec.score = dec.detail.score;
    dec.real = double(dec.score) > dec.threshold;
    return dec;
}

} // namespace rlpn
