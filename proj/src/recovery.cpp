#include "rlpn/recovery.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "rlpn/error.hpp"
#include "rlpn/parallel.hpp"

namespace rlpn {

namespace {

int dot_parity(const BitVec& a, const BitVec& b) {
    uint64_t acc = 0;
    size_t w = a.words() < b.words() ? a.words() : b.words();
    for (size_t i = 0; i < w; i++) acc ^= a.word(i) & b.word(i);
    return std::popcount(acc) & 1;
}

void check_partition(const PartialSecret& partial, const RingSpec& ring) {
    size_t m = ring.factor_count();
    std::vector<int> seen(m, 0);
    for (const auto& [i, s] : partial.known) {
        require(i < m, errc::invalid_argument, "recovery: known factor index out of range");
        require(s.degree() < ring.factor_degree(i), errc::invalid_argument,
                "recovery: known residue degree reaches its factor degree");
        seen[i]++;
    }
    for (size_t j : partial.unknown) {
        require(j < m, errc::invalid_argument, "recovery: unknown factor index out of range");
        seen[j]++;
    }
    for (size_t i = 0; i < m; i++)
        require(seen[i] == 1, errc::invalid_argument,
                "recovery: known and unknown must split the factor set exactly");
}

// Gauss-Jordan on the augmented system; unique solution or an error.
BitVec gauss_solve(const std::vector<LpnSample>& samples, int dims) {
    size_t n = samples.size();
    BitMatrix m(n, size_t(dims) + 1);
    for (size_t r = 0; r < n; r++) {
        for (int c = 0; c < dims; c++)
            if (samples[r].a.get(size_t(c))) m.set(r, size_t(c), true);
        if (samples[r].z) m.set(r, size_t(dims), true);
    }
    size_t rank = 0;
    std::vector<int> pivots;
    for (int col = 0; col < dims && rank < n; col++) {
        size_t sel = n;
        for (size_t i = rank; i < n; i++)
            if (m.get(i, size_t(col))) {
                sel = i;
                break;
            }
        if (sel == n) continue;
        if (sel != rank) {
            uint64_t* a = m.row_data(rank);
            uint64_t* b = m.row_data(sel);
            for (size_t i = 0; i < m.stride(); i++) std::swap(a[i], b[i]);
        }
        for (size_t i = 0; i < n; i++)
            if (i != rank && m.get(i, size_t(col))) m.row_xor(i, rank);
        pivots.push_back(col);
        rank++;
    }
    require(rank == size_t(dims), errc::rank_deficient,
            "solve_reduced: noiseless system underdetermined, " +
                std::to_string(size_t(dims) - rank) + " free variables");
    for (size_t i = rank; i < n; i++)
        require(m.row_weight(i) == 0, errc::infeasible,
                "solve_reduced: inconsistent noiseless system");
    BitVec out{size_t(dims)};
    for (size_t i = 0; i < rank; i++)
        if (m.get(i, size_t(dims))) out.set(size_t(pivots[i]), true);
    return out;
}

} // namespace

Gf2Poly strip_known(const RingLpnSample& sample, const PartialSecret& partial,
                    const RingSpec& ring) {
    require(!partial.known.empty(), errc::invalid_argument, "strip_known: no residues to strip");
    Gf2Poly acc;
    for (const auto& [i, s] : partial.known) {
        require(i < ring.factor_count(), errc::invalid_argument,
                "strip_known: factor index out of range");
        require(s.degree() < ring.factor_degree(i), errc::invalid_argument,
                "strip_known: residue degree reaches its factor degree");
        acc = acc + s * ring.idempotent(i);
    }
    return ring.mul_add(sample.r, acc.mod(ring.modulus()), sample.v);
}

std::vector<LpnSample> build_reduced_lpn(const RingLpnSample& sample, const PartialSecret& partial,
                                         const RingSpec& ring) {
    check_partition(partial, ring);
    require(!partial.unknown.empty(), errc::invalid_argument,
            "build_reduced_lpn: nothing unknown to model");
    int t = ring.degree();
    int dims = 0;
    for (size_t j : partial.unknown) dims += ring.factor_degree(j);
    Gf2Poly stripped =
        partial.known.empty() ? ring.reduce(sample.v) : strip_known(sample, partial, ring);
    std::vector<LpnSample> rows(size_t(t), LpnSample{});
    for (auto& row : rows) row.a = BitVec(size_t(dims));
    int offset = 0;
    for (size_t j : partial.unknown) {
        // column i is vec(r * t_j * x^i mod f); higher i are useless since
        // deg s_j < deg f_j
        Gf2Poly col = ring.mul(sample.r, ring.idempotent(j));
        int dj = ring.factor_degree(j);
        for (int i = 0; i < dj; i++) {
            if (i > 0) col.shift_reduce(ring.modulus());
            for (int p : col.support()) rows[size_t(p)].a.set(size_t(offset + i), true);
        }
        offset += dj;
    }
    for (int p = 0; p < t; p++) rows[size_t(p)].z = uint8_t(stripped.coeff(p));
    return rows;
}

BitVec solve_reduced(const std::vector<LpnSample>& samples, int dims, NoiseSpec noise,
                     int fwht_budget, int threads, uint64_t pair_cap, OpCounters* ops) {
    require(dims >= 1, errc::invalid_argument, "solve_reduced: dims must be positive");
    require(!samples.empty(), errc::invalid_argument, "solve_reduced: no samples");
    for (const auto& s : samples)
        require(int(s.a.size()) == dims, errc::invalid_argument,
                "solve_reduced: sample width does not match dims");
    noise.validate();
    if (noise.num == 0) return gauss_solve(samples, dims);
    require(fwht_budget >= 1 && fwht_budget <= 26, errc::invalid_argument,
            "solve_reduced: transform budget out of range");
    int k = dims - fwht_budget;
    if (k < 1) k = 1;
    require(k <= 12, errc::dimension_too_large,
            "solve_reduced: dims exceeds the transform budget by more than 12");
    OpCounters local;
    std::vector<LpnSample> merged = birthday_merge(samples, k, pair_cap, threads, &local);
    require(!merged.empty(), errc::infeasible, "solve_reduced: no colliding samples");
    AttackResult low = distinguish(merged, dims - k, threads, &local);
    // completion: score every assignment of the top k coordinates against
    // the raw samples, counted as one table fill per vote
    uint64_t options = uint64_t(1) << k;
    std::vector<int64_t> votes(size_t(options), 0);
    parallel_for(options, threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t v = lo; v < hi; v++) {
            BitVec cand{size_t(dims)};
            for (int i = 0; i + k < dims; i++)
                if (low.candidate.get(size_t(i))) cand.set(size_t(i), true);
            for (int i = 0; i < k; i++)
                if ((v >> i) & 1) cand.set(size_t(dims - k + i), true);
            int64_t score = 0;
            for (const auto& s : samples)
                score += (dot_parity(s.a, cand) == int(s.z)) ? 1 : -1;
            votes[size_t(v)] = score;
        }
    });
    local.transform += options * samples.size();
    uint64_t best = 0;
    for (uint64_t v = 1; v < options; v++)
        if (votes[size_t(v)] > votes[size_t(best)]) best = v;
    BitVec out{size_t(dims)};
    for (int i = 0; i + k < dims; i++)
        if (low.candidate.get(size_t(i))) out.set(size_t(i), true);
    for (int i = 0; i < k; i++)
        if ((best >> i) & 1) out.set(size_t(dims - k + i), true);
    if (ops) *ops += local;
    return out;
}

ResidueResult recover_residue(const std::vector<RingLpnSample>& raw, const AttackParams& params,
                              const CrtCode& code) {
    ResidueResult out;
    out.high = run_improved_samples(raw, params, code);
    int l = code.l, k = params.k;
    // completion: fold the recovered coefficients [k, l) out of the
    // relation-compressed samples, leaving a k-dim instance on the low
    // coefficients at single-sample bias
    OpCounters cops;
    std::vector<LpnSample> folded(raw.size());
    parallel_for(raw.size(), params.threads, [&](uint64_t lo, uint64_t hi) {
        for (uint64_t i = lo; i < hi; i++) {
            RingLpnSample red{raw[size_t(i)].r.mod(code.f1), raw[size_t(i)].v.mod(code.f1)};
            LpnSample s = compress_sample(red, params.relation, code);
            uint8_t z = s.z;
            for (int q = 0; q + k < l; q++)
                if (out.high.candidate.get(size_t(q)) && s.a.get(size_t(k + q))) z ^= 1;
            LpnSample fold;
            fold.a = BitVec(size_t(k));
            for (int b = 0; b < k; b++)
                if (s.a.get(size_t(b))) fold.a.set(size_t(b), true);
            fold.z = z;
            folded[size_t(i)] = std::move(fold);
        }
    });
    cops.compress += uint64_t(raw.size()) * uint64_t(l) * uint64_t(2 * l + 1);
    out.low = distinguish(folded, k, params.threads, &cops);
    out.low.ops = cops;
    int64_t margin = out.low.score - out.low.second_score;
    bool low_ok = margin >= int64_t(std::sqrt(double(raw.size())));
    out.conclusive = !out.high.inconclusive && low_ok;
    BitVec bits{size_t(l)};
    for (int b = 0; b < k; b++)
        if (out.low.candidate.get(size_t(b))) bits.set(size_t(b), true);
    for (int q = 0; k + q < l; q++)
        if (out.high.candidate.get(size_t(q))) bits.set(size_t(k + q), true);
    out.residue = Gf2Poly::from_bits(bits);
    return out;
}

RecoverResult full_recover(Oracle& oracle, const RecoverPlan& plan) {
    const RingSpec& ring = oracle.ring();
    size_t m = ring.factor_count();
    require(plan.threads >= 1, errc::invalid_argument, "full_recover: threads must be positive");
    require(plan.verify_samples >= 1, errc::invalid_argument,
            "full_recover: need fresh samples to verify with");
    std::vector<int> seen(m, 0);
    for (size_t j : plan.attack_factors) {
        require(j < m, errc::invalid_argument, "full_recover: factor index out of range");
        seen[j]++;
    }
    for (size_t j : plan.reduced_factors) {
        require(j < m, errc::invalid_argument, "full_recover: factor index out of range");
        seen[j]++;
    }
    for (size_t i = 0; i < m; i++)
        require(seen[i] == 1, errc::invalid_argument,
                "full_recover: schedule must cover every factor exactly once");
    for (size_t j : plan.attack_factors)
        require(plan.params.count(j) == 1, errc::invalid_argument,
                "full_recover: missing attack parameters for factor " + std::to_string(j));
    if (!plan.reduced_factors.empty())
        require(plan.reduced_samples >= 1, errc::invalid_argument,
                "full_recover: reduced stage needs samples");

    RecoverResult out;
    PartialSecret partial;
    partial.unknown = plan.reduced_factors;
    for (size_t j : plan.attack_factors) {
        CrtCode code = build_generator(ring.factor(j), ring.degree());
        AttackParams p = plan.params.at(j);
        p.threads = plan.threads;
        if (p.relation.m.size() == 0) p.relation = last_row_relation(code);
        StageReport rep;
        rep.factors = {j};
        try {
            std::vector<RingLpnSample> raw = oracle.batch(p.n_samples, plan.threads);
            ResidueResult rr = recover_residue(raw, p, code);
            out.residues[j] = rr.residue;
            partial.known[j] = rr.residue;
            rep.conclusive = rr.conclusive;
            rep.score = rr.high.score;
            rep.samples_used = rr.high.samples_used;
            rep.ops = rr.high.ops;
            rep.ops += rr.low.ops;
            if (!rr.conclusive)
                out.diagnostics.push_back("factor " + std::to_string(j) +
                                          ": attack stage margin too small");
        } catch (const Error& e) {
            rep.conclusive = false;
            out.diagnostics.push_back("factor " + std::to_string(j) + ": " + e.what());
        }
        out.stages.push_back(std::move(rep));
    }
    if (!plan.reduced_factors.empty()) {
        StageReport rep;
        rep.factors = plan.reduced_factors;
        rep.via_reduced = true;
        int dims = 0;
        for (size_t j : plan.reduced_factors) dims += ring.factor_degree(j);
        try {
            int t = ring.degree();
            std::vector<RingLpnSample> raw = oracle.batch(plan.reduced_samples, plan.threads);
            std::vector<LpnSample> rows(raw.size() * size_t(t));
            // first sample built sequentially: validates the partition once
            // before any worker can hit the same error
            {
                std::vector<LpnSample> first = build_reduced_lpn(raw[0], partial, ring);
                std::move(first.begin(), first.end(), rows.begin());
            }
            parallel_for(raw.size() - 1, plan.threads, [&](uint64_t lo, uint64_t hi) {
                for (uint64_t i = lo; i < hi; i++) {
                    std::vector<LpnSample> rs = build_reduced_lpn(raw[size_t(i + 1)], partial, ring);
                    std::move(rs.begin(), rs.end(),
                              rows.begin() + ptrdiff_t((i + 1) * uint64_t(t)));
                }
            });
            OpCounters rops;
            // build cost: t coefficient rows times dims columns per sample
            rops.compress += raw.size() * uint64_t(t) * uint64_t(dims);
            BitVec sol = solve_reduced(rows, dims, oracle.noise(), plan.fwht_budget, plan.threads,
                                       plan.reduced_pair_cap, &rops);
            int off = 0;
            for (size_t j : plan.reduced_factors) {
                int dj = ring.factor_degree(j);
                BitVec bits{size_t(dj)};
                for (int i = 0; i < dj; i++)
                    if (sol.get(size_t(off + i))) bits.set(size_t(i), true);
                out.residues[j] = Gf2Poly::from_bits(bits);
                off += dj;
            }
            rep.samples_used = rows.size();
            rep.ops = rops;
        } catch (const Error& e) {
            rep.conclusive = false;
            out.diagnostics.push_back("reduced stage: " + std::string(e.what()));
        }
        out.stages.push_back(std::move(rep));
    }
    for (const auto& st : out.stages) out.total_ops += st.ops;
    out.complete = out.residues.size() == m;
    for (const auto& st : out.stages)
        if (!st.conclusive) out.complete = false;

    NoiseSpec noise = oracle.noise();
    out.accept_rate = 0.25 + 0.5 * noise.eta();
    if (out.residues.size() == m) {
        std::vector<Gf2Poly> res;
        res.reserve(m);
        for (size_t i = 0; i < m; i++) res.push_back(out.residues.at(i));
        out.secret = ring.crt_lift(res);
        std::vector<RingLpnSample> fresh =
            oracle.batch(uint64_t(plan.verify_samples), plan.threads);
        uint64_t total = 0;
        for (const auto& s : fresh) total += (s.v + ring.mul(s.r, out.secret)).weight();
        uint64_t t = uint64_t(ring.degree());
        out.residual_rate = double(total) / double(uint64_t(fresh.size()) * t);
        // mean weight < t * (eta + (1/2 - eta)/2), in exact integers
        out.verified =
            4 * noise.den * total < t * uint64_t(fresh.size()) * (noise.den + 2 * noise.num);
    }
    return out;
}

} // namespace rlpn
