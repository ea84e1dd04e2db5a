#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "zeic/bounds.hpp"
#include "zeic/bpis.hpp"
#include "zeic/channel.hpp"
#include "zeic/coding.hpp"
#include "zeic/csv.hpp"
#include "zeic/errors.hpp"
#include "zeic/packing.hpp"
#include "zeic/uniform.hpp"

namespace zeic {

// Experiment runners shared by the CLI and the test suites. Every runner is
// a pure function of its config: trial t uses seed master + t, and inner
// sampling streams derive from the trial seed, so identical configs produce
// byte-identical output.

// --- high-probability BPIS bound sweep ---------------------------------------

struct Prop5Config {
    int q_bits = 3;
    double eps = 0.25;
    int trials = 200;
    std::uint64_t seed = 1;
};

struct Prop5Summary {
    int trials = 0;
    int satisfied = 0;
    double rate = 0.0;
};

inline Prop5Summary run_prop5_sweep(const Prop5Config& cfg, std::ostream& os) {
    if (cfg.trials < 1) throw std::invalid_argument("prop5-sweep: trials must be >= 1");
    if (!(cfg.eps > 0.0 && cfg.eps <= 1.0))
        throw std::invalid_argument("prop5-sweep: eps must lie in (0, 1]");
    const int q_size = 1 << cfg.q_bits;
    write_csv_header(os, "prop5-sweep",
                     {{"q", std::to_string(cfg.q_bits)},
                      {"eps", fmt_real(cfg.eps)},
                      {"trials", std::to_string(cfg.trials)},
                      {"seed", std::to_string(cfg.seed)}});
    write_csv_row(os, {"seed", "q", "eps", "erased_count", "bpis_size", "log_rate", "bound",
                       "satisfied"});
    Prop5Summary sum;
    sum.trials = cfg.trials;
    for (int t = 0; t < cfg.trials; ++t) {
        const Prop5Trial r = prop5_trial(q_size, cfg.eps, cfg.seed + static_cast<std::uint64_t>(t));
        sum.satisfied += r.satisfied ? 1 : 0;
        write_csv_row(os, {std::to_string(r.seed), fmt_real(r.q), fmt_real(r.eps),
                           std::to_string(r.erased_count), std::to_string(r.bpis_size),
                           fmt_real(r.log_rate), fmt_real(r.bound), r.satisfied ? "1" : "0"});
    }
    sum.rate = static_cast<double>(sum.satisfied) / sum.trials;
    os << "# satisfaction_rate " << fmt_real(sum.rate) << "\n";
    return sum;
}

// --- exhaustive small-channel campaign ---------------------------------------

struct ExactCampaignConfig {
    int q_size = 2;
    int n = 1;
    std::uint64_t budget_words = 16;
};

struct ExactCampaignSummary {
    int channels = 0;
    bool all_consistent = true;
};

// One row per erasure/identity channel on [Q]^2 (identified by the erasure
// bitmask, bit x*Q+y): the exact zero-error sum rate, the direct max BPIS,
// the displayed BPIS floor at that rate, and their mutual consistency (the
// floor holds whenever positive, and the BPIS witness decodes with zero
// error).
inline ExactCampaignSummary run_exact_campaign(const ExactCampaignConfig& cfg, std::ostream& os) {
    const int entries = cfg.q_size * cfg.q_size;
    if (entries > 16)
        throw BudgetError("exact campaign: 2^(Q^2) channel enumeration too large");
    word_count(cfg.q_size, cfg.n); // overflow check
    write_csv_header(os, "exact",
                     {{"n", std::to_string(cfg.n)}, {"q_size", std::to_string(cfg.q_size)}});
    write_csv_row(os, {"channel_id", "q_size", "n", "erased_count", "exact_sum", "witness_a",
                       "witness_b", "bpis_size", "prop4_floor", "consistent"});
    ExactCampaignSummary sum;
    const double q_bits = std::log2(static_cast<double>(cfg.q_size));
    for (std::uint32_t mask = 0; mask < (1u << entries); ++mask) {
        std::vector<ChannelOutput> table;
        for (Symbol x = 0; x < cfg.q_size; ++x)
            for (Symbol y = 0; y < cfg.q_size; ++y) {
                const int bit = x * cfg.q_size + y;
                table.push_back((mask >> bit) & 1u ? ChannelOutput::erasure()
                                                   : ChannelOutput::pair(x, y));
            }
        const Channel w(cfg.q_size, cfg.q_size, std::move(table));
        const ExactRateResult exact = exact_zero_error_sum_rate(w, cfg.n, cfg.budget_words);
        const DirectBpis bpis = max_bpis_direct(w, cfg.n, cfg.budget_words);
        const double floor = prop4_min_bpis_size(exact.rate.sum, cfg.n, q_bits);
        bool consistent = true;
        if (floor > 0.0 && static_cast<double>(bpis.size) + 1e-9 < floor) consistent = false;
        if (bpis.size > 0 && !is_zero_error(w, bpis.pair)) consistent = false;
        if (!is_zero_error(w, exact.witness)) consistent = false;
        sum.all_consistent = sum.all_consistent && consistent;
        ++sum.channels;
        write_csv_row(os, {std::to_string(mask), std::to_string(cfg.q_size),
                           std::to_string(cfg.n), std::to_string(w.erased_count()),
                           fmt_real(exact.rate.sum), std::to_string(exact.witness.a.size()),
                           std::to_string(exact.witness.b.size()), std::to_string(bpis.size),
                           fmt_real(floor), consistent ? "1" : "0"});
    }
    return sum;
}

// --- finite-blocklength upper-bound sweep ------------------------------------

struct Theorem3SweepConfig {
    int n = 2;
    double eps = 0.25;
    int q_min = 4;
    int q_max = 12;
    std::vector<double> gammas = {0.25, 0.5, 1.0, 2.0};
};

inline int run_theorem3_sweep(const Theorem3SweepConfig& cfg, std::ostream& os) {
    std::string glist;
    for (std::size_t i = 0; i < cfg.gammas.size(); ++i)
        glist += (i ? ";" : "") + fmt_real(cfg.gammas[i]);
    write_csv_header(os, "theorem3-sweep",
                     {{"eps", fmt_real(cfg.eps)},
                      {"gammas", glist},
                      {"n", std::to_string(cfg.n)},
                      {"q_max", std::to_string(cfg.q_max)},
                      {"q_min", std::to_string(cfg.q_min)}});
    write_csv_row(os, {"q", "n", "gamma", "eps", "value", "hypotheses_ok", "violated"});
    int rows = 0;
    for (int q = cfg.q_min; q <= cfg.q_max; ++q)
        for (double gamma : cfg.gammas) {
            const BoundReport r = theorem3_rhs(static_cast<double>(q), cfg.n, gamma, cfg.eps);
            std::string violated;
            for (std::size_t i = 0; i < r.violated.size(); ++i)
                violated += (i ? "; " : "") + r.violated[i];
            write_csv_row(os, {std::to_string(q), std::to_string(cfg.n), fmt_real(gamma),
                               fmt_real(cfg.eps), fmt_real(r.value), r.hypotheses_ok ? "1" : "0",
                               violated});
            ++rows;
        }
    return rows;
}

// --- end-to-end packing pipeline ---------------------------------------------

struct PipelineConfig {
    int q_bits = 2;
    int n = 64;
    double eps = 0.05;
    double gamma = 1.0;
    double slack = 0.01;
    int trials = 20;
    std::uint64_t seed = 1;
    std::uint64_t sample_cap = 256;
    std::optional<double> d_override;
    int max_attempts = 100000;
};

struct PipelineSummary {
    int trials = 0;
    int ok = 0;
};

// Per trial: rejection-sample a channel until it deviates from the identity
// on at most a 2 eps fraction of entries (the conditioning event of the
// construction; attempts are logged), build the family pair (binary
// construction when Q = 2, staircase construction otherwise), pack, verify.
// The achieved rates sit next to the formula rate computed from the family
// sizes. Returns the number of zero-error verdicts.
inline PipelineSummary run_pipeline(
    const PipelineConfig& cfg, std::ostream& os,
    const std::function<void(int, const PackedCode&, const Channel&)>& sink = nullptr) {
    if (cfg.trials < 1) throw std::invalid_argument("pipeline: trials must be >= 1");
    if (!(cfg.eps >= 0.0 && cfg.eps <= 0.5))
        throw std::invalid_argument("pipeline: eps must lie in [0, 0.5]");
    const int q_size = 1 << cfg.q_bits;

    ConstructedPair families;
    if (q_size == 2)
        families = construct_lemma10(cfg.n, cfg.gamma);
    else
        families = construct_lemma11(q_size, cfg.n, cfg.gamma);

    const double q = static_cast<double>(cfg.q_bits);
    const double delta1 = 1.0 - families.a->log2_cardinality() / (cfg.n * q);
    const double delta2 = 1.0 - families.b->log2_cardinality() / (cfg.n * q);

    write_csv_header(os, "pipeline",
                     {{"eps", fmt_real(cfg.eps)},
                      {"gamma", fmt_real(cfg.gamma)},
                      {"n", std::to_string(cfg.n)},
                      {"q", std::to_string(cfg.q_bits)},
                      {"sample_cap", std::to_string(cfg.sample_cap)},
                      {"seed", std::to_string(cfg.seed)},
                      {"slack", fmt_real(cfg.slack)},
                      {"trials", std::to_string(cfg.trials)},
                      {"d_override",
                       cfg.d_override ? fmt_real(*cfg.d_override) : std::string("none")}});
    write_csv_row(os, {"trial", "seed", "attempts", "erased_count", "erased_fraction", "d",
                       "threshold", "drawn_a", "drawn_b", "packed_a", "packed_b", "rate_a",
                       "rate_b", "achieved_sum", "theorem_sum", "ok"});

    PipelineSummary sum;
    sum.trials = cfg.trials;
    const cpp_rational max_fraction = 2 * cpp_rational(cfg.eps);
    for (int t = 0; t < cfg.trials; ++t) {
        const std::uint64_t trial_seed = cfg.seed + static_cast<std::uint64_t>(t);
        int attempts = 0;
        std::optional<Channel> w;
        for (int k = 0; k < cfg.max_attempts; ++k) {
            ++attempts;
            Channel cand = sample_erasure_identity(q_size, cfg.eps, derive_seed(trial_seed, 2 + k));
            if (erased_fraction(cand) <= max_fraction) {
                w = std::move(cand);
                break;
            }
        }
        if (!w)
            throw ConstructionError("pipeline: rejection sampling exhausted max_attempts");

        const PackedCode code =
            build_zero_error_code(*families.a, *families.b, cfg.gamma, cfg.eps, cfg.slack,
                                  cfg.sample_cap, trial_seed, cfg.d_override);
        const VerifyVerdict verdict = verify_zero_error_against(code, *w);

        bool distances_ok = true;
        for (const auto& side : {code.a, code.b})
            for (std::size_t i = 0; i < side.size() && distances_ok; ++i)
                for (std::size_t j = i + 1; j < side.size() && distances_ok; ++j)
                    if (hamming_distance(side[i], side[j]) <= code.distance_threshold)
                        distances_ok = false;

        const bool ok = verdict.ok && distances_ok;
        sum.ok += ok ? 1 : 0;
        const double theorem_sum = theorem7_rate(q, delta1, delta2, code.d);
        write_csv_row(
            os, {std::to_string(t), std::to_string(trial_seed), std::to_string(attempts),
                 std::to_string(w->erased_count()),
                 fmt_real(static_cast<double>(w->erased_count()) / (q_size * q_size)),
                 fmt_real(code.d), std::to_string(code.distance_threshold),
                 std::to_string(code.drawn_a), std::to_string(code.drawn_b),
                 std::to_string(code.a.size()), std::to_string(code.b.size()),
                 fmt_real(code.rate_a()), fmt_real(code.rate_b()), fmt_real(code.sum_rate()),
                 fmt_real(theorem_sum), ok ? "1" : "0"});
        if (sink) sink(t, code, *w);
    }
    os << "# ok " << sum.ok << "/" << sum.trials << "\n";
    return sum;
}

// --- gamma-uniform construction report ----------------------------------------

struct UniformConstructConfig {
    int q_size = 2;
    int n = 8;
    double gamma = 1.0;
    std::uint64_t audit = 0; // 0: skip the audit row fields
    std::uint64_t seed = 1;
};

struct UniformConstructResult {
    ConstructedPair pair;
    double log2_a = 0.0;
    double log2_b = 0.0;
    double log2_bound = 0.0;
    std::string verdict = "skipped";
};

inline UniformConstructResult run_uniform_construct(const UniformConstructConfig& cfg,
                                                    std::ostream& os) {
    UniformConstructResult res;
    if (cfg.q_size == 2) {
        res.pair = construct_lemma10(cfg.n, cfg.gamma);
        res.log2_bound = lemma10_lower_bound_log2(cfg.n, cfg.gamma);
    } else {
        res.pair = construct_lemma11(cfg.q_size, cfg.n, cfg.gamma);
        res.log2_bound = lemma11_lower_bound_log2(cfg.q_size, cfg.n, cfg.gamma);
    }
    res.log2_a = res.pair.a->log2_cardinality();
    res.log2_b = res.pair.b->log2_cardinality();
    if (cfg.audit > 0) {
        const UniformVerdict v =
            is_gamma_uniform_sets(*res.pair.a, *res.pair.b, cfg.gamma, cfg.audit, cfg.seed);
        switch (v.kind) {
            case UniformVerdict::Kind::proved: res.verdict = "proved"; break;
            case UniformVerdict::Kind::audited:
                res.verdict = "audited(" + std::to_string(v.samples) + ")";
                break;
            case UniformVerdict::Kind::refuted: res.verdict = "refuted"; break;
        }
    }
    write_csv_header(os, "uniform-construct",
                     {{"audit", std::to_string(cfg.audit)},
                      {"gamma", fmt_real(cfg.gamma)},
                      {"n", std::to_string(cfg.n)},
                      {"q_size", std::to_string(cfg.q_size)},
                      {"seed", std::to_string(cfg.seed)}});
    write_csv_row(os, {"q_size", "n", "gamma", "log2_a", "log2_b", "log2_product", "log2_bound",
                       "hypotheses_ok", "verdict"});
    write_csv_row(os, {std::to_string(cfg.q_size), std::to_string(cfg.n), fmt_real(cfg.gamma),
                       fmt_real(res.log2_a), fmt_real(res.log2_b),
                       fmt_real(res.log2_a + res.log2_b), fmt_real(res.log2_bound),
                       res.pair.hypotheses_ok ? "1" : "0", res.verdict});
    return res;
}

} // namespace zeic
