#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zeic/experiments.hpp"
#include "zeic/version.hpp"

namespace zeic {

// Exit codes: 0 success, 2 hypothesis/regime violation (bad parameters or
// malformed inputs), 3 verification failure, 4 resource budget exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRegime = 2;
inline constexpr int kExitVerification = 3;
inline constexpr int kExitBudget = 4;

namespace cli_detail {

inline int with_output(const std::string& path, std::ostream& fallback,
                       const std::function<int(std::ostream&)>& fn) {
    if (path.empty()) return fn(fallback);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    return fn(f);
}

inline Channel load_channel(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open channel file: " + path);
    return read_channel(f);
}

inline std::map<std::string, double> parse_params(const std::vector<std::string>& kvs) {
    std::map<std::string, double> out;
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::invalid_argument("bad --params entry '" + kv + "', expected k=v");
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad numeric value in --params entry '" + kv + "'");
        }
    }
    return out;
}

inline double need(const std::map<std::string, double>& params, const std::string& key) {
    const auto it = params.find(key);
    if (it == params.end())
        throw std::invalid_argument("missing required parameter '" + key + "'");
    return it->second;
}

inline BoundReport eval_bound(const std::string& name,
                              const std::map<std::string, double>& p) {
    BoundReport r;
    r.name = name;
    for (const auto& [k, v] : p) r.params.emplace_back(k, v);
    if (name == "lemma1_delta") {
        r.value = lemma1_delta(need(p, "eps"), static_cast<int>(need(p, "n")));
    } else if (name == "theorem3_rhs") {
        std::optional<double> eps;
        if (p.count("eps")) eps = p.at("eps");
        r = theorem3_rhs(need(p, "q"), static_cast<int>(need(p, "n")), need(p, "gamma"), eps);
    } else if (name == "eq2_rate") {
        r.value = eq2_rate(need(p, "q"), need(p, "delta1"), need(p, "delta2"), need(p, "gamma"),
                           need(p, "eps"), need(p, "delta"));
    } else if (name == "theorem7_rate") {
        r.value = theorem7_rate(need(p, "q"), need(p, "delta1"), need(p, "delta2"), need(p, "d"));
    } else if (name == "claim1_rhs") {
        r.value = claim1_rhs(static_cast<int>(need(p, "q")), need(p, "gamma"), need(p, "eps"),
                             need(p, "delta"));
    } else if (name == "claim2_rhs") {
        r.value = claim2_rhs(need(p, "q"), need(p, "gamma"), need(p, "eps"), need(p, "delta"));
    } else if (name == "binary_entropy") {
        r.value = binary_entropy(need(p, "p"));
    } else if (name == "prop4_min_bpis_size") {
        r.value = prop4_min_bpis_size(need(p, "r"), static_cast<int>(need(p, "n")), need(p, "q"));
    } else {
        throw std::invalid_argument("unknown bound name '" + name + "'");
    }
    return r;
}

} // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{std::string(kProjectName) + " " + kVersion +
                 " - zero-error vs eps-error experiments on deterministic interference channels"};
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // --- sample ---------------------------------------------------------
    struct {
        int q_bits = 3;
        int q_size = 0;
        double eps = 0.0;
        std::uint64_t seed = 1;
        std::string out_path;
    } sample;
    {
        CLI::App* c = app.add_subcommand("sample", "Sample an erasure/identity channel");
        c->add_option("--q", sample.q_bits, "Alphabet bits, Q = 2^q")->capture_default_str();
        c->add_option("--q-size", sample.q_size, "Alphabet size Q directly (overrides --q)");
        c->add_option("--eps", sample.eps, "Per-entry erasure probability")->required();
        c->add_option("--seed", sample.seed, "PRNG seed")->capture_default_str();
        c->add_option("--out", sample.out_path, "Channel file path (default: stdout)");
        c->callback([&] {
            const int q_size = sample.q_size > 0 ? sample.q_size : (1 << sample.q_bits);
            const Channel w = sample_erasure_identity(q_size, sample.eps, sample.seed);
            exit_code = cli_detail::with_output(sample.out_path, out, [&](std::ostream& os) {
                write_channel(os, w);
                return kExitOk;
            });
        });
    }

    // --- exact ----------------------------------------------------------
    struct {
        int q_size = 2;
        int n = 1;
        std::string out_path;
    } exact;
    {
        CLI::App* c = app.add_subcommand(
            "exact", "Exhaustive campaign over all erasure/identity channels on [Q]^2");
        c->add_option("--q-size", exact.q_size, "Alphabet size Q")->capture_default_str();
        c->add_option("--n", exact.n, "Blocklength")->capture_default_str();
        c->add_option("--out", exact.out_path, "CSV path (default: stdout)");
        c->callback([&] {
            ExactCampaignConfig cfg;
            cfg.q_size = exact.q_size;
            cfg.n = exact.n;
            exit_code = cli_detail::with_output(exact.out_path, out, [&](std::ostream& os) {
                const ExactCampaignSummary s = run_exact_campaign(cfg, os);
                err << "exact: " << s.channels << " channels, "
                    << (s.all_consistent ? "all consistent" : "INCONSISTENT") << "\n";
                return s.all_consistent ? kExitOk : kExitVerification;
            });
        });
    }

    // --- bpis -----------------------------------------------------------
    struct {
        std::string channel_path;
        int q_bits = 3;
        int q_size = 0;
        double eps = 0.25;
        std::uint64_t seed = 1;
        int n = 1;
        std::string out_path;
    } bpis;
    {
        CLI::App* c = app.add_subcommand("bpis", "Exact max BPIS of a channel's conflict graph");
        c->add_option("--channel", bpis.channel_path, "Channel file (otherwise sample)");
        c->add_option("--q", bpis.q_bits, "Alphabet bits when sampling")->capture_default_str();
        c->add_option("--q-size", bpis.q_size, "Alphabet size Q when sampling");
        c->add_option("--eps", bpis.eps, "Erasure probability when sampling")->capture_default_str();
        c->add_option("--seed", bpis.seed, "PRNG seed when sampling")->capture_default_str();
        c->add_option("--n", bpis.n, "Blocklength for the product-law size")->capture_default_str();
        c->add_option("--out", bpis.out_path, "CSV path (default: stdout)");
        c->callback([&] {
            const Channel w =
                bpis.channel_path.empty()
                    ? sample_erasure_identity(bpis.q_size > 0 ? bpis.q_size : (1 << bpis.q_bits),
                                              bpis.eps, bpis.seed)
                    : cli_detail::load_channel(bpis.channel_path);
            const BlocklengthBpis b = max_bpis_blocklength(build_conflict_graph(w), bpis.n);
            exit_code = cli_detail::with_output(bpis.out_path, out, [&](std::ostream& os) {
                write_csv_header(os, "bpis",
                                 {{"n", std::to_string(bpis.n)},
                                  {"q_size", std::to_string(w.q_size())}});
                write_csv_row(os, {"q_size", "erased_count", "bpis_size", "size_pow_n",
                                   "witness_a", "witness_b"});
                std::string wa, wb;
                for (std::size_t i = 0; i < b.base.a.size(); ++i)
                    wa += (i ? ";" : "") + std::to_string(b.base.a[i]);
                for (std::size_t i = 0; i < b.base.b.size(); ++i)
                    wb += (i ? ";" : "") + std::to_string(b.base.b[i]);
                write_csv_row(os, {std::to_string(w.q_size()), std::to_string(w.erased_count()),
                                   std::to_string(b.base.size), b.size.str(), wa, wb});
                return kExitOk;
            });
        });
    }

    // --- prop5-sweep ------------------------------------------------------
    Prop5Config prop5;
    std::string prop5_out;
    {
        CLI::App* c = app.add_subcommand("prop5-sweep",
                                         "Monte Carlo check of the high-probability BPIS bound");
        c->add_option("--q", prop5.q_bits, "Alphabet bits")->capture_default_str();
        c->add_option("--eps", prop5.eps, "Erasure probability")->capture_default_str();
        c->add_option("--trials", prop5.trials, "Number of seeded trials")->capture_default_str();
        c->add_option("--seed", prop5.seed, "Master seed; trial t uses seed + t")
            ->capture_default_str();
        c->add_option("--out", prop5_out, "CSV path (default: stdout)");
        c->callback([&] {
            exit_code = cli_detail::with_output(prop5_out, out, [&](std::ostream& os) {
                const Prop5Summary s = run_prop5_sweep(prop5, os);
                err << "prop5-sweep: satisfied " << s.satisfied << "/" << s.trials << "\n";
                return kExitOk;
            });
        });
    }

    // --- theorem3-sweep ---------------------------------------------------
    Theorem3SweepConfig t3;
    std::string t3_out;
    {
        CLI::App* c =
            app.add_subcommand("theorem3-sweep", "Finite-blocklength upper-bound formula sweep");
        c->add_option("--n", t3.n, "Blocklength")->capture_default_str();
        c->add_option("--eps", t3.eps, "Erasure probability for the hypothesis check")
            ->capture_default_str();
        c->add_option("--q-min", t3.q_min, "Smallest q")->capture_default_str();
        c->add_option("--q-max", t3.q_max, "Largest q")->capture_default_str();
        c->add_option("--gamma", t3.gammas, "Gamma grid values")->expected(-1);
        c->add_option("--out", t3_out, "CSV path (default: stdout)");
        c->callback([&] {
            exit_code = cli_detail::with_output(t3_out, out, [&](std::ostream& os) {
                run_theorem3_sweep(t3, os);
                return kExitOk;
            });
        });
    }

    // --- uniform-construct -------------------------------------------------
    UniformConstructConfig uc;
    std::string uc_out, uc_family_out;
    {
        CLI::App* c = app.add_subcommand("uniform-construct",
                                         "Build a gamma-uniform family pair and report sizes");
        c->add_option("--q-size", uc.q_size, "Alphabet size Q (2: binary construction)")
            ->capture_default_str();
        c->add_option("--n", uc.n, "Blocklength")->capture_default_str();
        c->add_option("--gamma", uc.gamma, "Uniformity parameter")->capture_default_str();
        c->add_option("--audit", uc.audit, "Cross-pair audit budget (0: skip)")
            ->capture_default_str();
        c->add_option("--seed", uc.seed, "Audit seed")->capture_default_str();
        c->add_option("--families-out", uc_family_out, "Write the two family descriptors here");
        c->add_option("--out", uc_out, "CSV path (default: stdout)");
        c->callback([&] {
            exit_code = cli_detail::with_output(uc_out, out, [&](std::ostream& os) {
                const UniformConstructResult res = run_uniform_construct(uc, os);
                if (!res.pair.hypotheses_ok)
                    err << "uniform-construct: warning: n below the asymptotic regime of the "
                           "size guarantee\n";
                if (!uc_family_out.empty()) {
                    std::ofstream f(uc_family_out, std::ios::binary);
                    if (!f)
                        throw std::invalid_argument("cannot open output file: " + uc_family_out);
                    write_family(f, *res.pair.a);
                    write_family(f, *res.pair.b);
                }
                return res.verdict == "refuted" ? kExitVerification : kExitOk;
            });
        });
    }

    // --- pipeline -----------------------------------------------------------
    PipelineConfig pipe;
    std::string pipe_out, pipe_code_prefix;
    double pipe_raw_d = -1.0;
    {
        CLI::App* c = app.add_subcommand(
            "pipeline", "Sample conditioned channels, pack a gamma-uniform pair, verify");
        c->add_option("--q", pipe.q_bits, "Alphabet bits, Q = 2^q")->capture_default_str();
        c->add_option("--n", pipe.n, "Blocklength")->capture_default_str();
        c->add_option("--eps", pipe.eps, "Erasure probability")->capture_default_str();
        c->add_option("--gamma", pipe.gamma, "Uniformity parameter")->capture_default_str();
        c->add_option("--slack", pipe.slack, "Additive slack on the packing distance d")
            ->capture_default_str();
        c->add_option("--trials", pipe.trials, "Number of seeded trials")->capture_default_str();
        c->add_option("--seed", pipe.seed, "Master seed; trial t uses seed + t")
            ->capture_default_str();
        c->add_option("--sample-cap", pipe.sample_cap, "Family draw cap per side")
            ->capture_default_str();
        c->add_option("--raw-d", pipe_raw_d,
                      "Experimental override of the derived packing distance d");
        c->add_option("--code-out", pipe_code_prefix,
                      "Write packed code files <prefix><trial>.code");
        c->add_option("--out", pipe_out, "CSV path (default: stdout)");
        c->callback([&] {
            if (pipe_raw_d >= 0.0) pipe.d_override = pipe_raw_d;
            exit_code = cli_detail::with_output(pipe_out, out, [&](std::ostream& os) {
                std::function<void(int, const PackedCode&, const Channel&)> sink;
                if (!pipe_code_prefix.empty())
                    sink = [&](int trial, const PackedCode& code, const Channel&) {
                        const std::string path =
                            pipe_code_prefix + std::to_string(trial) + ".code";
                        std::ofstream f(path, std::ios::binary);
                        if (!f) throw std::invalid_argument("cannot open output file: " + path);
                        write_packed_code(f, code);
                    };
                const PipelineSummary s = run_pipeline(pipe, os, sink);
                err << "pipeline: ok " << s.ok << "/" << s.trials << "\n";
                return s.ok == s.trials ? kExitOk : kExitVerification;
            });
        });
    }

    // --- verify ----------------------------------------------------------
    struct {
        std::string channel_path;
        std::string code_path;
    } verify;
    {
        CLI::App* c =
            app.add_subcommand("verify", "Check a packed code against a channel file");
        c->add_option("--channel", verify.channel_path, "Channel file")->required();
        c->add_option("--code", verify.code_path, "Packed code file")->required();
        c->callback([&] {
            const Channel w = cli_detail::load_channel(verify.channel_path);
            std::ifstream f(verify.code_path);
            if (!f)
                throw std::invalid_argument("cannot open code file: " + verify.code_path);
            const PackedCode code = read_packed_code(f);
            const VerifyVerdict v = verify_zero_error_against(code, w);
            if (v.ok) {
                out << "ok\n";
                exit_code = kExitOk;
            } else {
                out << "collision terminal=" << v.witness->terminal << " x="
                    << word_to_string(v.witness->x) << " y=" << word_to_string(v.witness->y)
                    << " x'=" << word_to_string(v.witness->x2)
                    << " y'=" << word_to_string(v.witness->y2) << "\n";
                exit_code = kExitVerification;
            }
        });
    }

    // --- bounds ----------------------------------------------------------
    {
        CLI::App* c = app.add_subcommand("bounds", "Closed-form bound evaluators");
        auto* e = c->add_subcommand("eval", "Evaluate one bound; prints a report row");
        auto name = std::make_shared<std::string>();
        auto kvs = std::make_shared<std::vector<std::string>>();
        e->add_option("name", *name, "Bound name")->required();
        e->add_option("--params", *kvs, "k=v parameter assignments")->expected(-1);
        e->callback([&, name, kvs] {
            const BoundReport r = cli_detail::eval_bound(*name, cli_detail::parse_params(*kvs));
            write_csv_header(out, "bounds eval", {});
            write_csv_row(out, {"name", "params", "value", "hypotheses_ok", "violated"});
            std::string params, violated;
            for (std::size_t i = 0; i < r.params.size(); ++i)
                params += (i ? ";" : "") + r.params[i].first + "=" + fmt_real(r.params[i].second);
            for (std::size_t i = 0; i < r.violated.size(); ++i)
                violated += (i ? "; " : "") + r.violated[i];
            write_csv_row(out, {r.name, params, fmt_real(r.value), r.hypotheses_ok ? "1" : "0",
                                violated});
            exit_code = r.hypotheses_ok ? kExitOk : kExitRegime;
        });
    }

    std::vector<char*> argv;
    std::vector<std::string> storage = std::move(args);
    std::string prog = kProjectName;
    argv.push_back(prog.data());
    for (std::string& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream dummy_out;
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : code;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ConstructionError& e) {
        err << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitRegime;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitRegime;
    }
    return exit_code;
}

} // namespace zeic
