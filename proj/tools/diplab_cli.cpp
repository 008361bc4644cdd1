// Experiment driver: runs protocol sessions, input-recovery attacks, and the
// real-vs-ideal distinguisher, emitting a deterministic JSON report per run.
//
// Exit codes: 0 all claim checks pass, 1 a claim check failed, 2 usage error.
// The report (stdout or --out) is byte-identical across reruns of the same
// config; wall-clock duration is reported on stderr only.

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <diplab/attack.hpp>
#include <diplab/composed.hpp>
#include <diplab/protocol.hpp>
#include <diplab/serialize.hpp>

namespace {

using nlohmann::json;
using namespace diplab;

constexpr int kExitPass = 0;
constexpr int kExitClaimFailure = 1;
constexpr int kExitUsage = 2;

struct Config {
    std::string command;
    std::uint64_t q = 101;
    std::uint64_t k = 1;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    std::string mode = "scalar";
    std::string out;
    std::uint64_t threads = 1;
};

struct Check {
    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0; // allowed |observed - expected|
    bool pass = false;
};

// 3-sigma binomial acceptance band around success probability p over n trials.
Check banded_check(std::string name, double observed, double p, std::uint64_t n)
{
    const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    Check c{std::move(name), observed, p, 3.0 * sigma, false};
    c.pass = std::fabs(observed - p) <= c.tolerance;
    return c;
}

Check exact_check(std::string name, double observed, double expected)
{
    return Check{std::move(name), observed, expected, 0.0, observed == expected};
}

json check_json(const Check& c)
{
    return json{{"name", c.name},
                {"observed", c.observed},
                {"expected", c.expected},
                {"tolerance", c.tolerance},
                {"pass", c.pass}};
}

json checks_json(const std::vector<Check>& checks)
{
    json arr = json::array();
    for (const auto& c : checks) arr.push_back(check_json(c));
    return arr;
}

bool all_pass(const std::vector<Check>& checks)
{
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

json config_json(const Config& cfg, bool with_trials, bool with_mode)
{
    // --threads is intentionally absent: the report must be byte-identical
    // regardless of how many workers computed it.
    json j{
        {"command", cfg.command},
        {"q", cfg.q},
        {"k", cfg.k},
        {"seed", std::to_string(cfg.seed)},
        {"out", cfg.out},
    };
    if (with_trials) j["trials"] = cfg.trials;
    if (with_mode) j["mode"] = cfg.mode;
    return j;
}

// Prints the stderr summary and writes the JSON report; returns the exit code.
int emit_report(const Config& cfg, const json& body, const std::vector<Check>& checks,
                std::chrono::steady_clock::time_point started)
{
    for (const auto& c : checks) {
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " observed=" << c.observed
                  << " expected=" << c.expected << " tolerance=" << c.tolerance << "\n";
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    const bool pass = all_pass(checks);
    std::cerr << cfg.command << ": " << (pass ? "PASS" : "FAIL") << " (" << elapsed.count() << " ms)\n";

    const std::string text = body.dump(2) + "\n";
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            std::cerr << "config error: cannot open output file '" << cfg.out << "'\n";
            return kExitUsage;
        }
        file << text;
        if (!file) {
            std::cerr << "error: failed writing '" << cfg.out << "'\n";
            return kExitUsage;
        }
    }
    return pass ? kExitPass : kExitClaimFailure;
}

int cmd_run(const Config& cfg)
{
    const auto started = std::chrono::steady_clock::now();
    const Modulus q(cfg.q);
    Rng rng(cfg.seed);
    const FieldVector x = sample_vector(rng, q, cfg.k);
    const FieldVector y = sample_vector(rng, q, cfg.k);
    const FieldElement want = inner_product(x, y);
    const SessionRecord record = run_session_recorded(x, y, cfg.k, q, rng);
    const Transcript& t = record.transcript;

    const bool reconstructs =
        t.outcome1.has_value() && t.outcome2.has_value() && (*t.outcome1 + *t.outcome2 == want);
    const std::vector<Check> checks{
        exact_check("shares_reconstruct_inner_product", reconstructs ? 1.0 : 0.0, 1.0)};

    const json body{
        {"config", config_json(cfg, false, false)},
        {"inputs", json{{"x", x}, {"y", y}, {"inner_product", want}}},
        {"transcript", t},
        {"checks", checks_json(checks)},
        {"pass", all_pass(checks)},
    };
    return emit_report(cfg, body, checks, started);
}

int cmd_attack_scalar(const Config& cfg)
{
    const auto started = std::chrono::steady_clock::now();
    const Modulus q(cfg.q);
    std::atomic<std::uint64_t> exact_hits{0}, wrong_hits{0}, undetermined{0};
    detail::run_trials(cfg.trials, static_cast<unsigned>(cfg.threads), [&](std::uint64_t trial) {
        Rng rng(mix_seed(cfg.seed, trial));
        const FieldVector x = sample_vector(rng, q, 1);
        const FieldVector y = sample_vector(rng, q, 1);
        const SessionRecord record = run_session_recorded(x, y, 1, q, rng);
        const auto recovered = recover_k1(*record.p2_view);
        if (!recovered)
            ++undetermined;
        else if (*recovered == x[0])
            ++exact_hits;
        else
            ++wrong_hits;
    });

    const double rate = static_cast<double>(exact_hits) / static_cast<double>(cfg.trials);
    const double expected = 1.0 - 1.0 / static_cast<double>(q.value());
    const std::vector<Check> checks{
        banded_check("success_rate", rate, expected, cfg.trials),
        exact_check("wrong_recoveries", static_cast<double>(wrong_hits), 0.0),
    };

    const json body{
        {"config", config_json(cfg, true, true)},
        {"result",
         json{
             {"trials", cfg.trials},
             {"recovered_exactly", exact_hits.load()},
             {"wrong_recoveries", wrong_hits.load()},
             {"undetermined", undetermined.load()},
             {"success_rate", rate},
             {"expected_rate", expected},
         }},
        {"checks", checks_json(checks)},
        {"pass", all_pass(checks)},
    };
    return emit_report(cfg, body, checks, started);
}

int cmd_attack_vecmat(const Config& cfg)
{
    const auto started = std::chrono::steady_clock::now();
    const Modulus q(cfg.q);
    std::atomic<std::uint64_t> unique_exact{0}, unique_wrong{0}, biconditional_violations{0};
    detail::run_trials(cfg.trials, static_cast<unsigned>(cfg.threads), [&](std::uint64_t trial) {
        Rng rng(mix_seed(cfg.seed, trial));
        const FieldVector x = sample_vector(rng, q, cfg.k);
        const FieldMatrix Y = sample_matrix(rng, q, cfg.k, cfg.k);
        const VecMatShares shares = shared_vec_mat(x, Y, q, rng);
        const RecoveryResult result = attack_shared_vec_mat(shares);
        const bool unique = result.kind == RecoveryResult::Kind::Unique;
        if (unique != is_nonsingular(result.system.Y0)) ++biconditional_violations;
        if (unique) {
            if (*result.recovered == x)
                ++unique_exact;
            else
                ++unique_wrong;
        }
    });

    double expected = 1.0;
    for (std::uint64_t i = 1; i <= cfg.k; ++i)
        expected *= 1.0 - std::pow(static_cast<double>(q.value()), -static_cast<double>(i));

    const double rate = static_cast<double>(unique_exact) / static_cast<double>(cfg.trials);
    const std::vector<Check> checks{
        banded_check("success_rate", rate, expected, cfg.trials),
        exact_check("biconditional_violations", static_cast<double>(biconditional_violations), 0.0),
        exact_check("wrong_unique_recoveries", static_cast<double>(unique_wrong), 0.0),
    };

    const json body{
        {"config", config_json(cfg, true, true)},
        {"result",
         json{
             {"trials", cfg.trials},
             {"unique_exact", unique_exact.load()},
             {"wrong_unique_recoveries", unique_wrong.load()},
             {"biconditional_violations", biconditional_violations.load()},
             {"success_rate", rate},
             {"expected_rate", expected},
         }},
        {"checks", checks_json(checks)},
        {"pass", all_pass(checks)},
    };
    return emit_report(cfg, body, checks, started);
}

int cmd_distinguish(const Config& cfg)
{
    const auto started = std::chrono::steady_clock::now();
    const Modulus q(cfg.q);
    const AdvantageReport report = run_distinguisher_experiment(q, cfg.k, cfg.trials, cfg.seed,
                                                                static_cast<unsigned>(cfg.threads));
    const double ideal_expected = 1.0 / static_cast<double>(q.value());
    const std::vector<Check> checks{
        exact_check("real_accept_rate", report.real_accept_rate, 1.0),
        banded_check("ideal_accept_rate", report.ideal_accept_rate, ideal_expected, cfg.trials),
        banded_check("advantage", report.advantage, 1.0 - ideal_expected, cfg.trials),
    };

    const json body{
        {"config", config_json(cfg, true, false)},
        {"result", report},
        {"checks", checks_json(checks)},
        {"pass", all_pass(checks)},
    };
    return emit_report(cfg, body, checks, started);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"diplab: distributed inner-product protocol sessions, attacks, and distinguisher experiments"};
    app.require_subcommand(1);

    Config cfg;
    CLI::Option* seed_opt = nullptr;

    const auto add_common = [&cfg, &seed_opt](CLI::App* sub, bool with_trials) {
        sub->add_option("--q", cfg.q, "prime field modulus (< 2^31)")->capture_default_str();
        sub->add_option("--k", cfg.k, "vector length")->capture_default_str();
        if (with_trials)
            sub->add_option("--trials", cfg.trials, "number of independent trials")->capture_default_str();
        CLI::Option* s = sub->add_option("--seed", cfg.seed,
                                         "64-bit seed (default: DIPLAB_SEED env var, then 1)");
        if (!seed_opt) seed_opt = s;
        sub->add_option("--out", cfg.out, "write the JSON report to this file instead of stdout");
        sub->add_option("--threads", cfg.threads, "worker threads for trials (output independent of this)")
            ->capture_default_str();
        return s;
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run one honest protocol session and report its transcript");
    CLI::Option* run_seed = add_common(run_cmd, false);

    CLI::App* attack_cmd = app.add_subcommand("attack", "recover P1's input from P2's views over many sessions");
    CLI::Option* attack_seed = add_common(attack_cmd, true);
    attack_cmd->add_option("--mode", cfg.mode, "scalar: k=1 recovery; vecmat: composed linear-system recovery")
        ->check(CLI::IsMember({"scalar", "vecmat"}))
        ->capture_default_str();

    CLI::App* dist_cmd = app.add_subcommand("distinguish", "measure the real-vs-ideal distinguishing advantage");
    CLI::Option* dist_seed = add_common(dist_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const bool seed_given =
        run_seed->count() > 0 || attack_seed->count() > 0 || dist_seed->count() > 0;
    if (!seed_given) {
        if (const char* env = std::getenv("DIPLAB_SEED")) {
            const std::string_view text(env);
            std::uint64_t value = 0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
                std::cerr << "config error: DIPLAB_SEED is not a 64-bit unsigned integer: '" << text << "'\n";
                return kExitUsage;
            }
            cfg.seed = value;
        }
    }

    if (cfg.k == 0) {
        std::cerr << "config error: --k must be >= 1\n";
        return kExitUsage;
    }
    if (cfg.trials == 0) {
        std::cerr << "config error: --trials must be >= 1\n";
        return kExitUsage;
    }
    if (cfg.threads == 0) {
        std::cerr << "config error: --threads must be >= 1\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(run_cmd)) {
            cfg.command = "run";
            return cmd_run(cfg);
        }
        if (app.got_subcommand(attack_cmd)) {
            cfg.command = "attack";
            if (cfg.mode == "scalar") {
                if (cfg.k != 1) {
                    std::cerr << "config error: --mode scalar requires --k 1\n";
                    return kExitUsage;
                }
                return cmd_attack_scalar(cfg);
            }
            return cmd_attack_vecmat(cfg);
        }
        cfg.command = "distinguish";
        return cmd_distinguish(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
