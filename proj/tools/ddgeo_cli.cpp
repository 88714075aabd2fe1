// ddgeo command-line front end. Talks to the library only through ddgeo.h.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddgeo/ddgeo.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Failure {
    ddgeo_status status;
    std::string message;
};

int exit_code(ddgeo_status s) {
    switch (s) {
        case DDGEO_OK: return 0;
        case DDGEO_INVALID_ARGUMENT:
        case DDGEO_DIMENSION_MISMATCH:
        case DDGEO_HORIZON_TOO_SHORT:
        case DDGEO_IO_ERROR:
        case DDGEO_PARSE_ERROR: return kExitValidation;
        default: return kExitNumerical;
    }
}

void check(ddgeo_status s) {
    if (s != DDGEO_OK) throw Failure{s, ddgeo_last_error()};
}

[[noreturn]] void invalid(const std::string& what) { throw Failure{DDGEO_INVALID_ARGUMENT, what}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using System = std::unique_ptr<ddgeo_system, Deleter<ddgeo_system, ddgeo_system_free>>;
using Data = std::unique_ptr<ddgeo_data, Deleter<ddgeo_data, ddgeo_data_free>>;
using Space = std::unique_ptr<ddgeo_subspace, Deleter<ddgeo_subspace, ddgeo_subspace_free>>;
using Trajectory = std::unique_ptr<ddgeo_trajectory, Deleter<ddgeo_trajectory, ddgeo_trajectory_free>>;
using Plan = std::unique_ptr<ddgeo_attack_plan, Deleter<ddgeo_attack_plan, ddgeo_attack_plan_free>>;
using Outcome = std::unique_ptr<ddgeo_attack_outcome, Deleter<ddgeo_attack_outcome, ddgeo_attack_outcome_free>>;

std::string take_string(char* s) {
    std::string out(s);
    ddgeo_string_free(s);
    return out;
}

struct Options {
    std::string system = "consensus";
    std::string data;
    std::size_t horizon = 0;
    std::size_t experiments = 0;
    std::uint64_t seed = 1;
    std::string out;
    bool oracle = false;
    int trials = 100;
    double tol_rank = 0.0;
    double tol_eq = 0.0;
    double attack_energy = 1.0;
    std::size_t onset = 24;
    std::size_t steps = 0;
    std::vector<double> nominal;
    double threshold = 1e-6;

    ddgeo_tolerances tol() const {
        ddgeo_tolerances t = ddgeo_default_tolerances();
        if (tol_rank > 0.0) t.rank_rel = tol_rank;
        if (tol_eq > 0.0) t.subspace_eq = tol_eq;
        return t;
    }
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            invalid("'" + item + "' is not a number");
        }
    }
    return out;
}

// consensus | random[:n,m,p] | siso-zero[:z1,z2,...] | <directory with A.csv B.csv C.csv>
System load_system(const Options& opt) {
    ddgeo_system* raw = nullptr;
    const std::string& spec = opt.system;
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "consensus" && args.empty()) {
        check(ddgeo_system_consensus(&raw));
    } else if (name == "random") {
        std::vector<double> dims = args.empty() ? std::vector<double>{4, 2, 2} : parse_list(args);
        if (dims.size() != 3) invalid("random system expects random:n,m,p");
        for (double d : dims) {
            if (d < 1 || d != static_cast<double>(static_cast<std::size_t>(d))) invalid("random: n, m, p must be positive integers");
        }
        check(ddgeo_system_random(static_cast<std::size_t>(dims[0]), static_cast<std::size_t>(dims[1]),
                                  static_cast<std::size_t>(dims[2]), opt.seed, &raw));
    } else if (name == "siso-zero") {
        const std::vector<double> zeros = args.empty() ? std::vector<double>{0.5} : parse_list(args);
        static const std::vector<double> pole_pool{0.8, -0.4, 0.2, -0.6, 0.3, 0.7, -0.1, 0.45};
        const std::size_t count = std::max<std::size_t>(3, zeros.size() + 1);
        if (count > pole_pool.size()) invalid("siso-zero supports at most " + std::to_string(pole_pool.size() - 1) + " zeros");
        check(ddgeo_system_siso(zeros.data(), zeros.size(), pole_pool.data(), count, &raw));
    } else if (fs::is_directory(spec)) {
        check(ddgeo_system_load(spec.c_str(), &raw));
    } else {
        invalid("unknown system '" + spec + "'");
    }
    return System(raw);
}

Data collect(const ddgeo_system* sys, const Options& opt) {
    const ddgeo_tolerances tol = opt.tol();
    ddgeo_data* raw = nullptr;
    check(ddgeo_collect(sys, opt.horizon, opt.experiments, opt.seed, &tol, &raw));
    return Data(raw);
}

Data obtain_data(const ddgeo_system* sys, const Options& opt) {
    if (opt.data.empty()) return collect(sys, opt);
    const ddgeo_tolerances tol = opt.tol();
    ddgeo_data* raw = nullptr;
    check(ddgeo_data_load(opt.data.c_str(), &tol, &raw));
    return Data(raw);
}

json data_dims(const ddgeo_data* d) {
    std::size_t n, m, p, t, count;
    check(ddgeo_data_dims(d, &n, &m, &p, &t, &count));
    return {{"n", n}, {"m", m}, {"p", p}, {"T", t}, {"N", count}};
}

Space subspace(const ddgeo_data* d, ddgeo_subspace_kind kind, const ddgeo_tolerances& tol) {
    ddgeo_subspace* raw = nullptr;
    check(ddgeo_subspace_from_data(d, kind, &tol, &raw));
    return Space(raw);
}

Space model_subspace(const ddgeo_system* s, ddgeo_subspace_kind kind, const ddgeo_tolerances& tol) {
    ddgeo_subspace* raw = nullptr;
    check(ddgeo_subspace_from_model(s, kind, &tol, &raw));
    return Space(raw);
}

json subspace_json(const ddgeo_subspace* s) {
    char* text = nullptr;
    check(ddgeo_subspace_json(s, &text));
    return json::parse(take_string(text));
}

std::size_t dim_of(const ddgeo_subspace* s) {
    std::size_t dim = 0;
    check(ddgeo_subspace_dims(s, nullptr, &dim));
    return dim;
}

json zeros_json(const std::vector<double>& re, const std::vector<double>& im) {
    json out = json::array();
    for (std::size_t i = 0; i < re.size(); ++i) out.push_back({{"re", re[i]}, {"im", im[i]}});
    return out;
}

fs::path output_dir(const Options& opt) {
    if (!opt.out.empty()) return opt.out;
    if (const char* env = std::getenv("DDGEO_OUT_DIR"); env != nullptr && *env != '\0') return env;
    return {};
}

// Writes files into a staging directory next to `dir` and renames it into
// place, so an interrupted command never leaves half a result behind.
void publish(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    std::random_device rd;
    const fs::path stage = dir.parent_path().empty() ? fs::path(dir.string() + ".tmp-" + std::to_string(rd()))
                                                      : dir.parent_path() / (dir.filename().string() + ".tmp-" + std::to_string(rd()));
    std::error_code ec;
    try {
        fs::create_directories(stage);
        for (const auto& [name, text] : files) {
            std::ofstream out(stage / name, std::ios::binary);
            out << text;
            if (!out) throw Failure{DDGEO_IO_ERROR, "cannot write " + (stage / name).string()};
        }
        if (fs::exists(dir)) fs::remove_all(dir);
        fs::rename(stage, dir);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(stage, ec);
        throw Failure{DDGEO_IO_ERROR, e.what()};
    } catch (...) {
        fs::remove_all(stage, ec);
        throw;
    }
}

json report_header(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

// --- commands

int cmd_collect(const Options& opt) {
    const fs::path dir = output_dir(opt);
    if (dir.empty()) invalid("collect needs --out or DDGEO_OUT_DIR");
    const System sys = load_system(opt);
    const Data data = collect(sys.get(), opt);
    const ddgeo_tolerances tol = opt.tol();
    int pe = 0;
    check(ddgeo_data_persistently_exciting(data.get(), &tol, &pe));

    json report = report_header("collect");
    report["data"] = data_dims(data.get());
    report["seed"] = opt.seed;
    report["persistently_exciting"] = pe == 1;
    if (pe != 1) {
        report["error"] = "rank [X0; U] < n + mT: data are not persistently exciting";
        std::cout << report.dump(2) << '\n';
        return exit_code(DDGEO_NOT_PERSISTENTLY_EXCITING);
    }
    check(ddgeo_data_save(data.get(), dir.string().c_str()));
    const fs::path system_dir = dir / "system";
    if (ddgeo_system_save(sys.get(), system_dir.string().c_str()) != DDGEO_OK) {
        const std::string message = ddgeo_last_error();
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw Failure{DDGEO_IO_ERROR, message};
    }
    report["out"] = dir.string();
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_subspaces(const Options& opt) {
    const ddgeo_tolerances tol = opt.tol();
    System sys;
    if (opt.data.empty() || opt.oracle) {
        Options o = opt;
        if (!opt.data.empty() && fs::is_directory(fs::path(opt.data) / "system")) o.system = (fs::path(opt.data) / "system").string();
        sys = load_system(o);
    }
    const Data data = obtain_data(sys.get(), opt);

    json report = report_header("subspaces");
    report["data"] = data_dims(data.get());
    const std::pair<const char*, ddgeo_subspace_kind> kinds[] = {{"vstar", DDGEO_VSTAR}, {"sstar", DDGEO_SSTAR}, {"rstar", DDGEO_RSTAR}};
    bool agree = true;
    for (const auto& [name, kind] : kinds) {
        const Space dd = subspace(data.get(), kind, tol);
        report[name] = subspace_json(dd.get());
        if (opt.oracle) {
            const Space model = model_subspace(sys.get(), kind, tol);
            double angle = 0.0;
            check(ddgeo_principal_angle(dd.get(), model.get(), &angle));
            const bool equal = dim_of(dd.get()) == dim_of(model.get()) && angle <= tol.subspace_eq;
            agree = agree && equal;
            report["oracle"][name] = {{"dim", dim_of(model.get())}, {"max_principal_angle", angle}, {"equal", equal}};
        }
    }
    std::cout << report.dump(2) << '\n';
    return agree ? 0 : kExitNumerical;
}

int cmd_zeros(const Options& opt) {
    const ddgeo_tolerances tol = opt.tol();
    const System sys = load_system(opt);
    std::size_t n, m;
    check(ddgeo_system_dims(sys.get(), &n, &m, nullptr));
    const Data data = obtain_data(sys.get(), opt);
    const Space vstar = subspace(data.get(), DDGEO_VSTAR, tol);
    ddgeo_trajectory* raw = nullptr;
    check(ddgeo_trajectory_random(sys.get(), 2 * (n + m), opt.seed, &raw));
    const Trajectory traj(raw);

    std::vector<double> re(n), im(n);
    std::size_t count = 0;
    check(ddgeo_zeros(traj.get(), vstar.get(), &tol, re.data(), im.data(), n, &count));
    re.resize(count);
    im.resize(count);

    json report = report_header("zeros");
    report["vstar_dim"] = dim_of(vstar.get());
    report["zeros"] = zeros_json(re, im);
    json membership = json::array();
    bool all_members = true;
    for (std::size_t i = 0; i < count; ++i) {
        int is_zero = 0;
        check(ddgeo_zero_membership(data.get(), vstar.get(), re[i], im[i], &tol, &is_zero, nullptr));
        membership.push_back(is_zero == 1);
        all_members = all_members && is_zero == 1;
    }
    report["membership"] = membership;
    bool agree = all_members;
    if (opt.oracle) {
        std::vector<double> mre(n), mim(n);
        std::size_t mcount = 0;
        check(ddgeo_zeros_model(sys.get(), &tol, mre.data(), mim.data(), n, &mcount));
        mre.resize(mcount);
        mim.resize(mcount);
        bool match = mcount == count;
        for (std::size_t i = 0; match && i < count; ++i) match = std::hypot(re[i] - mre[i], im[i] - mim[i]) <= 1e-6;
        report["oracle"] = {{"zeros", zeros_json(mre, mim)}, {"match", match}};
        agree = agree && match;
    }
    std::cout << report.dump(2) << '\n';
    return agree ? 0 : kExitNumerical;
}

int cmd_feedback(const Options& opt) {
    const ddgeo_tolerances tol = opt.tol();
    const System sys = load_system(opt);
    std::size_t n, m;
    check(ddgeo_system_dims(sys.get(), &n, &m, nullptr));
    const Data data = obtain_data(sys.get(), opt);
    const Space vstar = subspace(data.get(), DDGEO_VSTAR, tol);
    ddgeo_trajectory* raw = nullptr;
    check(ddgeo_trajectory_random(sys.get(), 2 * (n + m), opt.seed, &raw));
    const Trajectory traj(raw);

    std::vector<double> gain(m * n);
    double residual = 0.0, model_residual = 0.0, drift = 0.0;
    check(ddgeo_feedback(traj.get(), vstar.get(), &tol, gain.data(), &residual));
    check(ddgeo_invariance_residual(sys.get(), gain.data(), vstar.get(), &model_residual));
    check(ddgeo_closed_loop_drift(sys.get(), gain.data(), vstar.get(), 50, &drift));

    json report = report_header("feedback");
    report["vstar"] = subspace_json(vstar.get());
    report["gain"] = {{"rows", m}, {"cols", n}, {"data", gain}};
    report["data_residual"] = residual;
    report["model_residual"] = model_residual;
    report["closed_loop_drift_50"] = drift;
    std::cout << report.dump(2) << '\n';
    return model_residual <= 1e-8 ? 0 : kExitNumerical;
}

int cmd_attack(const Options& opt) {
    const ddgeo_tolerances tol = opt.tol();
    const System sys = load_system(opt);
    std::size_t n, m, p;
    check(ddgeo_system_dims(sys.get(), &n, &m, &p));
    const Data data = obtain_data(sys.get(), opt);

    ddgeo_attack_plan* raw_plan = nullptr;
    check(ddgeo_attack_design(data.get(), &tol, opt.attack_energy, opt.onset, &raw_plan));
    const Plan plan(raw_plan);
    std::size_t horizon, generators, rstar_dim;
    check(ddgeo_attack_plan_info(plan.get(), &horizon, nullptr, &generators, &rstar_dim));

    std::vector<double> nominal = opt.nominal;
    if (nominal.empty()) nominal = opt.system == "consensus" ? std::vector<double>{-2.0, 2.0, 4.0} : std::vector<double>(m, 0.0);
    if (nominal.size() != m) invalid("--nominal needs " + std::to_string(m) + " values");
    const std::size_t steps = opt.steps > 0 ? opt.steps : opt.onset + horizon;

    ddgeo_attack_outcome* raw_outcome = nullptr;
    check(ddgeo_attack_simulate(sys.get(), plan.get(), nominal.data(), nullptr, steps, &raw_outcome));
    const Outcome outcome(raw_outcome);
    double max_state = 0.0, max_output = 0.0, rstar_distance = 0.0;
    int detected = 0;
    check(ddgeo_attack_outcome_summary(outcome.get(), &max_state, &max_output, &rstar_distance));
    check(ddgeo_attack_detect(outcome.get(), opt.threshold, &detected));
    char* csv = nullptr;
    check(ddgeo_attack_outcome_csv(outcome.get(), &csv));
    const std::string csv_text = take_string(csv);

    std::vector<double> attack(m * horizon);
    check(ddgeo_attack_plan_input(plan.get(), attack.data()));

    json report = report_header("attack");
    report["rstar_dim"] = rstar_dim;
    report["generators"] = generators;
    report["onset_step"] = opt.onset;
    report["window_end"] = opt.onset + horizon;
    report["steps"] = steps;
    report["attack"] = attack;
    report["max_state_deviation"] = max_state;
    report["max_output_deviation"] = max_output;
    report["max_rstar_distance"] = rstar_distance;
    report["detection_threshold"] = opt.threshold;
    report["stealthy"] = detected == 0;

    if (const fs::path dir = output_dir(opt); !dir.empty()) {
        publish(dir, {{"attack.csv", csv_text}, {"report.json", report.dump(2) + "\n"}});
    } else {
        std::cerr << csv_text;
    }
    std::cout << "stealthy: " << (detected == 0 ? "true" : "false") << '\n';
    std::cout << "max state deviation: " << max_state << '\n';
    std::cout << "max output deviation: " << max_output << '\n';
    return detected == 0 ? 0 : kExitNumerical;
}

int cmd_verify(const Options& opt) {
    const ddgeo_tolerances tol = opt.tol();
    int failures = 0;
    char* text = nullptr;
    check(ddgeo_verify(opt.trials, opt.seed, &tol, &failures, &text));
    json report = report_header("verify");
    report.update(json::parse(take_string(text)));
    const std::string body = report.dump(2) + "\n";
    if (const fs::path dir = output_dir(opt); !dir.empty()) publish(dir, {{"verify.json", body}});
    std::cout << json{{"schema_version", kSchemaVersion}, {"command", "verify"}, {"trials", opt.trials}, {"failures", failures}}.dump()
              << '\n';
    return failures == 0 ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven geometric control: V*, S*, R*, feedback, invariant zeros and stealthy attacks"};
    app.require_subcommand(1, 1);
    Options opt;

    auto common = [&](CLI::App* cmd) {
        cmd->add_option("--system", opt.system, "consensus | random[:n,m,p] | siso-zero[:z1,...] | matrix directory")
            ->capture_default_str();
        cmd->add_option("--horizon", opt.horizon, "experiment horizon T (0: T = n)");
        cmd->add_option("--experiments", opt.experiments, "experiment count N (0: n + mT + 2n)");
        cmd->add_option("--seed", opt.seed, "PRNG seed")->capture_default_str();
        cmd->add_option("--out", opt.out, "output directory (default: $DDGEO_OUT_DIR)");
        cmd->add_option("--tol-rank", opt.tol_rank, "relative rank cutoff")->check(CLI::PositiveNumber);
        cmd->add_option("--tol-eq", opt.tol_eq, "subspace equality angle (rad)")->check(CLI::PositiveNumber);
    };

    auto* collect_cmd = app.add_subcommand("collect", "simulate open-loop experiments and save the data matrices");
    common(collect_cmd);

    auto* subspaces_cmd = app.add_subcommand("subspaces", "compute V*, S*, R* from data");
    common(subspaces_cmd);
    subspaces_cmd->add_option("--data", opt.data, "experiment directory written by collect");
    subspaces_cmd->add_flag("--oracle", opt.oracle, "compare against the model recursions");

    auto* zeros_cmd = app.add_subcommand("zeros", "invariant zeros from data");
    common(zeros_cmd);
    zeros_cmd->add_option("--data", opt.data, "experiment directory written by collect");
    zeros_cmd->add_flag("--oracle", opt.oracle, "compare against the model zeros");

    auto* feedback_cmd = app.add_subcommand("feedback", "gain confining the state to V*");
    common(feedback_cmd);
    feedback_cmd->add_option("--data", opt.data, "experiment directory written by collect");

    auto* attack_cmd = app.add_subcommand("attack", "design and simulate a stealthy input attack");
    common(attack_cmd);
    attack_cmd->add_option("--data", opt.data, "experiment directory written by collect");
    attack_cmd->add_option("--attack-energy", opt.attack_energy, "Euclidean norm of the stacked attack")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    attack_cmd->add_option("--onset", opt.onset, "attack onset step")->capture_default_str();
    attack_cmd->add_option("--steps", opt.steps, "total steps (0: onset + T)");
    attack_cmd->add_option("--nominal", opt.nominal, "constant nominal input, m values")->delimiter(',');
    attack_cmd->add_option("--threshold", opt.threshold, "detection threshold on output deviation")->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "randomized data-driven vs model agreement suite");
    common(verify_cmd);
    verify_cmd->add_option("--trials", opt.trials, "number of random systems")->check(CLI::PositiveNumber)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*collect_cmd) return cmd_collect(opt);
        if (*subspaces_cmd) return cmd_subspaces(opt);
        if (*zeros_cmd) return cmd_zeros(opt);
        if (*feedback_cmd) return cmd_feedback(opt);
        if (*attack_cmd) return cmd_attack(opt);
        return cmd_verify(opt);
    } catch (const Failure& f) {
        const json err = {{"schema_version", kSchemaVersion},
                          {"error", {{"status", ddgeo_status_name(f.status)}, {"code", static_cast<int>(f.status)}, {"message", f.message}}}};
        std::cerr << err.dump() << '\n';
        return exit_code(f.status);
    } catch (const std::exception& e) {
        std::cerr << json{{"schema_version", kSchemaVersion}, {"error", {{"message", e.what()}}}}.dump() << '\n';
        return kExitNumerical;
    }
}
