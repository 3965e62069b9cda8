// desync: command-line front end for the desynchronisability toolkit.
//
//   desync check FILE [--bags 1x1,2x2] [--format json|text]
//   desync conditions FILE
//   desync lts FILE --target sync [--format dot|json]
//   desync bisim FILE --left sync --right async [--strong]
//   desync export FILE --out DIR

#include "desync/closed_loop.hpp"
#include "desync/conditions.hpp"
#include "desync/errors.hpp"
#include "desync/export.hpp"
#include "desync/semantics.hpp"
#include "desync/spec.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace desync;

constexpr int kExitOk = 0;
constexpr int kExitDirectFailure = 1;
constexpr int kExitInstanceOnly = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitInternal = 70;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string input_path;
    std::string bags;
    std::size_t max_states = 0;
    std::string format;
    std::string out_path;
    std::string target = "sync";
    std::string left = "sync";
    std::string right = "async";
    bool strong = false;
};

using Sizes = std::vector<std::pair<std::size_t, std::size_t>>;

Sizes parse_bags(const std::string& text) {
    Sizes out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto x = item.find('x');
        try {
            if (x == std::string::npos) {
                throw std::invalid_argument(item);
            }
            std::size_t used = 0;
            long m = std::stol(item.substr(0, x), &used);
            if (used != x) {
                throw std::invalid_argument(item);
            }
            long n = std::stol(item.substr(x + 1), &used);
            if (used != item.size() - x - 1 || m < 1 || n < 1) {
                throw std::invalid_argument(item);
            }
            out.emplace_back(m, n);
        } catch (const std::logic_error&) {
            throw UsageError("bad bag size '" + item + "', expected MxN with M, N >= 1");
        }
    }
    if (out.empty()) {
        throw UsageError("--bags needs at least one MxN entry");
    }
    return out;
}

SystemSpec load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::size_t budget_for(const RunConfig& cfg, const SystemSpec& spec) {
    if (cfg.max_states > 0) {
        return cfg.max_states;
    }
    if (spec.option("max_states")) {
        return state_budget(spec);
    }
    if (const char* env = std::getenv("DESYNC_MAX_STATES")) {
        try {
            long v = std::stol(env);
            if (v >= 1) {
                return static_cast<std::size_t>(v);
            }
        } catch (const std::logic_error&) {
        }
        throw UsageError(std::string("DESYNC_MAX_STATES must be a positive integer, got '") + env + "'");
    }
    return kDefaultMaxStates;
}

Sizes sizes_for(const RunConfig& cfg, const SystemSpec& spec) {
    if (!cfg.bags.empty()) {
        return parse_bags(cfg.bags);
    }
    auto m = spec.option("bag_in");
    auto n = spec.option("bag_out");
    if (m || n) {
        if (m.value_or(1) < 1 || n.value_or(1) < 1) {
            throw UsageError("bag_in and bag_out options must be positive");
        }
        return {{static_cast<std::size_t>(m.value_or(1)), static_cast<std::size_t>(n.value_or(1))}};
    }
    return {{1, 1}, {2, 2}};
}

Lts resolve_target(const std::string& target, const SystemSpec& spec, const Sizes& sizes, std::size_t budget) {
    if (target == "plant") {
        return generate_lts(spec, spec.plant_term(), budget);
    }
    if (target == "supervisor") {
        return generate_lts(spec, spec.supervisor_term(), budget);
    }
    if (target == "requirement") {
        return generate_lts(spec, spec.requirement_term(), budget);
    }
    if (target == "sync") {
        return compose_sync(spec, budget);
    }
    if (target == "async") {
        return compose_async(spec, sizes.front().first, sizes.front().second, budget);
    }
    if (target == "renamed") {
        return rename_supervisor(spec, budget);
    }
    throw UsageError("unknown target '" + target + "'");
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.out_path);
    if (!out || !(out << text)) {
        throw UsageError("cannot write " + cfg.out_path);
    }
}

std::string render(const std::string& format, const nlohmann::json& json, const std::string& text) {
    if (format == "text") {
        return text;
    }
    if (format == "json") {
        return json.dump(2) + "\n";
    }
    throw UsageError("format '" + format + "' is not available for this command");
}

int cmd_check(const RunConfig& cfg) {
    SystemSpec spec = load(cfg.input_path);
    Verdict v = desync_verdict(spec, sizes_for(cfg, spec), budget_for(cfg, spec));
    emit(cfg, render(cfg.format.empty() ? "json" : cfg.format, to_json(v), to_text(v)));
    bool all_equivalent = true;
    for (const DirectCheck& d : v.direct) {
        all_equivalent = all_equivalent && d.equivalent;
    }
    if (!all_equivalent) {
        return kExitDirectFailure;
    }
    return v.theorem_applies ? kExitOk : kExitInstanceOnly;
}

int cmd_conditions(const RunConfig& cfg) {
    SystemSpec spec = load(cfg.input_path);
    ConditionReport r = check_conditions(build_sync_loop(spec, budget_for(cfg, spec)));
    emit(cfg, render(cfg.format.empty() ? "json" : cfg.format, to_json(r), to_text(r)));
    return r.all_pass() ? kExitOk : kExitDirectFailure;
}

int cmd_lts(const RunConfig& cfg) {
    SystemSpec spec = load(cfg.input_path);
    Lts lts = resolve_target(cfg.target, spec, sizes_for(cfg, spec), budget_for(cfg, spec));
    std::string format = cfg.format.empty() ? "dot" : cfg.format;
    if (format == "dot") {
        emit(cfg, to_dot(lts));
    } else if (format == "json") {
        emit(cfg, to_json(lts).dump(2) + "\n");
    } else {
        throw UsageError("lts supports --format dot or json");
    }
    return kExitOk;
}

int cmd_bisim(const RunConfig& cfg) {
    SystemSpec spec = load(cfg.input_path);
    Sizes sizes = sizes_for(cfg, spec);
    std::size_t budget = budget_for(cfg, spec);
    Lts left = resolve_target(cfg.left, spec, sizes, budget);
    Lts right = resolve_target(cfg.right, spec, sizes, budget);
    EquivalenceResult r = cfg.strong ? strong_bisim(left, right) : branching_bisim(left, right);
    emit(cfg, render(cfg.format.empty() ? "json" : cfg.format, to_json(r), to_text(r)));
    return r.equivalent ? kExitOk : kExitDirectFailure;
}

int cmd_export(const RunConfig& cfg) {
    if (cfg.out_path.empty()) {
        throw UsageError("export needs --out DIR");
    }
    SystemSpec spec = load(cfg.input_path);
    Sizes sizes = sizes_for(cfg, spec);
    std::size_t budget = budget_for(cfg, spec);
    std::filesystem::path dir(cfg.out_path);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw UsageError("cannot create " + dir.string() + ": " + ec.message());
    }
    auto write = [&](const std::string& name, const Lts& lts) {
        for (const auto& [ext, body] : {std::pair{".dot", to_dot(lts)}, std::pair{".json", to_json(lts).dump(2) + "\n"}}) {
            std::ofstream out(dir / (name + ext));
            if (!out || !(out << body)) {
                throw UsageError("cannot write " + (dir / (name + ext)).string());
            }
        }
    };
    SyncLoop sync = build_sync_loop(spec, budget);
    write("plant", sync.plant);
    write("supervisor", sync.supervisor);
    write("sync", sync.loop);
    if (spec.requirement) {
        write("requirement", generate_lts(spec, spec.requirement_term(), budget));
    }
    for (auto [m, n] : sizes) {
        write("async_" + std::to_string(m) + "x" + std::to_string(n), compose_async(sync, m, n, budget));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desynchronisability checks for plant/supervisor closed loops"};
    app.require_subcommand(1);
    RunConfig cfg;
    const std::vector<std::string> targets = {"plant", "supervisor", "requirement", "sync", "async", "renamed"};

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input_path, "Spec file")->required();
        sub->add_option("--bags", cfg.bags, "Bag sizes, MxN[,MxN...]");
        sub->add_option("--max-states", cfg.max_states, "State budget per exploration")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"text", "json", "dot"}));
        sub->add_option("--out", cfg.out_path, "Output path");
    };

    auto* check = app.add_subcommand("check", "Conditions plus direct bisimulation checks");
    common(check);
    auto* conditions = app.add_subcommand("conditions", "Well-formedness and sufficient conditions");
    common(conditions);
    auto* lts = app.add_subcommand("lts", "Print one transition system");
    common(lts);
    lts->add_option("--target", cfg.target, "What to build")->check(CLI::IsMember(targets));
    auto* bisim = app.add_subcommand("bisim", "Compare two transition systems");
    common(bisim);
    bisim->add_option("--left", cfg.left, "Left side")->check(CLI::IsMember(targets));
    bisim->add_option("--right", cfg.right, "Right side")->check(CLI::IsMember(targets));
    bisim->add_flag("--strong", cfg.strong, "Strong instead of branching bisimilarity");
    auto* exp = app.add_subcommand("export", "Write dot and JSON for every transition system");
    common(exp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*check) {
            return cmd_check(cfg);
        }
        if (*conditions) {
            return cmd_conditions(cfg);
        }
        if (*lts) {
            return cmd_lts(cfg);
        }
        if (*bisim) {
            return cmd_bisim(cfg);
        }
        return cmd_export(cfg);
    } catch (const UsageError& e) {
        std::cerr << "desync: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SpecError& e) {
        std::cerr << cfg.input_path << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const BudgetExceeded& e) {
        std::cerr << cfg.input_path << ": " << e.what() << "\n";
        return kExitInternal;
    } catch (const InvariantViolation& e) {
        std::cerr << cfg.input_path << ": internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        // Well-formed text describing an unusable model: missing roles, non io-processes, ...
        std::cerr << cfg.input_path << ": " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << cfg.input_path << ": internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
