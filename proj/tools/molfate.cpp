#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "molfate/error.hpp"
#include "molfate/experiment.hpp"

namespace {

constexpr int kInvalidInput = 2;
constexpr int kBoundUnavailable = 3;
constexpr int kFailure = 1;

struct Options {
    molfate::ExperimentConfig config;
    std::string z_star;
    std::string subset;
    std::string functional;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw molfate::InvalidArgument("cannot read '" + item + "' as a number");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw molfate::InvalidArgument("cannot read '" + item + "' as a number");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> parse_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void add_common(CLI::App* sub, Options& o) {
    auto& c = o.config;
    sub->add_option("model", c.model_path, "Model file")->required();
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    sub->add_option("--out-dir", c.out_dir, "Directory for CSV/JSON outputs");
    if (std::string(sub->get_name()) == "validate") return;
    sub->add_option("-V,--volume", c.volume, "System size V");
    sub->add_option("-T,--horizon", c.horizon, "Time horizon T");
    sub->add_option("--z", o.z_star, "Initial concentrations z*, comma separated in species order");
    sub->add_option("--reps", c.replications, "Replication count");
    sub->add_option("--grid", c.grid, "Number of output grid intervals on [0, T]");
    sub->add_option("--step", c.fluid_step, "Fluid RK4 step (0 = T/10000)");
}

void add_tracking(CLI::App* sub, Options& o) {
    sub->add_option("--initial-status", o.config.initial_status, "Fixed initial status of the tracked molecule");
    sub->add_option("--subset", o.subset, "Statuses to draw the initial status from, weighted by z*");
}

int fail(const std::string& kind, const std::string& message, int code) {
    nlohmann::json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and error bounds for tracking single molecules in stochastic reaction networks"};
    app.require_subcommand(1);
    Options o;

    struct Entry {
        const char* name;
        const char* help;
        molfate::Mode mode;
    };
    const Entry entries[] = {
        {"ssa", "Gillespie replications of X^V: ensemble mean and one path", molfate::Mode::Ssa},
        {"tracked", "Exact tracking chain (Y^V, X^V) replications", molfate::Mode::Tracked},
        {"fluid", "Fluid limit Z on [0, T]", molfate::Mode::Fluid},
        {"single", "Limit single-molecule paths Y", molfate::Mode::Single},
        {"aggregate", "Aggregate approximation against Gillespie replications", molfate::Mode::Aggregate},
        {"bounds", "Explicit error bounds as a JSON report", molfate::Mode::Bounds},
        {"functional", "Path functional distributions of Y^V and Y", molfate::Mode::Functional},
        {"validate", "Parse and check a model file", molfate::Mode::Validate},
    };
    std::vector<std::pair<CLI::App*, molfate::Mode>> subs;
    for (const Entry& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, o);
        if (e.mode == molfate::Mode::Tracked || e.mode == molfate::Mode::Single || e.mode == molfate::Mode::Functional)
            add_tracking(sub, o);
        if (e.mode == molfate::Mode::Functional)
            sub->add_option("--functional", o.functional, "transitions:FROM->TO or occupation:A,B")->required();
        if (e.mode == molfate::Mode::Aggregate)
            sub->add_option("--allocation", o.config.allocation, "per-status or designated");
        if (e.mode == molfate::Mode::Bounds) {
            sub->add_option("--epsilon", o.config.epsilon, "Tube radius");
            sub->add_option("--gamma", o.config.gamma, "Split of the tube radius, in (0, 1]");
            sub->add_option("--nu1", o.config.nu1, "Aggregate level nu1");
            sub->add_option("--nu2", o.config.nu2, "Aggregate level nu2");
            sub->add_option("--nu3", o.config.nu3, "Aggregate level nu3");
        }
        subs.emplace_back(sub, e.mode);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("invalid_input", e.what(), kInvalidInput);
    }

    try {
        for (const auto& [sub, mode] : subs)
            if (sub->parsed()) o.config.mode = mode;
        if (!o.z_star.empty()) o.config.z_star = parse_list(o.z_star);
        if (!o.subset.empty()) o.config.status_subset = parse_names(o.subset);
        if (!o.functional.empty()) o.config.functional = molfate::parse_functional(o.functional);
        const nlohmann::json summary = molfate::run(o.config);
        std::cout << summary.dump(2) << '\n';
        if (o.config.mode == molfate::Mode::Validate && !summary.at("valid").get<bool>()) return kInvalidInput;
        return 0;
    } catch (const molfate::BoundUnavailable& e) {
        return fail("bound_unavailable", e.what(), kBoundUnavailable);
    } catch (const molfate::ModelError& e) {
        return fail("invalid_input", e.what(), kInvalidInput);
    } catch (const molfate::InvalidArgument& e) {
        return fail("invalid_input", e.what(), kInvalidInput);
    } catch (const std::exception& e) {
        return fail("failure", e.what(), kFailure);
    }
}
