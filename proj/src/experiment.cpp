#include "molfate/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <set>

#include "molfate/aggregate.hpp"
#include "molfate/bounds.hpp"
#include "molfate/error.hpp"
#include "molfate/fluid.hpp"
#include "molfate/model_io.hpp"
#include "molfate/parallel.hpp"
#include "molfate/paths.hpp"
#include "molfate/singlemol.hpp"
#include "molfate/ssa.hpp"
#include "molfate/stats.hpp"

namespace molfate {

namespace {

using Matrix = std::vector<std::vector<double>>;  // [grid point][component]

std::string trim(std::string s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        out.push_back(trim(text.substr(start, pos - start)));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw InvalidArgument("cannot write " + (dir / name).string());
    return out;
}

void write_matrix(std::ostream& out, const std::vector<std::string>& header, const std::vector<double>& grid,
                  const Matrix& rows) {
    out << 't';
    for (const auto& h : header) out << ',' << h;
    out << '\n';
    for (std::size_t g = 0; g < grid.size(); ++g) {
        out << format_double(grid[g]);
        for (double v : rows[g]) out << ',' << format_double(v);
        out << '\n';
    }
}

Matrix mean_of(const std::vector<Matrix>& runs) {
    Matrix m = runs.front();
    for (std::size_t r = 1; r < runs.size(); ++r)
        for (std::size_t g = 0; g < m.size(); ++g)
            for (std::size_t k = 0; k < m[g].size(); ++k) m[g][k] += runs[r][g][k];
    for (auto& row : m)
        for (double& v : row) v /= static_cast<double>(runs.size());
    return m;
}

Matrix sample_species(const SpeciesPath& path, const std::vector<double>& grid, double volume) {
    Matrix rows;
    rows.reserve(grid.size());
    for (double t : grid) {
        const State& x = path.at(t);
        std::vector<double> row(x.size());
        for (std::size_t s = 0; s < x.size(); ++s) row[s] = static_cast<double>(x[s]) / volume;
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Fraction of paths in each status (cemetery last) at each grid time.
Matrix status_fractions(const std::vector<StatusPath>& paths, std::size_t statuses, const std::vector<double>& grid) {
    Matrix rows(grid.size(), std::vector<double>(statuses + 1, 0.0));
    for (const StatusPath& p : paths)
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const StatusId tau = p.at(grid[g]);
            rows[g][tau == kCemetery ? statuses : static_cast<std::size_t>(tau)] += 1.0;
        }
    for (auto& row : rows)
        for (double& v : row) v /= static_cast<double>(paths.size());
    return rows;
}

std::vector<std::string> status_header(const StatusSchema& schema) {
    std::vector<std::string> h;
    for (const auto& st : schema.statuses()) h.push_back(st.name);
    h.push_back("Delta");
    return h;
}

StatusId lookup_status(const StatusSchema& schema, const std::string& name) {
    if (name == "Delta") return kCemetery;
    const auto tau = schema.status_index(name);
    if (!tau) throw InvalidArgument("unknown status '" + name + "'");
    return *tau;
}

struct Setup {
    Model model;
    Concentration z;
    std::vector<double> grid;
};

Setup prepare(const ExperimentConfig& config) {
    Setup s;
    s.model = load_model(config.model_path);
    s.z = config.z_star ? *config.z_star : s.model.initial;
    if (s.z.size() != s.model.network.dimension())
        throw InvalidArgument("z* has " + std::to_string(s.z.size()) + " entries but the model has " +
                              std::to_string(s.model.network.dimension()) + " species");
    for (double v : s.z)
        if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("z* must be finite and non-negative");
    s.grid = uniform_grid(config.horizon, config.grid);
    return s;
}

const StatusSchema& require_schema(const Setup& s) {
    if (!s.model.schema) throw InvalidArgument("this mode needs a model with statuses and transforms");
    return *s.model.schema;
}

/// Fixed tau0, or weights over the requested subset.
std::vector<double> initial_weights(const ExperimentConfig& config, const StatusSchema& schema,
                                    const Concentration& z) {
    if (!config.initial_status.empty()) {
        const StatusId tau = lookup_status(schema, config.initial_status);
        if (tau == kCemetery) throw InvalidArgument("initial status cannot be the cemetery");
        std::vector<double> w(schema.size(), 0.0);
        w[static_cast<std::size_t>(tau)] = 1.0;
        return w;
    }
    std::vector<StatusId> subset;
    for (const auto& name : config.status_subset) subset.push_back(lookup_status(schema, name));
    return status_weights(schema, z, subset);
}

std::vector<StatusPath> run_tracked(const ExperimentConfig& config, const AugmentedNetwork& aug, const State& x0,
                                    const std::vector<double>& weights, std::uint64_t first_id) {
    SsaOptions opts;
    opts.record_species = false;
    std::vector<StatusPath> paths(config.replications);
    parallel_for(config.replications, config.threads, [&](std::size_t i) {
        const auto tau0 = static_cast<StatusId>(draw_initial(weights, config.seed, first_id + i));
        paths[i] = simulate_tracked(aug, config.volume, x0, tau0, config.horizon, config.seed, first_id + i, opts)
                       .status;
    }, 4);
    return paths;
}

std::vector<std::int64_t> transitions_of(const std::vector<StatusPath>& paths, StatusId from, StatusId to) {
    std::vector<std::int64_t> v;
    for (const auto& p : paths) v.push_back(static_cast<std::int64_t>(count_transitions(p, from, to)));
    return v;
}

std::vector<double> occupation_of(const std::vector<StatusPath>& paths, const std::set<StatusId>& set,
                                  double horizon) {
    std::vector<double> v;
    for (const auto& p : paths) v.push_back(occupation_time(p, set, horizon));
    return v;
}

nlohmann::json status_summary(const StatusSchema& schema, const Matrix& fractions) {
    nlohmann::json j;
    const auto header = status_header(schema);
    for (std::size_t k = 0; k < header.size(); ++k) j[header[k]] = fractions.back()[k];
    return j;
}

void survival_outputs(const ExperimentConfig& config, const std::vector<StatusPath>& paths,
                      const std::vector<double>& grid, const std::string& file, nlohmann::json& summary) {
    if (config.initial_status.empty()) return;
    const auto curve = survival_curve(paths, paths.front().initial, grid);
    auto out = open_output(config.out_dir, file);
    write_survival_csv(out, grid, curve);
    summary["survival_at_T"] = curve.back();
    summary["files"].push_back(file);
}

// ---------------------------------------------------------------------------

nlohmann::json run_fluid(const ExperimentConfig& config, const Setup& s) {
    const FluidSolution sol = solve_fluid(s.model.network, s.z, config.horizon, {config.fluid_step});
    auto out = open_output(config.out_dir, "fluid.csv");
    sol.write_csv(out, std::max<std::size_t>(1, sol.cells() / std::max<std::size_t>(1, config.grid)));
    nlohmann::json j;
    j["files"] = {"fluid.csv"};
    j["min_component"] = sol.min_component();
    j["final"] = sol.values().back();
    return j;
}

nlohmann::json run_ssa(const ExperimentConfig& config, const Setup& s) {
    const ReactionNetwork& net = s.model.network;
    const State x0 = scaled_initial_state(s.z, config.volume);
    std::vector<Matrix> runs(config.replications);
    parallel_for(config.replications, config.threads, [&](std::size_t i) {
        runs[i] = sample_species(simulate_ssa(net, config.volume, x0, config.horizon, config.seed, i), s.grid,
                                 config.volume);
    }, 4);
    const Matrix m = mean_of(runs);
    {
        auto out = open_output(config.out_dir, "ssa_mean.csv");
        write_matrix(out, net.species(), s.grid, m);
    }
    {
        auto out = open_output(config.out_dir, "ssa_run_0.csv");
        write_path_csv(out, net, simulate_ssa(net, config.volume, x0, config.horizon, config.seed, 0));
    }
    nlohmann::json j;
    j["files"] = {"ssa_mean.csv", "ssa_run_0.csv"};
    j["initial_counts"] = x0;
    j["mean_final"] = m.back();
    return j;
}

nlohmann::json run_tracked_mode(const ExperimentConfig& config, const Setup& s) {
    const StatusSchema& schema = require_schema(s);
    const AugmentedNetwork aug(s.model.network, schema);
    const State x0 = scaled_initial_state(s.z, config.volume);
    const auto weights = initial_weights(config, schema, s.z);
    const auto paths = run_tracked(config, aug, x0, weights, 0);
    const Matrix fractions = status_fractions(paths, schema.size(), s.grid);
    nlohmann::json j;
    j["files"] = nlohmann::json::array();
    {
        auto out = open_output(config.out_dir, "tracked_status.csv");
        write_matrix(out, status_header(schema), s.grid, fractions);
        j["files"].push_back("tracked_status.csv");
    }
    {
        auto out = open_output(config.out_dir, "tracked_run_0.csv");
        const auto tau0 = static_cast<StatusId>(draw_initial(weights, config.seed, 0));
        write_path_csv(out, aug, simulate_tracked(aug, config.volume, x0, tau0, config.horizon, config.seed, 0));
        j["files"].push_back("tracked_run_0.csv");
    }
    survival_outputs(config, paths, s.grid, "tracked_survival.csv", j);
    j["status_fractions_at_T"] = status_summary(schema, fractions);
    return j;
}

nlohmann::json run_single(const ExperimentConfig& config, const Setup& s) {
    const StatusSchema& schema = require_schema(s);
    const AugmentedNetwork aug(s.model.network, schema);
    const FluidSolution sol = solve_fluid(s.model.network, s.z, config.horizon, {config.fluid_step});
    const SingleMoleculeSimulator sim(LimitRateTable(aug), sol);
    const auto weights = initial_weights(config, schema, s.z);
    const auto paths = sim.simulate_batch(weights, config.horizon, config.seed, config.replications, config.threads);
    const Matrix fractions = status_fractions(paths, schema.size(), s.grid);
    nlohmann::json j;
    j["files"] = nlohmann::json::array();
    {
        auto out = open_output(config.out_dir, "single_status.csv");
        write_matrix(out, status_header(schema), s.grid, fractions);
        j["files"].push_back("single_status.csv");
    }
    survival_outputs(config, paths, s.grid, "single_survival.csv", j);
    j["status_fractions_at_T"] = status_summary(schema, fractions);
    return j;
}

nlohmann::json run_functional(const ExperimentConfig& config, const Setup& s) {
    const StatusSchema& schema = require_schema(s);
    if (!config.functional) throw InvalidArgument("functional mode needs --functional");
    const FunctionalSpec& f = *config.functional;
    const AugmentedNetwork aug(s.model.network, schema);
    const FluidSolution sol = solve_fluid(s.model.network, s.z, config.horizon, {config.fluid_step});
    const SingleMoleculeSimulator sim(LimitRateTable(aug), sol);
    const State x0 = scaled_initial_state(s.z, config.volume);
    const auto weights = initial_weights(config, schema, s.z);

    const auto finite = run_tracked(config, aug, x0, weights, 0);
    const auto limit = sim.simulate_batch(weights, config.horizon, config.seed, config.replications, config.threads);
    const auto again = sim.simulate_batch(weights, config.horizon, config.seed, config.replications, config.threads,
                                          config.replications);

    auto make = [&](const std::vector<StatusPath>& paths) {
        if (f.kind == FunctionalSpec::Kind::Transitions)
            return EmpiricalDistribution::discrete(transitions_of(paths, lookup_status(schema, f.statuses.at(0)),
                                                                  lookup_status(schema, f.statuses.at(1))));
        std::set<StatusId> set;
        for (const auto& name : f.statuses) set.insert(lookup_status(schema, name));
        return EmpiricalDistribution::continuous(occupation_of(paths, set, config.horizon));
    };
    const auto a = make(finite), b = make(limit), c = make(again);
    {
        auto out = open_output(config.out_dir, "functional_finite.csv");
        a.write_csv(out);
    }
    {
        auto out = open_output(config.out_dir, "functional_limit.csv");
        b.write_csv(out);
    }
    nlohmann::json j;
    j["files"] = {"functional_finite.csv", "functional_limit.csv"};
    j["metric"] = f.kind == FunctionalSpec::Kind::Transitions ? "total_variation" : "kolmogorov_smirnov";
    j["distance"] = distance(a, b);
    j["self_distance"] = distance(b, c);
    return j;
}

nlohmann::json run_aggregate(const ExperimentConfig& config, const Setup& s) {
    const StatusSchema& schema = require_schema(s);
    const AugmentedNetwork aug(s.model.network, schema);
    const ReactionNetwork& net = s.model.network;
    const FluidSolution sol = solve_fluid(net, s.z, config.horizon, {config.fluid_step});
    const SingleMoleculeSimulator sim(LimitRateTable(aug), sol);
    const State x0 = scaled_initial_state(s.z, config.volume);

    AggregateOptions opts;
    if (config.allocation == "per-status")
        opts.allocation = InitialAllocation::PerStatus;
    else if (config.allocation == "designated")
        opts.allocation = InitialAllocation::Designated;
    else
        throw InvalidArgument("allocation must be per-status or designated");
    opts.threads = config.threads;
    std::uint64_t per_run = 0;
    for (Count c : initial_counts(schema, s.z, config.volume, opts.allocation)) per_run += static_cast<std::uint64_t>(c);

    std::vector<Matrix> agg(config.replications), ssa(config.replications);
    for (std::size_t r = 0; r < config.replications; ++r) {
        opts.stream_offset = r * per_run;
        agg[r] = aggregate_trajectory(build_aggregate(sim, s.z, config.volume, config.horizon, config.seed, opts),
                                      s.grid);
    }
    parallel_for(config.replications, config.threads, [&](std::size_t i) {
        ssa[i] = sample_species(simulate_ssa(net, config.volume, x0, config.horizon, config.seed, i), s.grid,
                                config.volume);
    }, 4);
    const Matrix ma = mean_of(agg), ms = mean_of(ssa);
    for (const auto& [name, m] : {std::pair{"aggregate_mean.csv", &ma}, std::pair{"ssa_mean.csv", &ms}}) {
        auto out = open_output(config.out_dir, name);
        write_matrix(out, net.species(), s.grid, *m);
    }
    {
        auto out = open_output(config.out_dir, "aggregate_run_0.csv");
        write_matrix(out, net.species(), s.grid, agg.front());
    }
    const auto alpha = status_multiplicity(schema, net.dimension());
    nlohmann::json sup = nlohmann::json::object();
    for (std::size_t k = 0; k < net.dimension(); ++k) {
        if (alpha[k] == 0) continue;
        double d = 0.0;
        for (std::size_t g = 0; g < s.grid.size(); ++g) d = std::max(d, std::abs(ma[g][k] - ms[g][k]));
        sup[net.species()[k]] = d;
    }
    nlohmann::json j;
    j["files"] = {"aggregate_mean.csv", "ssa_mean.csv", "aggregate_run_0.csv"};
    j["paths_per_replication"] = per_run;
    j["sup_mean_difference"] = sup;
    if (config.replications >= 2) {
        const std::size_t mid = s.grid.size() / 2;
        nlohmann::json var = nlohmann::json::object();
        for (std::size_t k = 0; k < net.dimension(); ++k) {
            if (alpha[k] == 0) continue;
            std::vector<double> a, b;
            for (std::size_t r = 0; r < config.replications; ++r) {
                a.push_back(agg[r][mid][k]);
                b.push_back(ssa[r][mid][k]);
            }
            var[net.species()[k]] = {{"t", s.grid[mid]}, {"aggregate", variance(a)}, {"ssa", variance(b)}};
        }
        j["variance_mid"] = var;
    }
    return j;
}

nlohmann::json run_bounds(const ExperimentConfig& config, const Setup& s) {
    const AugmentedNetwork aug(s.model.network, s.model.schema.value_or(StatusSchema{}));
    const FluidSolution sol = solve_fluid(s.model.network, s.z, config.horizon, {config.fluid_step});
    BoundInputs in;
    in.volume = config.volume;
    in.epsilon = config.epsilon;
    in.gamma = config.gamma;
    in.t = config.horizon;
    in.nu1 = config.nu1;
    in.nu2 = config.nu2;
    in.nu3 = config.nu3;
    const BoundReport report = evaluate_bounds(aug, sol, in);
    const nlohmann::json rj = to_json(report);
    {
        auto out = open_output(config.out_dir, "bounds.json");
        out << rj.dump(2) << '\n';
    }
    if (!report.p) throw BoundUnavailable(report.unavailable.front().second);
    nlohmann::json j = rj;
    j["files"] = {"bounds.json"};
    return j;
}

nlohmann::json run_validate(const ExperimentConfig& config) {
    const Model model = load_model(config.model_path, false);
    std::vector<std::string> problems = validate_network(model.network);
    nlohmann::json j;
    if (model.schema) {
        for (auto& p : validate_schema(model.network, *model.schema)) problems.push_back(std::move(p));
        if (problems.empty()) j["subconservative"] = check_subconservative(model.network, *model.schema).empty();
        j["statuses"] = model.schema->size();
    }
    j["name"] = model.name;
    j["species"] = model.network.dimension();
    j["reactions"] = model.network.size();
    j["valid"] = problems.empty();
    j["problems"] = problems;
    return j;
}

}  // namespace

Mode parse_mode(const std::string& name) {
    static const std::pair<const char*, Mode> table[] = {
        {"ssa", Mode::Ssa},           {"tracked", Mode::Tracked}, {"fluid", Mode::Fluid},
        {"single", Mode::Single},     {"aggregate", Mode::Aggregate}, {"bounds", Mode::Bounds},
        {"functional", Mode::Functional}, {"validate", Mode::Validate}};
    for (const auto& [n, m] : table)
        if (name == n) return m;
    throw InvalidArgument("unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::Ssa: return "ssa";
        case Mode::Tracked: return "tracked";
        case Mode::Fluid: return "fluid";
        case Mode::Single: return "single";
        case Mode::Aggregate: return "aggregate";
        case Mode::Bounds: return "bounds";
        case Mode::Functional: return "functional";
        case Mode::Validate: return "validate";
    }
    return "?";
}

FunctionalSpec parse_functional(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw InvalidArgument("functional must look like transitions:FROM->TO or occupation:A,B");
    const std::string kind = trim(text.substr(0, colon));
    const std::string rest = text.substr(colon + 1);
    FunctionalSpec f;
    if (kind == "transitions") {
        const auto arrow = rest.find("->");
        if (arrow == std::string::npos) throw InvalidArgument("transitions functional needs FROM->TO");
        f.kind = FunctionalSpec::Kind::Transitions;
        f.statuses = {trim(rest.substr(0, arrow)), trim(rest.substr(arrow + 2))};
    } else if (kind == "occupation") {
        f.kind = FunctionalSpec::Kind::Occupation;
        f.statuses = split(rest, ',');
    } else {
        throw InvalidArgument("unknown functional kind '" + kind + "'");
    }
    for (const auto& s : f.statuses)
        if (s.empty()) throw InvalidArgument("empty status name in functional");
    return f;
}

void validate_config(const ExperimentConfig& config) {
    if (config.model_path.empty()) throw InvalidArgument("model file is required");
    if (config.mode == Mode::Validate) return;
    if (!(config.volume >= 1.0)) throw InvalidArgument("V must be at least 1");
    if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) throw InvalidArgument("T must be positive");
    if (config.grid == 0) throw InvalidArgument("grid resolution must be positive");
    if (config.fluid_step < 0.0) throw InvalidArgument("fluid step must be non-negative");
    const bool simulates = config.mode != Mode::Fluid && config.mode != Mode::Bounds;
    if (simulates && config.replications == 0) throw InvalidArgument("replication count must be positive");
    if (config.mode == Mode::Aggregate && config.replications < 2)
        throw InvalidArgument("aggregate mode needs at least two replications");
    if (config.mode == Mode::Functional && !config.functional) throw InvalidArgument("functional mode needs --functional");
    if (config.mode == Mode::Bounds) {
        if (!(config.epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
        if (!(config.gamma > 0.0 && config.gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0, 1]");
        if (config.nu1 < 0.0 || config.nu2 < 0.0 || config.nu3 < 0.0) throw InvalidArgument("nu must be non-negative");
    }
    if (!config.initial_status.empty() && !config.status_subset.empty())
        throw InvalidArgument("give either an initial status or a status subset, not both");
}

nlohmann::json run(const ExperimentConfig& config) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json j;
    if (config.mode == Mode::Validate) {
        j = run_validate(config);
    } else {
        const Setup s = prepare(config);
        switch (config.mode) {
            case Mode::Fluid: j = run_fluid(config, s); break;
            case Mode::Ssa: j = run_ssa(config, s); break;
            case Mode::Tracked: j = run_tracked_mode(config, s); break;
            case Mode::Single: j = run_single(config, s); break;
            case Mode::Functional: j = run_functional(config, s); break;
            case Mode::Aggregate: j = run_aggregate(config, s); break;
            case Mode::Bounds: j = run_bounds(config, s); break;
            case Mode::Validate: break;
        }
        j["V"] = config.volume;
        j["T"] = config.horizon;
        j["z_star"] = s.z;
        j["seed"] = config.seed;
        j["replications"] = config.replications;
        j["out_dir"] = config.out_dir.string();
    }
    j["mode"] = mode_name(config.mode);
    j["model"] = config.model_path.string();
    j["runtime_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return j;
}

}  // namespace molfate
