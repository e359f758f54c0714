#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "json.hpp"
#include "molfate/bounds.hpp"
#include "molfate/error.hpp"
#include "molfate/experiment.hpp"
#include "molfate/fluid.hpp"
#include "molfate/model_io.hpp"
#include "molfate/singlemol.hpp"
#include "molfate/ssa.hpp"

namespace py = pybind11;
using namespace molfate;

namespace {

const StatusSchema& schema_of(const Model& m) {
    if (!m.schema) throw InvalidArgument("model has no statuses");
    return *m.schema;
}

StatusId status_of(const Model& m, const std::string& name) {
    const auto tau = schema_of(m).status_index(name);
    if (!tau) throw InvalidArgument("unknown status '" + name + "'");
    return *tau;
}

Concentration initial_or(const Model& m, const std::optional<Concentration>& z) { return z ? *z : m.initial; }

py::dict species_path(const Model& m, const SpeciesPath& p) {
    std::vector<State> states{p.initial};
    states.insert(states.end(), p.states.begin(), p.states.end());
    std::vector<double> times{0.0};
    times.insert(times.end(), p.times.begin(), p.times.end());
    py::dict d;
    d["species"] = m.network.species();
    d["times"] = times;
    d["states"] = states;
    return d;
}

py::dict status_path(const Model& m, const StatusPath& p) {
    std::vector<std::string> names{schema_of(m).status_name(p.initial)};
    for (StatusId s : p.states) names.push_back(schema_of(m).status_name(s));
    std::vector<double> times{0.0};
    times.insert(times.end(), p.times.begin(), p.times.end());
    py::dict d;
    d["times"] = times;
    d["statuses"] = names;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Single-molecule tracking in stochastic reaction networks";

    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<BoundUnavailable>(m, "BoundUnavailable", PyExc_RuntimeError);
    py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

    py::class_<Model>(m, "Model")
        .def_readonly("name", &Model::name)
        .def_readonly("initial", &Model::initial)
        .def_property_readonly("species", [](const Model& x) { return x.network.species(); })
        .def_property_readonly("reactions",
                               [](const Model& x) {
                                   std::vector<std::string> out;
                                   for (const auto& r : x.network.reactions()) out.push_back(r.label);
                                   return out;
                               })
        .def_property_readonly("statuses",
                               [](const Model& x) {
                                   std::vector<std::string> out;
                                   if (x.schema)
                                       for (const auto& s : x.schema->statuses()) out.push_back(s.name);
                                   return out;
                               })
        .def("serialize", &serialize_model)
        .def("__repr__", [](const Model& x) { return "<molfate.Model '" + x.name + "'>"; });

    m.def("load_model", [](const std::filesystem::path& p) { return load_model(p); }, py::arg("path"));
    m.def("parse_model", [](const std::string& text) { return parse_model(text); }, py::arg("text"));

    m.def(
        "solve_fluid",
        [](const Model& model, double horizon, std::optional<Concentration> z, double step) {
            const FluidSolution sol = solve_fluid(model.network, initial_or(model, z), horizon, {step});
            std::vector<double> times;
            for (std::size_t i = 0; i <= sol.cells(); ++i) times.push_back(sol.time(i));
            py::dict d;
            d["species"] = sol.species();
            d["times"] = times;
            d["values"] = sol.values();
            return d;
        },
        py::arg("model"), py::arg("horizon"), py::arg("z") = py::none(), py::arg("step") = 0.0);

    m.def(
        "simulate_ssa",
        [](const Model& model, double volume, double horizon, std::uint64_t seed, std::uint64_t trajectory,
           std::optional<Concentration> z) {
            const State x0 = scaled_initial_state(initial_or(model, z), volume);
            return species_path(model, simulate_ssa(model.network, volume, x0, horizon, seed, trajectory));
        },
        py::arg("model"), py::arg("volume"), py::arg("horizon"), py::arg("seed") = 1, py::arg("trajectory") = 0,
        py::arg("z") = py::none());

    m.def(
        "simulate_tracked",
        [](const Model& model, double volume, double horizon, const std::string& initial_status,
           std::uint64_t seed, std::uint64_t trajectory) {
            const AugmentedNetwork aug(model.network, schema_of(model));
            const State x0 = scaled_initial_state(model.initial, volume);
            const TrackedPath p =
                simulate_tracked(aug, volume, x0, status_of(model, initial_status), horizon, seed, trajectory);
            py::dict d = status_path(model, p.status);
            d["species_path"] = species_path(model, p.species);
            return d;
        },
        py::arg("model"), py::arg("volume"), py::arg("horizon"), py::arg("initial_status"), py::arg("seed") = 1,
        py::arg("trajectory") = 0);

    m.def(
        "simulate_single",
        [](const Model& model, double horizon, const std::string& initial_status, std::uint64_t seed,
           std::uint64_t trajectory) {
            const AugmentedNetwork aug(model.network, schema_of(model));
            const FluidSolution sol = solve_fluid(model.network, model.initial, horizon);
            return status_path(model, simulate_y(build_limit_rates(aug), sol, status_of(model, initial_status),
                                                 horizon, seed, trajectory));
        },
        py::arg("model"), py::arg("horizon"), py::arg("initial_status"), py::arg("seed") = 1,
        py::arg("trajectory") = 0);

    m.def(
        "bounds_json",
        [](const Model& model, double volume, double epsilon, double t, double gamma) {
            const AugmentedNetwork aug(model.network, model.schema.value_or(StatusSchema{}));
            const FluidSolution sol = solve_fluid(model.network, model.initial, t);
            BoundInputs in;
            in.volume = volume;
            in.epsilon = epsilon;
            in.gamma = gamma;
            in.t = t;
            return to_json(evaluate_bounds(aug, sol, in)).dump();
        },
        py::arg("model"), py::arg("volume"), py::arg("epsilon"), py::arg("t"), py::arg("gamma") = 1.0);

    m.def(
        "run_json",
        [](const std::string& config_json) {
            const auto c = nlohmann::json::parse(config_json);
            ExperimentConfig config;
            config.mode = parse_mode(c.at("mode").get<std::string>());
            config.model_path = c.at("model").get<std::string>();
            config.volume = c.value("volume", config.volume);
            config.horizon = c.value("horizon", config.horizon);
            config.replications = c.value("replications", config.replications);
            config.seed = c.value("seed", config.seed);
            config.threads = c.value("threads", config.threads);
            config.grid = c.value("grid", config.grid);
            config.fluid_step = c.value("step", config.fluid_step);
            config.initial_status = c.value("initial_status", config.initial_status);
            config.status_subset = c.value("subset", config.status_subset);
            config.epsilon = c.value("epsilon", config.epsilon);
            config.gamma = c.value("gamma", config.gamma);
            config.nu1 = c.value("nu1", config.nu1);
            config.nu2 = c.value("nu2", config.nu2);
            config.nu3 = c.value("nu3", config.nu3);
            config.allocation = c.value("allocation", config.allocation);
            config.out_dir = c.value("out_dir", config.out_dir.string());
            if (c.contains("z")) config.z_star = c.at("z").get<Concentration>();
            if (c.contains("functional")) config.functional = parse_functional(c.at("functional").get<std::string>());
            return run(config).dump();
        },
        py::arg("config_json"));
}
