#include "molfate/aggregate.hpp"

#include <cmath>

#include "molfate/error.hpp"
#include "molfate/parallel.hpp"

namespace molfate {

std::vector<SubconservationViolation> check_subconservative(const ReactionNetwork& net, const StatusSchema& schema) {
    bool exact = true;
    for (const auto& t : schema.transforms()) exact = exact && t.exact.has_value();

    std::vector<SubconservationViolation> out;
    for (std::size_t r = 0; r < net.size(); ++r) {
        const Reaction& rx = net.reactions()[r];
        for (StatusId to = 0; to < static_cast<StatusId>(schema.size()); ++to) {
            const int required = rx.product[*schema.sigma(to)];
            double inflow = 0.0;
            Rational exact_inflow(0);
            for (const auto& t : schema.transforms()) {
                if (t.reaction != r || t.to != to) continue;
                const int y = rx.reactant[*schema.sigma(t.from)];
                inflow += y * t.probability;
                if (exact) exact_inflow = exact_inflow + Rational(y) * *t.exact;
            }
            const bool ok = exact ? exact_inflow == Rational(required)
                                  : std::abs(inflow - required) <= kRowSumTolerance;
            if (!ok) out.push_back({r, to, inflow, static_cast<double>(required)});
        }
    }
    return out;
}

std::vector<int> status_multiplicity(const StatusSchema& schema, std::size_t species) {
    std::vector<int> alpha(species, 0);
    for (const auto& st : schema.statuses()) ++alpha.at(st.species);
    return alpha;
}

double tracked_mass(const std::vector<int>& alpha, std::span<const Count> x) {
    double mass = 0.0;
    for (std::size_t s = 0; s < alpha.size(); ++s)
        if (alpha[s] > 0) mass += static_cast<double>(alpha[s]) * static_cast<double>(x[s]);
    return mass;
}

std::vector<Count> initial_counts(const StatusSchema& schema, const Concentration& z_star, double volume,
                                  InitialAllocation allocation) {
    const State scaled = scaled_initial_state(z_star, volume);
    std::vector<Count> counts(schema.size(), 0);
    if (allocation == InitialAllocation::PerStatus) {
        for (std::size_t tau = 0; tau < schema.size(); ++tau) counts[tau] = scaled.at(schema.statuses()[tau].species);
        return counts;
    }
    std::vector<int> chosen(z_star.size(), -1);
    std::vector<bool> flagged(z_star.size(), false);
    for (std::size_t tau = 0; tau < schema.size(); ++tau) {
        const Status& st = schema.statuses()[tau];
        if (st.initial) {
            if (flagged[st.species]) throw InvalidArgument("several statuses of one species are flagged initial");
            flagged[st.species] = true;
            chosen[st.species] = static_cast<int>(tau);
        } else if (chosen[st.species] < 0) {
            chosen[st.species] = static_cast<int>(tau);
        }
    }
    for (std::size_t s = 0; s < chosen.size(); ++s)
        if (chosen[s] >= 0) counts[static_cast<std::size_t>(chosen[s])] = scaled[s];
    return counts;
}

AggregateEnsemble build_aggregate(const SingleMoleculeSimulator& sim, const Concentration& z_star, double volume,
                                  double horizon, std::uint64_t seed, const AggregateOptions& options) {
    const StatusSchema& schema = sim.table().schema();
    if (z_star.size() != sim.table().network().dimension())
        throw InvalidArgument("z* has the wrong dimension");
    if (!(volume > 0.0)) throw InvalidArgument("volume must be positive");
    if (!check_subconservative(sim.table().network(), schema).empty())
        throw ModelError("aggregate approximation needs a sub-conservative tracking schema");

    AggregateEnsemble ens;
    ens.volume = volume;
    ens.schema = &schema;
    ens.alpha = status_multiplicity(schema, z_star.size());
    ens.counts0 = initial_counts(schema, z_star, volume, options.allocation);

    std::vector<StatusId> start;
    for (std::size_t tau = 0; tau < schema.size(); ++tau)
        start.insert(start.end(), static_cast<std::size_t>(ens.counts0[tau]), static_cast<StatusId>(tau));
    ens.paths.resize(start.size());
    parallel_for(start.size(), options.threads, [&](std::size_t i) {
        ens.paths[i] = sim.simulate(start[i], horizon, seed, options.stream_offset + i);
    });
    return ens;
}

std::vector<std::vector<double>> aggregate_trajectory(const AggregateEnsemble& ens, const std::vector<double>& grid) {
    if (ens.schema == nullptr) throw InvalidArgument("aggregate ensemble has no schema");
    const StatusSchema& schema = *ens.schema;
    std::vector<double> weight(schema.size());
    for (std::size_t tau = 0; tau < schema.size(); ++tau)
        weight[tau] = 1.0 / (ens.alpha[schema.statuses()[tau].species] * ens.volume);

    std::vector<std::vector<double>> rows(grid.size(), std::vector<double>(ens.alpha.size(), 0.0));
    for (const StatusPath& path : ens.paths) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const StatusId tau = path.at(grid[g]);
            if (tau == kCemetery) continue;
            rows[g][schema.statuses()[static_cast<std::size_t>(tau)].species] += weight[static_cast<std::size_t>(tau)];
        }
    }
    return rows;
}

}  // namespace molfate
