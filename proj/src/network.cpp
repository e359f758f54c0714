#include "molfate/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "molfate/error.hpp"

namespace molfate {

// ---------------------------------------------------------------------------
// Complex

Complex::Complex(const std::map<SpeciesIndex, int>& coefficients) {
    for (const auto& [species, count] : coefficients) {
        if (count < 0) throw ModelError("negative stoichiometric coefficient");
        if (count == 0) continue;
        terms_.push_back({species, count});
        order_ += count;
    }
}

int Complex::operator[](SpeciesIndex s) const noexcept {
    for (const auto& t : terms_)
        if (t.species == s) return t.count;
    return 0;
}

std::vector<SpeciesIndex> Complex::support() const {
    std::vector<SpeciesIndex> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back(t.species);
    return out;
}

// ---------------------------------------------------------------------------
// ReactionNetwork

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
    const std::size_t d = species_.size();
    changes_.reserve(reactions_.size());
    for (std::size_t r = 0; r < reactions_.size(); ++r) {
        auto& rx = reactions_[r];
        if (rx.label.empty()) rx.label = "r" + std::to_string(r + 1);
        std::map<SpeciesIndex, Count> delta;
        for (const auto& t : rx.reactant.terms()) {
            if (t.species >= d) throw ModelError("reaction " + rx.label + " refers to unknown species index");
            delta[t.species] -= t.count;
        }
        for (const auto& t : rx.product.terms()) {
            if (t.species >= d) throw ModelError("reaction " + rx.label + " refers to unknown species index");
            delta[t.species] += t.count;
        }
        std::vector<std::pair<SpeciesIndex, Count>> sparse;
        for (const auto& [s, c] : delta)
            if (c != 0) sparse.emplace_back(s, c);
        changes_.push_back(std::move(sparse));
    }
}

std::optional<SpeciesIndex> ReactionNetwork::species_index(std::string_view name) const {
    for (std::size_t i = 0; i < species_.size(); ++i)
        if (species_[i] == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> ReactionNetwork::reaction_index(std::string_view label) const {
    for (std::size_t i = 0; i < reactions_.size(); ++i)
        if (reactions_[i].label == label) return i;
    return std::nullopt;
}

ReactionNetwork ReactionNetwork::with_custom_kinetics(CustomKinetics kinetics) const {
    if (!kinetics.stochastic || !kinetics.deterministic)
        throw ModelError("custom kinetics needs both stochastic and deterministic rate functions");
    ReactionNetwork copy = *this;
    copy.custom_ = std::move(kinetics);
    return copy;
}

std::vector<std::string> validate_network(const ReactionNetwork& net) {
    std::vector<std::string> violations;
    std::set<std::string> seen;
    for (const auto& name : net.species())
        if (!seen.insert(name).second) violations.push_back("duplicate species '" + name + "'");

    std::set<std::string> labels;
    std::vector<bool> used(net.dimension(), false);
    for (const auto& rx : net.reactions()) {
        if (!labels.insert(rx.label).second) violations.push_back("duplicate reaction label '" + rx.label + "'");
        if (!(rx.rate_constant > 0.0) || !std::isfinite(rx.rate_constant))
            violations.push_back("reaction '" + rx.label + "' has non-positive rate constant");
        if (rx.reactant == rx.product) violations.push_back("reaction '" + rx.label + "' is a self-loop");
        for (const auto& t : rx.reactant.terms()) used[t.species] = true;
        for (const auto& t : rx.product.terms()) used[t.species] = true;
    }
    for (std::size_t s = 0; s < net.dimension(); ++s)
        if (!used[s]) violations.push_back("unused species '" + net.species()[s] + "'");
    return violations;
}

double falling_factorial(const Complex& y, std::span<const Count> x) {
    double value = 1.0;
    for (const auto& t : y.terms()) {
        const Count xs = x[t.species];
        if (xs < t.count) return 0.0;
        for (int j = 0; j < t.count; ++j) value *= static_cast<double>(xs - j);
    }
    return value;
}

double monomial(const Complex& y, std::span<const double> z) {
    double value = 1.0;
    for (const auto& t : y.terms()) {
        const double zs = z[t.species];
        switch (t.count) {
            case 1: value *= zs; break;
            case 2: value *= zs * zs; break;
            default: value *= std::pow(zs, t.count);
        }
    }
    return value;
}

double stochastic_intensity(const ReactionNetwork& net, std::size_t r, std::span<const Count> x, double volume) {
    if (const auto* custom = net.custom_kinetics()) return custom->stochastic(r, x, volume);
    const Reaction& rx = net.reactions()[r];
    const double ff = falling_factorial(rx.reactant, x);
    if (ff == 0.0) return 0.0;
    const int order = rx.reactant.order();
    double scale = 1.0;
    if (order == 2)
        scale = 1.0 / volume;
    else if (order != 1)
        scale = std::pow(volume, 1 - order);
    return rx.rate_constant * scale * ff;
}

double deterministic_rate(const ReactionNetwork& net, std::size_t r, std::span<const double> z) {
    if (const auto* custom = net.custom_kinetics()) return custom->deterministic(r, z);
    const Reaction& rx = net.reactions()[r];
    return rx.rate_constant * monomial(rx.reactant, z);
}

// ---------------------------------------------------------------------------
// StatusSchema

StatusSchema::StatusSchema(std::vector<Status> statuses, std::vector<Transform> transforms)
    : statuses_(std::move(statuses)), transforms_(std::move(transforms)) {}

std::optional<SpeciesIndex> StatusSchema::sigma(StatusId tau) const {
    if (tau == kCemetery) return std::nullopt;
    return statuses_.at(static_cast<std::size_t>(tau)).species;
}

std::optional<StatusId> StatusSchema::status_index(std::string_view name) const {
    for (std::size_t i = 0; i < statuses_.size(); ++i)
        if (statuses_[i].name == name) return static_cast<StatusId>(i);
    return std::nullopt;
}

std::string StatusSchema::status_name(StatusId tau) const {
    if (tau == kCemetery) return "Delta";
    return statuses_.at(static_cast<std::size_t>(tau)).name;
}

double StatusSchema::probability(std::size_t reaction, StatusId from, StatusId to) const {
    for (const auto& t : transforms_)
        if (t.reaction == reaction && t.from == from && t.to == to) return t.probability;
    return 0.0;
}

std::vector<std::string> validate_schema(const ReactionNetwork& net, const StatusSchema& schema) {
    std::vector<std::string> violations;
    const auto n_status = static_cast<StatusId>(schema.size());

    std::set<std::string> names;
    for (const auto& st : schema.statuses()) {
        if (!names.insert(st.name).second) violations.push_back("duplicate status '" + st.name + "'");
        if (st.name == "Delta") violations.push_back("status name 'Delta' is reserved for the cemetery");
        if (st.species >= net.dimension()) violations.push_back("status '" + st.name + "' maps to an unknown species");
    }
    if (!violations.empty()) return violations;

    auto label = [&](const Transform& t) {
        return net.reactions()[t.reaction].label + ": " + schema.status_name(t.from) + " -> " +
               schema.status_name(t.to);
    };

    std::set<std::tuple<std::size_t, StatusId, StatusId>> seen;
    for (const auto& t : schema.transforms()) {
        if (t.reaction >= net.size()) {
            violations.push_back("transform refers to an unknown reaction");
            continue;
        }
        if (t.from < 0 || t.from >= n_status || t.to < kCemetery || t.to >= n_status) {
            violations.push_back("transform refers to an unknown status");
            continue;
        }
        if (!seen.insert({t.reaction, t.from, t.to}).second) violations.push_back("duplicate transform " + label(t));
        if (!(t.probability >= 0.0 && t.probability <= 1.0))
            violations.push_back("probability outside [0,1] for " + label(t));
        if (t.probability > 0.0) {
            const Reaction& rx = net.reactions()[t.reaction];
            if (rx.reactant[*schema.sigma(t.from)] == 0)
                violations.push_back("source species not consumed by reaction for " + label(t));
            if (t.to != kCemetery && rx.product[*schema.sigma(t.to)] == 0)
                violations.push_back("destination species not produced by reaction for " + label(t));
        }
    }
    if (!violations.empty()) return violations;

    for (std::size_t r = 0; r < net.size(); ++r) {
        const Reaction& rx = net.reactions()[r];
        for (StatusId tau = 0; tau < n_status; ++tau) {
            if (rx.reactant[*schema.sigma(tau)] == 0) continue;
            double sum = 0.0;
            bool all_exact = true;
            Rational exact_sum(0);
            for (const auto& t : schema.transforms()) {
                if (t.reaction != r || t.from != tau) continue;
                sum += t.probability;
                if (t.exact)
                    exact_sum = exact_sum + *t.exact;
                else
                    all_exact = false;
            }
            const bool ok = all_exact ? exact_sum == Rational(1) : std::abs(sum - 1.0) <= kRowSumTolerance;
            if (!ok) {
                std::ostringstream msg;
                msg << "row " << rx.label << ": " << schema.status_name(tau) << " does not sum to 1 (sum = " << sum
                    << ")";
                violations.push_back(msg.str());
            }
        }
    }
    return violations;
}

double theta(const Complex& y, std::optional<SpeciesIndex> species, std::span<const Count> x) {
    if (!species) return 0.0;
    const int ys = y[*species];
    const Count xs = x[*species];
    if (ys >= 1 && xs >= ys) return static_cast<double>(ys) / static_cast<double>(xs);
    return 0.0;
}

// ---------------------------------------------------------------------------
// AugmentedNetwork

AugmentedNetwork::AugmentedNetwork(ReactionNetwork net, StatusSchema schema)
    : net_(std::move(net)), schema_(std::move(schema)) {
    auto violations = validate_network(net_);
    auto schema_violations = validate_schema(net_, schema_);
    violations.insert(violations.end(), schema_violations.begin(), schema_violations.end());
    if (!violations.empty()) {
        std::string msg = "invalid tracking model:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw ModelError(msg);
    }
    const std::size_t n_status = schema_.size();
    outcome_index_.assign(net_.size() * n_status, {});
    for (const auto& t : schema_.transforms()) {
        if (t.probability <= 0.0) continue;
        outcome_index_[t.reaction * n_status + static_cast<std::size_t>(t.from)].push_back(tracked_.size());
        tracked_.push_back({t.from, t.to, t.reaction, t.probability});
    }
}

std::span<const std::size_t> AugmentedNetwork::outcomes(std::size_t reaction, StatusId from) const {
    if (from == kCemetery) return {};
    return outcome_index_.at(reaction * schema_.size() + static_cast<std::size_t>(from));
}

double AugmentedNetwork::tracked_intensity(std::size_t k, StatusId current, std::span<const Count> x,
                                           double volume) const {
    const TrackedReaction& tr = tracked_.at(k);
    if (current != tr.from) return 0.0;
    const Reaction& rx = net_.reactions()[tr.reaction];
    const double th = theta(rx.reactant, schema_.sigma(tr.from), x);
    if (th == 0.0) return 0.0;
    return th * tr.probability * stochastic_intensity(net_, tr.reaction, x, volume);
}

double AugmentedNetwork::untracked_intensity(std::size_t reaction, StatusId current, std::span<const Count> x,
                                             double volume) const {
    const Reaction& rx = net_.reactions()[reaction];
    const double th = theta(rx.reactant, schema_.sigma(current), x);
    return (1.0 - th) * stochastic_intensity(net_, reaction, x, volume);
}

AugmentedNetwork build_augmented(const ReactionNetwork& net, const StatusSchema& schema) {
    return AugmentedNetwork(net, schema);
}

}  // namespace molfate
