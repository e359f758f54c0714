#include "molfate/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "molfate/aggregate.hpp"
#include "molfate/error.hpp"
#include "molfate/model_io.hpp"
#include "molfate/singlemol.hpp"

namespace molfate {

namespace {

constexpr int kSamplesPerCell = 8;
constexpr double kE = std::numbers::e;

/// Fluid extremes on the cells covering [0, t], the last one cut at t.
struct CellGrid {
    std::vector<double> width;
    std::vector<Concentration> zmax;
    std::vector<Concentration> zmin;
    /// Path quantities need samples of Z itself.
    std::vector<std::vector<Concentration>> samples;

    std::size_t size() const noexcept { return width.size(); }
};

CellGrid make_cells(const FluidSolution& sol, double t) {
    CellGrid g;
    const std::size_t d = sol.dimension();
    const std::size_t last = sol.cells() == 0 ? 0 : sol.cell_of(t);
    for (std::size_t i = 0; i <= last; ++i) {
        const double a = sol.cells() == 0 ? 0.0 : sol.time(i);
        const double b = sol.cells() == 0 ? 0.0 : std::min(sol.time(i + 1), t);
        Concentration hi(d, -std::numeric_limits<double>::infinity());
        Concentration lo(d, std::numeric_limits<double>::infinity());
        std::vector<Concentration> pts;
        for (int j = 0; j <= kSamplesPerCell; ++j) {
            const double s = j == kSamplesPerCell ? b : a + (b - a) * j / kSamplesPerCell;
            Concentration z = sol.eval(s);
            for (std::size_t k = 0; k < d; ++k) {
                hi[k] = std::max(hi[k], z[k]);
                lo[k] = std::min(lo[k], z[k]);
            }
            pts.push_back(std::move(z));
        }
        g.width.push_back(std::max(0.0, b - a));
        g.zmax.push_back(std::move(hi));
        g.zmin.push_back(std::move(lo));
        g.samples.push_back(std::move(pts));
    }
    return g;
}

Concentration shifted(const Concentration& z, double by) {
    Concentration out(z);
    for (double& v : out) v = std::max(v + by, 0.0);
    return out;
}

/// Sum_S y_S z^{y - e_S}: the l1 norm of the gradient of z^y.
double gradient_l1(const Complex& y, const Concentration& z) {
    double sum = 0.0;
    for (const auto& term : y.terms()) {
        double part = term.count * std::pow(z[term.species], term.count - 1);
        for (const auto& other : y.terms())
            if (other.species != term.species) part *= std::pow(z[other.species], other.count);
        sum += part;
    }
    return sum;
}

/// prod_S prod_{j < y_S} (z_S + (j + shift_S) / V) - z^y, with shift 1 on
/// `shifted_species` and 0 elsewhere. Non-negative, non-decreasing in z, and an
/// upper bound for z^y - prod (z_S - (j + shift_S) / V).
double lattice_gap(const Complex& y, const Concentration& z, double volume,
                   std::optional<SpeciesIndex> shifted_species = std::nullopt) {
    double rising = 1.0;
    for (const auto& term : y.terms()) {
        const int shift = shifted_species && *shifted_species == term.species ? 1 : 0;
        for (int j = 0; j < term.count; ++j) rising *= z[term.species] + (j + shift) / volume;
    }
    return std::max(0.0, rising - monomial(y, z));
}

struct Series {
    std::vector<double> cell;

    double sup() const { return cell.empty() ? 0.0 : *std::max_element(cell.begin(), cell.end()); }
    /// Integral of the running supremum.
    double running_integral(const CellGrid& g) const {
        double run = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < cell.size(); ++i) {
            run = std::max(run, cell[i]);
            sum += run * g.width[i];
        }
        return sum;
    }
    double integral(const CellGrid& g) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < cell.size(); ++i) sum += cell[i] * g.width[i];
        return sum;
    }
};

struct BaseTube {
    double Lambda0, Lambda1, L0, L1, delta0, delta1;
};

BaseTube base_tube(const ReactionNetwork& net, const CellGrid& g, double radius, double volume) {
    Series lam, lip, gap;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Concentration hi = shifted(g.zmax[i], radius);
        double a = 0.0, b = 0.0, c = 0.0;
        for (const Reaction& r : net.reactions()) {
            a += r.rate_constant * monomial(r.reactant, hi);
            b += r.rate_constant * gradient_l1(r.reactant, hi);
            c += r.rate_constant * lattice_gap(r.reactant, hi, volume);
        }
        lam.cell.push_back(a);
        lip.cell.push_back(b);
        gap.cell.push_back(c);
    }
    return {lam.sup(), lam.running_integral(g), lip.sup(), lip.running_integral(g), gap.sup(),
            gap.running_integral(g)};
}

}  // namespace

double centered_poisson_bound(double horizon, double epsilon, double n) {
    if (!(horizon > 0.0 && epsilon > 0.0 && n >= 1.0))
        throw InvalidArgument("centered Poisson bound needs T > 0, eps > 0 and n >= 1");
    return 6.0 * std::exp(kE * horizon / 2.0 - epsilon * std::sqrt(n) / 3.0);
}

BoundQuantities tube_quantities(const AugmentedNetwork& aug, const TubeSpec& tube, double volume, double gamma) {
    if (tube.sol == nullptr) throw InvalidArgument("tube needs a fluid solution");
    const FluidSolution& sol = *tube.sol;
    const ReactionNetwork& net = aug.base();
    const StatusSchema& schema = aug.schema();
    if (!net.is_mass_action()) throw InvalidArgument("bounds require mass-action kinetics");
    if (!(tube.epsilon > 0.0)) throw InvalidArgument("tube radius must be positive");
    if (!(tube.t >= 0.0 && tube.t <= sol.horizon())) throw InvalidArgument("bound horizon outside the fluid solution");
    if (!(volume >= 1.0)) throw InvalidArgument("volume must be at least 1");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0, 1]");
    if (sol.dimension() != net.dimension()) throw InvalidArgument("fluid solution does not match the network");

    const double eps = tube.epsilon;
    BoundQuantities q;
    q.epsilon = eps;
    q.t = tube.t;
    q.volume = volume;
    q.gamma = gamma;

    const CellGrid g = make_cells(sol, tube.t);
    q.m = std::numeric_limits<double>::infinity();
    for (const auto& lo : g.zmin)
        for (double v : lo) q.m = std::min(q.m, v);

    const std::vector<int> alpha = status_multiplicity(schema, net.dimension());
    for (std::size_t r = 0; r < net.size(); ++r) {
        for (const auto& [s, c] : net.change(r)) {
            const double jump = std::abs(static_cast<double>(c));
            q.R = std::max(q.R, jump);
            if (alpha[s] > 0) q.R_hat = std::max(q.R_hat, jump);
        }
    }
    for (const TrackedReaction& tr : aug.tracked()) {
        const SpeciesIndex from = *schema.sigma(tr.from);
        if (tr.to != kCemetery && *schema.sigma(tr.to) == from) continue;
        double jump = 1.0 / alpha[from];
        if (tr.to != kCemetery) jump = std::max(jump, 1.0 / alpha[*schema.sigma(tr.to)]);
        q.r_hat = std::max(q.r_hat, jump);
    }

    const BaseTube one = base_tube(net, g, eps, volume);
    const BaseTube two = base_tube(net, g, 2.0 * eps, volume);
    const BaseTube four = base_tube(net, g, 4.0 * eps, volume);
    q.Lambda0 = one.Lambda0;
    q.Lambda1 = one.Lambda1;
    q.L0 = one.L0;
    q.L1 = one.L1;
    q.delta0 = one.delta0;
    q.delta1 = one.delta1;
    q.Lambda1_2eps = two.Lambda1;
    q.L1_2eps = two.L1;
    q.delta1_2eps = two.delta1;
    q.L1_4eps = four.L1;
    q.delta1_4eps = four.delta1;
    q.eta = std::exp(-two.L1) * gamma * eps - two.delta1;
    q.eta_2eps = std::exp(-four.L1) * gamma * 2.0 * eps - four.delta1;

    // Limit rates of the tracked molecule.
    const LimitRateTable table(aug);
    const auto& entries = table.entries();
    const std::size_t n_status = schema.size();
    auto entry_rate = [&](const LimitRateEntry& e, const Concentration& z) {
        return e.multiplier * net.reactions()[e.reaction].rate_constant * monomial(e.reduced, z);
    };

    q.tracked_available = true;
    for (std::size_t tau = 0; tau < n_status; ++tau) {
        const SpeciesIndex s = schema.statuses()[tau].species;
        for (const auto& lo : g.zmin)
            if (!(lo[s] - eps > 0.0)) q.tracked_available = false;
    }

    Series tilde_lambda, hat_lambda, norm;
    std::vector<Series> status_total(n_status);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double lam_max = 0.0, all_max = 0.0, norm_max = 0.0;
        std::vector<double> totals_max(n_status, 0.0);
        for (const Concentration& z : g.samples[i]) {
            std::vector<double> totals(n_status, 0.0);
            double all = 0.0;
            for (const LimitRateEntry& e : entries) {
                const double v = entry_rate(e, z);
                totals[static_cast<std::size_t>(e.from)] += v;
                all += v;
            }
            for (std::size_t tau = 0; tau < n_status; ++tau) totals_max[tau] = std::max(totals_max[tau], totals[tau]);
            lam_max = std::max(lam_max, *std::max_element(totals.begin(), totals.end()));
            all_max = std::max(all_max, all);
            norm_max = std::max(norm_max, *std::max_element(z.begin(), z.end()));
        }
        tilde_lambda.cell.push_back(lam_max);
        hat_lambda.cell.push_back(all_max);
        norm.cell.push_back(norm_max + eps);
        for (std::size_t tau = 0; tau < n_status; ++tau) status_total[tau].cell.push_back(totals_max[tau]);
    }

    // Pointwise values at Z(t).
    {
        const Concentration z = sol.eval(tube.t);
        std::vector<double> totals(n_status, 0.0);
        double all = 0.0;
        for (const LimitRateEntry& e : entries) {
            const double v = entry_rate(e, z);
            totals[static_cast<std::size_t>(e.from)] += v;
            all += v;
        }
        q.Lambda_tilde0 = n_status == 0 ? 0.0 : *std::max_element(totals.begin(), totals.end());
        q.Lambda_hat0 = q.r_hat * all;
    }
    q.Lambda_tilde1 = tilde_lambda.integral(g);
    q.Lambda_hat1 = q.r_hat * hat_lambda.integral(g);
    for (const Series& s : status_total) q.Lambda_hat2 = std::max(q.Lambda_hat2, s.integral(g));
    q.zeta = norm.integral(g);
    for (std::size_t s = 0; s < alpha.size(); ++s) q.c += alpha[s] * sol.values().front()[s];

    Series tilde_lip, tilde_gap, all_lip;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Concentration hi = shifted(g.zmax[i], eps);
        std::vector<double> lip(n_status, 0.0), gap(n_status, 0.0);
        double lip_all = 0.0;
        for (const LimitRateEntry& e : entries) {
            const double k = e.multiplier * net.reactions()[e.reaction].rate_constant;
            const double grad = k * gradient_l1(e.reduced, hi);
            lip[static_cast<std::size_t>(e.from)] += grad;
            lip_all += grad;
            gap[static_cast<std::size_t>(e.from)] += k * lattice_gap(e.reduced, hi, volume, *schema.sigma(e.from));
        }
        tilde_lip.cell.push_back(n_status == 0 ? 0.0 : *std::max_element(lip.begin(), lip.end()));
        tilde_gap.cell.push_back(n_status == 0 ? 0.0 : *std::max_element(gap.begin(), gap.end()));
        all_lip.cell.push_back(lip_all);
    }
    if (q.tracked_available) {
        q.L_tilde0 = tilde_lip.sup();
        q.L_tilde1 = tilde_lip.running_integral(g);
        q.delta_tilde0 = tilde_gap.sup();
        q.delta_tilde1 = tilde_gap.running_integral(g);
    }
    q.omega = q.r_hat * eps * all_lip.sup();
    // lambda^V(x) / V <= lambda(x / V) at lattice points, so the rate tube bounds it.
    q.Lambda_hat3 = one.Lambda1;
    return q;
}

ProbabilityBound make_probability_bound(double raw) {
    ProbabilityBound b;
    b.raw = raw;
    b.clamped = std::clamp(raw, 0.0, 1.0);
    b.vacuous = raw >= 1.0;
    return b;
}

ProbabilityBound p_bound(const BoundQuantities& q, double p0) {
    if (!(q.eta > 0.0) || !(q.eta_2eps > 0.0))
        throw BoundUnavailable("V too small for this bound: eta = " + format_double(q.eta) +
                               ", eta at 2 eps = " + format_double(q.eta_2eps));
    if (!(p0 >= 0.0)) throw InvalidArgument("p0 must be non-negative");
    double tail = 0.0;
    if (q.R > 0.0)
        tail = 6.0 * std::exp(kE / 2.0 * q.Lambda1_2eps + kE / 2.0 * q.delta1_2eps -
                              q.eta * std::sqrt(q.volume) / (3.0 * q.R));
    return make_probability_bound(p0 + tail);
}

ProbabilityBound single_molecule_bound(const BoundQuantities& q, double p_value) {
    if (!(q.epsilon < q.m))
        throw BoundUnavailable("tube radius " + format_double(q.epsilon) + " is not below the fluid minimum " +
                               format_double(q.m));
    if (!q.tracked_available) throw BoundUnavailable("tube touches the boundary for a status species");
    return make_probability_bound(p_value + (q.delta_tilde1 + q.epsilon * q.L_tilde1) * std::exp(2.0 * q.Lambda_tilde1));
}

AggregateBound aggregate_bound(const BoundQuantities& q, double nu1, double nu2, double nu3, double p_init,
                               double p_value) {
    if (!(nu1 > 0.0 && nu2 > 0.0 && nu3 >= 0.0)) throw InvalidArgument("nu1, nu2 must be positive and nu3 >= 0");
    if (!q.tracked_available) throw BoundUnavailable("tube touches the boundary for a status species");
    AggregateBound out;
    out.nu = std::exp(q.Lambda_hat1) *
             (q.R_hat * nu1 + q.r_hat * nu2 + nu3 + q.R_hat * q.delta1 + q.omega * q.zeta);
    const double root = std::sqrt(q.volume);
    const double raw = 6.0 * std::exp(kE * q.Lambda_hat3 / 2.0 - nu1 * root / 3.0) +
                       6.0 * std::exp(kE * q.c * q.Lambda_hat2 / 2.0 - nu2 * root / 3.0) + p_init + p_value;
    out.probability = make_probability_bound(raw);
    return out;
}

double sis_rough_bound(double kappa1, double kappa2, double mass, double epsilon, double t, double volume) {
    const double w = mass + 2.0 * epsilon;
    return 6.0 * std::exp(t / 2.0 * w * (kappa1 * w + kappa2) -
                          epsilon * std::sqrt(volume) / 6.0 * std::exp(-t * (kappa1 * w - kappa2)));
}

double sis_rough_bound_corrected(double kappa1, double kappa2, double mass, double epsilon, double t, double volume) {
    const double w = mass + 2.0 * epsilon;
    const double lipschitz = kappa1 * (mass + 4.0 * epsilon) + kappa2;
    return 6.0 * std::exp(kE * t / 2.0 * w * (kappa1 * w + kappa2) -
                          epsilon * std::sqrt(volume) / 3.0 * std::exp(-t * lipschitz));
}

BoundReport evaluate_bounds(const AugmentedNetwork& aug, const FluidSolution& sol, const BoundInputs& inputs) {
    BoundReport report;
    report.inputs = inputs;
    if (report.inputs.t == 0.0) report.inputs.t = sol.horizon();
    report.quantities = tube_quantities(aug, {&sol, inputs.epsilon, report.inputs.t}, inputs.volume, inputs.gamma);
    const BoundQuantities& q = report.quantities;

    try {
        report.p = p_bound(q, inputs.p0);
    } catch (const BoundUnavailable& e) {
        report.unavailable.emplace_back("p_bound", e.what());
        return report;
    }
    try {
        report.single = single_molecule_bound(q, report.p->raw);
    } catch (const BoundUnavailable& e) {
        report.unavailable.emplace_back("single_bound", e.what());
    }
    if (inputs.nu1 > 0.0 && inputs.nu2 > 0.0) {
        try {
            report.aggregate = aggregate_bound(q, inputs.nu1, inputs.nu2, inputs.nu3, inputs.p_init, report.p->raw);
        } catch (const BoundUnavailable& e) {
            report.unavailable.emplace_back("aggregate_bound", e.what());
        }
    } else {
        report.unavailable.emplace_back("aggregate_bound", "nu1 and nu2 not given");
    }
    return report;
}

nlohmann::json to_json(const BoundQuantities& q) {
    nlohmann::json j;
    j["epsilon"] = q.epsilon;
    j["t"] = q.t;
    j["V"] = q.volume;
    j["gamma"] = q.gamma;
    j["m"] = q.m;
    j["R"] = q.R;
    j["R_hat"] = q.R_hat;
    j["r_hat"] = q.r_hat;
    j["Lambda0"] = q.Lambda0;
    j["Lambda1"] = q.Lambda1;
    j["L0"] = q.L0;
    j["L1"] = q.L1;
    j["delta0"] = q.delta0;
    j["delta1"] = q.delta1;
    j["Lambda1_2eps"] = q.Lambda1_2eps;
    j["L1_2eps"] = q.L1_2eps;
    j["delta1_2eps"] = q.delta1_2eps;
    j["L1_4eps"] = q.L1_4eps;
    j["delta1_4eps"] = q.delta1_4eps;
    j["eta"] = q.eta;
    j["eta_2eps"] = q.eta_2eps;
    j["tracked_available"] = q.tracked_available;
    j["Lambda_tilde0"] = q.Lambda_tilde0;
    j["Lambda_tilde1"] = q.Lambda_tilde1;
    j["L_tilde0"] = q.L_tilde0;
    j["L_tilde1"] = q.L_tilde1;
    j["delta_tilde0"] = q.delta_tilde0;
    j["delta_tilde1"] = q.delta_tilde1;
    j["omega"] = q.omega;
    j["zeta"] = q.zeta;
    j["c"] = q.c;
    j["Lambda_hat0"] = q.Lambda_hat0;
    j["Lambda_hat1"] = q.Lambda_hat1;
    j["Lambda_hat2"] = q.Lambda_hat2;
    j["Lambda_hat3"] = q.Lambda_hat3;
    return j;
}

namespace {

nlohmann::json to_json(const ProbabilityBound& b) {
    return {{"raw", b.raw}, {"clamped", b.clamped}, {"vacuous", b.vacuous}};
}

}  // namespace

nlohmann::json to_json(const BoundReport& report) {
    nlohmann::json j;
    const BoundInputs& in = report.inputs;
    j["inputs"] = {{"V", in.volume}, {"epsilon", in.epsilon}, {"gamma", in.gamma}, {"t", in.t},
                   {"nu1", in.nu1},   {"nu2", in.nu2},         {"nu3", in.nu3},     {"p0", in.p0},
                   {"p_init", in.p_init}};
    j["quantities"] = to_json(report.quantities);
    j["integration"] = "upper Riemann sums of per-cell corner suprema on the fluid grid";
    j["p_bound"] = report.p ? to_json(*report.p) : nlohmann::json(nullptr);
    j["single_bound"] = report.single ? to_json(*report.single) : nlohmann::json(nullptr);
    if (report.aggregate)
        j["aggregate_bound"] = {{"nu", report.aggregate->nu}, {"probability", to_json(report.aggregate->probability)}};
    else
        j["aggregate_bound"] = nullptr;
    nlohmann::json missing = nlohmann::json::object();
    for (const auto& [name, why] : report.unavailable) missing[name] = why;
    j["unavailable"] = missing;
    return j;
}

BoundSearchResult search_p_bound(const AugmentedNetwork& aug, const FluidSolution& sol, double volume, double t,
                                 const std::vector<double>& epsilons, const std::vector<double>& gammas) {
    std::optional<BoundSearchResult> best;
    for (double eps : epsilons) {
        for (double gamma : gammas) {
            const BoundQuantities q = tube_quantities(aug, {&sol, eps, t}, volume, gamma);
            if (!(q.eta > 0.0 && q.eta_2eps > 0.0)) continue;
            const ProbabilityBound p = p_bound(q);
            if (!best || p.raw < best->p.raw) best = BoundSearchResult{eps, gamma, p};
        }
    }
    if (!best) throw BoundUnavailable("no grid point satisfies eta > 0");
    return *best;
}

}  // namespace molfate
