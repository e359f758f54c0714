#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "molfate/fluid.hpp"
#include "molfate/network.hpp"

namespace molfate {

/// 6 exp(e T / 2 - eps sqrt(n) / 3): bound on P(sup_{t <= nT} |N(t) - t| / n > eps)
/// for a unit Poisson process N. Raw value, may exceed 1.
double centered_poisson_bound(double horizon, double epsilon, double n);

/// Tube {Z(u) + h : u <= t, |h|_inf <= epsilon} around a fluid solution.
struct TubeSpec {
    const FluidSolution* sol = nullptr;
    double epsilon = 0.0;
    double t = 0.0;
};

/// Suprema over the tube are taken at the upper corner Z(u) + epsilon of each
/// grid cell (mass-action monomials and their gradients are coordinate-wise
/// non-decreasing); integrals are upper Riemann sums of the per-cell suprema.
/// Quantities named *_2eps and *_4eps are the same quantity on the wider tube.
struct BoundQuantities {
    double epsilon = 0.0;
    double t = 0.0;
    double volume = 1.0;
    double gamma = 1.0;
    /// min over species and [0, t] of Z.
    double m = 0.0;

    double R = 0.0;
    double R_hat = 0.0;
    double r_hat = 0.0;

    double Lambda0 = 0.0, Lambda1 = 0.0;
    double L0 = 0.0, L1 = 0.0;
    double delta0 = 0.0, delta1 = 0.0;
    double Lambda1_2eps = 0.0, L1_2eps = 0.0, delta1_2eps = 0.0;
    double L1_4eps = 0.0, delta1_4eps = 0.0;
    /// e^{-L1(2eps)} gamma eps - delta1(2eps).
    double eta = 0.0;
    /// The same at 2 eps: e^{-L1(4eps)} 2 gamma eps - delta1(4eps).
    double eta_2eps = 0.0;

    /// False when Z_sigma(tau) - epsilon <= 0 somewhere for a status species.
    bool tracked_available = false;
    double Lambda_tilde0 = 0.0, Lambda_tilde1 = 0.0;
    double L_tilde0 = 0.0, L_tilde1 = 0.0;
    double delta_tilde0 = 0.0, delta_tilde1 = 0.0;

    double omega = 0.0;
    double zeta = 0.0;
    double c = 0.0;
    double Lambda_hat0 = 0.0, Lambda_hat1 = 0.0, Lambda_hat2 = 0.0, Lambda_hat3 = 0.0;
};

/// Evaluates every tube quantity for mass-action networks at radius
/// tube.epsilon over [0, tube.t]. Kinetics discrepancies compare
/// lambda^V(x) / V with lambda(x / V) at lattice points x / V of the tube.
BoundQuantities tube_quantities(const AugmentedNetwork& aug, const TubeSpec& tube, double volume, double gamma = 1.0);

struct ProbabilityBound {
    double raw = 0.0;
    double clamped = 0.0;
    bool vacuous = false;
};

ProbabilityBound make_probability_bound(double raw);

/// p0 + 6 exp(e Lambda1(2eps) / 2 + e delta1(2eps) / 2 - eta sqrt(V) / (3R)),
/// where p0 bounds P(|X(0)/V - z*| > (1 - gamma) eps e^{-L1(2eps)}).
/// Throws BoundUnavailable when eta or eta_2eps is not positive.
ProbabilityBound p_bound(const BoundQuantities& q, double p0 = 0.0);

/// Bound on sup_t P(Y^V(t) != Y(t)): p + (delta~1 + eps L~1) e^{2 Lambda~1}.
/// Throws BoundUnavailable when eps >= m or the tracked quantities are missing.
ProbabilityBound single_molecule_bound(const BoundQuantities& q, double p_value);

struct AggregateBound {
    double nu = 0.0;
    ProbabilityBound probability;
};

/// Deviation level nu and the bound on P(sup_t |pi(X^V)/V - X~^V/V| > nu).
AggregateBound aggregate_bound(const BoundQuantities& q, double nu1, double nu2, double nu3, double p_init,
                               double p_value);

/// Closed form for SIS with conserved mass |z*|_1 as printed alongside the
/// generic bound (gamma = 1, exact initial state).
double sis_rough_bound(double kappa1, double kappa2, double mass, double epsilon, double t, double volume);

/// The same closed form rederived from the generic bound with R = 1, the factor
/// e on the Poisson term and Lipschitz constant kappa1 (mass + 4 eps) + kappa2.
double sis_rough_bound_corrected(double kappa1, double kappa2, double mass, double epsilon, double t, double volume);

struct BoundInputs {
    double volume = 1.0;
    double epsilon = 0.0;
    double gamma = 1.0;
    /// Horizon of the bound; 0 selects the fluid horizon.
    double t = 0.0;
    /// Aggregate levels; the aggregate bound is skipped when nu1 or nu2 is 0.
    double nu1 = 0.0, nu2 = 0.0, nu3 = 0.0;
    double p0 = 0.0;
    double p_init = 0.0;
};

struct BoundReport {
    BoundInputs inputs;
    BoundQuantities quantities;
    std::optional<ProbabilityBound> p;
    std::optional<ProbabilityBound> single;
    std::optional<AggregateBound> aggregate;
    /// Why a bound is missing, keyed by bound name.
    std::vector<std::pair<std::string, std::string>> unavailable;
};

/// All bounds for one set of inputs; bounds whose hypotheses fail are listed
/// in `unavailable` instead of thrown.
BoundReport evaluate_bounds(const AugmentedNetwork& aug, const FluidSolution& sol, const BoundInputs& inputs);

nlohmann::json to_json(const BoundQuantities& q);
nlohmann::json to_json(const BoundReport& report);

struct BoundSearchResult {
    double epsilon = 0.0;
    double gamma = 0.0;
    ProbabilityBound p;
};

/// Smallest p_bound over the (epsilon, gamma) grid, p0 = 0. Throws
/// BoundUnavailable when no grid point satisfies the hypotheses.
BoundSearchResult search_p_bound(const AugmentedNetwork& aug, const FluidSolution& sol, double volume, double t,
                                 const std::vector<double>& epsilons, const std::vector<double>& gammas);

}  // namespace molfate
