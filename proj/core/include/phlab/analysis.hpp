#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phlab/foliation.hpp"

namespace phlab {

/// Finite-time rates of the time-changed flow over one step of length T,
/// measured on the transported invariant frame at x. Conventions: nu is the
/// stable contraction factor, nu_hat the reciprocal unstable expansion
/// factor, gamma / gamma_hat the center factor and its reciprocal, so
/// partial hyperbolicity reads nu < gamma <= 1/gamma_hat < 1/nu_hat and
/// center bunching reads nu < gamma*gamma_hat and nu_hat < gamma*gamma_hat.
struct RateReport {
    double nu = 0.0;
    double nu_hat = 0.0;
    double gamma = 0.0;
    double gamma_hat = 0.0;
    double alpha = 0.0;   // original-flow time traveled during the step
    long crossings = 0;
    /// |measured center factor - tau(x)/tau(x_T)|; the center direction is
    /// the flow generator, so the factor has a closed form to check against.
    double center_defect = 0.0;
};
RateReport finite_time_rates(const CatSuspension& m, const TimeChange& tau, const PhasePoint& x,
                             double T, double tol);

/// Ensemble statistics of the finite-time rates over Haar-random points.
struct BunchingReport {
    int n = 0;
    double frac_contracting = 0.0;  // nu < 1 and nu_hat < 1
    double frac_chain = 0.0;        // nu < gamma and 1/gamma_hat < 1/nu_hat
    double frac_bunched = 0.0;      // nu, nu_hat < gamma*gamma_hat
    double mean_log_nu = 0.0;
    double mean_log_nu_hat = 0.0;
    double mean_alpha = 0.0;
    double max_center_defect = 0.0;
};
BunchingReport center_bunching_check(const CatSuspension& m, const TimeChange& tau, double T,
                                     int n_samples, Rng& rng, double tol);

/// Observables that are globally smooth on the suspension: pure roof
/// harmonics (the seam identification fixes the roof mod 1) and windowed
/// base harmonics that vanish at the seam.
enum class Observable { one, roof_cos, roof_sin, bump10, bump11, bump1m1 };

double observe(Observable f, const PhasePoint& p);
std::string_view observable_name(Observable f);
std::optional<Observable> observable_from(std::string_view name);

struct Estimate {
    double value = 0.0;
    double sem = 0.0;
};

/// Correlation of f and g o flow_t under the invariant measure of the
/// time-changed flow, by importance sampling from Haar with the invariant
/// density as weight. Self-normalized; sem is the standard error of the
/// weighted covariance terms.
Estimate correlation(const CatSuspension& m, const TimeChange& tau, Observable f, Observable g,
                     double t, int n_samples, Rng& rng, double tol);

/// correlation() over a grid of times with one common sample set, advanced
/// incrementally through the flow (the cocycle property makes successive
/// times cheap). Times are processed in increasing order.
struct CorrelationSeries {
    std::vector<double> times;
    std::vector<Estimate> values;
};
CorrelationSeries mixing_profile(const CatSuspension& m, const TimeChange& tau, Observable f,
                                 Observable g, std::span<const double> times, int n_samples,
                                 Rng& rng, double tol);

/// Orbit average (1/T) int_0^T f(flow_tau_t x) dt, evaluated by the time
/// substitution that turns it into a weighted orbit integral of the
/// unchanged flow: (1/T) int_0^{alpha(x,T)} f(g_r x) tau(g_r x) dr.
struct BirkhoffResult {
    double value = 0.0;
    double err_bound = 0.0;
    double alpha = 0.0;
};
BirkhoffResult birkhoff_average(const CatSuspension& m, const TimeChange& tau, Observable f,
                                const PhasePoint& x, double T, double tol);

}  // namespace phlab
