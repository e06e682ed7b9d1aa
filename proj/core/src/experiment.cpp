#include "phlab/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <utility>

#include "json.hpp"

namespace phlab {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    std::array<char, 32> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed,
                  const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& key = it.key();
        if (std::none_of(allowed.begin(), allowed.end(),
                         [&](std::string_view a) { return a == key; }))
            throw ConfigError("unknown key \"" + key + "\" in " + where);
    }
}

BumpTerm parse_bump(const json& j, const char* where) {
    if (!j.is_object()) throw ConfigError(std::string("entries of ") + where + " must be objects");
    require_keys(j, {"eps", "k", "phase"}, where);
    if (!j.contains("eps") || !j.contains("k"))
        throw ConfigError(std::string(where) + " entries need \"eps\" and \"k\"");
    BumpTerm b;
    b.eps = j.at("eps").get<double>();
    const json& k = j.at("k");
    if (!k.is_array() || k.size() != 2 || !k.at(0).is_number_integer() ||
        !k.at(1).is_number_integer())
        throw ConfigError(std::string("\"k\" must be two integers in ") + where);
    b.k = {k.at(0).get<int>(), k.at(1).get<int>()};
    b.phase = j.value("phase", 0.0);
    return b;
}

TimeChange parse_tau(const json& j) {
    if (!j.is_object()) throw ConfigError("\"tau\" must be an object");
    require_keys(j, {"c0", "bumps", "cobounds"}, "tau");
    if (!j.contains("c0")) throw ConfigError("\"tau\" needs \"c0\"");
    const double c0 = j.at("c0").get<double>();
    std::vector<BumpTerm> bumps, cobounds;
    if (j.contains("bumps"))
        for (const json& b : j.at("bumps")) bumps.push_back(parse_bump(b, "tau.bumps"));
    if (j.contains("cobounds"))
        for (const json& b : j.at("cobounds")) cobounds.push_back(parse_bump(b, "tau.cobounds"));
    try {
        return TimeChange(c0, std::move(bumps), std::move(cobounds));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

constexpr std::string_view kConfigKeys[] = {"experiment", "model", "tau",     "seed",
                                            "tol",        "t_max", "samples", "out"};

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    require_keys(j, {kConfigKeys[0], kConfigKeys[1], kConfigKeys[2], kConfigKeys[3],
                     kConfigKeys[4], kConfigKeys[5], kConfigKeys[6], kConfigKeys[7]},
                 "config");
    ExperimentConfig cfg;
    try {
        if (!j.contains("experiment")) throw ConfigError("config needs \"experiment\"");
        cfg.experiment = j.at("experiment").get<std::string>();
        if (j.contains("model")) cfg.model = j.at("model").get<std::string>();
        if (j.contains("tau")) cfg.tau = parse_tau(j.at("tau"));
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned())
                throw ConfigError("\"seed\" must be a non-negative integer");
            cfg.seed = j.at("seed").get<std::uint64_t>();
        }
        if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
        if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
        if (j.contains("samples")) {
            if (!j.at("samples").is_number_integer() && !j.at("samples").is_number_unsigned())
                throw ConfigError("\"samples\" must be an integer");
            cfg.samples = j.at("samples").get<int>();
        }
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    if (cfg.model != "cat_suspension")
        throw ConfigError("unknown model \"" + cfg.model + "\"");
    const auto known = list_experiments();
    if (std::none_of(known.begin(), known.end(),
                     [&](const ExperimentInfo& e) { return e.name == cfg.experiment; }))
        throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
    if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol))
        throw ConfigError("\"tol\" must be positive");
    if (!std::isfinite(cfg.t_max)) throw ConfigError("\"t_max\" must be finite");
    if (cfg.samples < 1) throw ConfigError("\"samples\" must be >= 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read config file " + path.string());
    return parse_config(text);
}

namespace {

MetricRow leq(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value <= bound};
}
MetricRow geq(std::string name, double value, double bound) {
    return {std::move(name), value, bound, value >= bound};
}
MetricRow flag(std::string name, bool state, bool expected) {
    return {std::move(name), state ? 1.0 : 0.0, expected ? 1.0 : 0.0, state == expected};
}

void finish(ExperimentResult& res) {
    res.pass = std::all_of(res.metrics.begin(), res.metrics.end(),
                           [](const MetricRow& r) { return r.satisfied; });
}

double symmetric_draw(Rng& rng, double scale) { return (2.0 * uniform01(rng) - 1.0) * scale; }

ExperimentResult run_identities(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"identities", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    res.data.columns = {"sample", "t", "s", "cocycle_defect", "inverse_defect",
                        "roundtrip_defect"};
    Rng rng(cfg.seed);
    double worst_cocycle = 0.0, worst_inverse = 0.0, worst_roundtrip = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
        const PhasePoint x = m.sample(rng);
        const double t = symmetric_draw(rng, cfg.t_max);
        const double s = symmetric_draw(rng, cfg.t_max);

        const CocycleValue a_t = alpha(m, tau, x, t, q);
        const double inverse = std::abs(v_cocycle(m, tau, x, a_t.value, q).value - t);
        const double vt = v_cocycle(m, tau, x, t, q).value;
        const double roundtrip = std::abs(alpha(m, tau, x, vt, q).value - t);

        const CocycleValue a_s = alpha(m, tau, x, s, q);
        const PhasePoint xs = m.flow(x, a_s.value);
        const double cocycle = std::abs(alpha(m, tau, x, t + s, q).value - a_s.value -
                                        alpha(m, tau, xs, t, q).value);

        res.data.rows.push_back({static_cast<double>(i), t, s, cocycle, inverse, roundtrip});
        worst_cocycle = std::max(worst_cocycle, cocycle);
        worst_inverse = std::max(worst_inverse, inverse);
        worst_roundtrip = std::max(worst_roundtrip, roundtrip);
    }
    res.metrics.push_back(leq("max |alpha(x,t+s) - alpha(x,s) - alpha(flow_tau_s x, t)|",
                              worst_cocycle, cfg.tol));
    res.metrics.push_back(leq("max |v(x, alpha(x,t)) - t|", worst_inverse, cfg.tol));
    res.metrics.push_back(leq("max |alpha(x, v(x,t)) - t|", worst_roundtrip, cfg.tol));
    finish(res);
    return res;
}

ExperimentResult run_foliation(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"foliation", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    const double leg_u = 1e-3;
    const double fd_h = 1e-5;
    const double fd_q = 2e-12;  // beta quadrature below the differenced scale
    constexpr double kAngleBound = 1e-5;
    constexpr double kGradBound = 1e-6;
    const double horizon[] = {1.0, 2.0, 5.0, 10.0};

    // Certified comparability constant from the coefficients: the frame tilt
    // is |dbeta|/tau <= Lip * sum lambda^{-j} / tau_min.
    const double geom = m.lambda() / (m.lambda() - 1.0);
    const double tilt_s = tau.lipschitz_along(m.e_s()) * geom / tau.tau_min();
    const double tilt_u = tau.lipschitz_along(m.e_u()) * geom / tau.tau_min();
    const double comp_k = std::sqrt(1.0 + std::max(tilt_s, tilt_u) * std::max(tilt_s, tilt_u));

    res.data.columns = {"sample", "fit_rate", "angle_s", "angle_u",
                        "norm_s",  "norm_u",  "grad_defect"};
    Rng rng(cfg.seed);
    double worst_rate = -std::numeric_limits<double>::infinity();
    double worst_rate_defect = 0.0;
    double worst_angle = 0.0, worst_grad = 0.0;
    double norm_lo = std::numeric_limits<double>::infinity(), norm_hi = 0.0;
    bool any_degenerate = false;
    for (int i = 0; i < cfg.samples; ++i) {
        const PhasePoint x = m.sample(rng);

        const ContractionFit fit = contraction_rate(m, tau, x, leg_u, cfg.t_max, 8, q);
        any_degenerate = any_degenerate || fit.degenerate;
        worst_rate = std::max(worst_rate, fit.rate);
        worst_rate_defect = std::max(worst_rate_defect, std::abs(fit.rate + m.log_lambda()));

        // Forward transport contracts the stable frame by lambda^{-n}, so an
        // absolute quadrature error eps shows up in the angle as eps*lambda^n.
        // Budget every evaluation in the angle block against the scale lost
        // over the largest horizon.
        const long n_max = flow_tau_full(m, tau, x, horizon[std::size(horizon) - 1], q).crossings;
        const double q_ang = std::min(q, 0.01 * kAngleBound * m.lambda_pow(-n_max));
        const SplitFrame fx = split_frame(m, tau, x, q_ang);
        double angle_s = 0.0, angle_u = 0.0;
        for (double T : horizon) {
            const PhasePoint xT = flow_tau(m, tau, x, T, q_ang);
            const SplitFrame fT = split_frame(m, tau, xT, q_ang);
            angle_s = std::max(angle_s, angle_between(dflow_tau(m, tau, x, fx.e_s_tilde, T, q_ang),
                                                      fT.e_s_tilde));
            angle_u = std::max(angle_u, angle_between(dflow_tau(m, tau, x, fx.e_u_tilde, T, q_ang),
                                                      fT.e_u_tilde));
        }
        worst_angle = std::max({worst_angle, angle_s, angle_u});

        const double norm_s = fx.e_s_tilde.norm();
        const double norm_u = fx.e_u_tilde.norm();
        norm_lo = std::min({norm_lo, norm_s, norm_u});
        norm_hi = std::max({norm_hi, norm_s, norm_u});

        const double grad_s = dbeta_s(m, tau, x, {1.0, 0.0, 0.0}, cfg.tol);
        const double fd_s =
            (beta_s(m, tau, x, fd_h, fd_q).value - beta_s(m, tau, x, -fd_h, fd_q).value) /
            (2.0 * fd_h);
        const double grad_u = dbeta_u(m, tau, x, {0.0, 1.0, 0.0}, cfg.tol);
        const double fd_u =
            (beta_u(m, tau, x, fd_h, fd_q).value - beta_u(m, tau, x, -fd_h, fd_q).value) /
            (2.0 * fd_h);
        const double grad_defect = std::max(std::abs(grad_s - fd_s), std::abs(grad_u - fd_u));
        worst_grad = std::max(worst_grad, grad_defect);

        res.data.rows.push_back({static_cast<double>(i), fit.rate, angle_s, angle_u, norm_s,
                                 norm_u, grad_defect});
    }
    if (tau.is_constant())
        res.metrics.push_back(leq("max |pair contraction rate + log(lambda)|", worst_rate_defect,
                                  0.05 * m.log_lambda()));
    else
        res.metrics.push_back(leq("max pair contraction rate", worst_rate, -0.5));
    res.metrics.push_back(flag("contraction fits nondegenerate", !any_degenerate, true));
    res.metrics.push_back(leq("max splitting invariance angle", worst_angle, kAngleBound));
    res.metrics.push_back(leq("max frame norm", norm_hi, comp_k));
    res.metrics.push_back(geq("min frame norm", norm_lo, 1.0 / comp_k));
    res.metrics.push_back(leq("max leaf-gradient cross-check defect", worst_grad, kGradBound));
    finish(res);
    return res;
}

ExperimentResult run_rates(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"rates", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    res.data.columns = {"sample", "nu",    "nu_hat", "gamma",
                        "gamma_hat", "alpha", "log_nu", "minus_loglambda_alpha"};
    Rng rng(cfg.seed);
    int ok_contracting = 0, ok_chain = 0, ok_bunched = 0;
    std::vector<double> log_nus, alphas;
    log_nus.reserve(static_cast<std::size_t>(cfg.samples));
    alphas.reserve(static_cast<std::size_t>(cfg.samples));
    double worst_center = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
        const PhasePoint x = m.sample(rng);
        const RateReport r = finite_time_rates(m, tau, x, cfg.t_max, q);
        if (r.nu < 1.0 && r.nu_hat < 1.0) ++ok_contracting;
        if (r.nu < r.gamma && 1.0 / r.gamma_hat < 1.0 / r.nu_hat) ++ok_chain;
        const double gg = r.gamma * r.gamma_hat;
        if (r.nu < gg && r.nu_hat < gg) ++ok_bunched;
        worst_center = std::max(worst_center, r.center_defect);
        log_nus.push_back(std::log(r.nu));
        alphas.push_back(r.alpha);
        res.data.rows.push_back({static_cast<double>(i), r.nu, r.nu_hat, r.gamma, r.gamma_hat,
                                 r.alpha, std::log(r.nu), -m.log_lambda() * r.alpha});
    }
    const double dn = static_cast<double>(cfg.samples);
    const double mean_log_nu = pairwise_sum(log_nus) / dn;
    const double mean_alpha = pairwise_sum(alphas) / dn;
    const double predicted = -m.log_lambda() * mean_alpha;
    res.metrics.push_back(geq("fraction nu < 1 and nu_hat < 1", ok_contracting / dn, 1.0));
    res.metrics.push_back(
        geq("fraction nu < gamma and 1/gamma_hat < 1/nu_hat", ok_chain / dn, 1.0));
    res.metrics.push_back(
        geq("fraction nu, nu_hat < gamma*gamma_hat", ok_bunched / dn, 1.0));
    res.metrics.push_back(leq("relative defect of mean log nu vs -log(lambda)*mean alpha",
                              std::abs(mean_log_nu - predicted) / std::abs(predicted), 0.1));
    res.metrics.push_back(leq("max center factor defect", worst_center, 1e-6));
    finish(res);
    return res;
}

ExperimentResult run_pcf(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"pcf", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    constexpr double kEndpointBound = 1e-7;
    constexpr double kLeafRatioBound = 1e-2;
    constexpr double kLeafHorizon = 15.0;
    res.data.columns = {"path", "leg",      "kind",           "u",
                        "d0",   "leaf_ratio", "endpoint_defect", "slide_defect"};
    Rng rng(cfg.seed);
    double worst_end = 0.0, worst_slide = 0.0, worst_ratio = 0.0;
    for (int i = 0; i < cfg.samples; ++i) {
        const PhasePoint x = m.sample(rng);
        std::vector<SuLeg> legs(4);
        for (auto& leg : legs) {
            leg.kind = uniform01(rng) < 0.5 ? LegKind::stable : LegKind::unstable;
            // Stay below (locality bound)/lambda: the composed route rescales
            // a leg by an eigenvalue factor when its slide crosses the roof.
            const double mag = 0.02 + 0.05 * uniform01(rng);
            leg.u = uniform01(rng) < 0.5 ? -mag : mag;
        }
        const SuPath path{x, legs};

        const double total = pcf_path(m, tau, path, q);
        const PhasePoint end_direct = flow_tau(m, tau, path.vertices(m).back(), -total, q);
        const TransportedPath composed = transport_composed(m, tau, path, q);
        const double end_defect = m.dist(end_direct, composed.points.back());
        const double slide_defect = std::abs(composed.total_pcf - total);
        worst_end = std::max(worst_end, end_defect);
        worst_slide = std::max(worst_slide, slide_defect);

        for (std::size_t leg_i = 0; leg_i < legs.size(); ++leg_i) {
            const LeafCheck lc =
                transported_leg_leaf_check(m, tau, composed.points[leg_i],
                                           composed.points[leg_i + 1], legs[leg_i].kind,
                                           kLeafHorizon, q);
            worst_ratio = std::max(worst_ratio, lc.ratio);
            res.data.rows.push_back({static_cast<double>(i), static_cast<double>(leg_i),
                                     legs[leg_i].kind == LegKind::stable ? 0.0 : 1.0,
                                     legs[leg_i].u, lc.d0, lc.ratio, end_defect, slide_defect});
        }
    }
    res.metrics.push_back(leq("max two-route endpoint distance", worst_end, kEndpointBound));
    res.metrics.push_back(leq("max two-route slide-time defect", worst_slide, kEndpointBound));
    res.metrics.push_back(
        leq("max transported-leg leaf ratio at horizon 15", worst_ratio, kLeafRatioBound));
    finish(res);
    return res;
}

ExperimentResult run_access(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"access", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    constexpr double kDisplacementFloor = 1e-4;
    const double mags[] = {-0.08, -0.05, -0.02, 0.02, 0.05, 0.08};
    std::vector<std::pair<double, double>> grid;
    for (double u : mags)
        for (double v : mags) grid.emplace_back(u, v);

    res.data.columns = {"anchor", "u", "v", "displacement"};
    Rng rng(cfg.seed);
    const int anchors = std::clamp(cfg.samples, 1, 8);
    bool any_both = false;
    double overall_max = 0.0, best_radius = 0.0;
    for (int a = 0; a < anchors; ++a) {
        const PhasePoint x = m.sample(rng);
        const EngulfCertificate cert = engulf_sweep(m, tau, x, grid, q);
        for (const EngulfEntry& e : cert.entries)
            res.data.rows.push_back({static_cast<double>(a), e.u, e.v, e.displacement});
        any_both = any_both || cert.both_signs;
        overall_max = std::max(overall_max, cert.max_abs);
        best_radius = std::max(best_radius, cert.bracket_min_abs);
    }
    if (tau.is_constant()) {
        res.metrics.push_back(
            leq("max |holonomy displacement| (degenerate control)", overall_max, 1e-10));
        res.metrics.push_back(flag("displacement sign alternation", any_both, false));
    } else {
        res.metrics.push_back(flag("displacement attains both signs", any_both, true));
        res.metrics.push_back(
            geq("max |holonomy displacement|", overall_max, kDisplacementFloor));
        res.metrics.push_back(geq("certified engulfed radius", best_radius,
                                  std::numeric_limits<double>::min()));
    }
    finish(res);
    return res;
}

ExperimentResult run_averages(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"averages", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    const double cycle_u = 0.05, cycle_v = 0.05;
    const double radii[] = {1.0, 3.0};

    res.data.columns = {"quantity", "mean", "sem", "expected"};
    Rng rng(cfg.seed);
    const MeanSem pcf_avg = haar_average_pcf(m, tau, cycle_u, cycle_v, cfg.samples, rng, q);
    res.data.rows.push_back({0.0, pcf_avg.mean, pcf_avg.sem, 0.0});
    res.metrics.push_back(
        leq("|mean translated-cycle functional|", std::abs(pcf_avg.mean), 3.0 * pcf_avg.sem));
    const double tau0 = tau.mean();
    for (double r : radii) {
        const MeanSem orbit = haar_average_orbit(m, tau, r, cfg.samples, rng, q);
        res.data.rows.push_back({r, orbit.mean, orbit.sem, r * tau0});
        res.metrics.push_back(leq("|mean orbit integral - r*mean(tau)| at r=" + fmt_double(r),
                                  std::abs(orbit.mean - r * tau0), 3.0 * orbit.sem));
    }
    finish(res);
    return res;
}

ExperimentResult run_mixing(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"mixing", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    const double q = 0.05 * cfg.tol;
    std::vector<double> times;
    for (int k = 0; k <= 8 && static_cast<double>(k) <= cfg.t_max; ++k)
        times.push_back(static_cast<double>(k));
    for (double t = 10.0; t <= cfg.t_max * (1.0 + 1e-12); t += 10.0) times.push_back(t);

    res.data.columns = {"t", "corr", "sem"};
    Rng rng(cfg.seed);
    const CorrelationSeries series = mixing_profile(m, tau, Observable::roof_cos,
                                                    Observable::roof_cos, times, cfg.samples,
                                                    rng, q);
    for (std::size_t i = 0; i < series.times.size(); ++i)
        res.data.rows.push_back(
            {series.times[i], series.values[i].value, series.values[i].sem});

    const Estimate var = series.values.front();
    if (tau.is_constant()) {
        // Integer times close the roof circle exactly: the correlation must
        // sit on the variance, no decay.
        double worst = 0.0, worst_bound = 0.0;
        bool all_ok = true;
        for (std::size_t i = 1; i < series.times.size(); ++i) {
            const double t = series.times[i];
            if (std::abs(t - std::round(t)) > 1e-12) continue;
            const double defect = std::abs(series.values[i].value - var.value);
            const double bound = 3.0 * (series.values[i].sem + var.sem);
            all_ok = all_ok && defect <= bound;
            if (defect >= worst) {
                worst = defect;
                worst_bound = bound;
            }
        }
        res.metrics.push_back({"max |corr(t) - corr(0)| at integer times", worst, worst_bound,
                               all_ok});
        res.metrics.push_back(
            leq("|corr(0) - 1/2| for the roof harmonic", std::abs(var.value - 0.5),
                3.0 * var.sem));
    } else {
        const Estimate last = series.values.back();
        res.metrics.push_back(leq("|corr(" + fmt_double(series.times.back()) + ")|",
                                  std::abs(last.value), 0.2 * var.value + 3.0 * last.sem));
        res.metrics.push_back(geq("corr(0) positive", var.value, 10.0 * var.sem));
    }
    finish(res);
    return res;
}

ExperimentResult run_coboundary(const ExperimentConfig& cfg, const CatSuspension& m) {
    ExperimentResult res{"coboundary", false, {}, {}};
    const TimeChange& tau = cfg.tau;
    res.data.columns = {"cycle", "base_x", "base_y", "roof", "u", "v", "pcf"};
    Rng rng(cfg.seed);
    const int n_family = std::clamp(cfg.samples, 1, 64);
    std::vector<SuPath> family;
    std::vector<std::array<double, 2>> sizes;
    family.reserve(static_cast<std::size_t>(n_family));
    for (int i = 0; i < n_family; ++i) {
        const PhasePoint x = m.sample(rng);
        const double mu = 0.02 + 0.06 * uniform01(rng);
        const double mv = 0.02 + 0.06 * uniform01(rng);
        const double u = uniform01(rng) < 0.5 ? -mu : mu;
        const double v = uniform01(rng) < 0.5 ? -mv : mv;
        family.push_back(quad_cycle(x, u, v));
        sizes.push_back({u, v});
    }
    const CoboundaryVerdict verdict = coboundary_test(m, tau, family, cfg.tol);
    for (int i = 0; i < n_family; ++i) {
        const double p = pcf_path(m, tau, family[i], 0.05 * cfg.tol);
        const PhasePoint& x = family[i].start;
        res.data.rows.push_back({static_cast<double>(i), x.base.x, x.base.y, x.roof,
                                 sizes[i][0], sizes[i][1], p});
    }
    // PCFs vanish identically iff no bump term moves with the base: pure
    // roof terms and flow-derivative terms integrate out along orbit pairs.
    const bool quasi_trivial =
        std::all_of(tau.bumps().begin(), tau.bumps().end(),
                    [](const BumpTerm& b) { return b.k[0] == 0 && b.k[1] == 0; });
    if (quasi_trivial) {
        res.metrics.push_back(
            leq("max |cycle functional| over family", std::abs(verdict.witness_value), cfg.tol));
        res.metrics.push_back(flag("verdict: vanishing", verdict.vanishing, true));
    } else {
        res.metrics.push_back(geq("witness |cycle functional|", std::abs(verdict.witness_value),
                                  cfg.tol));
        res.metrics.push_back(flag("verdict: vanishing", verdict.vanishing, false));
    }
    finish(res);
    return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    const CatSuspension m;
    if (cfg.experiment == "access") return run_access(cfg, m);
    if (cfg.experiment == "averages") return run_averages(cfg, m);
    if (cfg.experiment == "coboundary") return run_coboundary(cfg, m);
    if (cfg.experiment == "foliation") return run_foliation(cfg, m);
    if (cfg.experiment == "identities") return run_identities(cfg, m);
    if (cfg.experiment == "mixing") return run_mixing(cfg, m);
    if (cfg.experiment == "pcf") return run_pcf(cfg, m);
    if (cfg.experiment == "rates") return run_rates(cfg, m);
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
}

std::vector<ExperimentInfo> list_experiments() {
    return {
        {"access",
         "holonomy-displacement sweep over quad-cycle sizes; both signs certify an engulfed "
         "orbit interval",
         "tau, seed, samples, tol"},
        {"averages",
         "Haar-average identities: translated-cycle functionals have zero mean, orbit "
         "integrals of tau average to r*mean(tau)",
         "tau, seed, samples, tol"},
        {"coboundary",
         "cycle-functional scan over a quad-cycle family; vanishing detects the "
         "coboundary/quasi-trivial class",
         "tau, seed, samples, tol"},
        {"foliation",
         "graph-foliation diagnostics: pair contraction rate, splitting invariance angles, "
         "frame comparability, leaf-gradient cross-check",
         "tau, seed, samples, t_max, tol"},
        {"identities", "reparametrization cocycle identities relating v and alpha",
         "tau, seed, samples, t_max, tol"},
        {"mixing", "correlation profile of the roof harmonic under the time-changed flow",
         "tau, seed, samples, t_max, tol"},
        {"pcf",
         "su-path transport by two independent routes: endpoint agreement and leaf membership "
         "of transported legs",
         "tau, seed, samples, tol"},
        {"rates",
         "finite-time stable/unstable/center rates: contraction, bunching, chain ordering, "
         "exponent linkage",
         "tau, seed, samples, t_max, tol"},
    };
}

std::string format_csv(const DataTable& table) {
    std::string s;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) s += ',';
        s += table.columns[c];
    }
    s += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) s += ',';
            s += fmt_double(row[c]);
        }
        s += '\n';
    }
    return s;
}

namespace {

std::string canonical_config(const ExperimentConfig& cfg) {
    std::string s = "experiment=" + cfg.experiment + "\nmodel=" + cfg.model;
    s += "\ntau.c0=" + fmt_double(cfg.tau.c0());
    for (const BumpTerm& b : cfg.tau.bumps())
        s += "\ntau.bump=" + fmt_double(b.eps) + "," + std::to_string(b.k[0]) + "," +
             std::to_string(b.k[1]) + "," + fmt_double(b.phase);
    for (const BumpTerm& b : cfg.tau.cobounds())
        s += "\ntau.cobound=" + fmt_double(b.eps) + "," + std::to_string(b.k[0]) + "," +
             std::to_string(b.k[1]) + "," + fmt_double(b.phase);
    s += "\nseed=" + std::to_string(cfg.seed);
    s += "\ntol=" + fmt_double(cfg.tol);
    s += "\nt_max=" + fmt_double(cfg.t_max);
    s += "\nsamples=" + std::to_string(cfg.samples);
    return s;
}

}  // namespace

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string dump = canonical_config(cfg);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string format_certificate(const ExperimentResult& res, const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = res.experiment;
    j["pass"] = res.pass;
    auto arr = nlohmann::ordered_json::array();
    for (const MetricRow& r : res.metrics) {
        nlohmann::ordered_json row;
        row["name"] = r.name;
        row["value"] = r.value;
        row["bound"] = r.bound;
        row["satisfied"] = r.satisfied;
        arr.push_back(std::move(row));
    }
    j["metrics"] = std::move(arr);
    std::array<char, 17> hex{};
    const std::uint64_t h = config_hash(cfg);
    for (int i = 0; i < 16; ++i) hex[15 - i] = "0123456789abcdef"[(h >> (4 * i)) & 0xf];
    j["provenance"] = {{"config_hash", std::string(hex.data(), 16)},
                       {"seed", cfg.seed},
                       {"version", std::string(kArtifactVersion)}};
    return j.dump(2) + "\n";
}

void write_outputs(const ExperimentResult& res, const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.out + ": " + ec.message());
    const auto write_file = [](const fs::path& p, const std::string& text) {
        std::ofstream os(p, std::ios::binary | std::ios::trunc);
        os << text;
        os.flush();
        if (!os) throw IoError("cannot write " + p.string());
    };
    write_file(fs::path(cfg.out) / "data.csv", format_csv(res.data));
    write_file(fs::path(cfg.out) / "certificate.json", format_certificate(res, cfg));
}

}  // namespace phlab
