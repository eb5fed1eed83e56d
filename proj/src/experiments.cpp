#include "snu/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "snu/profile_io.hpp"
#include "snu/rng.hpp"
#include "snu/stats.hpp"

namespace snu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json rows_to_json(const std::vector<ExperimentRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"key", r.key}, {"measured", r.measured}, {"theory", r.theory}});
    return arr;
}

Profile profile_from_config(const nlohmann::json& j) {
    if (!j.contains("profile")) throw ConfigError("config: missing 'profile'");
    if (j["profile"].is_string()) return load_profile(j["profile"].get<std::string>());
    return profile_from_json(j["profile"]);
}

double num(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw ConfigError(std::string("config: missing or non-numeric field '") + field + "'");
    return j[field].get<double>();
}

double num_or(const nlohmann::json& j, const char* field, double dflt) {
    return j.contains(field) ? num(j, field) : dflt;
}

} // namespace

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["config"] = config;
    j["rows"] = rows_to_json(rows);
    j["fitted_exponent"] = fitted_exponent ? nlohmann::json(*fitted_exponent) : nullptr;
    j["theory_exponent"] = theory_exponent ? nlohmann::json(*theory_exponent) : nullptr;
    j["verdict"] = pass ? "PASS" : "FAIL";
    j["tolerance"] = tolerance;
    j["details"] = details;
    return j;
}

void ExperimentReport::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report file: " + path.string());
    out << "key,measured,theory\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.key, r.measured, r.theory);
        out << buf;
    }
}

// --- nonconvexity ---------------------------------------------------------

double ConvexityConfig::t() const {
    return nu.eval(alpha_prime).raw() - nu.eval(alpha).raw() + eps;
}

double ConvexityConfig::theory_exponent() const {
    return (p * s() - t()) / (p * (s() + t()));
}

std::uint32_t ConvexityConfig::focal_scale(std::uint32_t n) const {
    double j = ((p + 1.0) / p * std::log2(static_cast<double>(n)) - std::log2(lambda)) /
               (s() + t());
    return static_cast<std::uint32_t>(std::max(0.0, std::ceil(j)));
}

void ConvexityConfig::validate() const {
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("ConvexityConfig: p must lie in (0, 1]");
    if (!(eps > 0.0)) throw ConfigError("ConvexityConfig: eps must be positive");
    if (!(lambda > 0.0)) throw ConfigError("ConvexityConfig: lambda must be positive");
    if (!(alpha >= nu.alpha_min()))
        throw ConfigError("ConvexityConfig: alpha must be at least alpha_min");
    if (!(alpha < alpha_prime)) throw ConfigError("ConvexityConfig: requires alpha < alpha_prime");
    ExtReal va = nu.eval(alpha), vb = nu.eval(alpha_prime);
    if (vb.is_neg_inf() || !(vb.raw() + eps < 1.0))
        throw ConfigError("ConvexityConfig: requires nu(alpha_prime) + eps < 1");
    if (!(t() < p * s()))
        throw ConfigError("ConvexityConfig: not in the non-convexity regime (t < p*s fails)");
    if (!(p / (p + 1.0) * (s() + t()) < 1.0 - va.raw()))
        throw ConfigError("ConvexityConfig: smallness condition p/(p+1)*(s+t) < 1 - nu(alpha) fails");
    if (n_list.empty()) throw ConfigError("ConvexityConfig: N_list must be non-empty");
    for (auto n : n_list)
        if (n < 1) throw ConfigError("ConvexityConfig: N_list entries must be positive");
}

ConvexityConfig ConvexityConfig::from_json(const nlohmann::json& j) {
    ConvexityConfig cfg{profile_from_config(j), num(j, "p"),     num(j, "alpha"),
                        num(j, "alpha_prime"), num(j, "eps"),    num(j, "lambda"),
                        {}};
    if (!j.contains("N_list") || !j["N_list"].is_array())
        throw ConfigError("config: missing 'N_list' array");
    for (const auto& n : j["N_list"]) cfg.n_list.push_back(n.get<std::uint32_t>());
    return cfg;
}

nlohmann::json ConvexityConfig::to_json() const {
    return {{"profile", profile_to_json(nu)},
            {"p", p},
            {"alpha", alpha},
            {"alpha_prime", alpha_prime},
            {"eps", eps},
            {"lambda", lambda},
            {"N_list", n_list}};
}

ExperimentReport nonconvexity_witness(const ConvexityConfig& cfg, std::uint32_t max_scale) {
    cfg.validate();
    for (auto n : cfg.n_list)
        if (cfg.focal_scale(n) > max_scale)
            throw ConfigError("nonconvexity_witness: focal scale for N=" + std::to_string(n) +
                              " exceeds max_scale");

    const double va = cfg.nu.eval(cfg.alpha).raw();
    const double beta = cfg.nu.eval(cfg.alpha_prime).raw() + cfg.eps;
    const double theta = cfg.theory_exponent();

    TreeSequence base = staircase_sequence(cfg.nu, max_scale, cfg.alpha, cfg.lambda);

    ExperimentReport rep;
    rep.name = "nonconvexity";
    rep.config = cfg.to_json();
    rep.config["J"] = max_scale;
    rep.theory_exponent = theta;
    rep.tolerance = 0.15;

    // Per-scale nonzeros of the staircase block, gathered once; each translate
    // places the same values into its own contiguous block, which is exactly
    // what summing disjoint_translates output would produce.
    std::vector<std::vector<std::pair<std::uint64_t, std::complex<double>>>> nz(max_scale + 1);
    for (std::uint32_t j = 0; j <= max_scale; ++j)
        for (std::uint64_t k = 0; k < base.level(j).size(); ++k)
            if (base.level(j)[k] != std::complex<double>{0.0, 0.0})
                nz[j].emplace_back(k, base.level(j)[k]);

    std::vector<double> log_n, log_d;
    for (auto n : cfg.n_list) {
        std::uint32_t j0 = 0;
        while (std::exp2(static_cast<double>(j0)) <
               static_cast<double>(n) * std::exp2(va * static_cast<double>(j0)))
            ++j0;
        TreeSequence x(max_scale);
        double weight = std::pow(static_cast<double>(n), -1.0 / cfg.p);
        for (std::uint32_t j = j0; j <= max_scale; ++j) {
            std::uint64_t c = nz[j].size();
            if (c * n > x.level(j).size())
                throw ConfigError("nonconvexity_witness: translates do not fit at scale " +
                                  std::to_string(j));
            auto lvl = x.level(j);
            for (std::uint32_t i = 0; i < n; ++i)
                for (std::uint64_t r = 0; r < c; ++r)
                    lvl[i * c + r] += weight * nz[j][r].second;
        }
        double d = distance_d(x, cfg.alpha_prime, ExtReal(beta));
        double theory = std::pow(cfg.lambda, cfg.t() / (cfg.s() + cfg.t())) *
                        std::pow(static_cast<double>(n), theta);
        rep.rows.push_back({static_cast<double>(n), d, theory});
        log_n.push_back(std::log2(static_cast<double>(n)));
        log_d.push_back(std::log2(d));
    }

    rep.fitted_exponent = least_squares_slope(log_n, log_d);
    bool monotone = true;
    for (std::size_t i = 1; i + 1 < rep.rows.size(); ++i)
        if (rep.rows[i + 1].measured < rep.rows[i].measured - 1e-12) monotone = false;
    rep.pass = std::abs(*rep.fitted_exponent - theta) <= 0.15 * theta && monotone;
    std::ostringstream os;
    os << "fitted=" << *rep.fitted_exponent << " theory=" << theta
       << (monotone ? "" : " (growth not monotone)");
    rep.details = os.str();
    return rep;
}

// --- convexity boundedness -------------------------------------------------

namespace {

/// Rejection sampler for the ladder neighbourhood: scales a random_sequence
/// down by halves until every d_{alpha_l,nu_l} is below the radius. Returns
/// the accepted factor; throws after the retry budget.
double scale_into_balls(const ScaleMagnitudes& sm,
                        const std::vector<std::pair<double, ExtReal>>& rungs, double radius) {
    double factor = 1.0;
    for (int tries = 0; tries < 100; ++tries) {
        ScaleMagnitudes scaled = sm.scaled(factor);
        bool ok = true;
        for (const auto& [al, nl] : rungs)
            if (distance_d(scaled, al, nl) >= radius) {
                ok = false;
                break;
            }
        if (ok) return factor;
        factor *= 0.5;
    }
    throw Error("rejection sampling failed: sequence does not scale into the neighbourhood");
}

} // namespace

BoundednessConfig BoundednessConfig::from_json(const nlohmann::json& j) {
    BoundednessConfig cfg{profile_from_config(j),
                          num_or(j, "M", 1.0),
                          num_or(j, "eps", 0.2),
                          num_or(j, "alpha", 0.5),
                          static_cast<std::uint32_t>(num_or(j, "N", 8)),
                          static_cast<std::uint32_t>(num_or(j, "trials", 100)),
                          static_cast<std::uint64_t>(num_or(j, "seed", 0)),
                          static_cast<std::uint32_t>(num_or(j, "J", 14))};
    return cfg;
}

nlohmann::json BoundednessConfig::to_json() const {
    return {{"profile", profile_to_json(nu)}, {"M", bound_m}, {"eps", eps},
            {"alpha", alpha},                 {"N", n_elements}, {"trials", trials},
            {"seed", seed},                   {"J", max_scale}};
}

ExperimentReport convexity_boundedness(const BoundednessConfig& cfg) {
    double p0 = cfg.nu.convexity_index();
    if (!(p0 > 0.0))
        throw ConfigError("convexity_boundedness: convexity index is 0, no p0-convexity");
    if (!(cfg.eps > 0.0)) throw ConfigError("convexity_boundedness: eps must be positive");
    ExtReal va = cfg.nu.eval(cfg.alpha);
    if (va.is_neg_inf() || va.raw() >= 1.0)
        throw ConfigError("convexity_boundedness: requires alpha_min <= alpha and nu(alpha) < 1");
    if (cfg.n_elements < 1 || cfg.trials < 1)
        throw ConfigError("convexity_boundedness: need at least one element and one trial");

    const double a_min = cfg.nu.alpha_min();
    const auto big_l =
        static_cast<std::uint32_t>(std::ceil((cfg.alpha - a_min) * 2.0 * p0 / cfg.eps));
    const double lambda = cfg.bound_m / (big_l + 2.0);
    std::vector<std::pair<double, ExtReal>> rungs;
    for (std::int64_t l = -1; l <= static_cast<std::int64_t>(big_l); ++l) {
        double al = a_min + cfg.eps / (2.0 * p0) * static_cast<double>(l);
        rungs.emplace_back(al, cfg.nu.eval(al) + cfg.eps / 2.0);
    }

    ExperimentReport rep;
    rep.name = "boundedness";
    rep.config = cfg.to_json();
    rep.tolerance = 0.0;

    double max_seen = 0.0;
    for (std::uint32_t trial = 0; trial < cfg.trials; ++trial) {
        std::vector<TreeSequence> elems;
        std::vector<std::complex<double>> weights;
        CounterRng theta_rng(cfg.seed, 0x7468657461ULL + trial);
        double theta_norm = 0.0;
        std::vector<double> theta;
        for (std::uint32_t i = 0; i < cfg.n_elements; ++i) {
            double u = 1.0 - theta_rng.next_unit();
            theta.push_back(u);
            theta_norm += std::pow(u, p0);
        }
        for (auto& u : theta) u /= std::pow(theta_norm, 1.0 / p0);

        for (std::uint32_t i = 0; i < cfg.n_elements; ++i) {
            std::uint64_t elem_seed = CounterRng::mix(cfg.seed, trial, i);
            TreeSequence z = random_sequence(cfg.nu, cfg.max_scale, elem_seed);
            double factor = scale_into_balls(ScaleMagnitudes::from(z), rungs, lambda);
            elems.push_back(std::move(z));
            weights.push_back(theta[i] * factor);
        }
        TreeSequence comb = linear_combine(weights, elems);
        double d = distance_d(comb, cfg.alpha, va + cfg.eps);
        max_seen = std::max(max_seen, d);
        rep.rows.push_back({static_cast<double>(trial), d, cfg.bound_m});
    }
    rep.pass = max_seen <= cfg.bound_m + 1e-12;
    std::ostringstream os;
    os << "max observed " << max_seen << " vs bound " << cfg.bound_m << " (L=" << big_l
       << ", lambda=" << lambda << ")";
    rep.details = os.str();
    return rep;
}

// --- non-normability -------------------------------------------------------

NonnormabilityConfig NonnormabilityConfig::from_json(const nlohmann::json& j) {
    NonnormabilityConfig cfg{profile_from_config(j),
                             num(j, "alpha_n"),
                             num(j, "alpha_prime"),
                             num_or(j, "delta0", 0.5),
                             {},
                             {},
                             static_cast<std::uint32_t>(num_or(j, "J", 16))};
    if (j.contains("ladder"))
        for (const auto& rung : j["ladder"])
            cfg.ladder.emplace_back(rung.at(0).get<double>(), rung.at(1).get<double>());
    if (j.contains("m_list"))
        for (const auto& m : j["m_list"]) cfg.m_list.push_back(m.get<std::uint32_t>());
    return cfg;
}

nlohmann::json NonnormabilityConfig::to_json() const {
    auto ladder_json = nlohmann::json::array();
    for (const auto& [a, e] : ladder) ladder_json.push_back({a, e});
    return {{"profile", profile_to_json(nu)},
            {"alpha_n", alpha_n},
            {"alpha_prime", alpha_prime},
            {"delta0", delta0},
            {"ladder", ladder_json},
            {"m_list", m_list},
            {"J", max_scale}};
}

ExperimentReport nonnormability_witness(const NonnormabilityConfig& cfg) {
    if (!(cfg.alpha_n < cfg.alpha_prime && cfg.alpha_prime < cfg.nu.alpha_min()))
        throw ConfigError("nonnormability: requires alpha_n < alpha_prime < alpha_min");
    if (!(cfg.delta0 > 0.0 && cfg.delta0 < 1.0))
        throw ConfigError("nonnormability: delta0 must lie in (0, 1)");
    if (cfg.m_list.empty()) throw ConfigError("nonnormability: m_list must be non-empty");
    for (auto m : cfg.m_list)
        if (m > cfg.max_scale) throw ConfigError("nonnormability: m exceeds max_scale");

    // Entry threshold per rung: balls below alpha_min need alpha_l <= alpha_n
    // (entered for every m); the others are entered once
    // m >= -log2(delta0) / (nu(alpha_l) + eps_l).
    double entry = 0.0;
    std::ostringstream details;
    details << "entry thresholds:";
    for (const auto& [al, el] : cfg.ladder) {
        ExtReal beta = cfg.nu.eval(al) + el;
        if (beta.is_neg_inf()) {
            if (al > cfg.alpha_n)
                throw ConfigError("nonnormability: ladder rung below alpha_min must have "
                                  "alpha_l <= alpha_n");
            details << " (alpha_l=" << al << ": all m)";
            continue;
        }
        if (!(beta.raw() > 0.0))
            throw ConfigError("nonnormability: ladder rung needs nu(alpha_l) + eps_l > 0");
        double m_min = -std::log2(cfg.delta0) / beta.raw();
        entry = std::max(entry, m_min);
        details << " (alpha_l=" << al << ": m >= " << m_min << ")";
    }

    ExperimentReport rep;
    rep.name = "nonnorm";
    rep.config = cfg.to_json();
    rep.theory_exponent = cfg.alpha_prime - cfg.alpha_n;
    rep.tolerance = 1e-9;

    bool balls_ok = true;
    bool exact = true;
    std::vector<double> ms, logs;
    for (auto m : cfg.m_list) {
        TreeSequence x = spike_sequence(cfg.max_scale, m, cfg.alpha_n, cfg.delta0);
        ScaleMagnitudes sm = ScaleMagnitudes::from(x);
        double measured = distance_d(sm, cfg.alpha_prime, ExtReal::neg_inf());
        double theory = cfg.delta0 * std::exp2((cfg.alpha_prime - cfg.alpha_n) * m);
        rep.rows.push_back({static_cast<double>(m), measured, theory});
        exact = exact && std::abs(measured - theory) <= 1e-9 * std::max(1.0, theory);
        if (static_cast<double>(m) >= entry) {
            for (const auto& [al, el] : cfg.ladder)
                if (distance_d(sm, al, cfg.nu.eval(al) + el) > cfg.delta0 + 1e-12) balls_ok = false;
        }
        ms.push_back(static_cast<double>(m));
        logs.push_back(std::log2(measured));
    }
    rep.fitted_exponent = least_squares_slope(ms, logs);
    bool growing = rep.rows.size() < 2 || rep.rows.back().measured > rep.rows.front().measured;
    rep.pass = exact && balls_ok && growing;
    details << "; ball entry " << (balls_ok ? "verified" : "VIOLATED") << " for m >= " << entry;
    rep.details = details.str();
    return rep;
}

// --- pairing and duality witnesses ------------------------------------------

PairingResult pairing(const TreeSequence& x, const TreeSequence& y, bool weighted) {
    if (x.max_scale() != y.max_scale()) throw InvalidArgument("pairing: max_scale mismatch");
    PairingResult r;
    r.total = 0.0;
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j) {
        std::complex<double> s = 0.0;
        auto xl = x.level(j);
        auto yl = y.level(j);
        for (std::uint64_t k = 0; k < xl.size(); ++k) s += xl[k] * std::conj(yl[k]);
        if (weighted) s *= std::exp2(-static_cast<double>(j));
        r.per_scale.push_back(s);
        r.total += s;
    }
    return r;
}

DivergenceResult divergence_witness(const TreeSequence& y, const Profile& nu,
                                    std::span<const double> eps_schedule,
                                    std::uint32_t max_scale) {
    if (eps_schedule.empty()) throw InvalidArgument("divergence_witness: empty eps schedule");
    for (double e : eps_schedule)
        if (!(e > 0.0)) throw InvalidArgument("divergence_witness: eps must be positive");
    if (max_scale > y.max_scale())
        throw InvalidArgument("divergence_witness: max_scale exceeds the sequence's scale");

    Profile dual = dual_profile(nu);

    // alpha' search grid: breakpoints and midpoints of nu', probes below
    // alpha'_min and just above it (where nu'(alpha' - eps) = -inf).
    std::vector<double> grid = dual.refined_grid();
    grid.push_back(dual.alpha_min() - 0.25);
    for (double e : eps_schedule) grid.push_back(dual.alpha_min() + e / 2.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    ScaleMagnitudes ym = ScaleMagnitudes::from(y);

    struct Selection {
        std::uint32_t scale;
        double alpha_prime;
        double eps;
        ExtReal dual_value; // nu'(alpha' - eps)
    };
    std::vector<Selection> picks;
    std::uint32_t j_prev = 0;
    for (std::size_t n = 0;; ++n) {
        double eps_n = eps_schedule[n % eps_schedule.size()];
        bool found = false;
        for (std::uint32_t j = j_prev + 1; j <= max_scale && !found; ++j) {
            for (double ap : grid) {
                double thr = std::exp2(-ap * static_cast<double>(j));
                std::uint64_t c = ym.count_at_least(j, thr);
                ExtReal dv = dual.eval(ap - eps_n);
                double rhs = exp2_or_zero(dv, static_cast<double>(j));
                if (static_cast<double>(c) > rhs) {
                    picks.push_back({j, ap, eps_n, dv});
                    j_prev = j;
                    found = true;
                    break;
                }
            }
        }
        if (!found) {
            if (n < eps_schedule.size())
                throw NoViolationFound(
                    "no ball violation within the available scales for eps = " +
                    std::to_string(eps_n));
            break;
        }
    }

    TreeSequence x(y.max_scale()); // zeros beyond the scanned scales
    std::ostringstream details;
    for (const auto& sel : picks) {
        double alpha_n =
            sel.dual_value.is_neg_inf() ? -sel.alpha_prime : sel.dual_value.raw() - sel.alpha_prime;
        std::uint64_t want =
            sel.dual_value.is_neg_inf()
                ? 1
                : static_cast<std::uint64_t>(
                      std::ceil(std::exp2(sel.dual_value.raw() * sel.scale)));
        double thr = std::exp2(-sel.alpha_prime * static_cast<double>(sel.scale));
        auto yl = y.level(sel.scale);
        std::vector<std::pair<double, std::uint64_t>> hits;
        for (std::uint64_t k = 0; k < yl.size(); ++k) {
            double m = std::abs(yl[k]);
            if (m >= thr) hits.emplace_back(m, k);
        }
        std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (hits.size() < want)
            throw std::logic_error("divergence_witness: violation does not supply enough slots");
        double mag = std::exp2(-alpha_n * static_cast<double>(sel.scale));
        for (std::uint64_t i = 0; i < want; ++i) {
            std::uint64_t k = hits[i].second;
            x.at(sel.scale, k) = mag * (yl[k] / std::abs(yl[k]));
        }
        details << "j=" << sel.scale << " alpha'=" << sel.alpha_prime << " eps=" << sel.eps
                << (sel.dual_value.is_neg_inf() ? " [I]" : " [J]") << "; ";
    }

    PairingResult pr = pairing(x, y);
    ExperimentReport rep;
    rep.name = "duality-witness";
    rep.config = {{"profile", profile_to_json(nu)},
                  {"eps_schedule", std::vector<double>(eps_schedule.begin(), eps_schedule.end())},
                  {"J", max_scale}};
    rep.tolerance = 1e-12;
    bool sums_ok = true;
    for (const auto& sel : picks) {
        double sum = pr.per_scale[sel.scale].real();
        rep.rows.push_back({static_cast<double>(sel.scale), sum, 1.0});
        if (sum < 1.0 - 1e-12 || std::abs(pr.per_scale[sel.scale].imag()) > 1e-9) sums_ok = false;
    }

    MembershipReport mem =
        membership_report(x, nu, 0.1, default_alpha_grid(nu), default_eps_schedule(),
                          default_j_window(max_scale));
    rep.pass = sums_ok && mem.pass;
    details << "selected scales: " << picks.size() << "; membership "
            << (mem.pass ? "PASS" : "FAIL");
    rep.details = details.str();
    return {std::move(x), std::move(rep)};
}

DualityBoundConfig DualityBoundConfig::from_json(const nlohmann::json& j) {
    DualityBoundConfig cfg{profile_from_config(j),
                           num_or(j, "eps", 0.4),
                           static_cast<std::uint64_t>(num_or(j, "y_seed", 1)),
                           static_cast<std::uint32_t>(num_or(j, "trials", 50)),
                           static_cast<std::uint64_t>(num_or(j, "x_seed", 2)),
                           static_cast<std::uint32_t>(num_or(j, "J", 14))};
    return cfg;
}

nlohmann::json DualityBoundConfig::to_json() const {
    return {{"profile", profile_to_json(nu)}, {"eps", eps},       {"y_seed", y_seed},
            {"trials", x_trials},             {"x_seed", x_seed}, {"J", max_scale}};
}

ExperimentReport boundedness_experiment(const DualityBoundConfig& cfg) {
    if (!(cfg.eps > 0.0)) throw ConfigError("boundedness_experiment: eps must be positive");
    const double eps = cfg.eps;
    Profile dual = dual_profile(cfg.nu);
    Profile dual_shifted = shifted_dual(cfg.nu, 2.0 * eps);
    TreeSequence y = random_sequence(dual_shifted, cfg.max_scale, cfg.y_seed);
    ScaleMagnitudes ym = ScaleMagnitudes::from(y);

    const auto big_l = static_cast<std::uint32_t>(std::ceil(4.0 / eps));
    double a_raw = 0.0;
    for (std::int64_t lp = -1; lp <= static_cast<std::int64_t>(big_l); ++lp) {
        double ap = dual.alpha_min() + 2.0 * eps + eps / 4.0 * static_cast<double>(lp);
        ExtReal mu = dual.eval(ap - 2.0 * eps) + eps / 4.0;
        a_raw = std::max(a_raw, distance_d(ym, ap, mu));
    }
    const double a_bound = a_raw * (1.0 + 1e-6) + 1e-9; // strict majorant of the ladder distances

    // Proof-assembled bound over the (L+2)^2 split pairs: pairs with both
    // indices in [0, L] contribute geometric series in 2^(-eps/4) with
    // prefactor A or A^2, the remainder rows/columns series in 2^(-7eps/4).
    const double s1 = 1.0 / (1.0 - std::exp2(-eps / 4.0));
    const double s2 = 1.0 / (1.0 - std::exp2(-7.0 * eps / 4.0));
    const double aa = std::max(a_bound, a_bound * a_bound);
    const double lp1 = static_cast<double>(big_l) + 1.0;
    const double bound = lp1 * lp1 * aa * s1 + (lp1 + 1.0) * a_bound * s2 +
                         lp1 * a_bound * a_bound * s2;

    std::vector<std::pair<double, ExtReal>> rungs;
    for (std::int64_t l = -1; l <= static_cast<std::int64_t>(big_l); ++l) {
        double al = cfg.nu.alpha_min() + eps / 4.0 * static_cast<double>(l);
        rungs.emplace_back(al, cfg.nu.eval(al) + eps / 4.0);
    }

    ExperimentReport rep;
    rep.name = "duality-bound";
    rep.config = cfg.to_json();
    rep.tolerance = 0.0;
    double max_seen = 0.0;
    for (std::uint32_t trial = 0; trial < cfg.x_trials; ++trial) {
        std::uint64_t elem_seed = CounterRng::mix(cfg.x_seed, trial, 0);
        TreeSequence z = random_sequence(cfg.nu, cfg.max_scale, elem_seed);
        double factor = scale_into_balls(ScaleMagnitudes::from(z), rungs, 1.0);
        std::vector<std::complex<double>> w{factor};
        TreeSequence x = linear_combine(w, std::span<const TreeSequence>(&z, 1));
        double measured = std::abs(pairing(x, y).total);
        max_seen = std::max(max_seen, measured);
        rep.rows.push_back({static_cast<double>(trial), measured, bound});
    }
    rep.pass = max_seen <= bound;
    std::ostringstream os;
    os << "max |<x|y>| = " << max_seen << " vs bound " << bound << " (A=" << a_bound
       << ", L=" << big_l << ")";
    rep.details = os.str();
    return rep;
}

// --- symmetry probe ----------------------------------------------------------

std::vector<double> symmetry_default_grid(const Profile& nu) {
    std::vector<double> grid;
    const auto& segs = nu.segments();
    for (std::size_t i = 0; i + 1 < segs.size(); ++i)
        for (double f : {0.15, 0.35, 0.5, 0.65, 0.85})
            grid.push_back(segs[i].alpha + f * (segs[i + 1].alpha - segs[i].alpha));
    return grid;
}

ExperimentReport symmetry_probe(const Profile& nu, std::span<const double> alpha_grid) {
    Profile dual = dual_profile(nu);
    const auto& segs = nu.segments();

    // Per-segment supremum of g(a) = nu(a) - a, used for the masking test.
    std::vector<double> seg_sup(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        double gv = segs[i].value - segs[i].alpha;
        if (i + 1 < segs.size()) {
            double end = segs[i].value + segs[i].slope * (segs[i + 1].alpha - segs[i].alpha) -
                         segs[i + 1].alpha;
            seg_sup[i] = std::max(gv, end);
        } else {
            seg_sup[i] = gv; // the last segment's g decreases
        }
    }

    ExperimentReport rep;
    rep.name = "symmetry";
    rep.config = {{"profile", profile_to_json(nu)}};
    rep.tolerance = 1e-9;
    std::size_t excluded = 0;
    bool all_ok = true;
    for (double a : alpha_grid) {
        if (a < nu.alpha_min()) {
            ++excluded;
            continue;
        }
        std::size_t i = nu.segment_index(a);
        bool interior = a > segs[i].alpha + 1e-9 &&
                        (i + 1 >= segs.size() || a < segs[i + 1].alpha - 1e-9);
        double b = nu.eval(a).raw();
        if (!interior || segs[i].slope <= 0.0 || b <= 1e-12 || b >= 1.0 - 1e-12) {
            ++excluded;
            continue;
        }
        double level = b - a;
        // Masking: the level must be a running maximum of g up to a. Within
        // the segment the sup before a is the start value when g decreases.
        double before = segs[i].slope < 1.0 ? segs[i].value - segs[i].alpha : level;
        for (std::size_t k = 0; k < i; ++k) before = std::max(before, seg_sup[k]);
        if (before > level + 1e-12) {
            ++excluded;
            continue;
        }
        // The reflected point must not sit on a discontinuity of nu'.
        bool on_jump = dual.has_jump_at(level);
        for (const auto& ds : dual.segments())
            if (std::abs(ds.alpha - level) <= 1e-9 && dual.has_jump_at(ds.alpha)) on_jump = true;
        if (on_jump) {
            ++excluded;
            continue;
        }
        double got = dual.eval(level).raw();
        rep.rows.push_back({a, got, b});
        if (std::abs(got - b) > 1e-9) all_ok = false;
    }
    rep.pass = all_ok;
    std::ostringstream os;
    os << "eligible=" << rep.rows.size() << " excluded=" << excluded;
    rep.details = os.str();
    return rep;
}

} // namespace snu
