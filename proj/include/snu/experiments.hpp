#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "snu/asymptotic.hpp"
#include "snu/metrics.hpp"
#include "snu/profile.hpp"
#include "snu/treeseq.hpp"

#include "json.hpp"

namespace snu {

struct ExperimentRow {
    double key; // N, scale, trial index or alpha depending on the experiment
    double measured;
    double theory;
};

/// Structured output of a witness run: rows sorted by key, the fitted
/// exponent (least squares on log2(measured) vs log2(key) where applicable),
/// the theoretical exponent, and the verdict at the recorded tolerance.
struct ExperimentReport {
    std::string name;
    nlohmann::json config; // echo of the configuration that produced the run
    std::vector<ExperimentRow> rows;
    std::optional<double> fitted_exponent;
    std::optional<double> theory_exponent;
    bool pass = false;
    double tolerance = 0.0;
    std::string details;

    nlohmann::json to_json() const;
    void write_csv(const std::filesystem::path& path) const;
};

/// Configuration of the p-convexity growth witness. With s = alpha' - alpha
/// and t = nu(alpha') - nu(alpha) + eps, validity requires the non-convexity
/// regime t < p*s together with p/(p+1)*(s+t) < 1 - nu(alpha).
struct ConvexityConfig {
    Profile nu;
    double p;           // in (0, 1]
    double alpha;       // >= alpha_min
    double alpha_prime; // > alpha
    double eps;         // > 0, nu(alpha') + eps < 1
    double lambda;      // > 0, free scale of the building block
    std::vector<std::uint32_t> n_list;

    double s() const { return alpha_prime - alpha; }
    double t() const;
    double theory_exponent() const; // (p*s - t) / (p*(s + t))
    std::uint32_t focal_scale(std::uint32_t n) const;
    void validate() const; // throws ConfigError naming the violated invariant

    static ConvexityConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// For each N builds x_1..x_N (disjoint staircase translates), forms the
/// p-convex combination x = N^(-1/p) sum x_n, measures
/// d_{alpha', nu(alpha')+eps}(x) and fits the growth exponent in N.
/// PASS when |fitted - theory| <= 0.15 * theory and the measured values are
/// non-decreasing beyond the first row.
ExperimentReport nonconvexity_witness(const ConvexityConfig& cfg, std::uint32_t max_scale);

struct BoundednessConfig {
    Profile nu;
    double bound_m = 1.0; // target bound M
    double eps = 0.2;
    double alpha = 0.5;
    std::uint32_t n_elements = 8; // elements per p0-convex combination
    std::uint32_t trials = 100;
    std::uint64_t seed = 0;
    std::uint32_t max_scale = 14;

    static BoundednessConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Positive direction of local p0-convexity: samples elements of the ladder
/// neighbourhood U (radius M/(L+2) balls), forms random p0-convex
/// combinations and verifies d_{alpha, nu(alpha)+eps} <= M on every trial.
ExperimentReport convexity_boundedness(const BoundednessConfig& cfg);

struct NonnormabilityConfig {
    Profile nu;
    double alpha_n;      // spike exponent, < alpha_prime
    double alpha_prime;  // < alpha_min
    double delta0 = 0.5; // ball radius, in (0, 1)
    std::vector<std::pair<double, double>> ladder; // (alpha_l, eps_l) ball parameters
    std::vector<std::uint32_t> m_list;
    std::uint32_t max_scale = 16;

    static NonnormabilityConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Spike witnesses against p-normability: every x^m enters all ladder balls
/// once m passes the reported entry threshold, while d_{alpha',-inf}(x^m)
/// = delta0 * 2^((alpha'-alpha_n) m) grows without bound.
ExperimentReport nonnormability_witness(const NonnormabilityConfig& cfg);

/// Per-scale partial sums S_j = sum_k x_{j,k} * conj(y_{j,k}) (times 2^-j
/// when weighted) and their total. No convergence claim at finite scale.
struct PairingResult {
    std::vector<std::complex<double>> per_scale;
    std::complex<double> total;
};

PairingResult pairing(const TreeSequence& x, const TreeSequence& y, bool weighted = false);

/// Output of divergence_witness: the constructed sequence together with the
/// verification report (per-selected-scale pairing sums and the membership
/// check of x against nu).
struct DivergenceResult {
    TreeSequence x;
    ExperimentReport report;
};

/// Given y violating the shifted dual balls within the available scales,
/// constructs x in the profile's space whose pairing with y has per-scale
/// sums >= 1 on every selected scale. Selected scales are strictly
/// increasing; eps_n cycles the schedule. Throws NoViolationFound when the
/// first pass through the schedule finds no violation.
DivergenceResult divergence_witness(const TreeSequence& y, const Profile& nu,
                                    std::span<const double> eps_schedule,
                                    std::uint32_t max_scale);

struct DualityBoundConfig {
    Profile nu;
    double eps = 0.4;
    std::uint64_t y_seed = 1;
    std::uint32_t x_trials = 50;
    std::uint64_t x_seed = 2;
    std::uint32_t max_scale = 14;

    static DualityBoundConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// Converse direction: y is generated inside the doubly-shifted dual space,
/// x ranges over the ladder neighbourhood U, and every |<x|y>| must stay
/// below the bound assembled from the four ladder cases (geometric series in
/// 2^(-eps/4) and 2^(-7eps/4) with prefactors A and A^2).
ExperimentReport boundedness_experiment(const DualityBoundConfig& cfg);

/// Reflection probe for the dual profile: an interior point (alpha, b) of a
/// strictly increasing segment with 0 < b < 1 reflects to (b - alpha, b) on
/// nu' provided the level b - alpha is a running maximum of nu(a) - a
/// ("unmasked") and nu' is continuous at b - alpha; all other points are
/// excluded. Rows hold the eligible points; details counts exclusions.
ExperimentReport symmetry_probe(const Profile& nu, std::span<const double> alpha_grid);

/// Default probe grid: interior fractions of every segment.
std::vector<double> symmetry_default_grid(const Profile& nu);

} // namespace snu
