#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "snu/profile.hpp"
#include "snu/treeseq.hpp"

namespace snu {

/// card{k : |x_{j,k}| >= 2^(-(alpha+eps)*j)} at scale j.
std::uint64_t counting_function(const TreeSequence& x, double alpha, double eps,
                                std::uint32_t j);

/// Sampled empirical asymptotic profile: for each (alpha, eps) the finite-
/// scale limsup proxy max over j in the window of log2(count)/j, with
/// log2(0)/j recorded as -inf. limit_values is the column at the last
/// (smallest) eps.
struct ProfileEstimate {
    std::vector<double> alpha_grid;
    std::vector<double> eps_schedule; // positive, non-increasing
    std::pair<std::uint32_t, std::uint32_t> j_window;
    std::vector<std::vector<double>> values; // values[alpha index][eps index]
    std::vector<double> limit_values;
};

ProfileEstimate estimate_profile(const TreeSequence& x, std::span<const double> alpha_grid,
                                 std::span<const double> eps_schedule,
                                 std::pair<std::uint32_t, std::uint32_t> j_window);

/// CSV columns: alpha,eps,nu_hat,limit (limit = 1 on rows of the smallest
/// eps); nu_hat of -inf prints as -inf.
void write_estimate_csv(const ProfileEstimate& est, const std::filesystem::path& path);

/// Per-alpha membership verdict against a target profile: PASS when
/// nu_hat(alpha) <= nu(alpha) + tol with -inf absorbing; FAIL records the
/// witnessing scale and count. A finite-scale necessary-evidence check, not a
/// proof of membership (which is an asymptotic statement).
struct MembershipRow {
    double alpha;
    double nu_hat; // -inf when no coefficient reaches the threshold
    double nu_value;
    bool pass;
    std::uint32_t witness_scale; // scale achieving nu_hat (0 when nu_hat = -inf)
    std::uint64_t witness_count;
};

struct MembershipReport {
    std::vector<MembershipRow> rows;
    bool pass = true;
    double tol = 0.1;
};

MembershipReport membership_report(const TreeSequence& x, const Profile& nu, double tol,
                                   std::span<const double> alpha_grid,
                                   std::span<const double> eps_schedule,
                                   std::pair<std::uint32_t, std::uint32_t> j_window);

/// Defaults used by the CLI and tests.
std::vector<double> default_alpha_grid(const Profile& nu);
std::vector<double> default_eps_schedule();
std::pair<std::uint32_t, std::uint32_t> default_j_window(std::uint32_t max_scale);

} // namespace snu
