#include "snu/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "snu/metrics.hpp"
#include "snu/parallel.hpp"

namespace snu {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
} // namespace

std::uint64_t counting_function(const TreeSequence& x, double alpha, double eps,
                                std::uint32_t j) {
    if (j > x.max_scale()) throw InvalidArgument("counting_function: scale exceeds max_scale");
    double threshold = std::exp2(-(alpha + eps) * static_cast<double>(j));
    std::uint64_t c = 0;
    for (const auto& v : x.level(j))
        if (std::abs(v) >= threshold) ++c;
    return c;
}

ProfileEstimate estimate_profile(const TreeSequence& x, std::span<const double> alpha_grid,
                                 std::span<const double> eps_schedule,
                                 std::pair<std::uint32_t, std::uint32_t> j_window) {
    if (alpha_grid.empty() || eps_schedule.empty())
        throw InvalidArgument("estimate_profile: empty grid");
    for (std::size_t i = 0; i + 1 < eps_schedule.size(); ++i)
        if (eps_schedule[i + 1] > eps_schedule[i])
            throw InvalidArgument("estimate_profile: eps schedule must be non-increasing");
    for (double e : eps_schedule)
        if (!(e > 0.0)) throw InvalidArgument("estimate_profile: eps must be positive");
    auto [j_lo, j_hi] = j_window;
    if (j_lo < 1 || j_lo > j_hi || j_hi > x.max_scale())
        throw InvalidArgument("estimate_profile: invalid scale window");

    ScaleMagnitudes sm = ScaleMagnitudes::from(x);

    ProfileEstimate est;
    est.alpha_grid.assign(alpha_grid.begin(), alpha_grid.end());
    est.eps_schedule.assign(eps_schedule.begin(), eps_schedule.end());
    est.j_window = j_window;
    est.values.assign(alpha_grid.size(), std::vector<double>(eps_schedule.size(), kNegInf));

    parallel_for(alpha_grid.size(), [&](std::size_t ai) {
        for (std::size_t ei = 0; ei < eps_schedule.size(); ++ei) {
            double best = kNegInf;
            for (std::uint32_t j = j_lo; j <= j_hi; ++j) {
                double thr = std::exp2(-(alpha_grid[ai] + eps_schedule[ei]) * j);
                std::uint64_t c = sm.count_at_least(j, thr);
                if (c > 0)
                    best = std::max(best, std::log2(static_cast<double>(c)) / j);
            }
            est.values[ai][ei] = best;
        }
    });

    est.limit_values.reserve(alpha_grid.size());
    for (std::size_t ai = 0; ai < alpha_grid.size(); ++ai)
        est.limit_values.push_back(est.values[ai].back());
    return est;
}

void write_estimate_csv(const ProfileEstimate& est, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write estimate file: " + path.string());
    out << "alpha,eps,nu_hat,limit\n";
    char buf[128];
    for (std::size_t ai = 0; ai < est.alpha_grid.size(); ++ai)
        for (std::size_t ei = 0; ei < est.eps_schedule.size(); ++ei) {
            double v = est.values[ai][ei];
            int limit = (ei + 1 == est.eps_schedule.size()) ? 1 : 0;
            if (v == kNegInf)
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,-inf,%d\n", est.alpha_grid[ai],
                              est.eps_schedule[ei], limit);
            else
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", est.alpha_grid[ai],
                              est.eps_schedule[ei], v, limit);
            out << buf;
        }
}

MembershipReport membership_report(const TreeSequence& x, const Profile& nu, double tol,
                                   std::span<const double> alpha_grid,
                                   std::span<const double> eps_schedule,
                                   std::pair<std::uint32_t, std::uint32_t> j_window) {
    if (!(tol > 0.0)) throw InvalidArgument("membership_report: tol must be positive");
    ProfileEstimate est = estimate_profile(x, alpha_grid, eps_schedule, j_window);
    ScaleMagnitudes sm = ScaleMagnitudes::from(x);

    MembershipReport rep;
    rep.tol = tol;
    double eps_last = est.eps_schedule.back();
    for (std::size_t ai = 0; ai < est.alpha_grid.size(); ++ai) {
        MembershipRow row{};
        row.alpha = est.alpha_grid[ai];
        row.nu_hat = est.limit_values[ai];
        ExtReal nv = nu.eval(row.alpha);
        row.nu_value = nv.raw();
        if (row.nu_hat == kNegInf)
            row.pass = true; // nu_hat = -inf is dominated by anything
        else if (nv.is_neg_inf())
            row.pass = false;
        else
            row.pass = row.nu_hat <= nv.raw() + tol;
        if (!row.pass) {
            auto [j_lo, j_hi] = j_window;
            for (std::uint32_t j = j_lo; j <= j_hi; ++j) {
                double thr = std::exp2(-(row.alpha + eps_last) * j);
                std::uint64_t c = sm.count_at_least(j, thr);
                if (c > 0 && std::log2(static_cast<double>(c)) / j == row.nu_hat) {
                    row.witness_scale = j;
                    row.witness_count = c;
                    break;
                }
            }
            rep.pass = false;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<double> default_alpha_grid(const Profile& nu) {
    double hi = (nu.alpha_max() == std::numeric_limits<double>::infinity())
                    ? nu.segments().back().alpha + 1.0
                    : nu.alpha_max();
    std::vector<double> grid = nu.refined_grid();
    for (double a = nu.alpha_min() - 1.0; a <= hi + 0.5 + 1e-12; a += 0.05) grid.push_back(a);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

std::vector<double> default_eps_schedule() { return {0.2, 0.1, 0.05, 0.02, 0.01}; }

std::pair<std::uint32_t, std::uint32_t> default_j_window(std::uint32_t max_scale) {
    std::uint32_t lo = std::max<std::uint32_t>(1, max_scale / 2);
    return {lo, max_scale};
}

} // namespace snu
