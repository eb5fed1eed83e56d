#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "snu/asymptotic.hpp"
#include "snu/experiments.hpp"
#include "snu/metrics.hpp"
#include "snu/profile_io.hpp"
#include "snu/sequence_io.hpp"

namespace {

using namespace snu;

constexpr int kExitOk = 0;
constexpr int kExitEnvironment = 1;
constexpr int kExitFail = 2;
constexpr int kExitUsage = 64;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// "lo:hi:n" (linear) or "log:lo:hi:n".
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t next = spec.find(':', pos);
        parts.push_back(spec.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    bool logspace = !parts.empty() && parts.front() == "log";
    if (logspace) parts.erase(parts.begin());
    if (parts.size() != 3) throw InvalidArgument("grid spec must be [log:]lo:hi:count");
    double lo = std::stod(parts[0]), hi = std::stod(parts[1]);
    int n = std::stoi(parts[2]);
    if (n < 2 || !(hi > lo)) throw InvalidArgument("grid spec needs hi > lo and count >= 2");
    std::vector<double> g;
    for (int i = 0; i < n; ++i) {
        double f = static_cast<double>(i) / (n - 1);
        g.push_back(logspace ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
    }
    return g;
}

Profile profile_from_config(const nlohmann::json& cfg) {
    if (!cfg.contains("profile")) throw ConfigError("config: missing 'profile'");
    if (cfg["profile"].is_string()) return load_profile(cfg["profile"].get<std::string>());
    return profile_from_json(cfg["profile"]);
}

TreeSequence load_any_sequence(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error("cannot open sequence file: " + path.string());
    char magic[4] = {0, 0, 0, 0};
    probe.read(magic, 4);
    probe.close();
    if (std::string(magic, 4) == "SNU1") return read_sequence(path);
    return read_sequence_csv(path);
}

void write_profile_curve(const Profile& p, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write curve file: " + path.string());
    out << "alpha,value\n";
    double hi = (p.alpha_max() == std::numeric_limits<double>::infinity())
                    ? p.segments().back().alpha + 1.0
                    : p.alpha_max();
    for (double a = p.alpha_min() - 0.25; a <= hi + 0.25 + 1e-12; a += 1e-3) {
        ExtReal v = p.eval(a);
        out << fmt(a) << ',' << (v.is_neg_inf() ? std::string("-inf") : fmt(v.raw())) << '\n';
    }
}

// --- profile subcommands ---------------------------------------------------

int cmd_profile_p0(const std::string& in) {
    std::cout << fmt(load_profile(in).convexity_index()) << '\n';
    return kExitOk;
}

int cmd_profile_dual(const std::string& in, const std::string& out, std::string csv) {
    Profile dual = dual_profile(load_profile(in));
    save_profile(dual, out);
    if (csv.empty()) csv = out + ".csv";
    write_profile_curve(dual, csv);
    return kExitOk;
}

int cmd_profile_conjugate(const std::string& in, const std::string& out,
                          const std::string& pgrid) {
    Profile nu = load_profile(in);
    std::ofstream os(out);
    if (!os) throw Error("cannot write conjugate file: " + out);
    os << "p,eta\n";
    for (double p : parse_grid(pgrid)) os << fmt(p) << ',' << fmt(concave_conjugate(nu, p)) << '\n';
    return kExitOk;
}

int cmd_profile_check(const std::string& in) {
    Profile nu = load_profile(in);
    auto rep = check_dual_properties(nu, 1e-3, 1e-9);
    auto line = [](const char* what, bool ok) {
        std::cout << (ok ? "PASS " : "FAIL ") << what << '\n';
    };
    line("right-continuity", rep.right_continuous);
    line("duality inequality", rep.duality);
    line("touching case", rep.touching);
    line("slope bound", rep.slope);
    line("edge alpha'_min", rep.edge_min);
    line("edge alpha'_max", rep.edge_max);
    if (!rep.all()) {
        std::cout << "violation: " << rep.detail << '\n';
        return kExitFail;
    }
    return kExitOk;
}

// --- seq subcommands ---------------------------------------------------------

int cmd_seq_generate(const std::string& kind, const std::string& profile_path, std::uint32_t j,
                     std::uint64_t seed, const std::string& out, double alpha, double amplitude,
                     std::uint32_t m, bool as_csv) {
    TreeSequence x(0);
    if (kind == "staircase") {
        x = staircase_sequence(load_profile(profile_path), j, alpha, amplitude);
    } else if (kind == "spike") {
        x = spike_sequence(j, m, alpha, amplitude);
    } else {
        x = random_sequence(load_profile(profile_path), j, seed);
    }
    if (as_csv)
        write_sequence_csv(x, out);
    else
        write_sequence(x, out);
    return kExitOk;
}

int cmd_seq_analyze(const std::string& in, const std::string& profile_path, double tol,
                    std::string out) {
    TreeSequence x = load_any_sequence(in);
    Profile nu = load_profile(profile_path);
    auto grid = default_alpha_grid(nu);
    auto eps = default_eps_schedule();
    auto window = default_j_window(x.max_scale());
    if (out.empty()) out = in + ".estimate.csv";
    write_estimate_csv(estimate_profile(x, grid, eps, window), out);
    auto rep = membership_report(x, nu, tol, grid, eps, window);
    for (const auto& row : rep.rows)
        if (!row.pass)
            std::cout << "FAIL alpha=" << fmt(row.alpha) << " nu_hat=" << fmt(row.nu_hat)
                      << " scale=" << row.witness_scale << " count=" << row.witness_count << '\n';
    std::cout << "verdict: " << (rep.pass ? "PASS" : "FAIL") << '\n';
    return rep.pass ? kExitOk : kExitFail;
}

int cmd_seq_norm(const std::string& in, double alpha, const std::string& beta_text, double p,
                 bool has_beta, bool has_p) {
    TreeSequence x = load_any_sequence(in);
    if (has_beta == has_p)
        throw InvalidArgument("norm needs exactly one of --beta or --p");
    double value;
    if (has_beta) {
        ExtReal beta = (beta_text == "-inf")
                           ? ExtReal::neg_inf()
                           : ExtReal(std::stod(beta_text));
        value = distance_d(x, alpha, beta);
    } else {
        value = besov_norm(x, alpha, p);
    }
    std::cout << fmt(value) << '\n';
    return kExitOk;
}

// --- experiment subcommand ---------------------------------------------------

int cmd_experiment(const std::string& kind, const std::string& config_path,
                   const std::string& out, const std::string& csv) {
    std::ifstream in(config_path);
    if (!in) throw Error("cannot open config file: " + config_path);
    nlohmann::json cfg;
    try {
        in >> cfg;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("config JSON parse error in " + config_path + ": " + e.what());
    }

    ExperimentReport rep;
    if (kind == "nonconvexity") {
        auto c = ConvexityConfig::from_json(cfg);
        rep = nonconvexity_witness(c, static_cast<std::uint32_t>(cfg.value("J", 22)));
    } else if (kind == "boundedness") {
        rep = convexity_boundedness(BoundednessConfig::from_json(cfg));
    } else if (kind == "nonnorm") {
        rep = nonnormability_witness(NonnormabilityConfig::from_json(cfg));
    } else if (kind == "duality-witness") {
        if (!cfg.contains("y")) throw ConfigError("duality-witness config needs 'y' (sequence path)");
        TreeSequence y = load_any_sequence(cfg["y"].get<std::string>());
        Profile nu = profile_from_config(cfg);
        std::vector<double> eps = cfg.value("eps_schedule", std::vector<double>{0.02, 0.01, 0.005});
        auto res = divergence_witness(y, nu, eps, static_cast<std::uint32_t>(
                                                      cfg.value("J", y.max_scale())));
        rep = std::move(res.report);
        if (cfg.contains("x_out")) write_sequence(res.x, cfg["x_out"].get<std::string>());
    } else if (kind == "duality-bound") {
        rep = boundedness_experiment(DualityBoundConfig::from_json(cfg));
    } else { // symmetry
        Profile nu = profile_from_config(cfg);
        std::vector<double> grid;
        if (cfg.contains("grid"))
            grid = cfg["grid"].get<std::vector<double>>();
        else
            grid = symmetry_default_grid(nu);
        rep = symmetry_probe(nu, grid);
    }

    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw Error("cannot write report file: " + out);
        os << rep.to_json().dump(2) << '\n';
    }
    if (!csv.empty()) rep.write_csv(csv);
    std::cout << rep.name << ": " << (rep.pass ? "PASS" : "FAIL") << " (" << rep.details << ")\n";
    return rep.pass ? kExitOk : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiscale sequence space toolkit"};
    app.require_subcommand(1);

    // profile
    auto* profile = app.add_subcommand("profile", "admissible profile transforms");
    profile->require_subcommand(1);
    std::string p_in, p_out, p_csv, p_grid = "0.05:5:100";
    auto* p_p0 = profile->add_subcommand("p0", "print the convexity index");
    p_p0->add_option("--in", p_in)->required();
    auto* p_dual = profile->add_subcommand("dual", "write the dual profile and a sampled curve");
    p_dual->add_option("--in", p_in)->required();
    p_dual->add_option("--out", p_out)->required();
    p_dual->add_option("--csv", p_csv);
    auto* p_conj = profile->add_subcommand("conjugate", "tabulate the concave conjugate");
    p_conj->add_option("--in", p_in)->required();
    p_conj->add_option("--out", p_out)->required();
    p_conj->add_option("--pgrid", p_grid, "grid spec [log:]lo:hi:count");
    auto* p_check = profile->add_subcommand("check", "run the dual-profile property grid");
    p_check->add_option("--in", p_in)->required();

    // seq
    auto* seq = app.add_subcommand("seq", "tree sequence generation and analysis");
    seq->require_subcommand(1);
    std::string s_kind, s_profile, s_in, s_out, s_beta;
    std::uint32_t s_j = 16, s_m = 0;
    std::uint64_t s_seed = 0;
    double s_alpha = 0.0, s_amplitude = 1.0, s_p = 1.0, s_tol = 0.1;
    bool s_csv = false;
    auto* s_gen = seq->add_subcommand("generate", "write a generated sequence");
    s_gen->add_option("--kind", s_kind)
        ->required()
        ->check(CLI::IsMember({"staircase", "spike", "random"}));
    s_gen->add_option("--profile", s_profile);
    s_gen->add_option("--J", s_j)->check(CLI::Range(0u, kMaxScaleLimit));
    s_gen->add_option("--seed", s_seed);
    s_gen->add_option("--out", s_out)->required();
    s_gen->add_option("--alpha", s_alpha);
    s_gen->add_option("--amplitude", s_amplitude);
    s_gen->add_option("--m", s_m);
    s_gen->add_flag("--csv", s_csv, "write the CSV format instead of SNU1");
    auto* s_an = seq->add_subcommand("analyze", "estimate the profile and check membership");
    s_an->add_option("--in", s_in)->required();
    s_an->add_option("--profile", s_profile)->required();
    s_an->add_option("--tol", s_tol);
    s_an->add_option("--out", s_out, "write the profile estimate CSV here");
    auto* s_norm = seq->add_subcommand("norm", "print a distance or Besov norm");
    s_norm->add_option("--in", s_in)->required();
    s_norm->add_option("--alpha", s_alpha)->required();
    auto* beta_opt = s_norm->add_option("--beta", s_beta, "finite value or -inf");
    auto* p_opt = s_norm->add_option("--p", s_p);
    beta_opt->excludes(p_opt);

    // experiment
    auto* exp = app.add_subcommand("experiment", "run a witness experiment");
    std::string e_kind, e_config, e_out, e_csv;
    exp->add_option("kind", e_kind)
        ->required()
        ->check(CLI::IsMember({"nonconvexity", "boundedness", "nonnorm", "duality-witness",
                               "duality-bound", "symmetry"}));
    exp->add_option("--config", e_config)->required();
    exp->add_option("--out", e_out);
    exp->add_option("--csv", e_csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (p_p0->parsed()) return cmd_profile_p0(p_in);
        if (p_dual->parsed()) return cmd_profile_dual(p_in, p_out, p_csv);
        if (p_conj->parsed()) return cmd_profile_conjugate(p_in, p_out, p_grid);
        if (p_check->parsed()) return cmd_profile_check(p_in);
        if (s_gen->parsed()) {
            if ((s_kind == "staircase" || s_kind == "random") && s_profile.empty())
                throw InvalidArgument("generate --kind " + s_kind + " needs --profile");
            return cmd_seq_generate(s_kind, s_profile, s_j, s_seed, s_out, s_alpha, s_amplitude,
                                    s_m, s_csv);
        }
        if (s_an->parsed()) return cmd_seq_analyze(s_in, s_profile, s_tol, s_out);
        if (s_norm->parsed())
            return cmd_seq_norm(s_in, s_alpha, s_beta, s_p, beta_opt->count() > 0,
                                p_opt->count() > 0);
        if (exp->parsed()) return cmd_experiment(e_kind, e_config, e_out, e_csv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEnvironment;
    }
    return kExitUsage;
}
