#include "snu/treeseq.hpp"

#include <algorithm>
#include <cmath>

#include "snu/rng.hpp"

namespace snu {

TreeSequence::TreeSequence(std::uint32_t max_scale) {
    if (max_scale > kMaxScaleLimit)
        throw InvalidArgument("max_scale exceeds the supported limit of 24");
    levels_.resize(max_scale + 1);
    for (std::uint32_t j = 0; j <= max_scale; ++j)
        levels_[j].assign(std::uint64_t{1} << j, value_type{0.0, 0.0});
}

std::span<const TreeSequence::value_type> TreeSequence::level(std::uint32_t j) const {
    if (j >= levels_.size()) throw InvalidArgument("scale out of range");
    return levels_[j];
}

std::span<TreeSequence::value_type> TreeSequence::level(std::uint32_t j) {
    if (j >= levels_.size()) throw InvalidArgument("scale out of range");
    return levels_[j];
}

const TreeSequence::value_type& TreeSequence::at(std::uint32_t j, std::uint64_t k) const {
    if (j >= levels_.size() || k >= levels_[j].size())
        throw InvalidArgument("tree index out of range");
    return levels_[j][k];
}

TreeSequence::value_type& TreeSequence::at(std::uint32_t j, std::uint64_t k) {
    if (j >= levels_.size() || k >= levels_[j].size())
        throw InvalidArgument("tree index out of range");
    return levels_[j][k];
}

std::uint64_t TreeSequence::nonzero_count(std::uint32_t j) const {
    std::uint64_t c = 0;
    for (const auto& v : level(j))
        if (v != value_type{0.0, 0.0}) ++c;
    return c;
}

TreeSequence unit_sequence(std::uint32_t max_scale, std::uint32_t j, std::uint64_t k) {
    if (j > max_scale || k >= (std::uint64_t{1} << j))
        throw InvalidArgument("unit_sequence: invalid node index");
    TreeSequence x(max_scale);
    x.at(j, k) = 1.0;
    return x;
}

TreeSequence spike_sequence(std::uint32_t max_scale, std::uint32_t m, double alpha,
                            double amplitude) {
    if (m > max_scale) throw InvalidArgument("spike_sequence: scale m exceeds max_scale");
    if (!(amplitude > 0.0)) throw InvalidArgument("spike_sequence: amplitude must be positive");
    TreeSequence x(max_scale);
    x.at(m, 0) = amplitude * std::exp2(-alpha * static_cast<double>(m));
    return x;
}

namespace {

/// floor(2^(v*j)) capped at 2^j; v in [0, 1].
std::uint64_t staircase_count(double v, std::uint32_t j) {
    double c = std::floor(std::exp2(v * static_cast<double>(j)));
    double cap = std::exp2(static_cast<double>(j));
    return static_cast<std::uint64_t>(std::min(c, cap));
}

} // namespace

TreeSequence staircase_sequence(const Profile& nu, std::uint32_t max_scale, double alpha,
                                double amplitude) {
    if (!(amplitude > 0.0))
        throw InvalidArgument("staircase_sequence: amplitude must be positive");
    ExtReal v = nu.eval(alpha);
    if (v.is_neg_inf())
        throw InvalidArgument("staircase_sequence: nu(alpha) = -inf below alpha_min");
    TreeSequence x(max_scale);
    for (std::uint32_t j = 0; j <= max_scale; ++j) {
        std::uint64_t count = staircase_count(v.raw(), j);
        double mag = amplitude * std::exp2(-alpha * static_cast<double>(j));
        auto lvl = x.level(j);
        for (std::uint64_t k = 0; k < count; ++k) lvl[k] = mag;
    }
    return x;
}

void accumulate_translate(TreeSequence& acc, const TreeSequence& base, std::uint64_t n,
                          std::uint32_t j0, std::complex<double> weight) {
    if (acc.max_scale() != base.max_scale())
        throw InvalidArgument("accumulate_translate: max_scale mismatch");
    for (std::uint32_t j = j0; j <= base.max_scale(); ++j) {
        auto src = base.level(j);
        auto dst = acc.level(j);
        std::uint64_t c = base.nonzero_count(j);
        std::uint64_t pos = n * c;
        for (std::uint64_t k = 0; k < src.size(); ++k) {
            if (src[k] == std::complex<double>{0.0, 0.0}) continue;
            if (pos >= dst.size())
                throw InvalidArgument("accumulate_translate: translate does not fit in scale");
            dst[pos++] += weight * src[k];
        }
    }
}

std::vector<TreeSequence> disjoint_translates(const TreeSequence& base, std::uint32_t n_copies,
                                              std::uint32_t j0) {
    if (n_copies == 0) throw InvalidArgument("disjoint_translates: need at least one copy");
    if (j0 > base.max_scale()) throw InvalidArgument("disjoint_translates: j0 exceeds max_scale");
    for (std::uint32_t j = j0; j <= base.max_scale(); ++j) {
        std::uint64_t c = base.nonzero_count(j);
        if (c * n_copies > (std::uint64_t{1} << j))
            throw InvalidArgument("disjoint_translates: supports cannot be disjoint at scale " +
                                  std::to_string(j));
    }
    std::vector<TreeSequence> out;
    out.reserve(n_copies);
    for (std::uint32_t n = 0; n < n_copies; ++n) {
        TreeSequence copy(base.max_scale());
        if (n_copies == 1) {
            for (std::uint32_t j = j0; j <= base.max_scale(); ++j) {
                auto src = base.level(j);
                std::copy(src.begin(), src.end(), copy.level(j).begin());
            }
        } else {
            accumulate_translate(copy, base, n, j0, 1.0);
        }
        out.push_back(std::move(copy));
    }
    return out;
}

TreeSequence random_sequence(const Profile& nu, std::uint32_t max_scale, std::uint64_t seed) {
    // Magnitude tiers: the breakpoint-refined grid of nu restricted to where
    // the profile is finite, with the plateau start included when 1 is
    // attained so "full level" profiles generate full levels.
    std::vector<std::pair<double, double>> tiers; // (alpha, nu(alpha))
    for (double a : nu.refined_grid()) {
        ExtReal v = nu.eval(a);
        if (v.is_neg_inf()) continue;
        if (!tiers.empty() && a > nu.alpha_max()) break;
        tiers.emplace_back(a, v.raw());
    }

    TreeSequence x(max_scale);
    for (std::uint32_t j = 0; j <= max_scale; ++j) {
        CounterRng rng(seed, j);
        std::uint64_t width = std::uint64_t{1} << j;
        std::vector<bool> used(width, false);
        std::uint64_t placed = 0;
        auto lvl = x.level(j);
        for (const auto& [alpha, v] : tiers) {
            std::uint64_t target = staircase_count(v, j);
            double mag = std::exp2(-alpha * static_cast<double>(j));
            while (placed < target) {
                std::uint64_t k = rng.next_bits(j);
                if (used[k]) continue;
                used[k] = true;
                double phase = 2.0 * 3.14159265358979323846 * rng.next_unit();
                lvl[k] = std::polar(mag, phase);
                ++placed;
            }
        }
    }
    return x;
}

TreeSequence linear_combine(std::span<const std::complex<double>> coeffs,
                            std::span<const TreeSequence> seqs) {
    if (coeffs.size() != seqs.size())
        throw InvalidArgument("linear_combine: coefficient/sequence count mismatch");
    if (seqs.empty()) throw InvalidArgument("linear_combine: nothing to combine");
    std::uint32_t max_scale = seqs[0].max_scale();
    for (const auto& s : seqs)
        if (s.max_scale() != max_scale)
            throw InvalidArgument("linear_combine: max_scale mismatch");
    TreeSequence out(max_scale);
    for (std::uint32_t j = 0; j <= max_scale; ++j) {
        auto dst = out.level(j);
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            auto src = seqs[i].level(j);
            for (std::uint64_t k = 0; k < src.size(); ++k) dst[k] += coeffs[i] * src[k];
        }
    }
    return out;
}

} // namespace snu
