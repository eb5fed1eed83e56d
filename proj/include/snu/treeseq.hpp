#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "snu/profile.hpp"

namespace snu {

/// Index into the dyadic tree: scale j, position k with 0 <= k < 2^j.
struct NodeIndex {
    std::uint32_t j;
    std::uint64_t k;
};

/// Dyadic tree-indexed coefficient array truncated at max_scale: one array of
/// 2^j complex values per scale j = 0..max_scale. Values are immutable after
/// construction in library usage; constructors below build the sequences used
/// throughout.
class TreeSequence {
  public:
    using value_type = std::complex<double>;

    /// All-zero sequence. max_scale is capped at 24 (the largest scale the
    /// CLI accepts; 2^25 coefficients).
    explicit TreeSequence(std::uint32_t max_scale);

    std::uint32_t max_scale() const { return static_cast<std::uint32_t>(levels_.size()) - 1; }

    std::span<const value_type> level(std::uint32_t j) const;
    std::span<value_type> level(std::uint32_t j);

    const value_type& at(std::uint32_t j, std::uint64_t k) const;
    value_type& at(std::uint32_t j, std::uint64_t k);

    std::uint64_t nonzero_count(std::uint32_t j) const;

    bool operator==(const TreeSequence& other) const { return levels_ == other.levels_; }

  private:
    std::vector<std::vector<value_type>> levels_;
};

constexpr std::uint32_t kMaxScaleLimit = 24;

/// The sequence whose only non-zero component is a 1 at (j, k).
TreeSequence unit_sequence(std::uint32_t max_scale, std::uint32_t j, std::uint64_t k);

/// One coefficient amplitude * 2^(-alpha*m) at (m, 0), zeros elsewhere.
TreeSequence spike_sequence(std::uint32_t max_scale, std::uint32_t m, double alpha,
                            double amplitude);

/// At each scale j: exactly floor(2^(nu(alpha)*j)) coefficients equal to
/// amplitude * 2^(-alpha*j), at positions k = 0, 1, 2, ...; requires
/// nu(alpha) >= 0.
TreeSequence staircase_sequence(const Profile& nu, std::uint32_t max_scale, double alpha,
                                double amplitude);

/// N copies of base with scales < j0 zeroed and pairwise disjoint supports at
/// every scale >= j0; per-scale nonzero counts and magnitudes are preserved.
/// For N = 1 the base's own positions are kept; for N >= 2 each copy packs its
/// scale-j values into the block [n*c_j, (n+1)*c_j) where c_j is the count.
/// Throws when N * c_j > 2^j for some scale >= j0.
std::vector<TreeSequence> disjoint_translates(const TreeSequence& base, std::uint32_t n_copies,
                                              std::uint32_t j0);

/// Deterministic pseudo-random member of the profile's sequence space at
/// finite scale: per scale, magnitude tiers follow the staircase counts on the
/// breakpoint-refined grid of nu (so counts of coefficients >= 2^(-alpha*j)
/// stay within 2 * 2^(nu(alpha)*j)), positions are drawn uniformly without
/// replacement and phases uniformly, all from the seed.
TreeSequence random_sequence(const Profile& nu, std::uint32_t max_scale, std::uint64_t seed);

/// Coefficient-wise sum of coeffs[i] * seqs[i]; all sequences must share
/// max_scale.
TreeSequence linear_combine(std::span<const std::complex<double>> coeffs,
                            std::span<const TreeSequence> seqs);

/// x + weight * (translate n of base, scales below j0 zeroed) accumulated in
/// place; the same per-scale block placement as disjoint_translates for
/// N >= 2, so summing over n reproduces linear_combine over its output.
void accumulate_translate(TreeSequence& acc, const TreeSequence& base, std::uint64_t n,
                          std::uint32_t j0, std::complex<double> weight);

} // namespace snu
