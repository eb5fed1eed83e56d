#pragma once

#include <filesystem>

#include "snu/treeseq.hpp"

namespace snu {

/// Binary format "SNU1": 4-byte magic "SNU1", unsigned 32-bit little-endian
/// max scale J, then for j = 0..J the 2^j coefficients of scale j as pairs of
/// little-endian IEEE-754 binary64 (real, imaginary). Round trips are
/// bit-exact.
void write_sequence(const TreeSequence& x, const std::filesystem::path& path);
TreeSequence read_sequence(const std::filesystem::path& path);

/// CSV alternative: header "j,k,re,im", one row per coefficient, zero rows
/// omissible (the loader fills zeros). The writer emits non-zero rows plus a
/// row for scale J so the max scale survives the round trip; doubles are
/// printed with 17 significant digits, which round-trips binary64 exactly.
void write_sequence_csv(const TreeSequence& x, const std::filesystem::path& path);
TreeSequence read_sequence_csv(const std::filesystem::path& path);

} // namespace snu
