#pragma once

#include <filesystem>
#include <string>

#include "snu/profile.hpp"

#include "json.hpp"

namespace snu {

/// Schema: {"alpha_min": f, "segments": [{"alpha": f, "value": f, "slope": f}, ...]}
/// Segments sorted by alpha, first alpha equal to alpha_min. All Profile
/// invariants are enforced; violations raise ProfileInvariantError naming the
/// failed invariant, schema problems raise FormatError naming the field.
Profile profile_from_json(const nlohmann::json& j);
Profile load_profile(const std::filesystem::path& path);

nlohmann::json profile_to_json(const Profile& nu);
void save_profile(const Profile& nu, const std::filesystem::path& path);

} // namespace snu
