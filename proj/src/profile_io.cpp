#include "snu/profile_io.hpp"

#include <fstream>

namespace snu {

namespace {

double require_number(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw FormatError(std::string("profile JSON: missing or non-numeric field '") + field +
                          "'");
    return j[field].get<double>();
}

} // namespace

Profile profile_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw FormatError("profile JSON: top level must be an object");
    double alpha_min = require_number(j, "alpha_min");
    if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
        throw FormatError("profile JSON: 'segments' must be a non-empty array");
    std::vector<ProfileSegment> segs;
    segs.reserve(j["segments"].size());
    for (const auto& s : j["segments"]) {
        segs.push_back({require_number(s, "alpha"), require_number(s, "value"),
                        require_number(s, "slope")});
    }
    return Profile(alpha_min, std::move(segs));
}

Profile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open profile file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("profile JSON parse error in " + path.string() + ": " + e.what());
    }
    return profile_from_json(j);
}

nlohmann::json profile_to_json(const Profile& nu) {
    nlohmann::json j;
    j["alpha_min"] = nu.alpha_min();
    auto& arr = j["segments"] = nlohmann::json::array();
    for (const auto& s : nu.segments())
        arr.push_back({{"alpha", s.alpha}, {"value", s.value}, {"slope", s.slope}});
    return j;
}

void save_profile(const Profile& nu, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write profile file: " + path.string());
    out << profile_to_json(nu).dump(2) << '\n';
}

} // namespace snu
