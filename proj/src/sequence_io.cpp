#include "snu/sequence_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace snu {

namespace {

constexpr char kMagic[4] = {'S', 'N', 'U', '1'};

static_assert(std::endian::native == std::endian::little,
              "SNU1 serialization assumes a little-endian host");

void put_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

} // namespace

void write_sequence(const TreeSequence& x, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write sequence file: " + path.string());
    out.write(kMagic, 4);
    put_u32(out, x.max_scale());
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j)
        for (const auto& v : x.level(j)) {
            put_f64(out, v.real());
            put_f64(out, v.imag());
        }
    if (!out) throw Error("write failed for sequence file: " + path.string());
}

TreeSequence read_sequence(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open sequence file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw MagicError("not an SNU1 file: " + path.string());
    std::uint32_t max_scale = 0;
    in.read(reinterpret_cast<char*>(&max_scale), sizeof max_scale);
    if (in.gcount() != sizeof max_scale)
        throw TruncationError(0, "SNU1 header truncated in " + path.string());
    if (max_scale > kMaxScaleLimit)
        throw FormatError("SNU1 scale " + std::to_string(max_scale) + " exceeds the limit of 24");
    TreeSequence x(max_scale);
    for (std::uint32_t j = 0; j <= max_scale; ++j) {
        auto lvl = x.level(j);
        auto* raw = reinterpret_cast<char*>(lvl.data());
        std::streamsize want = static_cast<std::streamsize>(lvl.size() * sizeof(lvl[0]));
        in.read(raw, want);
        if (in.gcount() != want)
            throw TruncationError(j, "SNU1 payload ends inside scale " + std::to_string(j) +
                                         " of " + path.string());
        for (const auto& v : lvl)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw FormatError("non-finite coefficient at scale " + std::to_string(j) +
                                  " of " + path.string());
    }
    return x;
}

void write_sequence_csv(const TreeSequence& x, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write sequence file: " + path.string());
    out << "j,k,re,im\n";
    char buf[128];
    bool top_scale_written = false;
    for (std::uint32_t j = 0; j <= x.max_scale(); ++j) {
        auto lvl = x.level(j);
        for (std::uint64_t k = 0; k < lvl.size(); ++k) {
            if (lvl[k] == std::complex<double>{0.0, 0.0}) continue;
            std::snprintf(buf, sizeof buf, "%u,%llu,%.17g,%.17g\n", j,
                          static_cast<unsigned long long>(k), lvl[k].real(), lvl[k].imag());
            out << buf;
            if (j == x.max_scale()) top_scale_written = true;
        }
    }
    if (!top_scale_written) out << x.max_scale() << ",0,0,0\n";
    if (!out) throw Error("write failed for sequence file: " + path.string());
}

TreeSequence read_sequence_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open sequence file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "j,k,re,im")
        throw FormatError("sequence CSV must start with header 'j,k,re,im': " + path.string());

    struct Row {
        std::uint32_t j;
        std::uint64_t k;
        std::complex<double> v;
    };
    std::vector<Row> rows;
    std::uint32_t max_scale = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::uint32_t j;
        unsigned long long k;
        double re, im;
        if (std::sscanf(line.c_str(), "%u,%llu,%lf,%lf", &j, &k, &re, &im) != 4)
            throw FormatError("sequence CSV parse error at line " + std::to_string(lineno) +
                              " of " + path.string());
        if (j > kMaxScaleLimit)
            throw FormatError("sequence CSV scale exceeds the limit of 24 at line " +
                              std::to_string(lineno));
        if (k >= (std::uint64_t{1} << j))
            throw FormatError("sequence CSV position out of range at line " +
                              std::to_string(lineno));
        if (!std::isfinite(re) || !std::isfinite(im))
            throw FormatError("non-finite coefficient at line " + std::to_string(lineno));
        rows.push_back({j, k, {re, im}});
        max_scale = std::max(max_scale, j);
    }
    if (rows.empty()) throw FormatError("sequence CSV has no data rows: " + path.string());
    TreeSequence x(max_scale);
    for (const auto& r : rows) x.at(r.j, r.k) = r.v;
    return x;
}

} // namespace snu
