#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "corpus.hpp"
#include "snu/metrics.hpp"
#include "snu/sequence_io.hpp"
#include "snu/treeseq.hpp"

using namespace snu;
using namespace snu::testing;

namespace {

std::filesystem::path temp_file(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "snu_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("unit_sequence places a single 1") {
    TreeSequence root = unit_sequence(3, 0, 0);
    CHECK(root.at(0, 0) == std::complex<double>{1.0, 0.0});
    CHECK(root.nonzero_count(1) == 0);

    TreeSequence mid = unit_sequence(3, 2, 3);
    CHECK(mid.at(2, 3) == std::complex<double>{1.0, 0.0});
    std::uint64_t total = 0;
    for (std::uint32_t j = 0; j <= 3; ++j) total += mid.nonzero_count(j);
    CHECK(total == 1);

    // basis property: summing every unit sequence's value at a fixed node is 1
    std::complex<double> sum = 0.0;
    for (std::uint32_t j = 0; j <= 3; ++j)
        for (std::uint64_t k = 0; k < (std::uint64_t{1} << j); ++k)
            sum += unit_sequence(3, j, k).at(2, 3);
    CHECK(sum == std::complex<double>{1.0, 0.0});

    CHECK_THROWS_AS(unit_sequence(3, 2, 4), InvalidArgument);
    CHECK_THROWS_AS(unit_sequence(3, 4, 0), InvalidArgument);
}

TEST_CASE("spike_sequence magnitude formula") {
    TreeSequence s = spike_sequence(5, 3, 1.0, 1.0);
    CHECK(s.at(3, 0).real() == doctest::Approx(0.125).epsilon(1e-15));
    TreeSequence flat = spike_sequence(5, 4, 0.0, 0.7);
    CHECK(flat.at(4, 0).real() == 0.7);
    CHECK_THROWS_AS(spike_sequence(5, 6, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("spike distance in the sup metric grows like 2^((a'-a)m)") {
    // d_{a',-inf}(spike(m, a, amp)) = amp * 2^((a'-a)m)
    for (std::uint32_t m : {2u, 5u, 9u}) {
        TreeSequence s = spike_sequence(10, m, 1.0, 0.5);
        double got = distance_d(s, 0.25, ExtReal::neg_inf());
        CHECK(got == doctest::Approx(0.5 * std::exp2((0.25 - 1.0) * m)).epsilon(1e-12));
    }
}

TEST_CASE("staircase_sequence counts and sizes") {
    Profile cp = clamp_profile();
    TreeSequence st = staircase_sequence(cp, 4, 0.5, 1.0);
    CHECK(st.nonzero_count(4) == 4); // floor(2^2)
    CHECK(std::abs(st.at(4, 0)) == doctest::Approx(0.25).epsilon(1e-15));
    for (std::uint32_t j = 0; j <= 4; ++j)
        CHECK(st.nonzero_count(j) ==
              static_cast<std::uint64_t>(std::floor(std::exp2(0.5 * j))));

    // nu(alpha) = 0 gives exactly one coefficient per scale
    TreeSequence one = staircase_sequence(cp, 6, 0.0, 1.0);
    for (std::uint32_t j = 0; j <= 6; ++j) CHECK(one.nonzero_count(j) == 1);

    CHECK_THROWS_AS(staircase_sequence(slope2_profile(), 4, 0.5, 1.0), InvalidArgument);
}

TEST_CASE("disjoint_translates: disjoint blocks preserving counts and sizes") {
    Profile cp = clamp_profile();
    TreeSequence base = staircase_sequence(cp, 5, 0.0, 1.0); // 1 nonzero per scale
    auto copies = disjoint_translates(base, 4, 2);
    REQUIRE(copies.size() == 4);
    for (std::uint32_t n = 0; n < 4; ++n) {
        CHECK(copies[n].nonzero_count(0) == 0);
        CHECK(copies[n].nonzero_count(1) == 0);
        for (std::uint32_t j = 2; j <= 5; ++j) CHECK(copies[n].nonzero_count(j) == 1);
        CHECK(std::abs(copies[n].at(2, n)) == 1.0); // supports {0},{1},{2},{3} at scale 2
    }
    // pairwise products vanish identically
    for (std::uint32_t a = 0; a < 4; ++a)
        for (std::uint32_t b = a + 1; b < 4; ++b)
            for (std::uint32_t j = 0; j <= 5; ++j) {
                auto la = copies[a].level(j), lb = copies[b].level(j);
                for (std::uint64_t k = 0; k < la.size(); ++k)
                    CHECK(la[k] * lb[k] == std::complex<double>{0.0, 0.0});
            }

    // N=1 keeps the base, scales below j0 zeroed
    auto single = disjoint_translates(base, 1, 3);
    CHECK(single[0].nonzero_count(2) == 0);
    CHECK(single[0].at(4, 0) == base.at(4, 0));

    // impossible disjointness
    TreeSequence full = staircase_sequence(cp, 3, 1.5, 1.0); // full levels, nu = 1
    CHECK_THROWS_AS(disjoint_translates(full, 2, 1), InvalidArgument);

    // scattered supports still come out disjoint with counts preserved
    TreeSequence scatter(4);
    scatter.at(3, 1) = 0.5;
    scatter.at(3, 6) = 0.25;
    scatter.at(4, 11) = 1.0;
    auto packed = disjoint_translates(scatter, 3, 3);
    for (std::uint32_t a = 0; a < 3; ++a) {
        CHECK(packed[a].nonzero_count(3) == 2);
        CHECK(packed[a].nonzero_count(4) == 1);
        for (std::uint32_t b = a + 1; b < 3; ++b)
            for (std::uint32_t j = 3; j <= 4; ++j) {
                auto la = packed[a].level(j), lb = packed[b].level(j);
                for (std::uint64_t k = 0; k < la.size(); ++k)
                    CHECK(la[k] * lb[k] == std::complex<double>{0.0, 0.0});
            }
    }
}

TEST_CASE("linear_combine") {
    TreeSequence x = unit_sequence(3, 2, 1);
    TreeSequence y = unit_sequence(3, 3, 5);
    std::vector<std::complex<double>> id{1.0, 0.0};
    std::vector<TreeSequence> seqs;
    seqs.push_back(x);
    seqs.push_back(y);
    TreeSequence same = linear_combine(id, seqs);
    CHECK(same == x);

    // N^(-1/p) with N=4, p=0.5 gives weight 1/16 each
    double w = std::pow(4.0, -1.0 / 0.5);
    CHECK(w == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    std::vector<std::complex<double>> ws{w, w};
    TreeSequence comb = linear_combine(ws, seqs);
    CHECK(comb.at(2, 1).real() == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(comb.at(3, 5).real() == doctest::Approx(1.0 / 16.0).epsilon(1e-15));

    TreeSequence other(2);
    std::vector<TreeSequence> bad;
    bad.push_back(x);
    bad.push_back(other);
    CHECK_THROWS_AS(linear_combine(id, bad), InvalidArgument);
    std::vector<std::complex<double>> short_w{1.0};
    CHECK_THROWS_AS(linear_combine(short_w, seqs), InvalidArgument);
}

TEST_CASE("random_sequence: determinism and per-scale count budget") {
    Profile cp = clamp_profile();
    TreeSequence a = random_sequence(cp, 8, 42);
    TreeSequence b = random_sequence(cp, 8, 42);
    CHECK(a == b);
    TreeSequence c = random_sequence(cp, 8, 43);
    CHECK_FALSE(a == c);

    // counts of |x| >= 2^(-alpha j) never exceed 2 * 2^(nu(alpha) j)
    ScaleMagnitudes sm = ScaleMagnitudes::from(a);
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.1)
        for (std::uint32_t j = 1; j <= 8; ++j) {
            double budget = 2.0 * std::exp2(cp.eval(alpha).raw() * j);
            CHECK(static_cast<double>(sm.count_at_least(j, std::exp2(-alpha * j))) <= budget);
        }
}

TEST_CASE("SNU1 round trip is bit-exact, bad inputs raise structured errors") {
    TreeSequence x = random_sequence(clamp_profile(), 8, 1);
    auto path = temp_file("roundtrip.snu");
    write_sequence(x, path);
    TreeSequence back = read_sequence(path);
    CHECK(back == x);

    auto badmagic = temp_file("badmagic.snu");
    {
        std::ofstream out(badmagic, std::ios::binary);
        out << "NOPE1234";
    }
    CHECK_THROWS_AS(read_sequence(badmagic), MagicError);

    auto truncated = temp_file("truncated.snu");
    {
        std::ifstream in(path, std::ios::binary);
        std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
        std::ofstream out(truncated, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
    }
    try {
        read_sequence(truncated);
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK(e.scale() <= 8);
    }
}

TEST_CASE("sequence CSV round trip preserves values and the max scale") {
    TreeSequence x = random_sequence(halfslope_profile(), 6, 9);
    auto path = temp_file("roundtrip.csv");
    write_sequence_csv(x, path);
    TreeSequence back = read_sequence_csv(path);
    CHECK(back == x);

    // a sequence whose top scale is all zero still round-trips its max scale
    TreeSequence sparse = unit_sequence(5, 2, 1);
    write_sequence_csv(sparse, path);
    CHECK(read_sequence_csv(path).max_scale() == 5);

    auto bad = temp_file("bad.csv");
    {
        std::ofstream out(bad);
        out << "x,y\n";
    }
    CHECK_THROWS_AS(read_sequence_csv(bad), FormatError);
}
