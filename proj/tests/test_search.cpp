#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "linefree/search.hpp"
#include "test_util.hpp"

using namespace linefree;

namespace {
const FieldSpec& F4() { return FieldSpec::get(2, 2); }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("normalized vector indexing") {
    CHECK(normalized_vector_count(15, 4) == 357913941ull);  // (4^15 - 1)/3
    CHECK(normalized_vector_count(3, 2) == 7);
    std::vector<uint32_t> c;
    decode_normalized(0, 15, 4, c);
    CHECK(c[0] == 1);
    for (size_t i = 1; i < 15; ++i) CHECK(c[i] == 0);
    decode_normalized(357913940ull, 15, 4, c);  // last vector: (0,...,0,1)
    CHECK(c[14] == 1);
    for (size_t i = 0; i < 14; ++i) CHECK(c[i] == 0);

    SECTION("encode/decode round-trip on random indices") {
        std::mt19937_64 rng(61);
        for (int i = 0; i < 2000; ++i) {
            uint64_t idx = rng() % 357913941ull;
            decode_normalized(idx, 15, 4, c);
            CHECK(encode_normalized(c, 4) == idx);
        }
    }
    CHECK_THROWS_AS(decode_normalized(357913941ull, 15, 4, c), std::out_of_range);
}

TEST_CASE("bit-sliced and scalar kernels agree exactly") {
    const F4PlaneQuarticKernel& kern = F4PlaneQuarticKernel::get();
    const SearchSpace& ref = SearchSpace::get(2, 4, F4());
    std::mt19937_64 rng(67);
    std::vector<uint32_t> c(15);
    for (int trial = 0; trial < 100000; ++trial) {
        uint64_t idx = rng() % 357913941ull;
        decode_normalized(idx, 15, 4, c);
        uint32_t zm = kern.zero_mask(c);
        CHECK(F4PlaneQuarticKernel::count(zm) == ref.count(c));
        CHECK(kern.line_free(zm) == ref.line_free(c));
    }
}

TEST_CASE("census slice containing the exceptional quartic") {
    auto kc = k_quartic().coeff_vector();
    uint64_t kidx = encode_normalized(kc, 4);
    std::string rec_path = temp_path("lf_test_records.jsonl");
    std::remove(rec_path.c_str());

    ScanTask t = plane_quartic_census_task(kidx, kidx + 1);
    ScanOptions opts;
    opts.records_path = rec_path;
    ScanSummary s = run_scan(t, opts);
    CHECK(s.counts.total == 1);
    CHECK(s.counts.line_free == 1);
    CHECK(s.counts.k_equivalent == 1);
    CHECK(s.counts.exceeds_unflagged == 0);
    REQUIRE(s.histogram.count(14) == 1);
    CHECK(s.histogram.at(14) == 1);

    std::ifstream in(rec_path);
    std::string line;
    REQUIRE(std::getline(in, line));
    auto j = nlohmann::json::parse(line);
    CHECK(j["index"] == kidx);
    CHECK(j["N"] == 14);
    CHECK(j["line_free"] == true);
    CHECK(j["k_equivalent"] == true);
    CHECK(j["status"] == "EXCEEDS");
    std::remove(rec_path.c_str());
}

TEST_CASE("partition soundness: disjoint ranges sum to the full range") {
    uint64_t base = 77000000;
    uint64_t len = 1 << 18;
    ScanOptions opts;
    opts.threads = 2;
    opts.self_verify = false;
    ScanSummary full = run_scan(plane_quartic_census_task(base, base + 4 * len), opts);

    std::map<int64_t, uint64_t> hist;
    ScanCounts counts;
    for (int part = 0; part < 4; ++part) {
        ScanSummary s =
            run_scan(plane_quartic_census_task(base + part * len, base + (part + 1) * len), opts);
        for (const auto& [N, c] : s.histogram) hist[N] += c;
        counts.total += s.counts.total;
        counts.line_free += s.counts.line_free;
        counts.exceeds_unflagged += s.counts.exceeds_unflagged;
        counts.k_equivalent += s.counts.k_equivalent;
    }
    CHECK(hist == full.histogram);
    CHECK(counts.total == full.counts.total);
    CHECK(counts.line_free == full.counts.line_free);
    CHECK(counts.k_equivalent == full.counts.k_equivalent);
}

TEST_CASE("determinism across thread counts") {
    ScanTask t = plane_quartic_census_task(1000000, 1000000 + (1 << 18));
    ScanOptions a, b;
    a.threads = 1;
    b.threads = 2;
    b.unit_size = 1 << 15;
    CHECK(run_scan(t, a).to_json(false).dump() == run_scan(t, b).to_json(false).dump());
}

TEST_CASE("checkpoint: interrupt and resume reproduces the one-shot summary") {
    std::string cp = temp_path("lf_test_checkpoint.bin");
    std::remove(cp.c_str());

    // a 10^6-candidate slice
    uint64_t begin = 5000000, end = begin + 1000000;
    ScanTask t = plane_quartic_census_task(begin, end);
    ScanOptions oneshot;
    oneshot.threads = 2;
    oneshot.self_verify = false;
    std::string expected = run_scan(t, oneshot).to_json(false).dump();

    ScanOptions part = oneshot;
    part.checkpoint_path = cp;
    part.unit_size = 1 << 16;  // ~16 units
    part.max_units = 7;        // interrupt mid-range
    ScanSummary partial = run_scan(t, part);
    CHECK(!partial.completed);
    CHECK(partial.watermark == begin + 7 * (1 << 16));

    ScanOptions rest = oneshot;
    rest.checkpoint_path = cp;
    rest.unit_size = 1 << 16;
    ScanSummary resumed = resume_scan(cp, t, rest);
    CHECK(resumed.completed);
    CHECK(resumed.to_json(false).dump() == expected);

    SECTION("resuming a completed run is a no-op with the same summary") {
        ScanSummary again = resume_scan(cp, t, rest);
        CHECK(again.to_json(false).dump() == expected);
    }

    SECTION("altered task is an integrity error") {
        ScanTask wrong = t;
        wrong.seed = 123;
        CHECK_THROWS_AS(resume_scan(cp, wrong, rest), std::invalid_argument);
        ScanTask wrong2 = t;
        wrong2.range_end += 1;
        CHECK_THROWS_AS(resume_scan(cp, wrong2, rest), std::invalid_argument);
    }

    SECTION("corruption is detected") {
        std::fstream f(cp, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(40);
        char b = 0x5a;
        f.write(&b, 1);
        f.close();
        CHECK_THROWS_AS(load_checkpoint(cp), std::runtime_error);
    }
    std::remove(cp.c_str());
}

TEST_CASE("empty range yields an empty summary and a valid checkpoint") {
    std::string cp = temp_path("lf_test_empty_cp.bin");
    std::remove(cp.c_str());
    ScanTask t = plane_quartic_census_task(42, 42);
    ScanOptions opts;
    opts.checkpoint_path = cp;
    ScanSummary s = run_scan(t, opts);
    CHECK(s.counts.total == 0);
    CHECK(s.completed);
    CHECK(s.histogram.empty());
    CheckpointState st = load_checkpoint(cp);
    CHECK(st.completed);
    CHECK(st.watermark == 42);
    std::remove(cp.c_str());
}

TEST_CASE("random sweeps") {
    SECTION("deterministic for a fixed seed, any thread count") {
        ScanTask t;
        t.n = 3;
        t.d = 2;
        t.p = 3;
        t.e = 1;
        t.mode = ScanMode::Random;
        t.seed = 99;
        t.sample_count = 40000;
        ScanOptions a, b;
        a.threads = 1;
        b.threads = 2;
        CHECK(run_scan(t, a).to_json(false).dump() == run_scan(t, b).to_json(false).dump());
    }
    SECTION("quadric sweep in P^3: line-free samples are elliptic and attain q^2+1") {
        for (uint64_t q : {2, 3, 5}) {
            const FieldSpec& F = FieldSpec::get_by_order(q);
            ScanTask t;
            t.n = 3;
            t.d = 2;
            t.p = F.p();
            t.e = F.e();
            t.mode = ScanMode::Random;
            t.seed = 7;
            t.sample_count = 5000;
            ScanOptions opts;
            opts.threads = 2;
            ScanSummary s = run_scan(t, opts);
            CHECK(s.counts.exceeds_unflagged == 0);
            CHECK(s.counts.line_free > 0);
            REQUIRE(s.histogram.size() == 1);  // every line-free quadric is elliptic
            CHECK(s.histogram.begin()->first == static_cast<int64_t>(q * q + 1));
        }
    }
    SECTION("self-verification stays green on a quartic sweep") {
        ScanTask t;
        t.n = 2;
        t.d = 4;
        t.p = 2;
        t.e = 2;
        t.mode = ScanMode::Random;
        t.seed = 3;
        t.sample_count = 30000;
        ScanOptions opts;
        opts.threads = 2;
        opts.self_verify = true;
        ScanSummary s = run_scan(t, opts);
        CHECK(s.counts.total == 30000);
        CHECK(s.counts.exceeds_unflagged == 0);
    }
}

TEST_CASE("scan records are self-verifying") {
    // re-derive every streamed record through the forms/analysis path
    std::string rec_path = temp_path("lf_test_records2.jsonl");
    std::remove(rec_path.c_str());
    ScanTask t = plane_quartic_census_task(0, 1 << 16);
    ScanOptions opts;
    opts.records_path = rec_path;
    run_scan(t, opts);
    std::ifstream in(rec_path);
    std::string line;
    int checked = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        std::vector<uint32_t> coeffs = j["coeffs"].get<std::vector<uint32_t>>();
        auto f = HomogeneousForm::from_coeff_vector(F4(), 3, 4, coeffs);
        CHECK(count_points(f) == j["N"].get<int64_t>());
        CHECK(lines_on(f).empty() == j["line_free"].get<bool>());
        CHECK(is_equivalent_to_K(f) == j["k_equivalent"].get<bool>());
        CHECK(singular_points_fq(f).empty() != j["singular_fq"].get<bool>());
        CHECK(encode_normalized(coeffs, 4) == j["index"].get<uint64_t>());
        ++checked;
    }
    CHECK(checked > 0);
    std::remove(rec_path.c_str());
}

TEST_CASE("records stream is deterministic for uninterrupted runs") {
    std::string p1 = temp_path("lf_rec_a.jsonl"), p2 = temp_path("lf_rec_b.jsonl");
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    ScanTask t = plane_quartic_census_task(0, 1 << 17);
    ScanOptions a, b;
    a.records_path = p1;
    a.threads = 1;
    b.records_path = p2;
    b.threads = 2;
    b.unit_size = 1 << 14;
    run_scan(t, a);
    run_scan(t, b);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
    CHECK(!s1.empty());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("exhaustive guard and mode validation") {
    ScanTask t;
    t.n = 3;  // 35 monomials over F_4: domain far beyond 2^40
    t.d = 4;
    t.p = 2;
    t.e = 2;
    t.mode = ScanMode::Exhaustive;
    t.range_begin = 0;
    t.range_end = 100;
    CHECK_THROWS_AS(run_scan(t), std::invalid_argument);

    ScanTask t2 = plane_quartic_census_task(0, 10);
    t2.normalized = false;
    CHECK_THROWS_AS(run_scan(t2), std::invalid_argument);
}
