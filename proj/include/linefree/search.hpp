// search.hpp — high-throughput scanning over coefficient vectors: the
// exhaustive plane-quartic census over F_4, randomized sweeps against the
// hypersurface bound, record streaming, checkpoint/resume, and parallel
// partitioning into deterministic work units.
//
// Coefficient vectors follow the frozen monomial order of MonomialBasis.
// In EXHAUSTIVE mode the domain is the set of scale-normalized vectors
// (first nonzero coefficient = 1), indexed lexicographically: vectors whose
// leading 1 sits at monomial k occupy a contiguous block of q^{M-1-k}
// indices, ordered by the remaining coefficients as base-q digits (earliest
// monomial most significant). See docs/enumeration.md.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "linefree/analysis.hpp"

namespace linefree {

enum class ScanMode { Exhaustive, Random };

struct ScanTask {
    int n = 2;
    int d = 4;
    uint32_t p = 2;
    uint32_t e = 2;
    ScanMode mode = ScanMode::Exhaustive;
    bool normalized = true;  // exhaustive mode scans leading-coefficient-one vectors
    uint64_t seed = 0;
    uint64_t range_begin = 0;  // exhaustive: [begin, end) in the lex index
    uint64_t range_end = 0;
    uint64_t sample_count = 0;  // random mode

    const FieldSpec& field() const { return FieldSpec::get(p, e); }
    uint32_t q() const { return field().q(); }

    bool operator==(const ScanTask&) const = default;
};

struct ScanCounts {
    uint64_t total = 0;
    uint64_t line_free = 0;
    uint64_t exceeds_unflagged = 0;  // falsification events; must stay 0
    uint64_t k_equivalent = 0;
};

struct ScanRecord {
    uint64_t index = 0;  // census index (exhaustive) or sample ordinal (random)
    std::vector<uint32_t> coeffs;
    int64_t N = 0;
    bool line_free = false;
    std::string status;  // WITHIN / ATTAINS / EXCEEDS / NOT_APPLICABLE
    bool k_equivalent = false;
    bool singular_fq = false;

    nlohmann::json to_json() const {
        return {{"index", index},     {"coeffs", coeffs},
                {"N", N},             {"line_free", line_free},
                {"status", status},   {"k_equivalent", k_equivalent},
                {"singular_fq", singular_fq}};
    }
};

struct ScanSummary {
    ScanTask task;
    std::map<int64_t, uint64_t> histogram;  // N -> count over line-free candidates
    ScanCounts counts;
    uint64_t watermark = 0;  // next unprocessed index / sample ordinal
    bool completed = false;
    double seconds = 0.0;
    double per_second = 0.0;
    int threads = 1;

    // The canonical summary (with_throughput = false) is byte-identical
    // across thread counts, interruption, and resume; throughput stats are
    // wall-clock and excluded from that guarantee.
    nlohmann::json to_json(bool with_throughput = true) const {
        nlohmann::json j;
        j["schema"] = "scan-summary/v1";
        j["task"] = {{"n", task.n},
                     {"d", task.d},
                     {"p", task.p},
                     {"e", task.e},
                     {"q", task.q()},
                     {"mode", task.mode == ScanMode::Exhaustive ? "exhaustive" : "random"},
                     {"normalized", task.normalized},
                     {"seed", task.seed},
                     {"range", {task.range_begin, task.range_end}},
                     {"samples", task.sample_count}};
        nlohmann::json hist = nlohmann::json::array();
        for (const auto& [N, c] : histogram) hist.push_back({N, c});
        j["histogram"] = std::move(hist);
        j["counts"] = {{"total", counts.total},
                       {"line_free", counts.line_free},
                       {"exceeds_unflagged", counts.exceeds_unflagged},
                       {"k_equivalent", counts.k_equivalent}};
        long long bound = main_bound(task.n, task.d, task.q());
        j["bound"] = bound;
        if (!histogram.empty()) {
            int64_t maxN = histogram.rbegin()->first;
            j["max_line_free_N"] = maxN;
            j["attains_observed"] = histogram.count(bound) > 0;
        }
        j["watermark"] = watermark;
        j["completed"] = completed;
        if (with_throughput)
            j["throughput"] = {{"seconds", seconds}, {"per_second", per_second}, {"threads", threads}};
        return j;
    }
};

// ---- normalized-vector indexing ----

// number of scale-normalized vectors (first nonzero coefficient = 1) of
// length M over F_q, i.e. (q^M - 1)/(q - 1); saturates at 2^62
inline uint64_t normalized_vector_count(size_t M, uint32_t q) {
    const uint64_t cap = 1ull << 62;
    uint64_t total = 0, block = 1;
    std::vector<uint64_t> blocks(M);
    for (size_t k = M; k-- > 0;) {
        blocks[k] = block;
        if (block < cap) block *= q;
    }
    for (size_t k = 0; k < M; ++k) {
        total += blocks[k];
        if (total >= cap) return cap;
    }
    return total;
}

inline void decode_normalized(uint64_t index, size_t M, uint32_t q, std::vector<uint32_t>& out) {
    out.assign(M, 0);
    for (size_t k = 0; k < M; ++k) {
        uint64_t block = 1;
        for (size_t i = 0; i < M - 1 - k; ++i) block *= q;
        if (index < block) {
            out[k] = 1;
            for (size_t i = M; i-- > k + 1;) {
                out[i] = static_cast<uint32_t>(index % q);
                index /= q;
            }
            return;
        }
        index -= block;
    }
    throw std::out_of_range("normalized vector index out of range");
}

inline uint64_t encode_normalized(std::span<const uint32_t> coeffs, uint32_t q) {
    size_t M = coeffs.size();
    size_t lead = 0;
    while (lead < M && coeffs[lead] == 0) ++lead;
    if (lead == M || coeffs[lead] != 1)
        throw std::invalid_argument("coefficient vector is not scale-normalized");
    uint64_t offset = 0;
    for (size_t k = 0; k < lead; ++k) {
        uint64_t block = 1;
        for (size_t i = 0; i < M - 1 - k; ++i) block *= q;
        offset += block;
    }
    uint64_t digits = 0;
    for (size_t i = lead + 1; i < M; ++i) digits = digits * q + coeffs[i];
    return offset + digits;
}

// ---- scalar evaluation path ----

// Reference path for any (n, d, q): exact count via the monomial-value
// table, line-freeness via the per-line restriction matrices.
class SearchSpace {
public:
    static const SearchSpace& get(int n, int d, const FieldSpec& F) {
        static std::mutex mu;
        static std::map<std::tuple<int, int, uint32_t>, std::unique_ptr<SearchSpace>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_tuple(n, d, F.q());
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<SearchSpace>(new SearchSpace(n, d, F))).first;
        return *it->second;
    }

    const ProjectiveSpace& space() const { return S_; }
    const FieldSpec& field() const { return S_.field(); }
    int degree() const { return d_; }
    size_t num_coeffs() const { return M_; }
    long long bound() const { return bound_; }

    int64_t count(std::span<const uint32_t> coeffs) const { return E_.count_zeros(coeffs); }
    bool line_free(std::span<const uint32_t> coeffs) const { return L_.line_free(coeffs); }

private:
    SearchSpace(int n, int d, const FieldSpec& F)
        : S_(ProjectiveSpace::get(n, F)),
          E_(EvalTable::get(S_, d)),
          L_(LineTable::get(S_, d)),
          d_(d),
          M_(MonomialBasis::get(n + 1, d).size()),
          bound_(main_bound(n, d, F.q())) {}

    const ProjectiveSpace& S_;
    const EvalTable& E_;
    const LineTable& L_;
    int d_;
    size_t M_;
    long long bound_;
};

// ---- bit-sliced kernel for plane quartics over F_4 ----
//
// F_4 element indices are two bits (low = coefficient of 1, high =
// coefficient of w), and addition is XOR on both planes independently. The
// kernel keeps, for every monomial m and coefficient value c, the two
// 21-bit planes of c * (value of m at each of the 21 points of P^2(F_4)),
// so evaluating a candidate is 15 table lookups and XORs per plane.
class F4PlaneQuarticKernel {
public:
    static const F4PlaneQuarticKernel& get() {
        static F4PlaneQuarticKernel k;
        return k;
    }

    static constexpr uint32_t POINT_MASK = (1u << 21) - 1;

    uint32_t zero_mask(std::span<const uint32_t> coeffs) const {
        uint32_t acc0 = 0, acc1 = 0;
        for (size_t m = 0; m < 15; ++m) {
            uint32_t c = coeffs[m];
            acc0 ^= plane0_[m][c];
            acc1 ^= plane1_[m][c];
        }
        return ~(acc0 | acc1) & POINT_MASK;
    }

    static int count(uint32_t zmask) { return std::popcount(zmask); }

    // Over F_4 a line carries 5 points while a nonzero quartic binary form
    // has at most 4 roots, so a line all of whose points lie on the curve
    // lies on the curve. That makes point containment an exact line test
    // for this one space (the scalar path uses restriction coefficients and
    // stays valid for every q; the two are cross-checked in the tests).
    bool line_free(uint32_t zmask) const {
        for (uint32_t lm : line_masks_)
            if ((zmask & lm) == lm) return false;
        return true;
    }

private:
    F4PlaneQuarticKernel() {
        const FieldSpec& F = FieldSpec::get(2, 2);
        const ProjectiveSpace& S = ProjectiveSpace::get(2, F);
        const MonomialBasis& B = MonomialBasis::get(3, 4);
        for (size_t m = 0; m < 15; ++m)
            for (uint32_t c = 0; c < 4; ++c) { plane0_[m][c] = 0; plane1_[m][c] = 0; }
        for (size_t pt = 0; pt < 21; ++pt) {
            const auto& coords = S.points()[pt].coords;
            for (size_t m = 0; m < 15; ++m) {
                const ExpVec& e = B.monomial(m);
                uint32_t v = 1;
                for (int i = 0; i < 3 && v != 0; ++i)
                    if (e[i]) v = F.mul_idx(v, F.pow_idx(coords[i].idx(), e[i]));
                for (uint32_t c = 0; c < 4; ++c) {
                    uint32_t prod = F.mul_idx(c, v);
                    plane0_[m][c] |= (prod & 1u) << pt;
                    plane1_[m][c] |= ((prod >> 1) & 1u) << pt;
                }
            }
        }
        line_masks_.reserve(S.lines().size());
        for (size_t l = 0; l < S.lines().size(); ++l) {
            uint32_t mask = 0;
            for (int32_t pi : S.points_on_line(static_cast<int>(l))) mask |= 1u << pi;
            line_masks_.push_back(mask);
        }
    }

    uint32_t plane0_[15][4];
    uint32_t plane1_[15][4];
    std::vector<uint32_t> line_masks_;
};

// ---- checkpoint file (binary, little-endian; docs/checkpoint.md) ----

namespace detail {

inline uint64_t fnv1a(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct ByteWriter {
    std::string buf;
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
};

struct ByteReader {
    const std::string& buf;
    size_t pos = 0;
    uint32_t u32() {
        if (pos + 4 > buf.size()) throw std::runtime_error("checkpoint truncated");
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
    uint64_t u64() {
        if (pos + 8 > buf.size()) throw std::runtime_error("checkpoint truncated");
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
        return v;
    }
};

}  // namespace detail

struct CheckpointState {
    ScanTask task;
    uint64_t watermark = 0;
    std::map<int64_t, uint64_t> histogram;
    ScanCounts counts;
    bool completed = false;
};

inline void save_checkpoint(const std::string& path, const CheckpointState& st) {
    detail::ByteWriter w;
    w.buf.append("LFCK");
    w.u32(1);  // version
    w.u32(static_cast<uint32_t>(st.task.n));
    w.u32(static_cast<uint32_t>(st.task.d));
    w.u32(st.task.p);
    w.u32(st.task.e);
    w.u32(st.task.mode == ScanMode::Exhaustive ? 0 : 1);
    w.u32(st.task.normalized ? 1 : 0);
    w.u64(st.task.seed);
    w.u64(st.task.range_begin);
    w.u64(st.task.range_end);
    w.u64(st.task.sample_count);
    w.u64(st.watermark);
    w.u32(st.completed ? 1 : 0);
    w.u64(st.counts.total);
    w.u64(st.counts.line_free);
    w.u64(st.counts.exceeds_unflagged);
    w.u64(st.counts.k_equivalent);
    w.u32(static_cast<uint32_t>(st.histogram.size()));
    for (const auto& [N, c] : st.histogram) {
        w.u64(static_cast<uint64_t>(N));
        w.u64(c);
    }
    w.u64(detail::fnv1a(w.buf));
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
        out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
    }
    std::filesystem::rename(tmp, path);
}

inline CheckpointState load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 12 || buf.substr(0, 4) != "LFCK") throw std::runtime_error("bad checkpoint magic");
    uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= static_cast<uint64_t>(static_cast<unsigned char>(buf[buf.size() - 8 + i])) << (8 * i);
    std::string payload = buf.substr(0, buf.size() - 8);
    if (detail::fnv1a(payload) != stored) throw std::runtime_error("checkpoint checksum mismatch");
    detail::ByteReader r{payload, 4};
    uint32_t version = r.u32();
    if (version != 1) throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
    CheckpointState st;
    st.task.n = static_cast<int>(r.u32());
    st.task.d = static_cast<int>(r.u32());
    st.task.p = r.u32();
    st.task.e = r.u32();
    st.task.mode = r.u32() == 0 ? ScanMode::Exhaustive : ScanMode::Random;
    st.task.normalized = r.u32() != 0;
    st.task.seed = r.u64();
    st.task.range_begin = r.u64();
    st.task.range_end = r.u64();
    st.task.sample_count = r.u64();
    st.watermark = r.u64();
    st.completed = r.u32() != 0;
    st.counts.total = r.u64();
    st.counts.line_free = r.u64();
    st.counts.exceeds_unflagged = r.u64();
    st.counts.k_equivalent = r.u64();
    uint32_t hn = r.u32();
    for (uint32_t i = 0; i < hn; ++i) {
        int64_t N = static_cast<int64_t>(r.u64());
        uint64_t c = r.u64();
        st.histogram[N] = c;
    }
    return st;
}

// ---- scan driver ----

struct ScanOptions {
    int threads = 1;
    std::string records_path;     // JSONL stream of interesting records ("" = drop)
    std::string checkpoint_path;  // "" = no checkpointing
    uint64_t unit_size = 1ull << 20;  // exhaustive work-unit / checkpoint atom
    uint64_t max_units = UINT64_MAX;  // stop early after this many units (testing)
    uint64_t checkpoint_every = 4;    // write cadence, in merged units
    bool self_verify = true;          // re-derive 1-in-10^4 candidates via analysis
};

namespace detail {

constexpr uint64_t RANDOM_BLOCK = 1ull << 14;  // samples per random-mode unit (frozen)

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct UnitOutcome {
    ScanCounts counts;
    std::map<int64_t, uint64_t> histogram;
    std::vector<ScanRecord> records;
};

struct ScanContext {
    const ScanTask& task;
    const ScanOptions& opts;
    const SearchSpace& space;
    const F4PlaneQuarticKernel* kernel = nullptr;  // set for (n=2, d=4, q=4)
    bool k_orbit_applies = false;
    long long bound = 0;
    uint64_t begin = 0, end = 0;  // index range (exhaustive) or [0, samples)
    uint64_t unit = 0;            // unit length in candidates/samples
};

inline bool k_equivalent_coeffs(const FieldSpec& F, std::span<const uint32_t> coeffs) {
    auto norm = normalize_scaling(F, std::vector<uint32_t>(coeffs.begin(), coeffs.end()));
    return KOrbit::get().contains_packed(pack_f4_quartic(norm));
}

inline void self_verify_candidate(const ScanContext& ctx, uint64_t index,
                                  std::span<const uint32_t> coeffs, int64_t N, bool line_free) {
    const FieldSpec& F = ctx.space.field();
    auto f = HomogeneousForm::from_coeff_vector(F, ctx.task.n + 1, ctx.task.d,
                                                std::vector<uint32_t>(coeffs.begin(), coeffs.end()));
    int64_t n2 = count_points(f);
    bool lf2 = lines_on(f).empty();
    if (n2 != N || lf2 != line_free)
        throw std::logic_error("scan self-verification failed at index " + std::to_string(index) +
                               ": N " + std::to_string(N) + " vs " + std::to_string(n2) +
                               ", line_free " + std::to_string(line_free) + " vs " + std::to_string(lf2));
}

// classify one candidate into the unit outcome
inline void tally(const ScanContext& ctx, UnitOutcome& out, uint64_t index,
                  std::span<const uint32_t> coeffs, int64_t N, bool line_free) {
    ++out.counts.total;
    if (ctx.opts.self_verify && index % 10000 == 0)
        self_verify_candidate(ctx, index, coeffs, N, line_free);
    if (!line_free) return;
    ++out.counts.line_free;
    ++out.histogram[N];
    bool k_eq = false;
    if (ctx.k_orbit_applies && N == 14) {
        k_eq = k_equivalent_coeffs(ctx.space.field(), coeffs);
        if (k_eq) ++out.counts.k_equivalent;
    }
    bool exceeds = N > ctx.bound;
    if (exceeds && !k_eq) ++out.counts.exceeds_unflagged;
    if (N >= ctx.bound - 1 || exceeds) {
        ScanRecord rec;
        rec.index = index;
        rec.coeffs.assign(coeffs.begin(), coeffs.end());
        rec.N = N;
        rec.line_free = true;
        rec.status = N < ctx.bound ? "WITHIN" : N == ctx.bound ? "ATTAINS" : "EXCEEDS";
        rec.k_equivalent = k_eq;
        const FieldSpec& F = ctx.space.field();
        auto f = HomogeneousForm::from_coeff_vector(F, ctx.task.n + 1, ctx.task.d, rec.coeffs);
        rec.singular_fq = !singular_points_fq(f).empty();
        out.records.push_back(std::move(rec));
    }
}

inline UnitOutcome process_exhaustive_unit(const ScanContext& ctx, uint64_t u0, uint64_t u1) {
    UnitOutcome out;
    size_t M = ctx.space.num_coeffs();
    uint32_t q = ctx.space.field().q();
    std::vector<uint32_t> coeffs;
    decode_normalized(u0, M, q, coeffs);
    size_t lead = 0;
    while (lead < M && coeffs[lead] == 0) ++lead;
    for (uint64_t idx = u0; idx < u1; ++idx) {
        int64_t N;
        bool lf;
        if (ctx.kernel) {
            uint32_t zmask = ctx.kernel->zero_mask(coeffs);
            N = F4PlaneQuarticKernel::count(zmask);
            lf = ctx.kernel->line_free(zmask);
        } else {
            N = ctx.space.count(coeffs);
            lf = ctx.space.line_free(coeffs);
        }
        tally(ctx, out, idx, coeffs, N, lf);
        if (idx + 1 < u1) {
            // odometer over the digits after the leading 1
            size_t i = M;
            while (i-- > lead + 1) {
                if (++coeffs[i] < q) break;
                coeffs[i] = 0;
            }
            if (i == lead) {  // block for this leading position exhausted
                coeffs[lead] = 0;
                ++lead;
                coeffs[lead] = 1;
            }
        }
    }
    return out;
}

inline UnitOutcome process_random_unit(const ScanContext& ctx, uint64_t unit_index) {
    UnitOutcome out;
    size_t M = ctx.space.num_coeffs();
    uint32_t q = ctx.space.field().q();
    uint64_t s0 = unit_index * RANDOM_BLOCK;
    uint64_t s1 = std::min(s0 + RANDOM_BLOCK, ctx.task.sample_count);
    std::mt19937_64 rng(splitmix64(ctx.task.seed ^ (unit_index + 1) * 0xA24BAED4963EE407ull));
    std::vector<uint32_t> coeffs(M);
    for (uint64_t s = s0; s < s1; ++s) {
        bool nonzero = false;
        while (!nonzero) {
            for (size_t m = 0; m < M; ++m) {
                coeffs[m] = static_cast<uint32_t>(rng() % q);
                nonzero |= coeffs[m] != 0;
            }
        }
        int64_t N = ctx.space.count(coeffs);
        bool lf = ctx.space.line_free(coeffs);
        tally(ctx, out, s, coeffs, N, lf);
    }
    return out;
}

}  // namespace detail

// Runs a scan from a given watermark with pre-merged partial results
// (used by both run_scan and resume_scan). The summary merge is by unit in
// index order, so results are independent of thread count.
inline ScanSummary run_scan_from(const ScanTask& task, const ScanOptions& opts, uint64_t start_watermark,
                                 const std::map<int64_t, uint64_t>& partial_hist, const ScanCounts& partial_counts) {
    const FieldSpec& F = task.field();
    const SearchSpace& space = SearchSpace::get(task.n, task.d, F);
    const MonomialBasis& B = MonomialBasis::get(task.n + 1, task.d);

    detail::ScanContext ctx{task, opts, space};
    ctx.bound = space.bound();
    ctx.k_orbit_applies = (task.n == 2 && task.d == 4 && F.q() == 4);
    if (ctx.k_orbit_applies) KOrbit::get();  // build/load once before workers start

    uint64_t domain_begin, domain_end, unit;
    if (task.mode == ScanMode::Exhaustive) {
        if (!task.normalized)
            throw std::invalid_argument("exhaustive mode scans the scale-normalized domain");
        uint64_t domain = normalized_vector_count(B.size(), F.q());
        if (domain > (1ull << 40))
            throw std::invalid_argument("exhaustive domain exceeds the 2^40 guard");
        if (task.range_end > domain || task.range_begin > task.range_end)
            throw std::invalid_argument("scan range out of bounds");
        domain_begin = task.range_begin;
        domain_end = task.range_end;
        unit = opts.unit_size;
        if (task.n == 2 && task.d == 4 && F.q() == 4) ctx.kernel = &F4PlaneQuarticKernel::get();
    } else {
        domain_begin = 0;
        domain_end = task.sample_count;
        unit = detail::RANDOM_BLOCK;
    }
    if (unit == 0) throw std::invalid_argument("unit size must be positive");
    if (start_watermark < domain_begin || start_watermark > domain_end)
        throw std::invalid_argument("resume watermark outside the task domain");
    if ((start_watermark - domain_begin) % unit != 0 && start_watermark != domain_end)
        throw std::invalid_argument(
            "resume watermark is not unit-aligned (resume with the unit size of the original run)");

    ScanSummary summary;
    summary.task = task;
    summary.histogram = partial_hist;
    summary.counts = partial_counts;
    summary.threads = opts.threads;

    uint64_t remaining = domain_end - start_watermark;
    uint64_t n_units = (remaining + unit - 1) / unit;
    uint64_t allowed = std::min<uint64_t>(n_units, opts.max_units);

    std::ofstream records;
    if (!opts.records_path.empty()) {
        records.open(opts.records_path, std::ios::app);
        if (!records) throw std::runtime_error("cannot open records file " + opts.records_path);
    }

    auto t0 = std::chrono::steady_clock::now();

    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::optional<detail::UnitOutcome>> results(allowed);
    std::atomic<uint64_t> next{0};
    std::exception_ptr worker_error;

    auto worker = [&] {
        try {
            for (;;) {
                uint64_t u = next.fetch_add(1);
                if (u >= allowed) return;
                detail::UnitOutcome out;
                if (task.mode == ScanMode::Exhaustive) {
                    uint64_t u0 = start_watermark + u * unit;
                    uint64_t u1 = std::min(u0 + unit, domain_end);
                    out = detail::process_exhaustive_unit(ctx, u0, u1);
                } else {
                    uint64_t unit_index = (start_watermark / unit) + u;
                    out = detail::process_random_unit(ctx, unit_index);
                }
                {
                    std::lock_guard<std::mutex> lock(mu);
                    results[u] = std::move(out);
                }
                cv.notify_all();
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!worker_error) worker_error = std::current_exception();
            cv.notify_all();
        }
    };

    int nthreads = std::max(1, opts.threads);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    uint64_t merged = 0;
    uint64_t watermark = start_watermark;
    {
        std::unique_lock<std::mutex> lock(mu);
        while (merged < allowed) {
            cv.wait(lock, [&] { return worker_error || results[merged].has_value(); });
            if (worker_error) break;
            detail::UnitOutcome out = std::move(*results[merged]);
            results[merged].reset();
            lock.unlock();
            summary.counts.total += out.counts.total;
            summary.counts.line_free += out.counts.line_free;
            summary.counts.exceeds_unflagged += out.counts.exceeds_unflagged;
            summary.counts.k_equivalent += out.counts.k_equivalent;
            for (const auto& [N, c] : out.histogram) summary.histogram[N] += c;
            if (records.is_open()) {
                for (const auto& rec : out.records) records << rec.to_json().dump() << "\n";
                records.flush();
            }
            ++merged;
            watermark = std::min(start_watermark + merged * unit, domain_end);
            if (!opts.checkpoint_path.empty() &&
                (merged % opts.checkpoint_every == 0 || merged == allowed)) {
                CheckpointState st{task, watermark, summary.histogram, summary.counts,
                                   watermark == domain_end};
                save_checkpoint(opts.checkpoint_path, st);
            }
            lock.lock();
        }
    }
    for (auto& th : pool) th.join();
    if (worker_error) std::rethrow_exception(worker_error);

    auto t1 = std::chrono::steady_clock::now();
    summary.watermark = watermark;
    summary.completed = watermark == domain_end;
    summary.seconds = std::chrono::duration<double>(t1 - t0).count();
    summary.per_second = summary.seconds > 0 ? static_cast<double>(summary.counts.total) / summary.seconds : 0.0;

    // final checkpoint even when the cadence didn't land on the last unit
    if (!opts.checkpoint_path.empty()) {
        CheckpointState st{task, watermark, summary.histogram, summary.counts, summary.completed};
        save_checkpoint(opts.checkpoint_path, st);
    }
    return summary;
}

inline ScanSummary run_scan(const ScanTask& task, const ScanOptions& opts = {}) {
    uint64_t start = task.mode == ScanMode::Exhaustive ? task.range_begin : 0;
    return run_scan_from(task, opts, start, {}, {});
}

// Continues a checkpointed scan. The expected task must match the stored
// one exactly (seed included); a mismatch is an integrity error.
inline ScanSummary resume_scan(const std::string& checkpoint_path, const ScanTask& expected,
                               const ScanOptions& opts = {}) {
    CheckpointState st = load_checkpoint(checkpoint_path);
    if (!(st.task == expected))
        throw std::invalid_argument("checkpoint task does not match the requested task (seed/range/space)");
    if (st.completed) {
        ScanSummary summary;
        summary.task = st.task;
        summary.histogram = st.histogram;
        summary.counts = st.counts;
        summary.watermark = st.watermark;
        summary.completed = true;
        summary.threads = opts.threads;
        return summary;
    }
    return run_scan_from(st.task, opts, st.watermark, st.histogram, st.counts);
}

// The census over all ~3.58e8 scale-normalized plane quartics over F_4.
inline ScanTask plane_quartic_census_task(uint64_t range_begin = 0, uint64_t range_end = UINT64_MAX) {
    ScanTask t;
    t.n = 2;
    t.d = 4;
    t.p = 2;
    t.e = 2;
    t.mode = ScanMode::Exhaustive;
    t.normalized = true;
    uint64_t domain = normalized_vector_count(MonomialBasis::get(3, 4).size(), 4);
    t.range_begin = std::min(range_begin, domain);
    t.range_end = std::min(range_end, domain);
    return t;
}

}  // namespace linefree
