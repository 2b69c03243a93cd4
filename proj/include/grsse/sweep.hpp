// Experiment driver: channel-parameter sweeps, analytic and Monte-Carlo
// rates, CSV emission. Grid points run in parallel; output is deterministic
// for a fixed spec (per-point derived seeds, ordered assembly).
#pragma once

#include "grsse/bounds.hpp"
#include "grsse/codec.hpp"
#include "grsse/json_io.hpp"
#include "grsse/planner.hpp"

#include <cmath>
#include <filesystem>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace grsse {

struct SweepSpec {
    uint32_t q = 2;
    uint32_t n = 24;
    NoiseKind channel_kind = NoiseKind::q_symmetric;
    std::vector<Rational> alphas;  // symmetric grid
    std::vector<uint32_t> ws;      // ball / constant-weight grid
    std::vector<std::string> codes;
    Rational epsilon = Rational(1, 1000000000);
    uint32_t cap = 20000;
    LengthCoder coder = LengthCoder::huffman;
    std::string backend = "auto";  // auto | float64 | rational
    // default trial counts scale down with block length; 0 = analytic only
    std::optional<uint64_t> trials;
    uint64_t seed = 1;
    std::string cache_dir;  // plans cached here when nonempty

    uint64_t effective_trials() const {
        if (trials) return *trials;
        return n >= 96 ? 1000 : 10000;
    }

    size_t grid_size() const {
        return channel_kind == NoiseKind::q_symmetric ? alphas.size() : ws.size();
    }
    NoiseModel channel_at(size_t i) const {
        switch (channel_kind) {
            case NoiseKind::q_symmetric:
                return NoiseModel::symmetric(q, n, alphas.at(i));
            case NoiseKind::hamming_ball:
                return NoiseModel::ball(q, n, ws.at(i));
            case NoiseKind::constant_weight:
                return NoiseModel::constant_weight(q, n, ws.at(i));
        }
        throw std::logic_error("unreachable");
    }
};

inline SweepSpec sweep_spec_from_json(const Json& j) {
    SweepSpec s;
    const auto& ch = j.at("channel");
    s.q = ch.at("q").get<uint32_t>();
    s.n = ch.at("n").get<uint32_t>();
    const std::string kind = ch.at("kind").get<std::string>();
    if (kind == "symmetric" || kind == "bsc" || kind == "qsc") {
        s.channel_kind = NoiseKind::q_symmetric;
        for (const auto& a : ch.at("alphas")) s.alphas.push_back(parse_rational(a.get<std::string>()));
    } else if (kind == "ball") {
        s.channel_kind = NoiseKind::hamming_ball;
        for (const auto& w : ch.at("ws")) s.ws.push_back(w.get<uint32_t>());
    } else if (kind == "constant-weight" || kind == "cw") {
        s.channel_kind = NoiseKind::constant_weight;
        for (const auto& w : ch.at("ws")) s.ws.push_back(w.get<uint32_t>());
    } else {
        throw std::invalid_argument("unknown sweep channel kind: " + kind);
    }
    for (const auto& c : j.at("codes")) s.codes.push_back(c.get<std::string>());
    if (j.contains("epsilon")) {
        s.epsilon = parse_rational(j.at("epsilon").get<std::string>());
    } else {
        // juxtaposition sweeps default to the coarser tail threshold
        bool has_jux = false;
        for (const auto& c : s.codes) has_jux = has_jux || c.rfind("jux", 0) == 0;
        s.epsilon = has_jux ? Rational(1, 100) : Rational(1, 1000000000);
    }
    if (j.contains("cap")) s.cap = j.at("cap").get<uint32_t>();
    if (j.contains("coder"))
        s.coder = j.at("coder").get<std::string>() == "elias-gamma" ? LengthCoder::elias_gamma
                                                                    : LengthCoder::huffman;
    if (j.contains("backend")) s.backend = j.at("backend").get<std::string>();
    if (j.contains("trials")) s.trials = j.at("trials").get<uint64_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<uint64_t>();
    if (j.contains("cache_dir")) s.cache_dir = j.at("cache_dir").get<std::string>();
    if (s.grid_size() == 0) throw std::invalid_argument("sweep grid is empty");
    return s;
}

struct SweepRow {
    std::string param;
    double capacity_bps = 0.0;
    double analytic_rate_bps = 0.0;
    std::optional<double> empirical_rate_bps;
    std::optional<double> empirical_rate_stderr;
    std::optional<double> mean_distortion;
    std::optional<double> comm_bound_bps;  // pure schedules with known distance only
    double iters_mean = 0.0;
    uint64_t iters_max = 0;
    std::vector<std::string> flags;
};

namespace detail {

inline uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// plans keyed by a content hash of (channel, schedule, backend, eps, cap)
template <class S>
PlannerPtr<S> plan_maybe_cached(const SweepSpec& spec, const NoiseModel& channel,
                                const CodeSchedule& schedule) {
    if (spec.cache_dir.empty()) {
        auto plan = std::make_shared<GrssePlanner<S>>(channel, schedule);
        plan->ensure_terminal();
        return plan;
    }
    Json key;
    key["channel"] = channel_to_json(channel);
    Json codes = Json::array();
    for (const auto& c : schedule.codes) codes.push_back(code_to_json(c));
    key["codes"] = std::move(codes);
    key["epsilon"] = format_rational(schedule.epsilon);
    key["cap"] = schedule.cap;
    key["backend"] = scalar_traits<S>::name();
    char name[32];
    std::snprintf(name, sizeof(name), "plan-%016llx.json",
                  static_cast<unsigned long long>(fnv1a(key.dump())));
    const auto path = std::filesystem::path(spec.cache_dir) / name;
    if (std::filesystem::exists(path)) return plan_from_json<S>(load_json_file(path.string()));
    auto plan = std::make_shared<GrssePlanner<S>>(channel, schedule);
    plan->ensure_terminal();
    std::filesystem::create_directories(spec.cache_dir);
    save_json_file(path.string(), plan_to_json(*plan));
    return plan;
}

template <class S>
SweepRow run_sweep_point(const SweepSpec& spec, size_t idx, const std::vector<CodePtr>& codes) {
    const NoiseModel channel = spec.channel_at(idx);
    SweepRow row;
    row.param = spec.channel_kind == NoiseKind::q_symmetric
                    ? format_rational(spec.alphas[idx])
                    : std::to_string(spec.ws[idx]);

    CodeSchedule schedule(codes, spec.epsilon, spec.cap);
    auto plan = plan_maybe_cached<S>(spec, channel, schedule);

    auto noise = type_distribution<double>(channel);
    row.capacity_bps = capacity(noise) / spec.n;
    row.analytic_rate_bps = expected_rate(*plan, spec.coder);

    // analytic iteration stats from p_L
    {
        const auto& pl = plan->p_L();
        double mean = 0.0;
        for (size_t i = 0; i < pl.size(); ++i) mean += to_double(pl[i]) * double(i + 1);
        row.iters_mean = mean;
        row.iters_max = pl.size();
    }

    if (codes.size() == 1 && !codes[0]->distance_is_infinite()) {
        row.comm_bound_bps = theorem1_bounds(noise, *codes[0]).comm_bound / spec.n;
        if (row.analytic_rate_bps > *row.comm_bound_bps + 1e-12)
            row.flags.push_back("exceeds_theorem1");
    } else if (codes.size() == 1) {
        row.comm_bound_bps = theorem1_bounds(noise, *codes[0]).comm_bound / spec.n;
    }

    if (row.capacity_bps > row.analytic_rate_bps + 1e-12) row.flags.push_back("rate_below_capacity");

    const uint64_t trials = spec.effective_trials();
    if (trials > 0) {
        Codec<S> codec(plan, spec.coder);
        const uint64_t point_seed = spec.seed + 0x9E3779B9u * (idx + 1);
        SyncRng common(point_seed);
        LocalRng local(point_seed ^ 0x5DEECE66Dull);
        LocalRng source(point_seed ^ 0xC0FFEEull);
        double bits_sum = 0.0, bits_sq = 0.0, dist_sum = 0.0, iter_sum = 0.0;
        uint64_t iter_max = 0;
        for (uint64_t t = 0; t < trials; ++t) {
            FieldVector x(spec.q, spec.n);
            for (uint32_t i = 0; i < spec.n; ++i)
                x.set(i, static_cast<uint32_t>(draw_below(source, spec.q)));
            SyncRng dec_rng(common);  // decoder replays from the same state
            auto res = codec.encode(x, common, local);
            BitReader in(res.message);
            FieldVector y = codec.decode(in, dec_rng);
            if (!(y == res.y_hat) && (row.flags.empty() || row.flags.back() != "roundtrip_mismatch"))
                row.flags.push_back("roundtrip_mismatch");
            const double bits = static_cast<double>(res.message.bit_count());
            bits_sum += bits;
            bits_sq += bits * bits;
            dist_sum += res.distortion;
            iter_sum += static_cast<double>(res.L);
            iter_max = std::max(iter_max, res.L);
        }
        const double tn = static_cast<double>(trials);
        const double mean_bits = bits_sum / tn;
        const double var = std::max(bits_sq / tn - mean_bits * mean_bits, 0.0);
        row.empirical_rate_bps = mean_bits / spec.n;
        row.empirical_rate_stderr = std::sqrt(var / tn) / spec.n;
        row.mean_distortion = dist_sum / tn;
        row.iters_mean = iter_sum / tn;
        row.iters_max = iter_max;
        // the sample stderr degenerates when every message has the same
        // length; floor it at one bit of quantization noise
        const double stderr_floor = 1.0 / (spec.n * std::sqrt(tn));
        if (std::abs(*row.empirical_rate_bps - row.analytic_rate_bps) >
            4.0 * std::max(*row.empirical_rate_stderr, stderr_floor))
            row.flags.push_back("rate_mismatch");
    }
    return row;
}

}  // namespace detail

template <class S>
std::vector<SweepRow> run_sweep_backend(const SweepSpec& spec) {
    std::vector<CodePtr> codes;
    for (const auto& c : spec.codes) codes.push_back(resolve_code(c, spec.q, spec.n));
    // warm shared tables before the parallel section
    for (const auto& c : codes) c->typesets();
    LinearCode::complete(spec.q, spec.n)->typesets();

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(spec.grid_size());
    for (size_t i = 0; i < spec.grid_size(); ++i)
        futures.push_back(std::async(std::launch::async, [&spec, i, &codes] {
            return detail::run_sweep_point<S>(spec, i, codes);
        }));
    std::vector<SweepRow> rows;
    rows.reserve(futures.size());
    for (auto& f : futures) rows.push_back(f.get());
    return rows;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    const bool rational = spec.backend == "rational" ||
                          (spec.backend == "auto" && spec.cap <= 512);
    if (rational) return run_sweep_backend<Rational>(spec);
    return run_sweep_backend<double>(spec);
}

// RFC-4180 CSV with a fixed column order; floats as shortest round-trip
// decimals; missing values empty; flags joined by ';'.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "param,capacity_bps,analytic_rate_bps,empirical_rate_bps,empirical_rate_stderr,"
           "mean_distortion,comm_bound_bps,iters_mean,iters_max,flags\r\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        out << r.param << ',' << format_double(r.capacity_bps) << ','
            << format_double(r.analytic_rate_bps) << ',' << opt(r.empirical_rate_bps) << ','
            << opt(r.empirical_rate_stderr) << ',' << opt(r.mean_distortion) << ','
            << opt(r.comm_bound_bps) << ',' << format_double(r.iters_mean) << ',' << r.iters_max
            << ',';
        for (size_t i = 0; i < r.flags.size(); ++i) out << (i ? ";" : "") << r.flags[i];
        out << "\r\n";
    }
    return out.str();
}

inline bool sweep_has_flags(const std::vector<SweepRow>& rows) {
    for (const auto& r : rows)
        if (!r.flags.empty()) return true;
    return false;
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << sweep_csv(rows);
}

}  // namespace grsse
