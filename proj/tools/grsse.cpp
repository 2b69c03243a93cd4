// grsse: plan / encode / decode / bounds / sweep / codes command-line tool.
#include "grsse/bounds.hpp"
#include "grsse/codec.hpp"
#include "grsse/json_io.hpp"
#include "grsse/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace grsse;

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(f), {});
}

void write_file(const std::string& path, const std::vector<uint8_t>& data) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

struct ChannelArgs {
    std::string family;  // bsc | qsc | ball | cw
    std::string alpha = "0";
    uint32_t w = 0;
    uint32_t q = 2;
    uint32_t n = 24;

    void attach(CLI::App* cmd) {
        cmd->add_option("--channel", family, "channel family: bsc|qsc|ball|cw")->required();
        cmd->add_option("--alpha", alpha, "flip probability (rational or decimal)");
        cmd->add_option("--w", w, "Hamming radius / weight");
        cmd->add_option("--q", q, "field order (prime)");
        cmd->add_option("--n", n, "block length");
    }
    NoiseModel build() const {
        if (family == "bsc" || family == "qsc" || family == "symmetric")
            return NoiseModel::symmetric(q, n, parse_rational(alpha));
        if (family == "ball") return NoiseModel::ball(q, n, w);
        if (family == "cw" || family == "constant-weight") return NoiseModel::constant_weight(q, n, w);
        throw CLI::ValidationError("--channel", "unknown channel family: " + family);
    }
};

std::vector<CodePtr> parse_code_list(const std::string& list, uint32_t q, uint32_t n) {
    std::vector<CodePtr> codes;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) codes.push_back(resolve_code(item, q, n));
    if (codes.empty()) throw CLI::ValidationError("--codes", "no codes given");
    return codes;
}

LengthCoder parse_coder(const std::string& name) {
    if (name == "huffman") return LengthCoder::huffman;
    if (name == "elias" || name == "elias-gamma") return LengthCoder::elias_gamma;
    throw CLI::ValidationError("--coder", "unknown coder: " + name);
}

int cmd_codes_list(uint32_t q, uint32_t n) {
    std::cout << "name\tn\tk\td\ttype_sets\n";
    for (const auto& code : default_catalog(q, n)) {
        std::cout << code->name() << '\t' << code->n() << '\t' << code->k() << '\t';
        if (code->distance_is_infinite())
            std::cout << "inf";
        else
            std::cout << code->distance();
        std::cout << '\t' << code->typesets().size() << '\n';
    }
    return 0;
}

int cmd_plan(const ChannelArgs& ch, const std::string& codes_list, const std::string& eps,
             uint32_t cap, const std::string& backend, const std::string& out) {
    NoiseModel channel = ch.build();
    CodeSchedule schedule(parse_code_list(codes_list, channel.q, channel.n), parse_rational(eps),
                          cap);
    const bool rational = backend == "rational" || (backend == "auto" && cap <= 512);
    Json j;
    if (rational) {
        auto plan = plan_grsse<Rational>(channel, schedule);
        j = plan_to_json(*plan);
    } else {
        auto plan = plan_grsse<double>(channel, schedule);
        j = plan_to_json(*plan);
    }
    save_json_file(out, j);
    std::cout << "plan written to " << out << " (" << j["iterations"].size() << " iterations)\n";
    return 0;
}

template <class S, class F>
int with_loaded_plan(const Json& j, const std::string& coder, F&& body) {
    auto plan = plan_from_json<S>(j);
    Codec<S> codec(plan, parse_coder(coder));
    return body(codec);
}

int cmd_encode(const std::string& plan_path, uint64_t seed, const std::string& coder,
               const std::string& in, const std::string& out, bool decode_mode) {
    Json j = load_json_file(plan_path);
    const std::string backend = j.at("backend").get<std::string>();
    auto run = [&](auto& codec) {
        auto data = read_file(in);
        write_file(out, decode_mode ? decode_data(codec, data, seed) : encode_data(codec, data, seed));
        std::cout << (decode_mode ? "decoded to " : "encoded to ") << out << "\n";
        return 0;
    };
    if (backend == "rational") return with_loaded_plan<Rational>(j, coder, run);
    return with_loaded_plan<double>(j, coder, run);
}

int cmd_bounds(const ChannelArgs& ch, const std::string& code_spec) {
    NoiseModel channel = ch.build();
    CodePtr code = resolve_code(code_spec, channel.q, channel.n);
    auto noise = type_distribution<double>(channel);
    BoundReport r = theorem1_bounds(noise, *code);
    Json j{{"channel", channel_to_json(channel)},
           {"code", code->name()},
           {"n", r.n},
           {"k", r.k},
           {"capacity_bits", r.capacity},
           {"eta_bits", r.eta},
           {"tail_weight_probability", r.tail},
           {"elogl_bound_bits", r.elogl_bound},
           {"comm_bound_bits", r.comm_bound},
           {"capacity_per_symbol", r.capacity_per_symbol()},
           {"comm_bound_per_symbol", r.comm_bound_per_symbol()}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out, const std::string& cache) {
    SweepSpec spec = sweep_spec_from_json(load_json_file(spec_path));
    if (!cache.empty()) spec.cache_dir = cache;
    auto rows = run_sweep(spec);
    emit_csv(rows, out);
    std::cout << "sweep written to " << out << " (" << rows.size() << " rows)\n";
    if (sweep_has_flags(rows)) {
        std::cerr << "warning: invariant flags fired; see the flags column\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"greedy rejection-sampled syndrome encoder"};
    app.require_subcommand(1);

    // codes list
    auto* codes = app.add_subcommand("codes", "inner-code catalog");
    codes->require_subcommand(1);
    auto* list = codes->add_subcommand("list", "list built-in codes");
    uint32_t list_q = 2, list_n = 24;
    list->add_option("--q", list_q, "field order");
    list->add_option("--n", list_n, "block length");

    // plan
    auto* plan = app.add_subcommand("plan", "precompute an encoder plan");
    ChannelArgs plan_ch;
    plan_ch.attach(plan);
    std::string plan_codes, plan_eps = "1/1000000000", plan_backend = "auto", plan_out;
    uint32_t plan_cap = 20000;
    plan->add_option("--codes", plan_codes, "comma-separated code specs (decreasing distance)")
        ->required();
    plan->add_option("--eps", plan_eps, "mixed-rule tail threshold");
    plan->add_option("--cap", plan_cap, "iteration cap (complete-code fallback)");
    plan->add_option("--backend", plan_backend, "auto|float64|rational");
    plan->add_option("--out", plan_out, "output plan JSON")->required();

    // encode / decode
    std::string enc_plan, enc_in, enc_out, enc_coder = "huffman";
    uint64_t enc_seed = 0;
    auto* enc = app.add_subcommand("encode", "encode a data file");
    enc->add_option("--plan", enc_plan, "plan JSON")->required();
    enc->add_option("--seed", enc_seed, "common-randomness seed")->required();
    enc->add_option("--coder", enc_coder, "huffman|elias-gamma");
    enc->add_option("--in", enc_in, "input data file")->required();
    enc->add_option("--out", enc_out, "output message file")->required();
    std::string dec_plan, dec_in, dec_out, dec_coder = "huffman";
    uint64_t dec_seed = 0;
    auto* dec = app.add_subcommand("decode", "decode a message file");
    dec->add_option("--plan", dec_plan, "plan JSON")->required();
    dec->add_option("--seed", dec_seed, "common-randomness seed")->required();
    dec->add_option("--coder", dec_coder, "huffman|elias-gamma");
    dec->add_option("--in", dec_in, "input message file")->required();
    dec->add_option("--out", dec_out, "output data file")->required();

    // bounds
    auto* bounds = app.add_subcommand("bounds", "closed-form bound report");
    ChannelArgs bounds_ch;
    bounds_ch.attach(bounds);
    std::string bounds_code;
    bounds->add_option("--code", bounds_code, "code spec")->required();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run an experiment sweep");
    std::string sweep_spec, sweep_out, sweep_cache;
    sweep->add_option("--spec", sweep_spec, "sweep spec JSON")->required();
    sweep->add_option("--out", sweep_out, "output CSV")->required();
    sweep->add_option("--cache", sweep_cache, "directory for cached plans");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) return cmd_codes_list(list_q, list_n);
        if (plan->parsed())
            return cmd_plan(plan_ch, plan_codes, plan_eps, plan_cap, plan_backend, plan_out);
        if (enc->parsed()) return cmd_encode(enc_plan, enc_seed, enc_coder, enc_in, enc_out, false);
        if (dec->parsed()) return cmd_encode(dec_plan, dec_seed, dec_coder, dec_in, dec_out, true);
        if (bounds->parsed()) return cmd_bounds(bounds_ch, bounds_code);
        if (sweep->parsed()) return cmd_sweep(sweep_spec, sweep_out, sweep_cache);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
