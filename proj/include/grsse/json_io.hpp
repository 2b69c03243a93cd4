// JSON serialization: parity-check matrices, code specs, channels, plans.
#pragma once

#include "grsse/codec.hpp"
#include "grsse/planner.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace grsse {

using Json = nlohmann::json;

// --- parity-check matrices ---------------------------------------------------
// {"q": int, "n": int, "k": int, "rows": [[int,...],...]}

inline Json matrix_to_json(const ParityCheckMatrix& h) {
    Json rows = Json::array();
    for (const auto& r : h.rows()) {
        Json row = Json::array();
        for (size_t j = 0; j < r.size(); ++j) row.push_back(static_cast<int>(r[j]));
        rows.push_back(std::move(row));
    }
    return Json{{"q", h.q()}, {"n", h.n()}, {"k", h.k()}, {"rows", std::move(rows)}};
}

inline ParityCheckMatrix matrix_from_json(const Json& j) {
    const uint32_t q = j.at("q").get<uint32_t>();
    const uint32_t n = j.at("n").get<uint32_t>();
    const uint32_t k = j.at("k").get<uint32_t>();
    std::vector<FieldVector> rows;
    for (const auto& row : j.at("rows")) {
        std::vector<uint8_t> v;
        for (const auto& x : row) v.push_back(static_cast<uint8_t>(x.get<uint32_t>()));
        rows.emplace_back(q, std::move(v));
    }
    if (rows.size() != n - k) throw std::invalid_argument("code JSON: k inconsistent with rows");
    return ParityCheckMatrix(q, n, std::move(rows));
}

// --- code specs ---------------------------------------------------------------

inline Json code_to_json(const CodePtr& code) {
    switch (code->kind()) {
        case LinearCode::Kind::trivial:
            return Json{{"kind", "trivial"}, {"q", code->q()}, {"n", code->n()}};
        case LinearCode::Kind::complete:
            return Json{{"kind", "complete"}, {"q", code->q()}, {"n", code->n()}};
        case LinearCode::Kind::repetition:
            return Json{{"kind", "repetition"}, {"q", code->q()}, {"n", code->n()}};
        case LinearCode::Kind::juxtaposition:
            return Json{{"kind", "juxtaposition"},
                        {"r", code->juxtaposition_order()},
                        {"base", code_to_json(code->juxtaposition_base())}};
        case LinearCode::Kind::generic: {
            if (code->name() == "golay24") return Json{{"kind", "golay24"}};
            Json j = matrix_to_json(code->check_matrix());
            j["kind"] = "matrix";
            j["name"] = code->name();
            // wire symbols use standard-form column order; record how the
            // user's original columns were permuted into it
            if (!code->input_column_perm().is_identity()) {
                Json perm = Json::array();
                for (size_t i = 0; i < code->input_column_perm().size(); ++i)
                    perm.push_back(code->input_column_perm()[i]);
                j["column_perm"] = std::move(perm);
            }
            return j;
        }
    }
    throw std::logic_error("unreachable");
}

inline CodePtr code_from_json(const Json& j) {
    if (!j.contains("kind")) return LinearCode::from_matrix("user", matrix_from_json(j));
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "trivial") return LinearCode::trivial(j.at("q"), j.at("n"));
    if (kind == "complete") return LinearCode::complete(j.at("q"), j.at("n"));
    if (kind == "repetition") return LinearCode::repetition(j.at("q"), j.at("n"));
    if (kind == "golay24") return LinearCode::golay24();
    if (kind == "juxtaposition")
        return LinearCode::juxtapose(code_from_json(j.at("base")), j.at("r").get<uint32_t>());
    if (kind == "matrix")
        return LinearCode::from_matrix(j.value("name", std::string("user")), matrix_from_json(j));
    throw std::invalid_argument("unknown code kind: " + kind);
}

// CLI code spec strings: trivial | repetition|rep | complete | golay |
// juxR:<spec> | file:<path-to-code-json>
inline CodePtr resolve_code(const std::string& spec, uint32_t q, uint32_t n) {
    if (spec == "trivial") return LinearCode::trivial(q, n);
    if (spec == "repetition" || spec == "rep") return LinearCode::repetition(q, n);
    if (spec == "complete") return LinearCode::complete(q, n);
    if (spec == "golay" || spec == "golay24") {
        if (q != 2 || n != 24) throw std::invalid_argument("golay24 needs q=2, n=24");
        return LinearCode::golay24();
    }
    if (spec.rfind("jux", 0) == 0) {
        const auto colon = spec.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("juxtaposition spec: " + spec);
        const uint32_t r = static_cast<uint32_t>(std::stoul(spec.substr(3, colon - 3)));
        if (r == 0 || n % r != 0) throw std::invalid_argument("juxtaposition order must divide n");
        return LinearCode::juxtapose(resolve_code(spec.substr(colon + 1), q, n / r), r);
    }
    if (spec.rfind("file:", 0) == 0) {
        std::ifstream f(spec.substr(5));
        if (!f) throw std::invalid_argument("cannot open code file: " + spec.substr(5));
        Json j = Json::parse(f);
        CodePtr code = code_from_json(j);
        if (code->q() != q || code->n() != n)
            throw std::invalid_argument("code file does not match (q, n)");
        return code;
    }
    throw std::invalid_argument("unknown code spec: " + spec);
}

// --- channels -----------------------------------------------------------------

inline Json channel_to_json(const NoiseModel& m) {
    Json j{{"q", m.q}, {"n", m.n}};
    switch (m.kind) {
        case NoiseKind::q_symmetric:
            j["kind"] = "symmetric";
            j["alpha"] = format_rational(m.alpha);
            break;
        case NoiseKind::hamming_ball:
            j["kind"] = "ball";
            j["w"] = m.w;
            break;
        case NoiseKind::constant_weight:
            j["kind"] = "constant-weight";
            j["w"] = m.w;
            break;
    }
    return j;
}

inline NoiseModel channel_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const uint32_t q = j.at("q").get<uint32_t>(), n = j.at("n").get<uint32_t>();
    if (kind == "symmetric" || kind == "bsc" || kind == "qsc")
        return NoiseModel::symmetric(q, n, parse_rational(j.at("alpha").get<std::string>()));
    if (kind == "ball") return NoiseModel::ball(q, n, j.at("w").get<uint32_t>());
    if (kind == "constant-weight" || kind == "cw")
        return NoiseModel::constant_weight(q, n, j.at("w").get<uint32_t>());
    throw std::invalid_argument("unknown channel kind: " + kind);
}

// --- plans ----------------------------------------------------------------------
// Header (channel, codes, epsilon, cap, backend), per-iteration records
// {code_index, F, gamma: [[typeset, type, mass],...]}, then the p_L array.
// Rational masses serialize as "num/den" strings, floats as JSON numbers.

template <class S>
Json scalar_to_json(const S& x) {
    if constexpr (scalar_traits<S>::exact)
        return format_rational(x);
    else
        return x;
}

template <class S>
S scalar_from_json(const Json& j) {
    if constexpr (scalar_traits<S>::exact)
        return parse_rational(j.get<std::string>());
    else
        return j.get<double>();
}

template <class S>
Json plan_to_json(GrssePlanner<S>& plan) {
    plan.ensure_terminal();
    Json j;
    j["format"] = "grsse-plan-v1";
    j["backend"] = scalar_traits<S>::name();
    j["channel"] = channel_to_json(plan.channel());
    j["epsilon"] = format_rational(plan.schedule().epsilon);
    j["cap"] = plan.schedule().cap;
    Json codes = Json::array();
    Json typesets = Json::array();
    for (const auto& c : plan.schedule().codes) {
        codes.push_back(code_to_json(c));
        Json sets = Json::array();
        for (const auto& set : c->typesets().sets) sets.push_back(set);
        typesets.push_back(std::move(sets));
    }
    j["codes"] = std::move(codes);
    j["typesets"] = std::move(typesets);
    Json iters = Json::array();
    const size_t total = plan.ensure_terminal();
    for (size_t i = 1; i <= total; ++i) {
        const auto& it = plan.iteration(i);
        Json gamma = Json::array();
        for (size_t t = 0; t < it.gamma.size(); ++t)
            for (const auto& [p, mass] : it.gamma[t])
                gamma.push_back(Json::array({t, p, scalar_to_json(mass)}));
        iters.push_back(Json{{"code_index",
                              it.code_index == IterationPlan<S>::kCompleteFallback
                                  ? -1
                                  : static_cast<int64_t>(it.code_index)},
                             {"F", scalar_to_json(it.accept_prob)},
                             {"gamma", std::move(gamma)}});
    }
    j["iterations"] = std::move(iters);
    Json pl = Json::array();
    for (const auto& p : plan.p_L()) pl.push_back(scalar_to_json(p));
    j["p_L"] = std::move(pl);
    return j;
}

template <class S>
PlannerPtr<S> plan_from_json(const Json& j) {
    if (j.at("format").get<std::string>() != "grsse-plan-v1")
        throw std::invalid_argument("unrecognized plan format");
    if (j.at("backend").get<std::string>() != scalar_traits<S>::name())
        throw std::invalid_argument("plan backend does not match the requested scalar type");
    NoiseModel channel = channel_from_json(j.at("channel"));
    std::vector<CodePtr> codes;
    for (const auto& cj : j.at("codes")) codes.push_back(code_from_json(cj));
    CodeSchedule schedule(codes, parse_rational(j.at("epsilon").get<std::string>()),
                          j.at("cap").get<uint32_t>());
    // validate the recorded type sets against the reconstructed codes
    const auto& tss = j.at("typesets");
    for (size_t c = 0; c < codes.size(); ++c) {
        const auto& table = codes[c]->typesets();
        if (tss.at(c).size() != table.sets.size())
            throw std::invalid_argument("plan typesets do not match the reconstructed code");
        for (size_t t = 0; t < table.sets.size(); ++t)
            if (tss.at(c).at(t).get<std::vector<uint32_t>>() != table.sets[t])
                throw std::invalid_argument("plan typesets do not match the reconstructed code");
    }
    auto complete = LinearCode::complete(channel.q, channel.n);
    std::deque<IterationPlan<S>> iters;
    for (const auto& ij : j.at("iterations")) {
        IterationPlan<S> it;
        const int64_t idx = ij.at("code_index").get<int64_t>();
        it.code_index = idx < 0 ? IterationPlan<S>::kCompleteFallback : static_cast<uint32_t>(idx);
        const auto& code = idx < 0 ? complete : codes.at(static_cast<size_t>(idx));
        it.gamma.resize(code->typesets().sets.size());
        it.accept_prob = scalar_from_json<S>(ij.at("F"));
        for (const auto& g : ij.at("gamma")) {
            const size_t t = g.at(0).get<size_t>();
            it.gamma.at(t).emplace_back(g.at(1).get<uint32_t>(), scalar_from_json<S>(g.at(2)));
        }
        iters.push_back(std::move(it));
    }
    if (iters.empty()) throw std::invalid_argument("plan has no iterations");
    iters.back().terminal = true;
    std::vector<S> pl;
    for (const auto& pj : j.at("p_L")) pl.push_back(scalar_from_json<S>(pj));
    if (pl.size() != iters.size()) throw std::invalid_argument("p_L length mismatch");
    return std::make_shared<GrssePlanner<S>>(channel, schedule, std::move(iters), std::move(pl));
}

inline Json load_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return Json::parse(f);
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(1, '\t') << "\n";
}

}  // namespace grsse
