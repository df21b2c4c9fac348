#pragma once

#include "hk/dynamics.hpp"
#include "hk/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace hk {

// Mode-tagged starting configuration. Opinions are stored exactly; float64
// instances hold dyadic rationals, so materializing in either mode and JSON
// round-trips are lossless.
struct InstanceSpec {
    std::string name;
    NumericMode mode = NumericMode::Rational;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Rational> opinions;  // weakly ascending
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed;
};

template <class S>
OpinionState<S> to_state(const InstanceSpec& spec) {
    OpinionState<S> st;
    st.nonstrategic.reserve(spec.opinions.size());
    for (const auto& q : spec.opinions)
        st.nonstrategic.push_back(scalar_traits<S>::from_rational(q));
    st.strategic.assign(spec.m, std::nullopt);
    validate(st);
    return st;
}

inline void sort_opinions(InstanceSpec& spec) {
    std::sort(spec.opinions.begin(), spec.opinions.end());
    spec.n = spec.opinions.size();
}

// --- generators --------------------------------------------------------------

// n agents at 0, 1, ..., n-1: the unit-spaced chain.
inline InstanceSpec gen_equidistant(std::size_t n) {
    if (n < 1) throw Error(ErrorCode::InvalidParam, "equidistant needs n >= 1");
    InstanceSpec spec;
    spec.name = "equidistant";
    spec.params["n"] = n;
    for (std::size_t i = 0; i < n; ++i) spec.opinions.emplace_back(static_cast<long>(i));
    sort_opinions(spec);
    return spec;
}

// Two heavy blocks of k agents at -1/k and k+1/k joined by the chain 0..k.
inline InstanceSpec gen_dumbbell(std::size_t k) {
    if (k < 10) throw Error(ErrorCode::InvalidParam, "dumbbell needs k >= 10");
    InstanceSpec spec;
    spec.name = "dumbbell";
    spec.params["k"] = k;
    long kl = static_cast<long>(k);
    for (std::size_t i = 0; i < k; ++i) spec.opinions.push_back(Rational(-1, kl));
    for (long v = 0; v <= kl; ++v) spec.opinions.emplace_back(v);
    for (std::size_t i = 0; i < k; ++i) spec.opinions.push_back(Rational(kl) + Rational(1, kl));
    sort_opinions(spec);
    return spec;
}

// k^2 agents at -2/3, k at 0, k^2 at 2/3; one strategic agent.
inline InstanceSpec gen_three_cluster(std::size_t k) {
    if (k < 15) throw Error(ErrorCode::InvalidParam, "three_cluster needs k >= 15");
    InstanceSpec spec;
    spec.name = "three_cluster";
    spec.params["k"] = k;
    spec.m = 1;
    for (std::size_t i = 0; i < k * k; ++i) spec.opinions.push_back(Rational(-2, 3));
    for (std::size_t i = 0; i < k; ++i) spec.opinions.emplace_back(0);
    for (std::size_t i = 0; i < k * k; ++i) spec.opinions.push_back(Rational(2, 3));
    sort_opinions(spec);
    return spec;
}

// 0, 1/4, 2/3, 5/4, 4/3 plus n-5 agents parked at 6.
inline InstanceSpec gen_not_too_fast(std::size_t n) {
    if (n < 5) throw Error(ErrorCode::InvalidParam, "not_too_fast needs n >= 5");
    InstanceSpec spec;
    spec.name = "not_too_fast";
    spec.params["n"] = n;
    spec.opinions = {Rational(0), Rational(1, 4), Rational(2, 3), Rational(5, 4), Rational(4, 3)};
    for (std::size_t i = 5; i < n; ++i) spec.opinions.emplace_back(6);
    sort_opinions(spec);
    return spec;
}

namespace detail {

// Concatenate copies of a block with inter-copy gap 10; surplus agents form
// one width-zero (inert) block beyond the last copy.
inline InstanceSpec farm(const std::string& name, std::size_t n,
                         const std::vector<Rational>& block, std::size_t copies) {
    InstanceSpec spec;
    spec.name = name;
    Rational span = block.back() - block.front();
    Rational stride = span + 10;
    Rational offset(0);
    for (std::size_t c = 0; c < copies; ++c) {
        for (const auto& v : block) spec.opinions.push_back(v + offset);
        offset += stride;
    }
    std::size_t leftover = n - copies * block.size();
    for (std::size_t i = 0; i < leftover; ++i) spec.opinions.push_back(block.front() + offset);
    sort_opinions(spec);
    return spec;
}

}  // namespace detail

// floor(n/k) dumbbell copies, k = floor(n^beta) with beta = (1-alpha)/3; the
// per-copy size is the largest admissible dumbbell (3k'+1 agents, k' >= 10,
// k' = 1 mod 3) not exceeding k.
inline InstanceSpec gen_dumbbell_farm(std::size_t n, const Rational& alpha) {
    if (alpha < 0 || alpha > 1)
        throw Error(ErrorCode::InvalidParam, "dumbbell_farm needs alpha in [0, 1]");
    BigInt p = numerator(Rational(1) - alpha), q = denominator(Rational(1) - alpha) * 3;
    BigInt k = floor_power(BigInt(n), p, q);
    if (k < 31)
        throw Error(ErrorCode::InvalidParam,
                    "dumbbell_farm: derived copy size " + k.str() + " is below the minimum 31");
    // sizes 3k'+1 with k' = 1 mod 3 are 31, 40, 49, ...: 31 + 9j
    std::size_t size = 31 + 9 * static_cast<std::size_t>((k - 31) / 9);
    std::size_t kd = (size - 1) / 3;
    std::size_t copies = n / static_cast<std::size_t>(k);
    if (copies < 1) throw Error(ErrorCode::InvalidParam, "dumbbell_farm: no room for a copy");
    InstanceSpec block = gen_dumbbell(kd);
    InstanceSpec spec = detail::farm("dumbbell_farm", n, block.opinions, copies);
    spec.params["n"] = n;
    spec.params["alpha"] = format_rational(alpha);
    spec.params["copy_k"] = kd;
    spec.params["copies"] = copies;
    return spec;
}

// Same farm layout with an explicit dumbbell parameter per copy.
inline InstanceSpec gen_dumbbell_farm_fixed(std::size_t n, std::size_t kd) {
    InstanceSpec block = gen_dumbbell(kd);
    std::size_t copies = n / block.opinions.size();
    if (copies < 1) throw Error(ErrorCode::InvalidParam, "dumbbell_farm: no room for a copy");
    InstanceSpec spec = detail::farm("dumbbell_farm", n, block.opinions, copies);
    spec.params["n"] = n;
    spec.params["copy_k"] = kd;
    spec.params["copies"] = copies;
    return spec;
}

// floor(n/k) equidistant copies of k = 2*c2 + 2 agents each.
inline InstanceSpec gen_equidistant_farm(std::size_t n, std::size_t c2) {
    if (c2 < 1) throw Error(ErrorCode::InvalidParam, "equidistant_farm needs c2 >= 1");
    std::size_t k = 2 * c2 + 2;
    std::size_t copies = n / k;
    if (copies < 1) throw Error(ErrorCode::InvalidParam, "equidistant_farm: no room for a copy");
    InstanceSpec block = gen_equidistant(k);
    InstanceSpec spec = detail::farm("equidistant_farm", n, block.opinions, copies);
    spec.params["n"] = n;
    spec.params["c2"] = c2;
    spec.params["copies"] = copies;
    return spec;
}

// n opinions drawn uniformly from the 1/64 grid on [0, span].
inline InstanceSpec gen_random(std::size_t n, std::size_t m, std::size_t span,
                               std::uint64_t seed) {
    if (n < 1) throw Error(ErrorCode::InvalidParam, "random needs n >= 1");
    InstanceSpec spec;
    spec.name = "random";
    spec.m = m;
    spec.seed = seed;
    spec.params["n"] = n;
    spec.params["m"] = m;
    spec.params["span"] = span;
    Rng rng(seed);
    long cells = 64 * static_cast<long>(span);
    for (std::size_t i = 0; i < n; ++i)
        spec.opinions.push_back(Rational(rng.range(0, cells), 64));
    sort_opinions(spec);
    return spec;
}

// Dispatch by generator name with a JSON parameter bag (CLI and bench grids).
inline InstanceSpec make_instance(const std::string& generator, const nlohmann::json& params) {
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!params.contains(key))
            throw Error(ErrorCode::InvalidParam,
                        generator + " needs parameter '" + key + "'");
        return params.at(key);
    };
    auto as_rational = [](const nlohmann::json& v) {
        return v.is_string() ? parse_rational(v.get<std::string>())
                             : Rational(v.get<long>());
    };
    InstanceSpec spec;
    if (generator == "equidistant") spec = gen_equidistant(need("n").get<std::size_t>());
    else if (generator == "dumbbell") spec = gen_dumbbell(need("k").get<std::size_t>());
    else if (generator == "three_cluster") spec = gen_three_cluster(need("k").get<std::size_t>());
    else if (generator == "not_too_fast") spec = gen_not_too_fast(need("n").get<std::size_t>());
    else if (generator == "dumbbell_farm" && params.contains("copy_k") && !params.contains("alpha"))
        spec = gen_dumbbell_farm_fixed(need("n").get<std::size_t>(), need("copy_k").get<std::size_t>());
    else if (generator == "dumbbell_farm")
        spec = gen_dumbbell_farm(need("n").get<std::size_t>(), as_rational(need("alpha")));
    else if (generator == "equidistant_farm")
        spec = gen_equidistant_farm(need("n").get<std::size_t>(), need("c2").get<std::size_t>());
    else if (generator == "random")
        spec = gen_random(need("n").get<std::size_t>(), params.value("m", 0),
                          need("span").get<std::size_t>(), need("seed").get<std::uint64_t>());
    else throw Error(ErrorCode::InvalidParam, "unknown generator: " + generator);
    if (params.contains("m")) spec.m = params.at("m").get<std::size_t>();
    return spec;
}

// --- JSON form ---------------------------------------------------------------
//
// {"name": str, "mode": "rational"|"float64", "n": int, "m": int,
//  "opinions": ["p/q" ... | number ...], "params": {...}, "seed": int?}

inline nlohmann::ordered_json instance_to_json(const InstanceSpec& spec) {
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    j["mode"] = to_string(spec.mode);
    j["n"] = spec.n;
    j["m"] = spec.m;
    auto& ops = j["opinions"] = nlohmann::ordered_json::array();
    for (const auto& q : spec.opinions) {
        if (spec.mode == NumericMode::Rational) ops.push_back(format_rational(q));
        else ops.push_back(to_double(q));
    }
    j["params"] = spec.params;
    if (spec.seed) j["seed"] = *spec.seed;
    return j;
}

inline InstanceSpec instance_from_json(const nlohmann::json& j) {
    InstanceSpec spec;
    try {
        spec.name = j.at("name").get<std::string>();
        spec.mode = mode_from_string(j.at("mode").get<std::string>());
        spec.m = j.at("m").get<std::size_t>();
        for (const auto& v : j.at("opinions")) {
            if (v.is_string()) spec.opinions.push_back(parse_rational(v.get<std::string>()));
            else if (v.is_number_integer()) spec.opinions.push_back(Rational(v.get<long>()));
            else spec.opinions.push_back(rational_from_double(v.get<double>()));
        }
        spec.n = spec.opinions.size();
        if (j.contains("n") && j.at("n").get<std::size_t>() != spec.n)
            throw Error(ErrorCode::InvalidParam, "instance n does not match opinion count");
        if (j.contains("params")) spec.params = j.at("params");
        if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorCode::InvalidParam, std::string("bad instance JSON: ") + e.what());
    }
    if (!std::is_sorted(spec.opinions.begin(), spec.opinions.end()))
        throw Error(ErrorCode::InvalidParam, "instance opinions must be weakly ascending");
    return spec;
}

inline void save_instance(const InstanceSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidParam, "cannot write " + path);
    out << instance_to_json(spec).dump(2) << "\n";
}

inline InstanceSpec load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidParam, "cannot read " + path);
    nlohmann::json j;
    in >> j;
    return instance_from_json(j);
}

}  // namespace hk
