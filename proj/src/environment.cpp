#include "pinlab/environment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pinlab/io.hpp"

namespace pinlab {

std::span<const std::int8_t> BinaryEnvironment::site_span(std::size_t N) const {
    if (N > sites()) throw std::out_of_range("environment shorter than requested size");
    return std::span<const std::int8_t>(omega).subspan(1, N);
}

double GaussianSignsParams::rho(std::size_t k) const {
    if (k == 0) return 1.0;
    if (independent()) return 0.0;
    return std::pow(1.0 + static_cast<double>(k), -a);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool open_unit(double p) { return p > 0.0 && p < 1.0; }

std::size_t reindex_buffer(std::size_t N) { return std::max<std::size_t>(256, (N + 1) / 4); }

// Cut raw values at the first (-1, +1) pair so that pair sits at (-1, 0).
BinaryEnvironment reindex(const std::vector<std::int8_t>& raw, std::size_t N, std::uint64_t seed, const char* who) {
    for (std::size_t i = 1; i + N < raw.size(); ++i) {
        if (raw[i - 1] == -1 && raw[i] == 1) {
            BinaryEnvironment env;
            env.omega.assign(raw.begin() + static_cast<std::ptrdiff_t>(i), raw.begin() + static_cast<std::ptrdiff_t>(i + N + 1));
            env.seed = seed;
            return env;
        }
    }
    throw GenerationError(std::string(who) + ": no (-1,+1) pair within the generated buffer", seed);
}

// floor(U^{-1/theta}) as a real: P(size >= n) = n^{-theta} for integer n >= 1.
double draw_block_size(double theta, Engine& eng) {
    return std::floor(std::pow(uniform01(eng), -1.0 / theta));
}

}  // namespace

std::string generator_id(const GeneratorSpec& spec) {
    return std::visit(overloaded{[](const IidSpec&) { return std::string("iid"); },
                                 [](const MarkovSpec&) { return std::string("markov"); },
                                 [](const BlockSpec&) { return std::string("block"); },
                                 [](const GaussianSignsParams&) { return std::string("gaussian-signs"); }},
                      spec);
}

nlohmann::json generator_params(const GeneratorSpec& spec) {
    return std::visit(overloaded{[](const IidSpec& s) { return nlohmann::json{{"p_plus", s.p_plus}}; },
                                 [](const MarkovSpec& s) { return nlohmann::json{{"q_pp", s.q_pp}, {"q_mm", s.q_mm}}; },
                                 [](const BlockSpec& s) {
                                     nlohmann::json j{{"theta", s.theta}};
                                     if (s.theta_minus) j["theta_minus"] = *s.theta_minus;
                                     return j;
                                 },
                                 [](const GaussianSignsParams& s) {
                                     nlohmann::json j;
                                     if (s.independent())
                                         j["a"] = "inf";
                                     else
                                         j["a"] = s.a;
                                     return j;
                                 }},
                      spec);
}

nlohmann::json generator_to_json(const GeneratorSpec& spec) {
    nlohmann::json j = generator_params(spec);
    j["type"] = generator_id(spec);
    return j;
}

GeneratorSpec generator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("generator: object with a \"type\" key expected");
    const std::string type = j.at("type").get<std::string>();
    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, value] : j.items()) {
            if (key == "type") continue;
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
                throw std::invalid_argument("generator " + type + ": unknown key \"" + key + "\"");
        }
    };
    GeneratorSpec spec;
    if (type == "iid") {
        check_keys({"p_plus"});
        spec = IidSpec{j.value("p_plus", 0.5)};
    } else if (type == "markov") {
        check_keys({"q_pp", "q_mm"});
        spec = MarkovSpec{j.at("q_pp").get<double>(), j.at("q_mm").get<double>()};
    } else if (type == "block") {
        check_keys({"theta", "theta_minus"});
        BlockSpec b{j.at("theta").get<double>(), std::nullopt};
        if (j.contains("theta_minus")) b.theta_minus = j.at("theta_minus").get<double>();
        spec = b;
    } else if (type == "gaussian-signs") {
        check_keys({"a"});
        const auto& a = j.at("a");
        if (a.is_string()) {
            if (a.get<std::string>() != "inf") throw std::invalid_argument("gaussian-signs: a must be a number or \"inf\"");
            spec = GaussianSignsParams{std::numeric_limits<double>::infinity()};
        } else {
            spec = GaussianSignsParams{a.get<double>()};
        }
    } else {
        throw std::invalid_argument("generator: unknown type \"" + type + "\"");
    }
    validate(spec);
    return spec;
}

void validate(const GeneratorSpec& spec) {
    std::visit(overloaded{[](const IidSpec& s) {
                              if (!open_unit(s.p_plus)) throw std::invalid_argument("iid: p_plus must lie in (0,1)");
                          },
                          [](const MarkovSpec& s) {
                              if (!open_unit(s.q_pp) || !open_unit(s.q_mm))
                                  throw std::invalid_argument("markov: q_pp and q_mm must lie in (0,1)");
                          },
                          [](const BlockSpec& s) {
                              if (!(s.theta > 1.0)) throw std::invalid_argument("block: theta must exceed 1");
                              if (s.theta_minus && !(*s.theta_minus > 0.0))
                                  throw std::invalid_argument("block: theta_minus must be positive");
                          },
                          [](const GaussianSignsParams& s) {
                              if (!(s.a > 0.0)) throw std::invalid_argument("gaussian-signs: a must be positive");
                          }},
               spec);
}

std::string generator_label(const GeneratorSpec& spec) {
    std::ostringstream out;
    bool first = true;
    const nlohmann::json params = generator_params(spec);
    for (const auto& [key, value] : params.items()) {
        if (!first) out << ';';
        first = false;
        out << key << '=';
        if (value.is_number())
            out << format_double(value.get<double>());
        else
            out << value.get<std::string>();
    }
    return out.str();
}

BinaryEnvironment generate_iid(double p_plus, std::size_t N, std::uint64_t seed) {
    validate(IidSpec{p_plus});
    Engine eng = make_engine(seed);
    std::vector<std::int8_t> raw(N + 1 + reindex_buffer(N));
    for (auto& x : raw) x = uniform01(eng) < p_plus ? 1 : -1;
    BinaryEnvironment env = reindex(raw, N, seed, "iid");
    env.generator_id = "iid";
    env.params = generator_params(IidSpec{p_plus});
    return env;
}

BinaryEnvironment generate_markov(double q_pp, double q_mm, std::size_t N, std::uint64_t seed) {
    const MarkovSpec spec{q_pp, q_mm};
    validate(spec);
    Engine eng = make_engine(seed);
    const double pi_plus = (1.0 - q_mm) / (2.0 - q_pp - q_mm);
    std::vector<std::int8_t> raw(N + 1 + reindex_buffer(N));
    std::int8_t state = uniform01(eng) < pi_plus ? 1 : -1;
    for (auto& x : raw) {
        x = state;
        const double stay = state == 1 ? q_pp : q_mm;
        if (uniform01(eng) >= stay) state = static_cast<std::int8_t>(-state);
    }
    BinaryEnvironment env = reindex(raw, N, seed, "markov");
    env.generator_id = "markov";
    env.params = generator_params(spec);
    return env;
}

BinaryEnvironment generate_block_env(const BlockSpec& spec, std::size_t N, std::uint64_t seed) {
    validate(spec);
    Engine eng = make_engine(seed);
    // A fresh + block at the origin is the re-indexed stationary law: block
    // boundaries are renewal times of the alternating sequence.
    BinaryEnvironment env;
    env.omega.reserve(N + 1);
    std::int8_t sign = 1;
    while (env.omega.size() < N + 1) {
        const double size = draw_block_size(sign == 1 ? spec.theta : spec.minus_exponent(), eng);
        const double room = static_cast<double>(N + 1 - env.omega.size());
        const auto take = static_cast<std::size_t>(std::min(size, room));
        env.omega.insert(env.omega.end(), take, sign);
        sign = static_cast<std::int8_t>(-sign);
    }
    env.generator_id = "block";
    env.params = generator_params(spec);
    env.seed = seed;
    return env;
}

BinaryEnvironment generate_gaussian_signs(const GaussianSignsParams& params, std::size_t N, std::uint64_t seed) {
    validate(params);
    if (N > kGaussianCapacity) throw std::invalid_argument("gaussian-signs: N exceeds the FFT capacity");
    const std::size_t length = N + 1 + reindex_buffer(N);
    std::vector<std::int8_t> raw(length);
    Engine eng = make_engine(seed);
    if (params.independent()) {
        std::normal_distribution<double> normal;
        for (auto& x : raw) x = normal(eng) >= 0.0 ? 1 : -1;
    } else {
        std::vector<double> w(length);
        try {
            gaussian_sampler(params, length)->sample(eng, w);
        } catch (const EmbeddingError&) {
            if (length > 4096) throw;
            std::vector<double> rho(length);
            for (std::size_t k = 0; k < length; ++k) rho[k] = params.rho(k);
            w = sample_stationary_gaussian(rho, length, seed);
        }
        for (std::size_t i = 0; i < length; ++i) raw[i] = w[i] >= 0.0 ? 1 : -1;
    }
    BinaryEnvironment env = reindex(raw, N, seed, "gaussian-signs");
    env.generator_id = "gaussian-signs";
    env.params = generator_params(params);
    return env;
}

BinaryEnvironment generate(const GeneratorSpec& spec, std::size_t N, std::uint64_t seed) {
    return std::visit(overloaded{[&](const IidSpec& s) { return generate_iid(s.p_plus, N, seed); },
                                 [&](const MarkovSpec& s) { return generate_markov(s.q_pp, s.q_mm, N, seed); },
                                 [&](const BlockSpec& s) { return generate_block_env(s, N, seed); },
                                 [&](const GaussianSignsParams& s) { return generate_gaussian_signs(s, N, seed); }},
                      spec);
}

std::optional<double> exact_xi_tail(const GeneratorSpec& spec, std::size_t n) {
    if (n == 0) return 1.0;
    const double nd = static_cast<double>(n);
    return std::visit(overloaded{[&](const IidSpec& s) -> std::optional<double> { return std::pow(s.p_plus, nd - 1.0); },
                                 [&](const MarkovSpec& s) -> std::optional<double> { return std::pow(s.q_pp, nd - 1.0); },
                                 [&](const BlockSpec& s) -> std::optional<double> { return std::pow(nd, -s.theta); },
                                 [&](const GaussianSignsParams& s) -> std::optional<double> {
                                     if (s.independent()) return std::pow(0.5, nd - 1.0);
                                     return std::nullopt;
                                 }},
                      spec);
}

std::optional<double> prefix_probability(const GeneratorSpec& spec, std::span<const std::int8_t> pattern) {
    return std::visit(
        overloaded{[&](const IidSpec& s) -> std::optional<double> {
                       double p = 1.0;
                       for (auto x : pattern) p *= x == 1 ? s.p_plus : 1.0 - s.p_plus;
                       return p;
                   },
                   [&](const MarkovSpec& s) -> std::optional<double> {
                       double p = 1.0;
                       std::int8_t prev = 1;
                       for (auto x : pattern) {
                           const double stay = prev == 1 ? s.q_pp : s.q_mm;
                           p *= x == prev ? stay : 1.0 - stay;
                           prev = x;
                       }
                       return p;
                   },
                   [&](const BlockSpec& s) -> std::optional<double> {
                       // Runs of the pattern, the first one including ω_0 = +1.
                       auto tail = [](double theta, double n) { return std::pow(n, -theta); };
                       double p = 1.0;
                       std::int8_t sign = 1;
                       double run = 1.0;
                       for (auto x : pattern) {
                           if (x == sign) {
                               run += 1.0;
                               continue;
                           }
                           const double th = sign == 1 ? s.theta : s.minus_exponent();
                           p *= tail(th, run) - tail(th, run + 1.0);
                           sign = x;
                           run = 1.0;
                       }
                       return p * tail(sign == 1 ? s.theta : s.minus_exponent(), run);
                   },
                   [&](const GaussianSignsParams& s) -> std::optional<double> {
                       if (s.independent()) return std::pow(0.5, static_cast<double>(pattern.size()));
                       return std::nullopt;
                   }},
        spec);
}

double sample_first_run(const GeneratorSpec& spec, std::size_t cap, std::uint64_t seed) {
    if (const auto* b = std::get_if<BlockSpec>(&spec)) {
        Engine eng = make_engine(seed);
        return draw_block_size(b->theta, eng);
    }
    // IID and Markov runs after a -1 are geometric with P(ξ₁ ≥ n) = q^{n-1}.
    const double q = std::holds_alternative<IidSpec>(spec)      ? std::get<IidSpec>(spec).p_plus
                     : std::holds_alternative<MarkovSpec>(spec) ? std::get<MarkovSpec>(spec).q_pp
                                                                : -1.0;
    if (q >= 0.0) {
        if (q == 0.0) return 1.0;
        if (q == 1.0) return static_cast<double>(cap);
        Engine eng = make_engine(seed);
        const double run = 1.0 + std::floor(std::log(uniform01(eng)) / std::log(q));
        return std::min(run, static_cast<double>(cap));
    }
    const BinaryEnvironment env = generate(spec, cap, seed);
    std::size_t run = 0;
    while (run < env.omega.size() && env.omega[run] == 1) ++run;
    return static_cast<double>(std::min(run, cap));
}

}  // namespace pinlab
