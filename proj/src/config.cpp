#include "tsvar/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace tsvar {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& tok, int line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE ||
        !std::isfinite(v))
        throw ConfigError("expected a number, got '" + tok + "'", line);
    return v;
}

long long parse_int(const std::string& tok, int line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || tok.empty() || errno == ERANGE)
        throw ConfigError("expected an integer, got '" + tok + "'", line);
    return v;
}

bool parse_bool(const std::string& tok, int line) {
    if (tok == "true" || tok == "1" || tok == "yes" || tok == "on") return true;
    if (tok == "false" || tok == "0" || tok == "no" || tok == "off") return false;
    throw ConfigError("expected a boolean, got '" + tok + "'", line);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

Expr parse_expr_value(const std::string& value, const std::string& key, int line) {
    try {
        return Expr::parse(value);
    } catch (const SyntaxError& e) {
        throw ConfigError(key + ": " + e.what(), line);
    } catch (const UnknownIdentifier& e) {
        throw ConfigError(key + ": " + e.what(), line);
    }
}

enum class Section { None, TimeScale, Problem, Impulse, Solver, Growth };

}  // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    Section section = Section::None;
    bool seen_lambda = false, seen_f = false, seen_g = false, seen_h = false,
         seen_sign = false;
    bool seen_tol = false, seen_max = false, seen_newton = false,
         seen_path = false, seen_seed = false, seen_drop = false;
    bool seen_eta = false, seen_gamma = false, seen_s = false;
    GrowthConditions growth;

    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find_first_of("#;");
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("unterminated section header", line);
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (name == "timescale")
                section = Section::TimeScale;
            else if (name == "problem")
                section = Section::Problem;
            else if (name == "impulse") {
                section = Section::Impulse;
                ImpulseConfig imp;
                imp.line = line;
                cfg.impulses.push_back(imp);
            } else if (name == "solver")
                section = Section::Solver;
            else if (name == "growth") {
                section = Section::Growth;
            } else
                throw ConfigError("unknown section [" + name + "]", line);
            continue;
        }

        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line);
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigError("empty key", line);
        if (value.empty()) throw ConfigError(key + ": empty value", line);

        switch (section) {
            case Section::None:
                throw ConfigError("key '" + key + "' outside any section", line);

            case Section::TimeScale: {
                if (key == "interval") {
                    const auto toks = split_ws(value);
                    if (toks.size() != 3)
                        throw ConfigError("interval wants 'lo hi subdivisions'",
                                          line);
                    ContinuousInterval ci;
                    ci.lo = parse_double(toks[0], line);
                    ci.hi = parse_double(toks[1], line);
                    const long long n = parse_int(toks[2], line);
                    if (!(ci.lo < ci.hi))
                        throw ConfigError("interval needs lo < hi", line);
                    if (n < 1 || n > 100000000)
                        throw ConfigError("interval subdivisions out of range",
                                          line);
                    ci.subdivisions = static_cast<int>(n);
                    cfg.timescale.segments.emplace_back(ci);
                } else if (key == "points") {
                    const auto toks = split_ws(value);
                    DiscretePoints dp;
                    for (const auto& t : toks)
                        dp.times.push_back(parse_double(t, line));
                    if (dp.times.empty())
                        throw ConfigError("points wants at least one time", line);
                    for (std::size_t i = 1; i < dp.times.size(); ++i)
                        if (!(dp.times[i - 1] < dp.times[i]))
                            throw ConfigError("points must strictly increase",
                                              line);
                    cfg.timescale.segments.emplace_back(std::move(dp));
                } else
                    throw ConfigError("unknown timescale key '" + key + "'", line);
                break;
            }

            case Section::Problem: {
                auto once = [&](bool& flag) {
                    if (flag)
                        throw ConfigError("duplicate key '" + key + "'", line);
                    flag = true;
                };
                if (key == "lambda") {
                    once(seen_lambda);
                    cfg.lambda = parse_double(value, line);
                } else if (key == "f") {
                    once(seen_f);
                    cfg.f = parse_expr_value(value, key, line);
                } else if (key == "g") {
                    once(seen_g);
                    Expr e = parse_expr_value(value, key, line);
                    if (!e.independent_of_u())
                        throw ConfigError("g must depend on t only", line);
                    cfg.g = std::move(e);
                } else if (key == "h") {
                    once(seen_h);
                    Expr e = parse_expr_value(value, key, line);
                    if (!e.independent_of_u())
                        throw ConfigError("h must depend on t only", line);
                    cfg.h = std::move(e);
                } else if (key == "jump_sign") {
                    once(seen_sign);
                    if (value == "plus")
                        cfg.jump_sign = JumpSign::Plus;
                    else if (value == "minus")
                        cfg.jump_sign = JumpSign::Minus;
                    else
                        throw ConfigError("jump_sign must be plus or minus", line);
                } else
                    throw ConfigError("unknown problem key '" + key + "'", line);
                break;
            }

            case Section::Impulse: {
                ImpulseConfig& imp = cfg.impulses.back();
                if (key == "t") {
                    if (imp.has_t)
                        throw ConfigError("duplicate key 't'", line);
                    imp.t = parse_double(value, line);
                    imp.has_t = true;
                } else if (key == "I") {
                    if (!imp.I.empty())
                        throw ConfigError("duplicate key 'I'", line);
                    if (imp.has_d)
                        throw ConfigError("impulse has both I and d", line);
                    imp.I = parse_expr_value(value, key, line);
                } else if (key == "d") {
                    if (imp.has_d)
                        throw ConfigError("duplicate key 'd'", line);
                    if (!imp.I.empty())
                        throw ConfigError("impulse has both I and d", line);
                    imp.d = parse_double(value, line);
                    imp.has_d = true;
                } else
                    throw ConfigError("unknown impulse key '" + key + "'", line);
                break;
            }

            case Section::Solver: {
                auto once = [&](bool& flag) {
                    if (flag)
                        throw ConfigError("duplicate key '" + key + "'", line);
                    flag = true;
                };
                if (key == "tol") {
                    once(seen_tol);
                    const double v = parse_double(value, line);
                    if (!(v > 0.0))
                        throw ConfigError("tol must be positive", line);
                    cfg.solver.tol = v;
                } else if (key == "max_iters") {
                    once(seen_max);
                    const long long v = parse_int(value, line);
                    if (v < 1 || v > 1000000000)
                        throw ConfigError("max_iters out of range", line);
                    cfg.solver.max_iters = static_cast<int>(v);
                } else if (key == "newton") {
                    once(seen_newton);
                    cfg.solver.newton = parse_bool(value, line);
                } else if (key == "path_points") {
                    once(seen_path);
                    const long long v = parse_int(value, line);
                    if (v < 3 || v > 100000)
                        throw ConfigError("path_points out of range", line);
                    cfg.solver.path_points = static_cast<int>(v);
                } else if (key == "seed") {
                    once(seen_seed);
                    const long long v = parse_int(value, line);
                    if (v < 0) throw ConfigError("seed must be >= 0", line);
                    cfg.solver.seed = static_cast<std::uint64_t>(v);
                } else if (key == "target_drop") {
                    once(seen_drop);
                    const double v = parse_double(value, line);
                    if (!(v > 0.0))
                        throw ConfigError("target_drop must be positive", line);
                    cfg.solver.target_drop = v;
                } else
                    throw ConfigError("unknown solver key '" + key + "'", line);
                break;
            }

            case Section::Growth: {
                auto once = [&](bool& flag) {
                    if (flag)
                        throw ConfigError("duplicate key '" + key + "'", line);
                    flag = true;
                };
                if (key == "eta") {
                    once(seen_eta);
                    growth.eta = parse_double(value, line);
                } else if (key == "gamma") {
                    once(seen_gamma);
                    growth.gamma = parse_double(value, line);
                } else if (key == "s") {
                    once(seen_s);
                    growth.s = parse_double(value, line);
                } else
                    throw ConfigError("unknown growth key '" + key + "'", line);
                break;
            }
        }
    }

    if (seen_eta || seen_gamma || seen_s) {
        if (!(seen_eta && seen_gamma && seen_s))
            throw ConfigError("[growth] needs all of eta, gamma, s");
        if (!(growth.eta > 2.0))
            throw ConfigError("growth eta must exceed 2");
        if (!(growth.gamma > 0.0))
            throw ConfigError("growth gamma must be positive");
        if (!(growth.s > 1.0))
            throw ConfigError("growth s must exceed 1");
        cfg.growth = growth;
    }

    if (cfg.timescale.segments.empty())
        throw ConfigError("no [timescale] segments given");
    if (seen_f && seen_h)
        throw ConfigError("give either f (variational modes) or h (linear solve),"
                          " not both");
    for (const auto& imp : cfg.impulses) {
        if (!imp.has_t)
            throw ConfigError("impulse without a time t", imp.line);
        if (imp.I.empty() && !imp.has_d)
            throw ConfigError("impulse needs I or d", imp.line);
    }
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

JumpSign effective_jump_sign(const Config& cfg) {
    if (cfg.jump_sign) return *cfg.jump_sign;
    return cfg.g ? JumpSign::Minus : JumpSign::Plus;
}

void validate_for_mode(const Config& cfg, RunMode mode) {
    switch (mode) {
        case RunMode::Eigen:
            break;
        case RunMode::SolveLinear: {
            if (cfg.h.empty())
                throw ConfigError("linear solve needs h in [problem]");
            if (!cfg.f.empty())
                throw ConfigError("linear solve uses h, not f");
            if (cfg.g)
                throw ConfigError("linear solve does not take a drift g");
            for (const auto& imp : cfg.impulses)
                if (!imp.has_d)
                    throw ConfigError("linear solve needs constant jumps d",
                                      imp.line);
            break;
        }
        case RunMode::Minimize:
        case RunMode::MountainPass:
        case RunMode::CheckConditions: {
            if (cfg.f.empty())
                throw ConfigError("variational modes need f in [problem]");
            if (!cfg.h.empty())
                throw ConfigError("variational modes use f, not h");
            if (mode == RunMode::CheckConditions && !cfg.growth)
                throw ConfigError("check-conditions needs a [growth] section");
            break;
        }
    }
}

std::vector<std::size_t> resolve_impulse_nodes(const Config& cfg,
                                               const TimeScaleMesh& mesh) {
    std::vector<std::size_t> nodes;
    for (const auto& imp : cfg.impulses) {
        const auto idx = mesh.find_node(imp.t, 1e-12);
        if (!idx)
            throw ConfigError("impulse time " + std::to_string(imp.t) +
                                  " is not a mesh node",
                              imp.line);
        if (*idx == 0 || *idx + 1 == mesh.node_count())
            throw ConfigError("impulse time " + std::to_string(imp.t) +
                                  " must be interior",
                              imp.line);
        nodes.push_back(*idx);
    }
    return nodes;
}

}  // namespace tsvar
