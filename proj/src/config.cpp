#include "wfq/config.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "wfq/io.hpp"

namespace wfq {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& tok, int line_no) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config line " + std::to_string(line_no) +
                                    ": cannot parse number '" + tok + "'");
    }
}

bool looks_integral(const std::string& tok) {
    if (tok.empty()) return false;
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    return true;
}

TomlValue parse_value(const std::string& raw, int line_no) {
    const std::string tok = trim(raw);
    if (tok.empty())
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": missing value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unterminated string");
        return tok.substr(1, tok.size() - 2);
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.front() == '[') {
        if (tok.back() != ']')
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": unterminated array");
        std::vector<double> values;
        std::stringstream ss(tok.substr(1, tok.size() - 2));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) continue;
            values.push_back(parse_number(t, line_no));
        }
        return values;
    }
    if (looks_integral(tok)) return static_cast<long long>(std::stoll(tok));
    return parse_number(tok, line_no);
}

template <typename T>
T require(const TomlTable& table, const std::string& key) {
    const auto it = table.find(key);
    if (it == table.end())
        throw std::invalid_argument("config: missing required key '" + key + "'");
    if constexpr (std::is_same_v<T, double>) {
        if (const auto* i = std::get_if<long long>(&it->second)) return static_cast<double>(*i);
    }
    if constexpr (std::is_same_v<T, long long>) {
        if (const auto* d = std::get_if<double>(&it->second)) {
            if (*d == static_cast<long long>(*d)) return static_cast<long long>(*d);
        }
    }
    if (const auto* v = std::get_if<T>(&it->second)) return *v;
    throw std::invalid_argument("config: key '" + key + "' has the wrong type");
}

template <typename T>
T lookup(const TomlTable& table, const std::string& key, T fallback) {
    if (table.find(key) == table.end()) return fallback;
    return require<T>(table, key);
}

}  // namespace

TomlTable parse_flat_toml(const std::string& text) {
    TomlTable table;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
        table[key] = parse_value(body.substr(eq + 1), line_no);
    }
    return table;
}

TomlTable parse_flat_toml_file(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument(e.what());
    }
    return parse_flat_toml(text);
}

SimulationConfig sim_config_from_table(const TomlTable& table) {
    MutationParams params;
    params.ell = static_cast<int>(require<long long>(table, "ell"));
    params.kappa = static_cast<int>(require<long long>(table, "kappa"));
    params.q = require<double>(table, "q");
    const int m = static_cast<int>(require<long long>(table, "m"));
    FitnessLandscape land(require<std::vector<double>>(table, "fitness"));

    SimulationConfig config(params, m, std::move(land));
    config.seed = static_cast<std::uint64_t>(
        lookup<long long>(table, "seed", static_cast<long long>(kDefaultSeed)));
    config.horizon = static_cast<long>(lookup<long long>(table, "horizon", 1));
    config.burn_in = static_cast<long>(lookup<long long>(table, "burn_in", 0));
    config.replicas = static_cast<int>(lookup<long long>(table, "replicas", 1));

    if (const auto it = table.find("start"); it != table.end()) {
        if (const auto* arr = std::get_if<std::vector<double>>(&it->second)) {
            Occupancy start;
            for (double v : *arr) {
                if (v < 0 || v != static_cast<std::int64_t>(v))
                    throw std::invalid_argument("config: start counts must be nonnegative integers");
                start.push_back(static_cast<std::int64_t>(v));
            }
            config.start = std::move(start);
        } else if (const auto* s = std::get_if<std::string>(&it->second)) {
            config.start = resolve_start_preset(config, *s);
        } else {
            throw std::invalid_argument("config: start must be a preset string or count array");
        }
    }
    config.validate();
    return config;
}

Occupancy resolve_start_preset(const SimulationConfig& config, const std::string& preset) {
    const std::string p = trim(preset);
    if (p == "master") return start_all_in_class(config.params.ell, config.m, 0);
    if (p == "neutral") return start_all_in_class(config.params.ell, config.m, config.params.ell);
    if (p.rfind("fixed-point", 0) == 0) {
        const std::string rest = trim(p.substr(std::string("fixed-point").size()));
        if (rest.empty())
            throw std::invalid_argument("config: start preset 'fixed-point' needs an index");
        return start_fixed_point(config, std::stoi(rest));
    }
    throw std::invalid_argument("config: unknown start preset '" + p +
                                "' (expected master, neutral, or fixed-point <b>)");
}

}  // namespace wfq
