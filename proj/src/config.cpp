#include "refrule/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace refrule {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_number(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("expected a number, got '" + text + "'");
    return value;
}

long parse_integer(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    long value = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("expected an integer, got '" + text + "'");
    return value;
}

std::uint64_t parse_seed(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    unsigned long long value = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError("expected a seed (nonnegative integer), got '" + text + "'");
    return static_cast<std::uint64_t>(value);
}

bool parse_bool(const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("expected true/false, got '" + text + "'");
}

struct Call {
    std::string name;
    std::vector<std::string> args;
};

// name or name(arg, ...). Arguments split at top-level ',' or ';' so nested
// calls like sorted(uniform(0,1);const(2)) stay intact.
Call parse_call(const std::string& text) {
    Call call;
    std::size_t open = text.find('(');
    if (open == std::string::npos) {
        call.name = trim(text);
        return call;
    }
    call.name = trim(text.substr(0, open));
    if (text.back() != ')')
        throw ConfigError("unbalanced parentheses in '" + text + "'");
    std::string inner = text.substr(open + 1, text.size() - open - 2);
    int depth = 0;
    std::string current;
    for (char ch : inner) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == ',' || ch == ';')) {
            call.args.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (depth != 0) throw ConfigError("unbalanced parentheses in '" + text + "'");
    if (!trim(current).empty() || !call.args.empty()) call.args.push_back(trim(current));
    return call;
}

void expect_args(const Call& call, std::size_t count) {
    if (call.args.size() != count)
        throw ConfigError("'" + call.name + "' takes " + std::to_string(count) + " argument(s), got " +
                          std::to_string(call.args.size()));
}

}  // namespace

ScalarDist parse_scalar_dist(const std::string& text) {
    Call call = parse_call(trim(text));
    try {
        if (call.name == "const") {
            expect_args(call, 1);
            return ScalarDist::constant(parse_number(call.args[0]));
        }
        if (call.name == "uniform") {
            expect_args(call, 2);
            return ScalarDist::uniform(parse_number(call.args[0]), parse_number(call.args[1]));
        }
        if (call.name == "normal") {
            expect_args(call, 2);
            return ScalarDist::normal(parse_number(call.args[0]), parse_number(call.args[1]));
        }
        if (call.name == "twopoint") {
            expect_args(call, 3);
            return ScalarDist::two_point(parse_number(call.args[0]), parse_number(call.args[1]),
                                         parse_number(call.args[2]));
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("distribution: ") + err.what());
    }
    throw ConfigError("unknown distribution '" + call.name +
                      "' (expected const/uniform/normal/twopoint)");
}

BaseIntervalDist parse_base_dist(const std::string& text) {
    Call call = parse_call(trim(text));
    try {
        if (call.name == "orderstats") {
            expect_args(call, 2);
            OrderStatsUniform os{parse_number(call.args[0]), parse_number(call.args[1])};
            BaseIntervalDist base = os;
            validate(base);
            return base;
        }
        if (call.name == "sorted") {
            expect_args(call, 2);
            BaseIntervalDist base =
                IndependentSorted{parse_scalar_dist(call.args[0]), parse_scalar_dist(call.args[1])};
            validate(base);
            return base;
        }
        if (call.name == "width") {
            expect_args(call, 2);
            BaseIntervalDist base =
                FixedWidth{parse_scalar_dist(call.args[0]), parse_number(call.args[1])};
            validate(base);
            return base;
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("base interval: ") + err.what());
    }
    throw ConfigError("unknown base interval law '" + call.name +
                      "' (expected orderstats/sorted/width)");
}

Policy parse_policy(const std::string& text) {
    Call call = parse_call(trim(text));
    try {
        if (call.name == "mid") {
            expect_args(call, 0);
            return midpoint_rule();
        }
        if (call.name == "combo") {
            expect_args(call, 1);
            Policy p = ConvexCombination{parse_number(call.args[0])};
            validate(p);
            return p;
        }
        if (call.name == "anchor") {
            expect_args(call, 1);
            Policy p = Anchor{parse_number(call.args[0])};
            validate(p);
            return p;
        }
        if (call.name == "statusquo") {
            expect_args(call, 0);
            return StatusQuo{};
        }
        if (call.name == "table") {
            expect_args(call, 1);
            Policy p = load_table_csv(call.args[0]);
            validate(p);
            return p;
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("policy: ") + err.what());
    }
    throw ConfigError("unknown policy '" + call.name +
                      "' (expected mid/combo/anchor/statusquo/table)");
}

CostFn parse_cost(const std::string& text) {
    Call call = parse_call(trim(text));
    try {
        if (call.name == "quad") {
            expect_args(call, 0);
            return Quadratic{};
        }
        if (call.name == "huber") {
            expect_args(call, 1);
            CostFn c = PseudoHuber{parse_number(call.args[0])};
            validate(c);
            return c;
        }
        if (call.name == "asym") {
            expect_args(call, 2);
            CostFn c = AsymmetricQuadratic{parse_number(call.args[0]), parse_number(call.args[1])};
            validate(c);
            return c;
        }
        if (call.name == "sqdist") {
            expect_args(call, 1);
            CostFn c = SquaredDistanceTo{parse_number(call.args[0])};
            validate(c);
            return c;
        }
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("cost: ") + err.what());
    }
    throw ConfigError("unknown cost '" + call.name + "' (expected quad/huber/asym/sqdist)");
}

TabulatedReference load_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("table: cannot open '" + path + "'");
    TabulatedReference table;
    std::string line;
    long line_no = 0;
    bool allow_header = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string row = trim(line);
        if (row.empty() || row[0] == '#') continue;
        std::size_t comma = row.find(',');
        if (comma == std::string::npos)
            throw ConfigError("table: line " + std::to_string(line_no) + ": expected 's,r'");
        std::string left = trim(row.substr(0, comma));
        std::string right = trim(row.substr(comma + 1));
        try {
            double s = parse_number(left);
            double r = parse_number(right);
            table.grid.push_back(s);
            table.targets.push_back(r);
        } catch (const ConfigError&) {
            if (allow_header && table.grid.empty()) {
                allow_header = false;
                continue;
            }
            throw ConfigError("table: line " + std::to_string(line_no) + ": expected 's,r', got '" +
                              row + "'");
        }
    }
    try {
        validate(Policy{table});
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("table: ") + err.what());
    }
    return table;
}

namespace {

struct ConfigBuilder {
    LoadedConfig out;
    std::optional<ScalarDist> persistence;
    bool random_walk_set = false;

    void apply(const std::string& section, const std::string& key, const std::string& value) {
        if (section == "dynamics") {
            if (key == "a") {
                persistence = parse_scalar_dist(value);
            } else if (key == "b") {
                out.dynamics.drift = parse_scalar_dist(value);
            } else if (key == "base") {
                out.dynamics.base = parse_base_dist(value);
            } else if (key == "p") {
                out.dynamics.moment_order = parse_number(value);
            } else if (key == "random_walk") {
                out.dynamics.random_walk = parse_bool(value);
                random_walk_set = true;
            } else {
                throw ConfigError("unknown key '" + key + "' in [dynamics]");
            }
            return;
        }
        if (section == "policy") {
            if (key == "rule") {
                out.policy = parse_policy(value);
            } else {
                throw ConfigError("unknown key '" + key + "' in [policy]");
            }
            return;
        }
        if (section == "cost") {
            if (key == "fn") {
                out.cost = parse_cost(value);
            } else {
                throw ConfigError("unknown key '" + key + "' in [cost]");
            }
            return;
        }
        if (section == "sim") {
            if (key == "steps") out.sim.steps = parse_integer(value);
            else if (key == "burnin") out.sim.burnin = parse_integer(value);
            else if (key == "replications") out.sim.replications = static_cast<int>(parse_integer(value));
            else if (key == "seed") out.sim.seed = parse_seed(value);
            else if (key == "initial") {
                if (value == "auto") out.sim.initial_action.reset();
                else out.sim.initial_action = parse_number(value);
            } else if (key == "hist_bins") out.sim.hist_bins = static_cast<int>(parse_integer(value));
            else if (key == "threads") out.sim.threads = static_cast<int>(parse_integer(value));
            else throw ConfigError("unknown key '" + key + "' in [sim]");
            return;
        }
        if (section == "acoe") {
            if (key == "grid_size") out.acoe.grid_size = static_cast<int>(parse_integer(value));
            else if (key == "noise_samples") out.acoe.noise_samples = static_cast<int>(parse_integer(value));
            else if (key == "tolerance") out.acoe.tolerance = parse_number(value);
            else if (key == "max_sweeps") out.acoe.max_sweeps = static_cast<int>(parse_integer(value));
            else if (key == "coarse_points") out.acoe.coarse_points = static_cast<int>(parse_integer(value));
            else if (key == "golden_iters") out.acoe.golden_iters = static_cast<int>(parse_integer(value));
            else if (key == "seed") out.acoe.seed = parse_seed(value);
            else if (key == "s_min") out.acoe_state_range.lo = parse_number(value);
            else if (key == "s_max") out.acoe_state_range.hi = parse_number(value);
            else throw ConfigError("unknown key '" + key + "' in [acoe]");
            return;
        }
        if (section == "anchor") {
            if (key == "n_samples") out.anchor.n_samples = parse_integer(value);
            else if (key == "tol") out.anchor.tol = parse_number(value);
            else if (key == "seed") out.anchor.seed = parse_seed(value);
            else throw ConfigError("unknown key '" + key + "' in [anchor]");
            return;
        }
        throw ConfigError("unknown section [" + section + "]");
    }

    LoadedConfig finish() {
        if (out.dynamics.random_walk && !persistence)
            persistence = ScalarDist::constant(1.0);
        if (persistence) out.dynamics.persistence = *persistence;
        try {
            validate(out.dynamics);
            validate(out.policy);
            validate(out.cost);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(err.what());
        }
        return out;
    }
};

}  // namespace

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    ConfigBuilder builder;
    std::string line;
    std::string section;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string row = trim(line);
        if (row.empty()) continue;
        if (row.front() == '[') {
            if (row.back() != ']')
                throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed section header");
            section = trim(row.substr(1, row.size() - 2));
            if (section != "dynamics" && section != "policy" && section != "cost" &&
                section != "sim" && section != "acoe" && section != "anchor")
                throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        std::size_t eq = row.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        if (section.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": key outside any section");
        std::string key = trim(row.substr(0, eq));
        std::string value = trim(row.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        try {
            builder.apply(section, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": " + err.what());
        }
    }
    try {
        return builder.finish();
    } catch (const ConfigError& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

}  // namespace refrule
