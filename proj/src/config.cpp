#include "rfnn/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rfnn/csv.hpp"
#include "rfnn/targets.hpp"

namespace rfnn {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

double parse_double(const std::string& section, const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("field " + section + "." + key + ": '" + value + "' is not a number");
    return v;
}

long parse_long(const std::string& section, const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("field " + section + "." + key + ": '" + value + "' is not an integer");
    return v;
}

} // namespace

bool ParsedConfig::has(const std::string& section, const std::string& key) const {
    const auto it = sections.find(section);
    return it != sections.end() && it->second.count(key) > 0;
}

std::string ParsedConfig::get(const std::string& section, const std::string& key) const {
    if (!has(section, key)) throw ConfigError("missing config field " + section + "." + key);
    return sections.at(section).at(key);
}

std::string ParsedConfig::get_or(const std::string& section, const std::string& key,
                                 const std::string& fallback) const {
    return has(section, key) ? sections.at(section).at(key) : fallback;
}

void ParsedConfig::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
        sections[key.substr(0, dot)][key.substr(dot + 1)] = value;
        return;
    }
    static const char* kSearchOrder[] = {"train", "data", "target", "adam", "compare", "output"};
    for (const char* section : kSearchOrder) {
        if (has(section, key)) {
            sections[section][key] = value;
            return;
        }
    }
    throw ConfigError("override key '" + key + "' not found in any section; use section.key");
}

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig parsed;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            parsed.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        if (section.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any [section]");
        parsed.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return parsed;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentConfig resolve_experiment(const ParsedConfig& parsed) {
    ExperimentConfig cfg;
    cfg.target_name = parsed.get("target", "name");
    const TargetFunction& target = find_target(cfg.target_name);

    cfg.n = parse_long("data", "N", parsed.get("data", "N"));
    cfg.n_test = parse_long("data", "N_test", parsed.get_or("data", "N_test", "0"));
    cfg.data_seed = static_cast<std::uint64_t>(
        parse_long("data", "seed", parsed.get_or("data", "seed", "1")));
    if (cfg.n < 1) throw ConfigError("field data.N: must be >= 1");
    if (cfg.n_test < 0) throw ConfigError("field data.N_test: must be >= 0");

    TrainConfig& t = cfg.train;
    t.W = static_cast<int>(parse_long("train", "W", parsed.get("train", "W")));
    t.L_max = static_cast<int>(parse_long("train", "L", parsed.get("train", "L")));
    t.sweeps.clear();
    for (const auto& item : split_list(parsed.get("train", "M")))
        t.sweeps.push_back(static_cast<int>(parse_long("train", "M", item)));
    t.gamma = parse_double("train", "gamma", parsed.get_or("train", "gamma", "10"));
    t.gamma_prime =
        parse_double("train", "gamma_prime", parsed.get_or("train", "gamma_prime", "10"));
    if (parsed.has("train", "delta"))
        t.delta = parse_double("train", "delta", parsed.get("train", "delta"));
    if (parsed.has("train", "delta_prime"))
        t.delta_prime = parse_double("train", "delta_prime", parsed.get("train", "delta_prime"));
    t.lambdas.clear();
    for (const auto& item : split_list(parsed.get("train", "lambda")))
        t.lambdas.push_back(parse_double("train", "lambda", item));
    t.seed = static_cast<std::uint64_t>(
        parse_long("train", "seed", parsed.get_or("train", "seed", "1")));
    t.burn_in = static_cast<int>(
        parse_long("train", "burn_in", parsed.get_or("train", "burn_in", "0")));
    const std::string method = parsed.get_or("train", "method", "method1");
    if (method == "method1")
        t.method = Method::Method1;
    else if (method == "method2")
        t.method = Method::Method2;
    else
        throw ConfigError("field train.method: unknown method '" + method + "'");
    if (parsed.has("train", "stop_tolerance"))
        t.stop_tolerance =
            parse_double("train", "stop_tolerance", parsed.get("train", "stop_tolerance"));
    if (parsed.has("train", "sign_rule")) {
        const std::string rule = parsed.get("train", "sign_rule");
        if (rule == "reject_negative_1d")
            t.sign_rule = SignRule::RejectNegative1d;
        else if (rule == "half_space_first_component")
            t.sign_rule = SignRule::HalfSpaceFirstComponent;
        else if (rule == "none")
            t.sign_rule = SignRule::None;
        else
            throw ConfigError("field train.sign_rule: unknown rule '" + rule + "'");
    }

    if (parsed.sections.count("adam")) {
        AdamConfig a;
        a.epochs = static_cast<int>(
            parse_long("adam", "epochs", parsed.get_or("adam", "epochs", "15000")));
        a.learning_rate = parse_double("adam", "learning_rate",
                                       parsed.get_or("adam", "learning_rate", "1e-3"));
        a.batch_size = static_cast<int>(
            parse_long("adam", "batch_size", parsed.get_or("adam", "batch_size", "256")));
        a.lambda = parse_double("adam", "lambda", parsed.get_or("adam", "lambda", "1e-4"));
        a.seed = static_cast<std::uint64_t>(parse_long(
            "adam", "seed", parsed.get_or("adam", "seed", std::to_string(t.seed))));
        cfg.adam = a;
        cfg.adam_L = static_cast<int>(parse_long(
            "adam", "L", parsed.get_or("adam", "L", std::to_string(t.L_max))));
    }

    if (parsed.has("compare", "methods")) cfg.compare_methods = split_list(parsed.get("compare", "methods"));

    cfg.out_dir = parsed.get_or("output", "dir", "out/" + cfg.target_name);
    cfg.trace_stride = static_cast<int>(
        parse_long("output", "trace_stride", parsed.get_or("output", "trace_stride", "1")));
    cfg.histogram_bins = static_cast<int>(parse_long(
        "output", "histogram_bins", parsed.get_or("output", "histogram_bins", "200")));

    (void)target;
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    find_target(target_name);
    try {
        train.validate();
        if (adam) adam->validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("field validation: ") + e.what());
    }
    if (trace_stride < 1) throw ConfigError("field output.trace_stride: must be >= 1");
    if (histogram_bins < 1) throw ConfigError("field output.histogram_bins: must be >= 1");
    for (const auto& m : compare_methods)
        if (m != "method1" && m != "method2" && m != "adam")
            throw ConfigError("field compare.methods: unknown method '" + m + "'");
}

std::vector<std::string> describe_experiment(const ExperimentConfig& cfg) {
    std::vector<std::string> lines;
    auto add = [&](const std::string& k, const std::string& v) { lines.push_back(k + " = " + v); };
    add("target.name", cfg.target_name);
    add("data.N", std::to_string(cfg.n));
    add("data.N_test", std::to_string(cfg.n_test));
    add("data.seed", std::to_string(cfg.data_seed));
    add("train.W", std::to_string(cfg.train.W));
    add("train.L", std::to_string(cfg.train.L_max));
    {
        std::string m;
        for (std::size_t i = 0; i < cfg.train.sweeps.size(); ++i)
            m += (i ? "," : "") + std::to_string(cfg.train.sweeps[i]);
        add("train.M", m);
    }
    add("train.gamma", format_double(cfg.train.gamma));
    add("train.gamma_prime", format_double(cfg.train.gamma_prime));
    if (cfg.train.delta) add("train.delta", format_double(*cfg.train.delta));
    if (cfg.train.delta_prime) add("train.delta_prime", format_double(*cfg.train.delta_prime));
    {
        std::string l;
        for (std::size_t i = 0; i < cfg.train.lambdas.size(); ++i)
            l += (i ? "," : "") + format_double(cfg.train.lambdas[i]);
        add("train.lambda", l);
    }
    add("train.seed", std::to_string(cfg.train.seed));
    add("train.burn_in", std::to_string(cfg.train.burn_in));
    add("train.method", cfg.train.method == Method::Method1 ? "method1" : "method2");
    if (cfg.train.sign_rule) {
        const char* rule = *cfg.train.sign_rule == SignRule::RejectNegative1d
                               ? "reject_negative_1d"
                               : (*cfg.train.sign_rule == SignRule::HalfSpaceFirstComponent
                                      ? "half_space_first_component"
                                      : "none");
        add("train.sign_rule", rule);
    }
    if (cfg.train.stop_tolerance)
        add("train.stop_tolerance", format_double(*cfg.train.stop_tolerance));
    if (cfg.adam) {
        add("adam.epochs", std::to_string(cfg.adam->epochs));
        add("adam.learning_rate", format_double(cfg.adam->learning_rate));
        add("adam.batch_size", std::to_string(cfg.adam->batch_size));
        add("adam.lambda", format_double(cfg.adam->lambda));
        add("adam.seed", std::to_string(cfg.adam->seed));
        add("adam.L", std::to_string(cfg.adam_L));
    }
    if (!cfg.compare_methods.empty()) {
        std::string m;
        for (std::size_t i = 0; i < cfg.compare_methods.size(); ++i)
            m += (i ? "," : "") + cfg.compare_methods[i];
        add("compare.methods", m);
    }
    add("output.dir", cfg.out_dir);
    add("output.trace_stride", std::to_string(cfg.trace_stride));
    add("output.histogram_bins", std::to_string(cfg.histogram_bins));
    return lines;
}

} // namespace rfnn
