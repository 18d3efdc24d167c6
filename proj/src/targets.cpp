#include "rfnn/targets.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>

#include "rfnn/csv.hpp"
#include "rfnn/quadrature.hpp"

namespace rfnn {

double multiscale(double theta) {
    return std::cos(4.0 * theta) + 0.3 * std::cos(70.0 * theta) + 0.05 * std::cos(150.0 * theta);
}

double stairstep(double theta) {
    if (theta < -0.5) return 0.0;
    if (theta < 0.0) return 1.0 / 3.0;
    if (theta < 0.5) return 2.0 / 3.0;
    return 1.0;
}

double sine_integral(double x) {
    const double ax = std::abs(x);
    double value;
    if (ax <= 4.0) {
        // Si(x) = sum_k (-1)^k x^(2k+1) / ((2k+1) (2k+1)!)
        const double z = ax * ax;
        double term = ax;
        double sum = ax;
        for (int k = 1; k < 40; ++k) {
            const double two_k = 2.0 * k;
            term *= -z / (two_k * (two_k + 1.0));
            const double contribution = term / (two_k + 1.0);
            sum += contribution;
            if (std::abs(contribution) < 1e-18 * std::abs(sum)) break;
        }
        value = sum;
    } else {
        static const double si4 = sine_integral(4.0);
        const auto integrand = [](double t) { return t == 0.0 ? 1.0 : std::sin(t) / t; };
        value = si4 + integrate(integrand, 4.0, ax, 1e-13).value;
    }
    return x < 0.0 ? -value : value;
}

double sine_discontinuity_3d(const double* theta) {
    const double dx = theta[0] - 0.5;
    const double dy = theta[1] - 0.5;
    const double dz = theta[2] - 0.5;
    const double envelope = std::exp(-0.5 * (dx * dx + dy * dy + dz * dz));
    return envelope * sine_integral(dx / 0.1);
}

namespace {

std::map<std::string, TargetFunction>& registry() {
    static std::map<std::string, TargetFunction> targets = [] {
        std::map<std::string, TargetFunction> m;
        m["multiscale"] = TargetFunction{
            "multiscale", 1, {{-1.0, 1.0}}, [](const double* t) { return multiscale(t[0]); }};
        m["stairstep"] = TargetFunction{
            "stairstep", 1, {{-1.0, 1.0}}, [](const double* t) { return stairstep(t[0]); }};
        m["sine3d"] = TargetFunction{"sine3d",
                                     3,
                                     {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}},
                                     [](const double* t) { return sine_discontinuity_3d(t); }};
        return m;
    }();
    return targets;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

const TargetFunction& find_target(const std::string& name) {
    std::lock_guard lock(registry_mutex());
    const auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown target '" + name + "'");
    return it->second;
}

void register_target(TargetFunction target) {
    if (target.input_dim < 1 ||
        static_cast<int>(target.domain.size()) != target.input_dim || !target.evaluator)
        throw ConfigError("invalid target registration '" + target.name + "'");
    std::lock_guard lock(registry_mutex());
    registry()[target.name] = std::move(target);
}

std::vector<std::string> registered_targets() {
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> names;
    for (const auto& [name, _] : registry()) names.push_back(name);
    return names;
}

Dataset generate_dataset(const TargetFunction& target, Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("dataset size must be >= 1");
    const int d = target.input_dim;
    Dataset data;
    data.inputs.resize(n, d);
    data.targets.resize(n);
    Rng rng(seed);
    std::vector<double> point(static_cast<std::size_t>(d));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) {
            const auto [lo, hi] = target.domain[k];
            point[static_cast<std::size_t>(k)] = rng.uniform(lo, hi);
            data.inputs(i, k) = point[static_cast<std::size_t>(k)];
        }
        data.targets[i] = target.evaluator(point.data());
    }
    return data;
}

void write_dataset_csv(const std::string& path, const Dataset& dataset,
                       const std::vector<std::string>& comments) {
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    std::vector<std::string> columns;
    for (Eigen::Index k = 0; k < dataset.dim(); ++k)
        columns.push_back("theta_" + std::to_string(k + 1));
    columns.push_back("q");
    writer.header(columns);
    std::vector<double> row(dataset.dim() + 1);
    for (Eigen::Index i = 0; i < dataset.size(); ++i) {
        for (Eigen::Index k = 0; k < dataset.dim(); ++k) row[k] = dataset.inputs(i, k);
        row[dataset.dim()] = dataset.targets[i];
        writer.row(row);
    }
}

Dataset read_dataset_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const Eigen::Index d = static_cast<Eigen::Index>(table.columns.size()) - 1;
    if (d < 1 || table.columns.back() != "q")
        throw Error("dataset csv '" + path + "' must end with column 'q'");
    Dataset data;
    data.inputs.resize(static_cast<Eigen::Index>(table.rows.size()), d);
    data.targets.resize(static_cast<Eigen::Index>(table.rows.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (static_cast<Eigen::Index>(row.size()) != d + 1)
            throw Error("dataset csv row " + std::to_string(i + 1) + " has wrong arity");
        for (Eigen::Index k = 0; k < d; ++k)
            data.inputs(static_cast<Eigen::Index>(i), k) = std::strtod(row[k].c_str(), nullptr);
        data.targets[static_cast<Eigen::Index>(i)] = std::strtod(row[d].c_str(), nullptr);
    }
    return data;
}

} // namespace rfnn
