#include "rfnn/baseline.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rfnn/csv.hpp"
#include "rfnn/kernels.hpp"
#include "rfnn/rng.hpp"
#include "rfnn/trainer.hpp"

namespace rfnn {

void AdamConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(learning_rate >= 0.0)) throw ConfigError("learning_rate must be >= 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw ConfigError("beta1/beta2 must lie in (0, 1)");
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
}

Eigen::Index parameter_count(const Network& net) {
    Eigen::Index count = 0;
    for (const auto& block : net.blocks) {
        count += block.freqs.size() + block.re_b.size() + block.im_b.size();
        if (block.has_prime())
            count += block.freqs_prime.size() + block.re_b_prime.size() + block.im_b_prime.size();
    }
    return count;
}

Eigen::VectorXd flatten_parameters(const Network& net) {
    Eigen::VectorXd flat(parameter_count(net));
    Eigen::Index pos = 0;
    for (const auto& block : net.blocks) {
        for (Eigen::Index j = 0; j < block.freqs.rows(); ++j)
            for (Eigen::Index k = 0; k < block.freqs.cols(); ++k) flat[pos++] = block.freqs(j, k);
        flat.segment(pos, block.re_b.size()) = block.re_b;
        pos += block.re_b.size();
        flat.segment(pos, block.im_b.size()) = block.im_b;
        pos += block.im_b.size();
        if (block.has_prime()) {
            flat.segment(pos, block.freqs_prime.size()) = block.freqs_prime;
            pos += block.freqs_prime.size();
            flat.segment(pos, block.re_b_prime.size()) = block.re_b_prime;
            pos += block.re_b_prime.size();
            flat.segment(pos, block.im_b_prime.size()) = block.im_b_prime;
            pos += block.im_b_prime.size();
        }
    }
    return flat;
}

void set_parameters(Network& net, const Eigen::VectorXd& flat) {
    if (flat.size() != parameter_count(net))
        throw DimensionError("parameter vector length " + std::to_string(flat.size()) +
                             " does not match network parameter count " +
                             std::to_string(parameter_count(net)));
    Eigen::Index pos = 0;
    for (auto& block : net.blocks) {
        for (Eigen::Index j = 0; j < block.freqs.rows(); ++j)
            for (Eigen::Index k = 0; k < block.freqs.cols(); ++k) block.freqs(j, k) = flat[pos++];
        block.re_b = flat.segment(pos, block.re_b.size());
        pos += block.re_b.size();
        block.im_b = flat.segment(pos, block.im_b.size());
        pos += block.im_b.size();
        if (block.has_prime()) {
            block.freqs_prime = flat.segment(pos, block.freqs_prime.size());
            pos += block.freqs_prime.size();
            block.re_b_prime = flat.segment(pos, block.re_b_prime.size());
            pos += block.re_b_prime.size();
            block.im_b_prime = flat.segment(pos, block.im_b_prime.size());
            pos += block.im_b_prime.size();
        }
    }
}

namespace {

struct BlockCache {
    Eigen::MatrixXd cos_theta, sin_theta;  // B x W for the theta sinusoids
    Eigen::MatrixXd cos_z, sin_z;          // B x W for the z sinusoids (blocks > 1)
    Eigen::VectorXd z_in;                  // previous block output (blocks > 1)
};

void cached_trig(const Eigen::MatrixXd& phases, Eigen::MatrixXd& cos_out,
                 Eigen::MatrixXd& sin_out) {
    cos_out.resize(phases.rows(), phases.cols());
    sin_out.resize(phases.rows(), phases.cols());
    for (Eigen::Index j = 0; j < phases.cols(); ++j)
        kernels::sincos(phases.col(j).data(), sin_out.col(j).data(), cos_out.col(j).data(),
                        static_cast<std::size_t>(phases.rows()));
}

} // namespace

std::pair<double, Eigen::VectorXd> loss_and_gradient(const Network& net,
                                                     const Eigen::MatrixXd& raw_inputs,
                                                     const Eigen::VectorXd& targets,
                                                     double lambda) {
    const int depth = net.depth();
    const Eigen::Index batch = raw_inputs.rows();
    if (targets.size() != batch)
        throw DimensionError("target length " + std::to_string(targets.size()) +
                             " does not match batch size " + std::to_string(batch));
    const Eigen::MatrixXd theta = normalize_inputs(net.norm_stats, raw_inputs);

    // Forward with cached sinusoids.
    std::vector<BlockCache> cache(static_cast<std::size_t>(depth));
    Eigen::VectorXd z = Eigen::VectorXd::Zero(batch);
    for (int l = 0; l < depth; ++l) {
        const BlockParams& block = net.blocks[static_cast<std::size_t>(l)];
        BlockCache& c = cache[static_cast<std::size_t>(l)];
        cached_trig(theta * block.freqs.transpose(), c.cos_theta, c.sin_theta);
        Eigen::VectorXd g = c.cos_theta * block.re_b - c.sin_theta * block.im_b;
        if (l > 0) {
            c.z_in = z;
            cached_trig(z * block.freqs_prime.transpose(), c.cos_z, c.sin_z);
            g += c.cos_z * block.re_b_prime - c.sin_z * block.im_b_prime;
        }
        z += g;
    }

    const Eigen::VectorXd diff = z - targets;
    double amp_sq = 0.0;
    for (const auto& block : net.blocks) {
        amp_sq += block.re_b.squaredNorm() + block.im_b.squaredNorm();
        if (block.has_prime())
            amp_sq += block.re_b_prime.squaredNorm() + block.im_b_prime.squaredNorm();
    }
    const double loss = diff.squaredNorm() / static_cast<double>(batch) + lambda * amp_sq;
    if (!std::isfinite(loss)) {
        const Eigen::VectorXd flat = flatten_parameters(net);
        Eigen::Index bad = -1;
        for (Eigen::Index i = 0; i < flat.size(); ++i)
            if (!std::isfinite(flat[i])) {
                bad = i;
                break;
            }
        throw SolveError("non-finite loss" +
                         (bad >= 0 ? " (parameter index " + std::to_string(bad) + ")"
                                   : std::string(" (finite parameters, non-finite data)")));
    }

    // Reverse accumulation; dz starts at d(loss)/d(z_L).
    Eigen::VectorXd dz = (2.0 / static_cast<double>(batch)) * diff;
    Network grads = net;  // same shapes; values overwritten below
    for (int l = depth - 1; l >= 0; --l) {
        const BlockParams& block = net.blocks[static_cast<std::size_t>(l)];
        BlockParams& grad = grads.blocks[static_cast<std::size_t>(l)];
        const BlockCache& c = cache[static_cast<std::size_t>(l)];

        grad.re_b = c.cos_theta.transpose() * dz + 2.0 * lambda * block.re_b;
        grad.im_b = -(c.sin_theta.transpose() * dz) + 2.0 * lambda * block.im_b;
        for (Eigen::Index j = 0; j < block.freqs.rows(); ++j) {
            const Eigen::VectorXd u = dz.cwiseProduct(-block.re_b[j] * c.sin_theta.col(j) -
                                                      block.im_b[j] * c.cos_theta.col(j));
            grad.freqs.row(j) = u.transpose() * theta;
        }

        if (l > 0) {
            grad.re_b_prime = c.cos_z.transpose() * dz + 2.0 * lambda * block.re_b_prime;
            grad.im_b_prime = -(c.sin_z.transpose() * dz) + 2.0 * lambda * block.im_b_prime;
            for (Eigen::Index j = 0; j < block.freqs_prime.size(); ++j) {
                const Eigen::VectorXd u =
                    dz.cwiseProduct(-block.re_b_prime[j] * c.sin_z.col(j) -
                                    block.im_b_prime[j] * c.cos_z.col(j));
                grad.freqs_prime[j] = u.dot(c.z_in);
            }
            // dz_{l-1} = dz_l * (1 + d g'_l / d z)
            const Eigen::VectorXd dgdz =
                c.sin_z * (-block.re_b_prime.cwiseProduct(block.freqs_prime)) +
                c.cos_z * (-block.im_b_prime.cwiseProduct(block.freqs_prime));
            dz += dz.cwiseProduct(dgdz);
        }
    }
    return {loss, flatten_parameters(grads)};
}

AdamResult adam_train(const Dataset& data, const Dataset& test, int width, int depth,
                      const AdamConfig& cfg) {
    cfg.validate();
    if (width < 1 || depth < 1) throw ConfigError("width and depth must be >= 1");

    auto [normalized, stats] = standardize(data);
    (void)normalized;

    AdamResult result;
    result.net.input_dim = static_cast<int>(data.dim());
    result.net.width = width;
    result.net.norm_stats = stats;

    Rng rng(cfg.seed);
    Rng init_rng = rng.child(0);
    for (int l = 0; l < depth; ++l) {
        BlockParams block;
        block.freqs.resize(width, data.dim());
        for (Eigen::Index j = 0; j < block.freqs.rows(); ++j)
            for (Eigen::Index k = 0; k < block.freqs.cols(); ++k)
                block.freqs(j, k) = init_rng.normal();
        block.re_b = Eigen::VectorXd::Zero(width);
        block.im_b = Eigen::VectorXd::Zero(width);
        if (l > 0) {
            block.freqs_prime.resize(width);
            for (int j = 0; j < width; ++j) block.freqs_prime[j] = init_rng.normal();
            block.re_b_prime = Eigen::VectorXd::Zero(width);
            block.im_b_prime = Eigen::VectorXd::Zero(width);
        }
        result.net.blocks.push_back(std::move(block));
    }

    const Eigen::Index n = data.size();
    const Eigen::Index param_count = parameter_count(result.net);
    Eigen::VectorXd params = flatten_parameters(result.net);
    Eigen::VectorXd m = Eigen::VectorXd::Zero(param_count);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(param_count);
    long step = 0;

    Rng shuffle_rng = rng.child(1);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const Eigen::Index batch_size = std::min<Eigen::Index>(cfg.batch_size, n);

    Eigen::MatrixXd batch_inputs(batch_size, data.dim());
    Eigen::VectorXd batch_targets(batch_size);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates shuffle from the dedicated stream.
        for (Eigen::Index i = n - 1; i > 0; --i) {
            const auto j = static_cast<Eigen::Index>(shuffle_rng.next_u64() %
                                                     static_cast<std::uint64_t>(i + 1));
            std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
        }

        for (Eigen::Index start = 0; start < n; start += batch_size) {
            const Eigen::Index count = std::min(batch_size, n - start);
            for (Eigen::Index i = 0; i < count; ++i) {
                batch_inputs.row(i) = data.inputs.row(order[static_cast<std::size_t>(start + i)]);
                batch_targets[i] = data.targets[order[static_cast<std::size_t>(start + i)]];
            }
            const auto [loss, grad] = loss_and_gradient(
                result.net, batch_inputs.topRows(count), batch_targets.head(count), cfg.lambda);
            (void)loss;
            ++step;
            const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
            v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseProduct(grad);
            params -= cfg.learning_rate *
                      (m / bc1).cwiseQuotient(((v / bc2).cwiseSqrt().array() + cfg.eps).matrix());
            set_parameters(result.net, params);
        }

        const auto [full_loss, full_grad] =
            loss_and_gradient(result.net, data.inputs, data.targets, cfg.lambda);
        (void)full_grad;
        result.train_loss.push_back(full_loss);
        if (test.size() > 0) {
            const Eigen::VectorXd pred = forward(result.net, test.inputs);
            result.test_mse.push_back(
                kernels::sum_sq_diff(pred.data(), test.targets.data(),
                                     static_cast<std::size_t>(pred.size())) /
                static_cast<double>(pred.size()));
        } else {
            result.test_mse.push_back(std::numeric_limits<double>::quiet_NaN());
        }
        if (full_loss > 1e12)
            throw SolveError("training diverged at epoch " + std::to_string(epoch) +
                             " (loss " + format_double(full_loss) + ")");
    }
    return result;
}

void write_loss_curve_csv(const std::string& path, const AdamResult& result,
                          const std::vector<std::string>& comments) {
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    writer.header({"epoch", "train_loss", "test_mse"});
    for (std::size_t e = 0; e < result.train_loss.size(); ++e)
        writer.row({static_cast<double>(e + 1), result.train_loss[e], result.test_mse[e]});
}

} // namespace rfnn
