#include <doctest.h>

#include <cmath>

#include "rfnn/baseline.hpp"
#include "rfnn/rng.hpp"
#include "rfnn/trainer.hpp"
#include "test_helpers.hpp"

using namespace rfnn;

namespace {

Network make_net(int d, int w, int depth, std::uint64_t seed, double amp_scale) {
    Rng rng(seed);
    Network net;
    net.input_dim = d;
    net.width = w;
    net.norm_stats.mean = Eigen::VectorXd::Zero(d);
    net.norm_stats.std = Eigen::VectorXd::Ones(d);
    for (int l = 0; l < depth; ++l) {
        BlockParams block;
        block.freqs.resize(w, d);
        for (Eigen::Index i = 0; i < block.freqs.size(); ++i)
            block.freqs.data()[i] = rng.normal();
        block.re_b.resize(w);
        block.im_b.resize(w);
        for (int j = 0; j < w; ++j) {
            block.re_b[j] = amp_scale * rng.normal();
            block.im_b[j] = amp_scale * rng.normal();
        }
        if (l > 0) {
            block.freqs_prime.resize(w);
            block.re_b_prime.resize(w);
            block.im_b_prime.resize(w);
            for (int j = 0; j < w; ++j) {
                block.freqs_prime[j] = rng.normal();
                block.re_b_prime[j] = amp_scale * rng.normal();
                block.im_b_prime[j] = amp_scale * rng.normal();
            }
        }
        net.blocks.push_back(std::move(block));
    }
    return net;
}

// Central finite differences of the loss in flat-parameter space.
Eigen::VectorXd fd_gradient(const Network& net, const Eigen::MatrixXd& inputs,
                            const Eigen::VectorXd& targets, double lambda, double h) {
    const Eigen::VectorXd base = flatten_parameters(net);
    Eigen::VectorXd grad(base.size());
    Network probe = net;
    for (Eigen::Index i = 0; i < base.size(); ++i) {
        Eigen::VectorXd plus = base, minus = base;
        plus[i] += h;
        minus[i] -= h;
        set_parameters(probe, plus);
        const double f_plus = loss_and_gradient(probe, inputs, targets, lambda).first;
        set_parameters(probe, minus);
        const double f_minus = loss_and_gradient(probe, inputs, targets, lambda).first;
        grad[i] = (f_plus - f_minus) / (2.0 * h);
    }
    return grad;
}

} // namespace

TEST_CASE("flatten/set round trip") {
    const Network net = make_net(3, 4, 3, 1, 0.7);
    const Eigen::VectorXd flat = flatten_parameters(net);
    Network copy = make_net(3, 4, 3, 2, 0.7);  // different values, same shape
    set_parameters(copy, flat);
    CHECK(rfnn_test::bitwise_equal(flatten_parameters(copy), flat));
    CHECK(rfnn_test::bitwise_equal(copy.blocks[1].freqs, net.blocks[1].freqs));

    Eigen::VectorXd wrong(flat.size() + 1);
    CHECK_THROWS_AS(set_parameters(copy, wrong), DimensionError);
}

TEST_CASE("zero parameters on zero targets: zero loss and gradient") {
    Network net = make_net(1, 2, 2, 3, 0.0);
    for (auto& block : net.blocks) {
        block.freqs.setZero();
        if (block.has_prime()) block.freqs_prime.setZero();
    }
    Eigen::MatrixXd inputs(10, 1);
    inputs.setRandom();
    const Eigen::VectorXd targets = Eigen::VectorXd::Zero(10);
    const auto [loss, grad] = loss_and_gradient(net, inputs, targets, 0.1);
    CHECK(loss == 0.0);
    CHECK(grad.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("regularization-only gradient is 2 lambda b") {
    // zero-frequency width-1 net predicting the constant Re(b); targets equal
    // the prediction so only the Tikhonov term contributes.
    Network net = make_net(1, 1, 1, 4, 0.0);
    net.blocks[0].freqs.setZero();
    net.blocks[0].re_b[0] = 0.8;
    net.blocks[0].im_b[0] = -0.3;
    Eigen::MatrixXd inputs(20, 1);
    inputs.setRandom();
    const Eigen::VectorXd targets = Eigen::VectorXd::Constant(20, 0.8);

    const double lambda = 0.05;
    const auto [loss, grad] = loss_and_gradient(net, inputs, targets, lambda);
    CHECK(loss == doctest::Approx(lambda * (0.64 + 0.09)).epsilon(1e-12));
    // layout: [freq, re_b, im_b]
    CHECK(grad[1] == doctest::Approx(2.0 * lambda * 0.8).epsilon(1e-12));
    // im_b does not affect the prediction at zero frequency: pure lambda term
    CHECK(grad[2] == doctest::Approx(2.0 * lambda * -0.3).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences on small nets") {
    Rng data_rng(9);
    for (const auto& [d, depth] : std::vector<std::pair<int, int>>{{1, 1}, {1, 3}, {3, 1}, {3, 3}}) {
        const Network net = make_net(d, 2, depth, 10 + d + depth, 0.6);
        Eigen::MatrixXd inputs(16, d);
        Eigen::VectorXd targets(16);
        for (Eigen::Index i = 0; i < inputs.size(); ++i) inputs.data()[i] = data_rng.uniform(-1, 1);
        for (Eigen::Index i = 0; i < 16; ++i) targets[i] = data_rng.normal();

        const double lambda = 1e-3;
        const auto [loss, grad] = loss_and_gradient(net, inputs, targets, lambda);
        CHECK(std::isfinite(loss));
        const Eigen::VectorXd fd = fd_gradient(net, inputs, targets, lambda, 1e-5);
        const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
        const double worst = (grad - fd).cwiseAbs().maxCoeff() / scale;
        INFO("d=", d, " depth=", depth, " rel err ", worst);
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("non-finite parameters are reported with an index") {
    Network net = make_net(1, 2, 1, 11, 0.5);
    net.blocks[0].re_b[1] = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd inputs(5, 1);
    inputs.setRandom();
    const Eigen::VectorXd targets = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_WITH_AS(static_cast<void>(loss_and_gradient(net, inputs, targets, 0.0)),
                         doctest::Contains("parameter index"), SolveError);
}

TEST_CASE("zero learning rate leaves parameters untouched") {
    const Dataset data = generate_dataset(find_target("multiscale"), 100, 12);
    AdamConfig cfg;
    cfg.epochs = 3;
    cfg.learning_rate = 0.0;
    cfg.batch_size = 32;
    cfg.lambda = 1e-4;
    cfg.seed = 5;
    const AdamResult result = adam_train(data, data, 2, 2, cfg);
    // amplitudes start at zero and cannot move
    for (const auto& block : result.net.blocks) {
        CHECK(block.re_b.cwiseAbs().maxCoeff() == 0.0);
        CHECK(block.im_b.cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(result.train_loss.size() == 3);
    CHECK(result.train_loss[0] == result.train_loss[2]);
}

TEST_CASE("adam learns a realizable single-frequency target") {
    const TargetFunction cos3{"cos3_b", 1, {{-1.0, 1.0}},
                              [](const double* t) { return std::cos(3.0 * t[0]); }};
    const Dataset data = generate_dataset(cos3, 256, 13);
    const Dataset test = generate_dataset(cos3, 128, 14);
    AdamConfig cfg;
    cfg.epochs = 2000;
    cfg.learning_rate = 1e-2;
    cfg.batch_size = 64;
    cfg.lambda = 0.0;
    cfg.seed = 6;
    const AdamResult result = adam_train(data, test, 1, 1, cfg);
    CHECK(result.train_loss.back() < 1e-3);
}

TEST_CASE("loss curve is seed-deterministic") {
    const Dataset data = generate_dataset(find_target("multiscale"), 120, 15);
    AdamConfig cfg;
    cfg.epochs = 5;
    cfg.learning_rate = 1e-3;
    cfg.batch_size = 32;
    cfg.seed = 77;
    const AdamResult a = adam_train(data, data, 2, 2, cfg);
    const AdamResult b = adam_train(data, data, 2, 2, cfg);
    CHECK(a.train_loss == b.train_loss);
    CHECK(a.test_mse == b.test_mse);
    CHECK(network_to_string(a.net) == network_to_string(b.net));
}

TEST_CASE("divergence aborts") {
    const Dataset data = generate_dataset(find_target("multiscale"), 64, 16);
    AdamConfig cfg;
    cfg.epochs = 2000;
    cfg.learning_rate = 1e8;
    cfg.batch_size = 64;
    cfg.seed = 8;
    CHECK_THROWS_AS(static_cast<void>(adam_train(data, data, 2, 2, cfg)), SolveError);
}
