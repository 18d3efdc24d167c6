#include "rfnn/network.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rfnn/kernels.hpp"

namespace rfnn {

namespace {

// out += C * re - S * im for phases = points * freqs^T (N x W).
void accumulate_sinusoids(Eigen::VectorXd& out, const Eigen::MatrixXd& phases,
                          const Eigen::VectorXd& re, const Eigen::VectorXd& im) {
    const Eigen::Index n = phases.rows();
    const Eigen::Index w = phases.cols();
    Eigen::VectorXd sin_col(n), cos_col(n);
    for (Eigen::Index j = 0; j < w; ++j) {
        kernels::sincos(phases.col(j).data(), sin_col.data(), cos_col.data(),
                        static_cast<std::size_t>(n));
        out.noalias() += re[j] * cos_col - im[j] * sin_col;
    }
}

void check_block_dims(const Eigen::MatrixXd& theta, const BlockParams& block) {
    if (theta.cols() != block.freqs.cols())
        throw DimensionError("input dimension " + std::to_string(theta.cols()) +
                             " does not match block frequency dimension " +
                             std::to_string(block.freqs.cols()));
    if (block.re_b.size() != block.freqs.rows() || block.im_b.size() != block.freqs.rows())
        throw DimensionError("amplitude length does not match block width " +
                             std::to_string(block.freqs.rows()));
}

} // namespace

Eigen::MatrixXd normalize_inputs(const NormStats& stats, const Eigen::MatrixXd& raw) {
    if (raw.cols() != stats.dim())
        throw DimensionError("input dimension " + std::to_string(raw.cols()) +
                             " does not match normalization dimension " +
                             std::to_string(stats.dim()));
    Eigen::MatrixXd out = raw;
    for (Eigen::Index k = 0; k < stats.dim(); ++k)
        out.col(k) = (out.col(k).array() - stats.mean[k]) / stats.std[k];
    return out;
}

Eigen::VectorXd block_g(const Eigen::MatrixXd& theta_normalized, const BlockParams& block) {
    check_block_dims(theta_normalized, block);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(theta_normalized.rows());
    const Eigen::MatrixXd phases = theta_normalized * block.freqs.transpose();
    accumulate_sinusoids(out, phases, block.re_b, block.im_b);
    return out;
}

Eigen::VectorXd block_g_prime(const Eigen::VectorXd& z_prev, const BlockParams& block) {
    if (!block.has_prime())
        throw DimensionError("block has no primed parameters (block 1 has no g' term)");
    if (block.re_b_prime.size() != block.freqs_prime.size() ||
        block.im_b_prime.size() != block.freqs_prime.size())
        throw DimensionError("primed amplitude length does not match block width");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(z_prev.size());
    const Eigen::MatrixXd phases = z_prev * block.freqs_prime.transpose();
    accumulate_sinusoids(out, phases, block.re_b_prime, block.im_b_prime);
    return out;
}

Eigen::VectorXd forward(const Network& net, const Eigen::MatrixXd& raw_inputs, int upto_block) {
    const int depth = net.depth();
    if (upto_block == 0) upto_block = depth;
    if (upto_block < 1 || upto_block > depth)
        throw DimensionError("upto_block " + std::to_string(upto_block) +
                             " out of range 1.." + std::to_string(depth));
    const Eigen::MatrixXd theta = normalize_inputs(net.norm_stats, raw_inputs);
    Eigen::VectorXd z = block_g(theta, net.blocks[0]);
    for (int l = 1; l < upto_block; ++l) {
        const Eigen::VectorXd correction =
            block_g(theta, net.blocks[l]) + block_g_prime(z, net.blocks[l]);
        z += correction;
    }
    return z;
}

namespace {

void write_vector(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
    out << key;
    char buf[40];
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, " %.17g", v[i]);
        out << buf;
    }
    out << '\n';
}

void write_matrix_rowmajor(std::ostream& out, const char* key, const Eigen::MatrixXd& m) {
    out << key;
    char buf[40];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, " %.17g", m(i, j));
            out << buf;
        }
    out << '\n';
}

std::vector<double> parse_numbers(std::istringstream& line) {
    std::vector<double> values;
    double v;
    while (line >> v) values.push_back(v);
    return values;
}

} // namespace

std::string network_to_string(const Network& net) {
    std::ostringstream out;
    out << "rfnn-network 1\n";
    out << "input_dim " << net.input_dim << '\n';
    out << "width " << net.width << '\n';
    out << "depth " << net.depth() << '\n';
    write_vector(out, "norm_mean", net.norm_stats.mean);
    write_vector(out, "norm_std", net.norm_stats.std);
    for (int l = 0; l < net.depth(); ++l) {
        const BlockParams& block = net.blocks[l];
        out << "block " << (l + 1) << '\n';
        write_matrix_rowmajor(out, "freqs", block.freqs);
        write_vector(out, "re_b", block.re_b);
        write_vector(out, "im_b", block.im_b);
        if (block.has_prime()) {
            write_vector(out, "freqs_prime", block.freqs_prime);
            write_vector(out, "re_b_prime", block.re_b_prime);
            write_vector(out, "im_b_prime", block.im_b_prime);
        }
    }
    return out.str();
}

Network network_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line, key;
    Network net;
    int depth = 0;

    auto next_line = [&](const char* expected) -> std::istringstream {
        if (!std::getline(in, line))
            throw Error(std::string("network file truncated; expected ") + expected);
        std::istringstream ls(line);
        ls >> key;
        if (key != expected)
            throw Error("network file: expected key '" + std::string(expected) + "', got '" +
                        key + "'");
        return ls;
    };

    {
        auto ls = next_line("rfnn-network");
        int version = 0;
        ls >> version;
        if (version != 1) throw Error("unsupported network file version");
    }
    next_line("input_dim") >> net.input_dim;
    next_line("width") >> net.width;
    next_line("depth") >> depth;
    if (net.input_dim < 1 || net.width < 1 || depth < 1)
        throw Error("network file: invalid dimensions");

    auto read_vector = [&](const char* k, Eigen::Index size) {
        auto ls = next_line(k);
        const std::vector<double> values = parse_numbers(ls);
        if (static_cast<Eigen::Index>(values.size()) != size)
            throw Error("network file: '" + std::string(k) + "' expected " +
                        std::to_string(size) + " values, got " + std::to_string(values.size()));
        return Eigen::Map<const Eigen::VectorXd>(values.data(), size).eval();
    };

    net.norm_stats.mean = read_vector("norm_mean", net.input_dim);
    net.norm_stats.std = read_vector("norm_std", net.input_dim);
    if ((net.norm_stats.std.array() <= 0.0).any())
        throw Error("network file: norm_std must be positive");

    for (int l = 1; l <= depth; ++l) {
        auto ls = next_line("block");
        int idx = 0;
        ls >> idx;
        if (idx != l) throw Error("network file: block indices out of order");
        BlockParams block;
        const Eigen::VectorXd flat =
            read_vector("freqs", static_cast<Eigen::Index>(net.width) * net.input_dim);
        block.freqs =
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>(flat.data(), net.width, net.input_dim);
        block.re_b = read_vector("re_b", net.width);
        block.im_b = read_vector("im_b", net.width);
        if (l > 1) {
            block.freqs_prime = read_vector("freqs_prime", net.width);
            block.re_b_prime = read_vector("re_b_prime", net.width);
            block.im_b_prime = read_vector("im_b_prime", net.width);
        }
        if (!block.freqs.allFinite() || !block.re_b.allFinite() || !block.im_b.allFinite())
            throw Error("network file: non-finite parameters");
        net.blocks.push_back(std::move(block));
    }
    return net;
}

void save_network(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << network_to_string(net);
    if (!out) throw Error("failed writing '" + path + "'");
}

Network load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return network_from_string(buf.str());
}

} // namespace rfnn
