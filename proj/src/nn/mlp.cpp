#include "dlmath/nn/mlp.hpp"

#include <cmath>
#include <random>

namespace dlmath::nn {

Mlp::Mlp(std::vector<AffineLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ShapeError("Mlp needs at least one layer");
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& l = layers_[k];
    if (l.bias.size() != l.weights.rows())
      throw ShapeError("layer " + std::to_string(k) + ": bias length != d_out");
    if (l.weights.rows() == 0 || l.weights.cols() == 0)
      throw ShapeError("layer " + std::to_string(k) + ": empty weight matrix");
    if (k > 0 && layers_[k - 1].d_out() != l.d_in())
      throw ShapeError("layer " + std::to_string(k) + ": d_in does not match previous d_out");
    if (!l.weights.allFinite() || !l.bias.allFinite())
      throw std::invalid_argument("layer " + std::to_string(k) + ": non-finite parameter");
  }
}

std::vector<std::size_t> Mlp::layer_dims() const {
  std::vector<std::size_t> dims{input_dim()};
  for (const auto& l : layers_) dims.push_back(l.d_out());
  return dims;
}

std::size_t Mlp::parameter_count() const {
  std::size_t count = 0;
  for (const auto& l : layers_) count += static_cast<std::size_t>(l.weights.size() + l.bias.size());
  return count;
}

bool Mlp::operator==(const Mlp& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    const auto& a = layers_[k];
    const auto& b = other.layers_[k];
    if (a.weights.rows() != b.weights.rows() || a.weights.cols() != b.weights.cols()) return false;
    if (a.weights != b.weights || a.bias != b.bias) return false;
  }
  return true;
}

Gradients Gradients::zeros_like(const Mlp& m) {
  Gradients g;
  for (const auto& l : m.layers()) {
    g.weights.push_back(Mat::Zero(l.weights.rows(), l.weights.cols()));
    g.bias.push_back(Vec::Zero(l.bias.size()));
  }
  return g;
}

Vec relu(const Vec& v) { return v.cwiseMax(0.0); }
Mat relu(const Mat& v) { return v.cwiseMax(0.0); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Mat forward(const Mlp& m, const Mat& x, ForwardCache* cache) {
  if (static_cast<std::size_t>(x.cols()) != m.input_dim())
    throw ShapeError("forward: input has " + std::to_string(x.cols()) + " columns, network expects " +
                     std::to_string(m.input_dim()));
  if (cache) {
    cache->activations.clear();
    cache->pre.clear();
    cache->activations.push_back(x);
  }
  Mat a = x;
  const std::size_t n = m.num_layers();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& l = m.layer(k);
    Mat z(a.rows(), l.weights.rows());
    z.noalias() = a * l.weights.transpose();
    z.rowwise() += l.bias.transpose();
    if (k + 1 == n) {
      if (cache) cache->pre.push_back(z);
      return z;
    }
    a = z.cwiseMax(0.0);
    if (cache) {
      cache->pre.push_back(std::move(z));
      cache->activations.push_back(a);
    }
  }
  return a;  // unreachable: at least one layer
}

Vec forward(const Mlp& m, const Vec& x) {
  Mat row = x.transpose();
  Mat out = forward(m, row);
  return out.row(0).transpose();
}

namespace {

void check_cache(const Mlp& m, const ForwardCache& cache, const Mat& out_grad) {
  const std::size_t n = m.num_layers();
  if (cache.pre.size() != n || cache.activations.size() != n)
    throw ShapeError("backward: cache does not match network depth");
  const auto rows = cache.activations.front().rows();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& l = m.layer(k);
    if (static_cast<std::size_t>(cache.activations[k].cols()) != l.d_in() ||
        static_cast<std::size_t>(cache.pre[k].cols()) != l.d_out() ||
        cache.activations[k].rows() != rows || cache.pre[k].rows() != rows)
      throw ShapeError("backward: cache shape mismatch at layer " + std::to_string(k));
  }
  if (out_grad.rows() != rows || static_cast<std::size_t>(out_grad.cols()) != m.output_dim())
    throw ShapeError("backward: output gradient shape mismatch");
}

// Walks the layers in reverse. When grads is null only the input gradient is
// produced; when want_input is false the final delta * W_0 product is skipped.
Mat backprop(const Mlp& m, const ForwardCache& cache, const Mat& out_grad, Gradients* grads,
             bool want_input) {
  check_cache(m, cache, out_grad);
  const std::size_t n = m.num_layers();
  if (grads) {
    grads->weights.assign(n, Mat());
    grads->bias.assign(n, Vec());
  }
  Mat delta = out_grad;
  for (std::size_t k = n; k-- > 0;) {
    const auto& l = m.layer(k);
    if (grads) {
      grads->weights[k].noalias() = delta.transpose() * cache.activations[k];
      grads->bias[k] = delta.colwise().sum().transpose();
    }
    if (k == 0 && !want_input) break;
    Mat upstream(delta.rows(), l.weights.cols());
    upstream.noalias() = delta * l.weights;
    if (k > 0) {
      // ReLU'(z) = 1 for z > 0, 0 otherwise (including z == 0).
      upstream = (cache.pre[k - 1].array() > 0.0).select(upstream, 0.0);
    }
    delta = std::move(upstream);
  }
  return want_input ? delta : Mat();
}

}  // namespace

Gradients backward(const Mlp& m, const ForwardCache& cache, const Mat& out_grad) {
  Gradients g;
  backprop(m, cache, out_grad, &g, false);
  return g;
}

Mat input_gradient(const Mlp& m, const ForwardCache& cache, const Mat& out_grad) {
  return backprop(m, cache, out_grad, nullptr, true);
}

Vec saliency(const Mlp& m, const Vec& x, std::size_t out_index) {
  if (out_index >= m.output_dim())
    throw std::out_of_range("saliency: output index " + std::to_string(out_index) + " out of range");
  ForwardCache cache;
  Mat row = x.transpose();
  forward(m, row, &cache);
  Mat seed = Mat::Zero(1, static_cast<Eigen::Index>(m.output_dim()));
  seed(0, static_cast<Eigen::Index>(out_index)) = 1.0;
  return input_gradient(m, cache, seed).row(0).transpose();
}

Mlp init_he(std::span<const std::size_t> layer_dims, std::uint64_t seed) {
  if (layer_dims.size() < 2) throw ShapeError("init_he: need at least input and output dims");
  std::mt19937_64 rng(seed);
  std::vector<AffineLayer> layers;
  for (std::size_t k = 0; k + 1 < layer_dims.size(); ++k) {
    const auto d_in = static_cast<Eigen::Index>(layer_dims[k]);
    const auto d_out = static_cast<Eigen::Index>(layer_dims[k + 1]);
    if (d_in == 0 || d_out == 0) throw ShapeError("init_he: zero layer dimension");
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(d_in)));
    AffineLayer l{Mat(d_out, d_in), Vec::Zero(d_out)};
    for (Eigen::Index i = 0; i < l.weights.size(); ++i) l.weights.data()[i] = normal(rng);
    layers.push_back(std::move(l));
  }
  return Mlp(std::move(layers));
}

}  // namespace dlmath::nn
