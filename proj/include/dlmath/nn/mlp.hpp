#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dlmath::nn {

/// Dense row-major matrix. Batches are stored one sample per row.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// x -> W x + b, with W of shape d_out x d_in.
struct AffineLayer {
  Mat weights;
  Vec bias;

  std::size_t d_in() const { return static_cast<std::size_t>(weights.cols()); }
  std::size_t d_out() const { return static_cast<std::size_t>(weights.rows()); }
};

/// Alternating affine maps and coordinatewise ReLU. No activation after the
/// last layer, so outputs are raw logits / regression values.
class Mlp {
 public:
  explicit Mlp(std::vector<AffineLayer> layers);

  std::size_t num_layers() const { return layers_.size(); }
  std::size_t input_dim() const { return layers_.front().d_in(); }
  std::size_t output_dim() const { return layers_.back().d_out(); }
  /// (d_in, d_out of layer 0, d_out of layer 1, ...)
  std::vector<std::size_t> layer_dims() const;
  std::size_t parameter_count() const;

  const AffineLayer& layer(std::size_t k) const { return layers_.at(k); }
  std::span<const AffineLayer> layers() const { return layers_; }
  /// Mutable parameter access for optimizers. Shapes must not be changed.
  std::span<AffineLayer> parameters() { return layers_; }

  bool operator==(const Mlp& other) const;

 private:
  std::vector<AffineLayer> layers_;
};

/// Intermediates of one batched forward pass.
/// activations[0] is the input; pre[k] = activations[k] W_k^T + b_k;
/// activations[k+1] = relu(pre[k]) for every hidden layer.
struct ForwardCache {
  std::vector<Mat> activations;
  std::vector<Mat> pre;
};

/// Per-layer parameter gradients, shaped like the network.
struct Gradients {
  std::vector<Mat> weights;
  std::vector<Vec> bias;

  static Gradients zeros_like(const Mlp& m);
};

Vec relu(const Vec& v);
Mat relu(const Mat& v);
double sigmoid(double x);

/// Batched forward pass. Throws ShapeError if x.cols() != input_dim().
Mat forward(const Mlp& m, const Mat& x, ForwardCache* cache = nullptr);
Vec forward(const Mlp& m, const Vec& x);

/// Reverse-mode gradients of sum(out_grad .* outputs) with respect to the
/// parameters. ReLU'(0) is taken to be 0.
Gradients backward(const Mlp& m, const ForwardCache& cache, const Mat& out_grad);

/// Same pass, returning the gradient with respect to the network input.
Mat input_gradient(const Mlp& m, const ForwardCache& cache, const Mat& out_grad);

/// d output[out_index] / d x at the point x.
Vec saliency(const Mlp& m, const Vec& x, std::size_t out_index);

/// He-normal initialization: W ~ N(0, 2/d_in), b = 0.
Mlp init_he(std::span<const std::size_t> layer_dims, std::uint64_t seed);

}  // namespace dlmath::nn
