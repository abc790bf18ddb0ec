#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "macgrad/rng.hpp"
#include "macgrad/tensor.hpp"

namespace macgrad::nn {

struct Param {
    std::string name;
    Tensor value;
    Tensor grad;
};

// Captured statistics for a weight block preconditioned as z = W a + b.
// Rows are effective samples (examples, example x position for convolution,
// example x token for token-wise layers). `p` is on the per-example loss
// scale: the gradient of the mean batch loss multiplied by the batch size.
struct DenseCapture {
    Tensor a;  // [S x (in + 1)], constant-one bias column last
    Tensor p;  // [S x out]
    std::size_t batch = 0;
};

// Quantities recorded by a self-attention layer, per example and head.
// Gradients carry the same per-example scale as DenseCapture::p.
struct AttentionCapture {
    std::size_t batch = 0, tokens = 0, dim = 0, heads = 0;
    Tensor x;        // [B, N, d] layer input
    Tensor z;        // [B, N, 3d] fused projections Q | K | V
    Tensor t;        // [B, H, N, N] attention scores (row-stochastic)
    Tensor delta_r;  // [B, H, N, N] dL/dR, R = Q K^T / sqrt(d_k)
    Tensor delta_h;  // [B, N, d] dL/dH, heads concatenated
    Tensor dz;       // [B, N, 3d] dL/dZ for the fused projection

    std::size_t head_dim() const { return dim / heads; }
    // Per-example, per-head slices as dense matrices.
    Tensor x_of(std::size_t b) const;                                   // N x d
    Tensor q_of(std::size_t b, std::size_t h) const;                    // N x d_k
    Tensor k_of(std::size_t b, std::size_t h) const;                    // N x d_k
    Tensor v_of(std::size_t b, std::size_t h) const;                    // N x d_k
    Tensor t_of(std::size_t b, std::size_t h) const;                    // N x N
    Tensor delta_r_of(std::size_t b, std::size_t h) const;              // N x N
    Tensor delta_h_of(std::size_t b, std::size_t h) const;              // N x d_k
};

enum class BlockKind { Dense, AttentionQkv };

class Layer;

// A preconditioned weight group. Dense blocks expose G = [dW | db] with
// shape [out x (in + 1)]; the fused attention block exposes
// G = (dL/dW_qkv)^T with shape [3d x d].
struct BlockRef {
    Layer* layer = nullptr;
    int index = 0;
    BlockKind kind = BlockKind::Dense;
    std::string name;
    std::size_t rows = 0, cols = 0;
};

class Layer {
public:
    virtual ~Layer() = default;

    virtual std::string kind() const = 0;
    // Per-example output shape for a per-example input shape.
    virtual Shape output_shape(const Shape& in) const = 0;
    virtual Tensor forward(const Tensor& x) = 0;
    // Overwrites parameter gradients (mean over batch); returns dL/dx.
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Param*> params() { return {}; }
    virtual std::unique_ptr<Layer> clone() const = 0;
    // Declarative one-token description ("linear:10", "relu", ...).
    virtual std::string spec() const = 0;

    virtual int block_count() const { return 0; }
    virtual BlockKind block_kind(int) const { return BlockKind::Dense; }
    virtual Shape block_shape(int) const { return {}; }
    virtual Tensor block_grad(int) const;
    virtual void set_block_grad(int, const Tensor&);
    virtual DenseCapture dense_capture(int) const;
    virtual const AttentionCapture* attention_capture() const { return nullptr; }
};

class Linear final : public Layer {
public:
    Linear(std::size_t in, std::size_t out);
    void init(Rng& rng);

    std::string kind() const override { return "linear"; }
    Shape output_shape(const Shape& in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&weight_, &bias_}; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<Linear>(*this); }
    std::string spec() const override { return "linear:" + std::to_string(out_); }

    int block_count() const override { return 1; }
    Shape block_shape(int) const override { return {out_, in_ + 1}; }
    Tensor block_grad(int) const override;
    void set_block_grad(int, const Tensor& g) override;
    DenseCapture dense_capture(int) const override;

    Param& weight() { return weight_; }  // [out x in]
    Param& bias() { return bias_; }      // [out]

private:
    std::size_t in_, out_;
    Param weight_, bias_;
    Tensor input_;  // flattened [S x in]
    Shape input_shape_;
    Tensor grad_out_;  // [S x out]
    bool has_input_ = false;
};

class Conv2d final : public Layer {
public:
    Conv2d(std::size_t in_channels, std::size_t out_channels, std::size_t kernel, std::size_t stride,
           std::size_t padding);
    void init(Rng& rng);

    std::string kind() const override { return "conv"; }
    Shape output_shape(const Shape& in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&kernel_, &bias_}; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<Conv2d>(*this); }
    std::string spec() const override;

    int block_count() const override { return 1; }
    Shape block_shape(int) const override { return {out_c_, in_c_ * k_ * k_ + 1}; }
    Tensor block_grad(int) const override;
    void set_block_grad(int, const Tensor& g) override;
    DenseCapture dense_capture(int) const override;

    Param& kernel() { return kernel_; }  // [out x in x k x k]
    Param& bias() { return bias_; }

private:
    ConvGeometry geometry(const Tensor& x) const;

    std::size_t in_c_, out_c_, k_, stride_, pad_;
    Param kernel_, bias_;
    ConvGeometry geom_;
    Tensor cols_;      // [B*Ho*Wo x C*k*k]
    Tensor grad_out_;  // [B*Ho*Wo x out]
    std::size_t batch_ = 0;
    bool has_input_ = false;
};

class ReLU final : public Layer {
public:
    std::string kind() const override { return "relu"; }
    Shape output_shape(const Shape& in) const override { return in; }
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::unique_ptr<Layer> clone() const override { return std::make_unique<ReLU>(*this); }
    std::string spec() const override { return "relu"; }

private:
    Tensor input_;
    bool has_input_ = false;
};

class Flatten final : public Layer {
public:
    std::string kind() const override { return "flatten"; }
    Shape output_shape(const Shape& in) const override { return {shape_numel(in)}; }
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::unique_ptr<Layer> clone() const override { return std::make_unique<Flatten>(*this); }
    std::string spec() const override { return "flatten"; }

private:
    Shape input_shape_;
};

// [B, N, d] -> [B, d] by averaging tokens.
class TokenMeanPool final : public Layer {
public:
    std::string kind() const override { return "meanpool"; }
    Shape output_shape(const Shape& in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::unique_ptr<Layer> clone() const override { return std::make_unique<TokenMeanPool>(*this); }
    std::string spec() const override { return "meanpool"; }

private:
    Shape input_shape_;
};

// Multi-head self-attention on [B, N, d] with fused W_qkv [d x 3d] (no bias)
// and output projection W_out [d x d] plus bias. Q = X W_q etc., with the
// fused columns split as Q | K | V and head h owning columns [h*d_k, (h+1)*d_k)
// of each part.
class SelfAttention final : public Layer {
public:
    SelfAttention(std::size_t dim, std::size_t heads);
    void init(Rng& rng);

    std::string kind() const override { return "attn"; }
    Shape output_shape(const Shape& in) const override;
    Tensor forward(const Tensor& x) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Param*> params() override { return {&w_qkv_, &w_out_, &b_out_}; }
    std::unique_ptr<Layer> clone() const override { return std::make_unique<SelfAttention>(*this); }
    std::string spec() const override { return "attn:" + std::to_string(dim_) + ":" + std::to_string(heads_); }

    // Block 0: fused QKV (attention rule); block 1: output projection (dense rule).
    // Block 0's dense capture is the token matrix X with dL/dZ, no bias column.
    int block_count() const override { return 2; }
    BlockKind block_kind(int i) const override { return i == 0 ? BlockKind::AttentionQkv : BlockKind::Dense; }
    Shape block_shape(int i) const override;
    Tensor block_grad(int i) const override;
    void set_block_grad(int i, const Tensor& g) override;
    DenseCapture dense_capture(int i) const override;
    const AttentionCapture* attention_capture() const override { return has_capture_ ? &cap_ : nullptr; }

    Param& w_qkv() { return w_qkv_; }
    Param& w_out() { return w_out_; }
    Param& b_out() { return b_out_; }
    std::size_t dim() const { return dim_; }
    std::size_t heads() const { return heads_; }

private:
    std::size_t dim_, heads_;
    Param w_qkv_, w_out_, b_out_;
    AttentionCapture cap_;
    Tensor concat_;    // [B*N x d] head outputs
    Tensor grad_out_;  // [B*N x d]
    bool has_input_ = false;
    bool has_capture_ = false;
};

class Sequential {
public:
    Sequential() = default;
    explicit Sequential(Shape input_shape) : input_shape_(std::move(input_shape)) {}
    Sequential(const Sequential& other);
    Sequential& operator=(const Sequential& other);
    Sequential(Sequential&&) noexcept = default;
    Sequential& operator=(Sequential&&) noexcept = default;

    void add(std::unique_ptr<Layer> layer);

    // Validates shapes end to end; throws DimensionError.
    Shape output_shape() const;
    const Shape& input_shape() const { return input_shape_; }

    Tensor forward(const Tensor& x);
    // Requires a preceding forward; consumes it.
    Tensor backward(const Tensor& grad_logits);

    std::vector<Param*> params();
    std::vector<BlockRef> blocks();
    std::size_t num_layers() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_[i]; }
    const Layer& layer(std::size_t i) const { return *layers_[i]; }
    std::string spec() const;
    std::size_t parameter_count();

private:
    Shape input_shape_;
    std::vector<std::unique_ptr<Layer>> layers_;
    bool forward_pending_ = false;
};

// --- activations and losses --------------------------------------------------

Tensor relu(const Tensor& x);
// grad_out masked by x > 0 (derivative at exactly zero is zero).
Tensor relu_grad(const Tensor& x, const Tensor& grad_out);
// Row-wise max-subtracted softmax of a rank-2 tensor.
Tensor softmax_rows(const Tensor& z);

struct LossResult {
    double value = 0.0;
    Tensor grad;  // dL/dlogits for the batch-mean loss
};

// Mean softmax cross-entropy over the batch.
LossResult cross_entropy(const Tensor& logits, std::span<const int> labels);
// Mean of 0.5 * ||u - y||^2 over the batch.
LossResult squared_loss(const Tensor& outputs, const Tensor& targets);

std::size_t count_correct(const Tensor& logits, std::span<const int> labels);

// dL/dW_q for one head, up to the 1/sqrt(d_k) score scaling: X^T dR K.
Tensor attention_grad_wq(const Tensor& x, const Tensor& delta_r, const Tensor& k);
// X^T dR^T Q
Tensor attention_grad_wk(const Tensor& x, const Tensor& delta_r, const Tensor& q);
// X^T T^T dH
Tensor attention_grad_wv(const Tensor& x, const Tensor& t, const Tensor& delta_h);

}  // namespace macgrad::nn

namespace macgrad::nn {

// Builds a model from a comma-separated layer list, e.g.
//   "conv:8:3:2:1, relu, conv:16:3:2:1, relu, flatten, linear:10"
//   "linear:32, attn:32:4, meanpool, linear:10"
// Tokens: conv:OUT:K:STRIDE:PAD, linear:OUT, attn:DIM:HEADS, relu, flatten,
// meanpool. Parameters are initialised from `seed` in layer order.
// Throws ConfigError on malformed tokens and DimensionError on shape conflicts.
Sequential build_model(const std::string& spec, const Shape& input_shape, std::uint64_t seed);

}  // namespace macgrad::nn
