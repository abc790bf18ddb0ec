#pragma once

#include "macgrad/curvature.hpp"
#include "macgrad/nn.hpp"

namespace macgrad {

// Column mean of a row-stochastic score matrix. Rows that do not sum to one
// (tolerance 1e-6) are reported on std::clog and otherwise tolerated.
Tensor mean_attention(const Tensor& t);

// X^T t_bar, the attention-weighted mean token.
Tensor value_statistic(const Tensor& x, const Tensor& t_bar);

// Batch statistics feeding the attention factors.
struct AttnBatchStats {
    Tensor x_mean;          // E[x] over batch x tokens
    double x_trace = 0.0;   // E[|x|^2] over batch x tokens
    Tensor v_mean;          // E_b[X_b^T t_bar_b], t_bar head-averaged
    double v_trace = 0.0;   // E_b[|X_b^T t_bar_b|^2]
};

AttnBatchStats attention_batch_stats(const nn::AttentionCapture& cap);

struct AttnCurvState {
    Tensor x_tilde, v_tilde;
    double x_trace = 0.0, v_trace = 0.0;
    long k_tau = 0;
    double beta2 = 0.95;
    bool adaptive = false;
    double rho_x = 1.0, rho_v = 1.0;
    Tensor x_hat, v_hat;

    static AttnCurvState make(std::size_t dim, double rho, double beta2, bool adaptive);
    std::size_t bytes() const;
};

void update_attn_ema(AttnCurvState& s, const AttnBatchStats& stats);
void update_attn_ema(AttnCurvState& s, const nn::AttentionCapture& cap);
void rebuild_attn_factor(AttnCurvState& s);

// G is the fused [3d x d] block (dL/dW_qkv)^T. Rows [0, 2d) (query and key)
// are right-multiplied by the factor from x_hat, rows [2d, 3d) by the factor
// from v_hat.
Tensor precondition_attn(const Tensor& g, const Tensor& x_hat, double rho_x, const Tensor& v_hat, double rho_v);

// Explicit empirical Fisher E_b[vec(dW) vec(dW)^T] of one head's projection
// ('q', 'k' or 'v', each dW of shape [d x d_k]) assembled from the Kronecker
// forms of the per-example gradients. Desk-scale oracle only (N <= 6, d <= 8).
Tensor empirical_fim_attention(const nn::AttentionCapture& cap, char projection, std::size_t head);

// MAC (or SMAC with diag_p) rule for the fused QKV block.
class AttentionPreconditioner final : public BlockPreconditioner {
public:
    AttentionPreconditioner(std::size_t dim, std::size_t rows, const CurvatureConfig& cfg, bool diag_p);
    std::string tag() const override { return diag_p_ ? "smac-attn" : "mac-attn"; }
    void accumulate(const nn::Layer& layer, int block) override;
    void rebuild() override;
    Tensor apply(const Tensor& g) const override;
    std::size_t state_bytes() const override;
    void save(std::ostream& os) const override;
    void load(std::istream& is) override;
    const AttnCurvState& state() const { return state_; }

private:
    AttnCurvState state_;
    bool diag_p_;
    Tensor p_tilde_, p_hat_;
};

}  // namespace macgrad
