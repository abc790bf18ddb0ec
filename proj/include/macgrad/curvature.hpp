#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "macgrad/nn.hpp"
#include "macgrad/tensor.hpp"

namespace macgrad {

inline constexpr double kRhoFloor = 1e-8;

// --- EMA helpers -------------------------------------------------------------

// value <- beta * value + (1 - beta) * x
void ema_update(Tensor& value, double beta, const Tensor& x);
// value / (1 - beta^k); throws StateError when k == 0.
Tensor ema_corrected(const Tensor& value, double beta, long k);
double ema_corrected(double value, double beta, long k);

// --- MAC state and operations ----------------------------------------------------

struct MacState {
    Tensor a_tilde;             // EMA of the batch-mean activation
    double trace_tilde = 0.0;   // EMA of trace(E[a a^T]), for adaptive damping
    long k_tau = 0;             // number of EMA updates applied
    double rho = 1.0;
    double beta2 = 0.95;
    bool adaptive = false;
    // Factor M = I - a_hat a_hat^T / (rho + |a_hat|^2), kept in rank-1 form.
    Tensor a_hat;

    static MacState make(std::size_t dim, double rho, double beta2, bool adaptive);
    std::size_t bytes() const;
};

void update_activation_ema(MacState& s, const Tensor& a_bar);
void update_activation_ema(MacState& s, const Tensor& a_bar, double second_moment_trace);
Tensor bias_correct(const MacState& s);

// Recomputes a_hat (and rho when adaptive) from the current EMA.
void rebuild_factor(MacState& s);

// Dense M = I - a a^T / (rho + |a|^2). Test and analysis use only.
Tensor build_mac_factor(const Tensor& a_hat, double rho);

// max(kRhoFloor, (trace - |a_hat|^2) / dim(a_hat))
double adaptive_rho(double second_moment_trace, const Tensor& a_hat);

// G M with M given densely.
Tensor precondition_mac_dense(const Tensor& g, const Tensor& m);
// G - (G a) a^T / (rho + |a|^2) without materialising M.
Tensor precondition_mac(const Tensor& g, const Tensor& a_hat, double rho);

// diag(p_hat + rho)^-1 G M
Tensor precondition_smac_dense(const Tensor& g, const Tensor& m, const Tensor& p_hat, double rho);
Tensor precondition_smac(const Tensor& g, const Tensor& a_hat, const Tensor& p_hat, double rho);

// (P + rho I)^-1 G (A + rho I)^-1
Tensor precondition_kfac(const Tensor& g, const Tensor& a, const Tensor& p, double rho);
// G (A + rho I)^-1
Tensor precondition_foof(const Tensor& g, const Tensor& a, double rho);
// (p p^T + rho I)^-1 G (a a^T + rho I)^-1, both inverses rank-1 closed form
Tensor precondition_eva(const Tensor& g, const Tensor& a_bar, const Tensor& p_bar, double rho);

// (v v^T + rho I)^-1 applied to the rows (right = true: G X^-1) or columns of G.
Tensor rank1_inverse_apply(const Tensor& g, const Tensor& v, double rho, bool right);

// Momentum step on a preconditioned gradient.
//   coupled:   v <- beta1 v + g + wd theta;  theta <- theta - lr v
//   decoupled: v <- beta1 v + g;             theta <- theta - lr v - lr wd theta
void apply_update(Tensor& theta, Tensor& velocity, const Tensor& g_hat, double lr, double beta1,
                  double weight_decay, bool decoupled);

// --- batch statistics ---------------------------------------------------------------

Tensor row_mean(const Tensor& a);               // [S x n] -> [n]
double mean_row_sq_norm(const Tensor& a);       // mean_i |a_i|^2
Tensor row_mean_sq(const Tensor& a);            // mean_i a_i^2 elementwise
Tensor second_moment(const Tensor& a);          // a^T a / S

// --- per-block preconditioners ---------------------------------------------------------

struct CurvatureConfig {
    double rho = 1.0;
    bool adaptive_rho = false;
    double beta2 = 0.95;
};

class BlockPreconditioner {
public:
    virtual ~BlockPreconditioner() = default;
    // Checkpoint section tag; differs per method so mismatched loads are caught.
    virtual std::string tag() const = 0;
    virtual void accumulate(const nn::Layer& layer, int block) = 0;
    virtual void rebuild() = 0;
    virtual Tensor apply(const Tensor& g) const = 0;
    virtual std::size_t state_bytes() const = 0;
    virtual void save(std::ostream& os) const = 0;
    virtual void load(std::istream& is) = 0;
};

// Builds the preconditioner for `kind` in {mac, smac, kfac, foof, eva};
// attention QKV blocks get the attention variant for mac/smac.
std::unique_ptr<BlockPreconditioner> make_preconditioner(const std::string& kind, const nn::BlockRef& block,
                                                         const CurvatureConfig& cfg);

class MacPreconditioner : public BlockPreconditioner {
public:
    MacPreconditioner(std::size_t in_dim, const CurvatureConfig& cfg);
    std::string tag() const override { return "mac"; }
    void accumulate(const nn::Layer& layer, int block) override;
    void accumulate_capture(const nn::DenseCapture& cap);
    void rebuild() override;
    Tensor apply(const Tensor& g) const override;
    std::size_t state_bytes() const override { return state_.bytes(); }
    void save(std::ostream& os) const override;
    void load(std::istream& is) override;
    const MacState& state() const { return state_; }
    // Installs a factor built from a precomputed mean activation.
    void seed_factor(const Tensor& a_bar);

protected:
    MacState state_;
};

class SmacPreconditioner final : public MacPreconditioner {
public:
    SmacPreconditioner(std::size_t out_dim, std::size_t in_dim, const CurvatureConfig& cfg);
    std::string tag() const override { return "smac"; }
    void accumulate(const nn::Layer& layer, int block) override;
    void rebuild() override;
    Tensor apply(const Tensor& g) const override;
    std::size_t state_bytes() const override;
    void save(std::ostream& os) const override;
    void load(std::istream& is) override;

    // Pins p_hat (testing the reduction to MAC); survives rebuilds.
    void override_p_hat(Tensor p_hat);
    const Tensor& p_hat() const { return p_hat_; }

private:
    Tensor p_tilde_, p_hat_;
    bool p_pinned_ = false;
};

class KfacPreconditioner final : public BlockPreconditioner {
public:
    // foof = true drops the P factor.
    KfacPreconditioner(std::size_t out_dim, std::size_t in_dim, const CurvatureConfig& cfg, bool foof);
    std::string tag() const override { return foof_ ? "foof" : "kfac"; }
    void accumulate(const nn::Layer& layer, int block) override;
    void rebuild() override;
    Tensor apply(const Tensor& g) const override;
    std::size_t state_bytes() const override;
    void save(std::ostream& os) const override;
    void load(std::istream& is) override;

private:
    bool foof_;
    double rho_, beta2_;
    long k_tau_ = 0;
    Tensor a_ema_, p_ema_;   // EMA of E[a a^T], E[p p^T]
    Tensor a_inv_, p_inv_;   // (A + rho I)^-1, (P + rho I)^-1; identity before the first rebuild
};

class EvaPreconditioner final : public BlockPreconditioner {
public:
    EvaPreconditioner(std::size_t out_dim, std::size_t in_dim, const CurvatureConfig& cfg);
    std::string tag() const override { return "eva"; }
    void accumulate(const nn::Layer& layer, int block) override;
    void rebuild() override;
    Tensor apply(const Tensor& g) const override;
    std::size_t state_bytes() const override;
    void save(std::ostream& os) const override;
    void load(std::istream& is) override;

private:
    double rho_, beta2_;
    long k_tau_ = 0;
    Tensor a_tilde_, p_tilde_, a_hat_, p_hat_;
};

}  // namespace macgrad
