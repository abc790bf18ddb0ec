#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "macgrad/curvature.hpp"
#include "macgrad/nn.hpp"

namespace macgrad {

struct OptimizerConfig {
    std::string kind = "mac";  // mac | smac | kfac | foof | eva | sgd | adamw
    double lr = 0.1;
    double momentum = 0.9;
    double weight_decay = 5e-4;
    bool decoupled_wd = false;
    double damping = 1.0;
    bool adaptive_damping = false;
    double ema_beta2 = 0.95;
    long tau_cov = 5;
    long tau_inv = 50;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    // Shipped defaults per method (desk analogues of the CIFAR tables).
    static OptimizerConfig profile(const std::string& kind);
    bool uses_curvature() const;
    void validate() const;  // throws ConfigError

    friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

const std::vector<std::string>& optimizer_kinds();

struct BlockBytes {
    std::string name;
    std::size_t bytes = 0;
};

class Optimizer {
public:
    Optimizer(nn::Sequential& model, OptimizerConfig cfg);

    // Consumes the gradients and captures left by the last backward pass.
    // Step numbering starts at 1; statistics are folded in when
    // step % tau_cov == 0 and factors rebuilt when step % tau_inv == 0.
    // Throws NumericError on non-finite updates or unusable factors.
    void step(double lr);

    long steps() const { return step_; }
    const OptimizerConfig& config() const { return cfg_; }
    std::size_t block_count() const { return precond_.size(); }
    BlockPreconditioner* preconditioner(std::size_t i) { return precond_.at(i).get(); }
    std::vector<BlockBytes> state_bytes() const;
    std::size_t total_state_bytes() const;

    void save(std::ostream& os) const;
    // Throws StateError when the stream holds state for another method or model.
    void load(std::istream& is);

private:
    nn::Sequential* model_;
    OptimizerConfig cfg_;
    std::vector<nn::BlockRef> blocks_;
    std::vector<std::unique_ptr<BlockPreconditioner>> precond_;
    std::vector<Tensor> velocity_;  // one per parameter; Adam first moment
    std::vector<Tensor> second_;    // Adam second moment
    long step_ = 0;
};

}  // namespace macgrad
