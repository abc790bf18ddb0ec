#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "macgrad/tensor.hpp"

namespace macgrad {

// f(x) = (1/sqrt(m)) sum_r q_r relu(w_r^T x), q frozen.
struct TwoLayerNet {
    Tensor w;  // [m x d]
    Tensor q;  // [m]

    std::size_t width() const { return w.rows(); }
    static TwoLayerNet init(std::size_t m, std::size_t d, std::uint64_t seed);
};

struct RegressionData {
    Tensor x;  // [n x d], unit-norm rows
    Tensor y;  // [n], |y_i| <= 1
};

// Rows are Gaussian directions normalised to unit length; a candidate whose
// |cos| with an accepted row exceeds 1 - 1e-6 is redrawn.
RegressionData make_dataset(std::size_t n, std::size_t d, std::uint64_t seed);
bool rows_pairwise_non_parallel(const Tensor& x, double tol = 1e-6);

Tensor net_outputs(const TwoLayerNet& net, const Tensor& x);  // [n]
// J = du/dtheta with theta = vec(W) (column stacking), shape [n x m*d].
Tensor net_jacobian(const TwoLayerNet& net, const Tensor& x);

struct GramEstimate {
    Tensor sigma_inf;  // Monte-Carlo mean
    Tensor std_err;    // per-entry standard error
    double lambda_min = 0.0;     // of sigma_inf
    double lambda_se = 0.0;      // standard error of the Rayleigh quotient at its eigenvector
    double lambda_gamma = 0.0;   // lambda_min - 2 lambda_se
};

// Sigma_ij = E_w[x_i^T x_j 1(w^T x_i >= 0) 1(w^T x_j >= 0)], w ~ N(0, I).
// Warns on std::clog below 1000 samples.
GramEstimate gram_sigma_inf(const Tensor& x, std::size_t mc_samples, std::uint64_t seed);
// x_i^T x_j (pi - theta_ij) / (2 pi)
Tensor gram_closed_form(const Tensor& x);
// (1/m) sum_r x_i^T x_j 1(w_r^T x_i >= 0) 1(w_r^T x_j >= 0)
Tensor gram_finite(const Tensor& w, const Tensor& x);

// W <- W - eta * G (x_bar x_bar^T + rho I)^{-1}, G the gradient of
// 0.5 |u - y|^2 in matrix form; the inverse is applied by Sherman-Morrison.
void mac_ngd_step(TwoLayerNet& net, const Tensor& x, const Tensor& y, double eta, double rho);
Tensor loss_gradient(const TwoLayerNet& net, const Tensor& x, const Tensor& y);  // [m x d]

struct FactorCompare {
    double mean_norm_sq = 0.0;  // |x_bar|^2
    double lambda_max = 0.0;    // of X^T X (Rayleigh lower bound)
    double lambda_min = 0.0;    // of X^T X
    double ratio = 0.0;         // mean_norm_sq / lambda_max
};

// Throws ContractError if |x_bar|^2 > lambda_max. With `with_min` false the
// d x d eigendecomposition is skipped and lambda_min is left at zero.
FactorCompare convergence_factor_compare(const Tensor& x, bool with_min = true, double tol = 1e-12);

struct TraceRow {
    long iter = 0;
    double residual_sq = 0.0;
    double ratio = 0.0;   // residual_sq / previous residual_sq
    double factor = 0.0;  // 1 - eta lambda_gamma lambda_min(X^T X) / (2 (|x_bar|^2 + rho))
    double jacobian_drift = 0.0;
    double weight_drift = 0.0;
};

struct ConvergenceTrace {
    std::uint64_t seed = 0;
    std::size_t m = 0, n = 0, d = 0;
    double rho = 0.0, eta = 0.0, lambda_gamma = 0.0, lambda_max = 0.0, lambda_min = 0.0;
    double mean_norm_sq = 0.0, factor = 0.0, initial_residual = 0.0, drift_bound = 0.0;
    double sigma0_lambda_min = 0.0;  // finite-width Gram at initialisation
    double sigma_max_x = 0.0;
    std::vector<TraceRow> rows;
};

struct HarnessConfig {
    std::size_t m = 4096, n = 32, d = 10;
    double rho = 0.5;
    double eta_mult = 0.1;  // eta = eta_mult * rho / (lambda_max(X^T X) lambda_gamma)
    double eta = 0.0;       // > 0 overrides eta_mult
    long iters = 200;
    std::size_t mc_samples = 100000;
    std::uint64_t seed = 0;
};

// Builds data and network from `seed`, estimates lambda_gamma and runs
// `iters` MAC-NGD steps, recording drift diagnostics per iteration.
ConvergenceTrace run_harness(const HarnessConfig& cfg);

struct Theorem1Report {
    std::size_t iterations = 0;
    double bound_fraction = 0.0;     // ratio <= factor
    double monotone_fraction = 0.0;  // residual strictly decreased
    bool drift_always_ok = false;    // weight drift within bound every iteration
    double max_jacobian_drift = 0.0;
    double c_required = 0.0;         // C with drift = C rho / (2 sigma_max(X))
    bool lambda_gamma_positive = false;
    bool gram_condition = false;     // lambda_min(Sigma(0)) >= lambda_gamma / 2
    bool satisfied = false;          // >= 90% bound, >= 95% monotone, drift ok
    std::vector<std::string> violations;
};

Theorem1Report verify_theorem1(const ConvergenceTrace& trace);

std::string trace_row_json(const ConvergenceTrace& t, const TraceRow& r);
std::string trace_summary_json(const ConvergenceTrace& t, const Theorem1Report& rep);

}  // namespace macgrad
