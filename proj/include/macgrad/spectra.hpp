#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "macgrad/nn.hpp"
#include "macgrad/tensor.hpp"

namespace macgrad {

struct KfSpectrum {
    Tensor a;     // top-k eigenvalues of A, descending
    Tensor p;     // top-k eigenvalues of P
    Tensor kron;  // top-k eigenvalues of A (x) P as sorted pairwise products
};

// Eigenvalues of A (x) P are all products mu * nu; the Kronecker matrix is
// never formed. k = 0 keeps everything.
KfSpectrum kf_spectrum(const Tensor& a, const Tensor& p, std::size_t k);

// Top-k of all pairwise products, descending.
Tensor kron_eigenvalues(const Tensor& ev_a, const Tensor& ev_p, std::size_t k);

struct Alignment {
    double cos_align = 0.0;     // |<v1(A), a_bar / |a_bar|>|
    double sigma_norm = 0.0;    // |A - a_bar a_bar^T|_F
    double mean_norm_sq = 0.0;  // |a_bar|^2
    double dk_bound = 0.0;      // 2 sqrt(2) sigma_norm / mean_norm_sq
    Tensor top_vector;
};

// Throws ContractError when a_bar is zero.
Alignment alignment(const Tensor& a, const Tensor& a_bar);

struct Prop1Result {
    double c = 0.0;               // |E|_F / (sqrt(m) |x_bar|)
    double epsilon_implied = 0.0;  // (1 + c)^2 - 1
    double rel_err = 0.0;         // |X^T X - m x_bar x_bar^T|_F / |X^T X|_F
    double lhs = 0.0;             // |B + B^T + E^T E|_F
    double rhs = 0.0;             // 2 sqrt(m) |x_bar| |E|_F + |E|_F^2
    bool bound_holds = false;
};

// X is [m x n] with rows as samples. Throws ContractError("zero-mean input")
// when x_bar vanishes.
Prop1Result prop1_check(const Tensor& x);

struct AttnSpectrum {
    Tensor singular_values;  // top-k, descending
    double cos_align = 0.0;  // |<top right singular vector, t_bar / |t_bar|>|
    double top_share = 0.0;  // sigma_1^2 / sum sigma_i^2
};

// T is one [N x N] attention matrix (or an average of several).
AttnSpectrum attention_spectrum(const Tensor& t, std::size_t k);

struct SpectralReport {
    std::string layer;
    long epoch = 0;
    std::string kind = "dense";  // dense | attention
    KfSpectrum spectrum;
    Alignment align;
    double prop1_c = 0.0;
    AttnSpectrum attn;  // kind == attention only
};

std::string report_json(const SpectralReport& r);

// Runs one forward/backward pass over (x, labels) and reports every dense
// block (A = a^T a / S, P = p^T p / S, a_bar = mean row of a including the
// bias column) and every attention layer's head- and batch-averaged T.
// Parameter gradients of the model are overwritten.
std::vector<SpectralReport> layer_reports(nn::Sequential& model, const Tensor& x, std::span<const int> labels,
                                          std::size_t top_k, long epoch = 0);

}  // namespace macgrad
