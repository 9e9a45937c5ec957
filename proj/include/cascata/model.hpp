#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cascata/hypergraph.hpp"
#include "cascata/types.hpp"

namespace cascata {

// Sparse form of S = D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}. S is symmetric,
// so the same apply serves forward and backward. Isolated nodes get
// d_v^{-1/2} = 0 and pass nothing through the aggregation.
struct HyperIncidence {
  std::int32_t n = 0;
  std::vector<std::vector<std::int32_t>> edges;
  std::vector<double> coeff;  // per edge: weight / d_e
  std::vector<double> dvinv;  // per node: d_v^{-1/2}, 0 when isolated

  static HyperIncidence from(const CascadeHypergraph& h);
  RowMatrix apply(const RowMatrix& x) const;
};

struct HyperConvParams {
  Matrix theta;  // D_in x D_out
  Vector bias;   // D_out
};

struct MlpParams {
  Matrix w1, w2, w3;
  Vector b1, b2, b3;
};

struct ModelParams {
  std::vector<HyperConvParams> conv;  // stacked conv layers, each ReLU-activated
  MlpParams mlp;
};

using Gradients = ModelParams;

enum class Optimizer { Adam, Sgd };

struct TrainConfig {
  int epochs = 100;
  double dropout = 0.5;
  double learning_rate = 5e-4;
  Optimizer optimizer = Optimizer::Adam;
  std::uint64_t seed = 0;
  int hidden_dim = 64;
  int num_conv_layers = 1;
  int mlp_hidden1 = 32;
  int mlp_hidden2 = 16;
};

ModelParams init_params(const TrainConfig& cfg, int d_in, std::uint64_t seed);

// X' = S X Theta + bias. Throws on row/shape mismatch.
RowMatrix hyperconv_forward(const RowMatrix& x, const HyperIncidence& s,
                            const HyperConvParams& p);
RowMatrix hyperconv_forward(const RowMatrix& x, const CascadeHypergraph& h,
                            const HyperConvParams& p);

// Inverted-dropout masks holding 0 or 1/(1-p); identical masks make training
// steps and finite-difference probes see the same network.
struct DropoutMasks {
  RowMatrix m1, m2;
};

DropoutMasks make_dropout_masks(std::int32_t n, const TrainConfig& cfg, std::mt19937_64& rng);

struct ForwardCache {
  std::vector<RowMatrix> conv_in;  // input to each conv layer
  std::vector<RowMatrix> conv_z;   // pre-activation of each conv layer
  RowMatrix a0;                    // conv stack output after ReLU
  RowMatrix z1, r1, d1;
  RowMatrix z2, r2, d2;
  RowMatrix logits;
};

// conv stack -> lin -> ReLU -> drop -> lin -> ReLU -> drop -> lin. Pass masks
// only when training; null masks mean a plain inference pass.
RowMatrix forward(const RowMatrix& x, const HyperIncidence& s, const ModelParams& p,
                  const DropoutMasks* masks = nullptr, ForwardCache* cache = nullptr);

// Mean softmax cross-entropy over the masked nodes plus full reverse-mode
// gradients. labels[i] in {0,1} for labeled nodes, -1 elsewhere.
double loss_and_grads(const RowMatrix& x, const HyperIncidence& s, const ModelParams& p,
                      std::span<const std::int32_t> labels,
                      std::span<const std::int32_t> mask, const DropoutMasks& masks,
                      Gradients& out);

struct Metrics {
  double accuracy = 0.0;
  double f1_weighted = 0.0;
  std::array<double, 2> precision{};
  std::array<double, 2> recall{};
  std::array<double, 2> f1{};
  std::array<std::int64_t, 2> support{};
  double inference_time_sec = 0.0;
};

Metrics metrics_from_predictions(std::span<const std::int32_t> y_true,
                                 std::span<const std::int32_t> y_pred);

struct TrainResult {
  ModelParams params;
  std::vector<double> train_loss;  // one entry per epoch
  double train_time_sec = 0.0;
};

TrainResult train(const HyperIncidence& s, const RowMatrix& features,
                  std::span<const std::int32_t> labels,
                  std::span<const std::int32_t> train_mask, const TrainConfig& cfg);

Metrics evaluate(const ModelParams& params, const HyperIncidence& s, const RowMatrix& features,
                 std::span<const std::int32_t> labels, std::span<const std::int32_t> test_mask);

std::vector<std::int32_t> predict(const ModelParams& params, const HyperIncidence& s,
                                  const RowMatrix& features);

}  // namespace cascata
