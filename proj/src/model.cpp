#include "cascata/model.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace cascata {

HyperIncidence HyperIncidence::from(const CascadeHypergraph& h) {
  HyperIncidence s;
  s.n = h.node_count;
  s.edges = h.hyperedges;
  s.coeff.resize(h.hyperedges.size());
  for (std::size_t j = 0; j < h.hyperedges.size(); ++j)
    s.coeff[j] = h.hyperedge_weights[j] / static_cast<double>(h.hyperedges[j].size());
  s.dvinv.resize(h.node_count);
  for (std::int32_t i = 0; i < h.node_count; ++i)
    s.dvinv[i] = h.node_degree[i] > 0 ? 1.0 / std::sqrt(static_cast<double>(h.node_degree[i])) : 0.0;
  return s;
}

RowMatrix HyperIncidence::apply(const RowMatrix& x) const {
  if (x.rows() != n) throw std::invalid_argument("incidence apply: row count mismatch");
  RowMatrix y = RowMatrix::Zero(n, x.cols());
  Eigen::RowVectorXd acc(x.cols());
  for (std::size_t j = 0; j < edges.size(); ++j) {
    acc.setZero();
    for (std::int32_t i : edges[j]) acc += dvinv[i] * x.row(i);
    acc *= coeff[j];
    for (std::int32_t i : edges[j]) y.row(i) += dvinv[i] * acc;
  }
  return y;
}

ModelParams init_params(const TrainConfig& cfg, int d_in, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, fnv1a64("init")));
  auto glorot = [&rng](Eigen::Index rows, Eigen::Index cols) {
    double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> u(-limit, limit);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = u(rng);
    return m;
  };

  ModelParams p;
  p.conv.resize(std::max(1, cfg.num_conv_layers));
  int in = d_in;
  for (auto& layer : p.conv) {
    layer.theta = glorot(in, cfg.hidden_dim);
    layer.bias = Vector::Zero(cfg.hidden_dim);
    in = cfg.hidden_dim;
  }
  p.mlp.w1 = glorot(cfg.hidden_dim, cfg.mlp_hidden1);
  p.mlp.b1 = Vector::Zero(cfg.mlp_hidden1);
  p.mlp.w2 = glorot(cfg.mlp_hidden1, cfg.mlp_hidden2);
  p.mlp.b2 = Vector::Zero(cfg.mlp_hidden2);
  p.mlp.w3 = glorot(cfg.mlp_hidden2, 2);
  p.mlp.b3 = Vector::Zero(2);
  return p;
}

RowMatrix hyperconv_forward(const RowMatrix& x, const HyperIncidence& s,
                            const HyperConvParams& p) {
  if (x.cols() != p.theta.rows()) throw std::invalid_argument("hyperconv: feature dim mismatch");
  RowMatrix y = s.apply((x * p.theta).eval());
  y.rowwise() += p.bias.transpose();
  return y;
}

RowMatrix hyperconv_forward(const RowMatrix& x, const CascadeHypergraph& h,
                            const HyperConvParams& p) {
  return hyperconv_forward(x, HyperIncidence::from(h), p);
}

DropoutMasks make_dropout_masks(std::int32_t n, const TrainConfig& cfg, std::mt19937_64& rng) {
  DropoutMasks m;
  const double p = cfg.dropout;
  auto fill = [&](Eigen::Index cols) {
    RowMatrix mask = RowMatrix::Constant(n, cols, 1.0);
    if (p > 0.0) {
      std::bernoulli_distribution keep(1.0 - p);
      const double scale = 1.0 / (1.0 - p);
      for (Eigen::Index i = 0; i < mask.rows(); ++i)
        for (Eigen::Index j = 0; j < cols; ++j) mask(i, j) = keep(rng) ? scale : 0.0;
    }
    return mask;
  };
  m.m1 = fill(cfg.mlp_hidden1);
  m.m2 = fill(cfg.mlp_hidden2);
  return m;
}

namespace {

RowMatrix relu(const RowMatrix& z) { return z.cwiseMax(0.0); }

}  // namespace

RowMatrix forward(const RowMatrix& x, const HyperIncidence& s, const ModelParams& p,
                  const DropoutMasks* masks, ForwardCache* cache) {
  ForwardCache local;
  ForwardCache& c = cache ? *cache : local;
  c.conv_in.clear();
  c.conv_z.clear();

  RowMatrix a = x;
  for (const auto& layer : p.conv) {
    c.conv_in.push_back(a);
    RowMatrix z = hyperconv_forward(a, s, layer);
    c.conv_z.push_back(z);
    a = relu(z);
  }
  c.a0 = a;

  c.z1 = (a * p.mlp.w1).rowwise() + p.mlp.b1.transpose();
  c.r1 = relu(c.z1);
  c.d1 = masks ? c.r1.cwiseProduct(masks->m1).eval() : c.r1;

  c.z2 = (c.d1 * p.mlp.w2).rowwise() + p.mlp.b2.transpose();
  c.r2 = relu(c.z2);
  c.d2 = masks ? c.r2.cwiseProduct(masks->m2).eval() : c.r2;

  c.logits = (c.d2 * p.mlp.w3).rowwise() + p.mlp.b3.transpose();
  return c.logits;
}

double loss_and_grads(const RowMatrix& x, const HyperIncidence& s, const ModelParams& p,
                      std::span<const std::int32_t> labels,
                      std::span<const std::int32_t> mask, const DropoutMasks& masks,
                      Gradients& out) {
  if (mask.empty()) throw std::invalid_argument("loss: empty train mask");

  ForwardCache c;
  forward(x, s, p, &masks, &c);

  const double inv_m = 1.0 / static_cast<double>(mask.size());
  double loss = 0.0;
  RowMatrix dz3 = RowMatrix::Zero(c.logits.rows(), 2);
  for (std::int32_t i : mask) {
    const double a = c.logits(i, 0), b = c.logits(i, 1);
    const double mx = std::max(a, b);
    const double lse = mx + std::log(std::exp(a - mx) + std::exp(b - mx));
    const std::int32_t y = labels[i];
    loss += (lse - c.logits(i, y)) * inv_m;
    const double p0 = std::exp(a - lse);
    const double p1 = std::exp(b - lse);
    dz3(i, 0) = (p0 - (y == 0 ? 1.0 : 0.0)) * inv_m;
    dz3(i, 1) = (p1 - (y == 1 ? 1.0 : 0.0)) * inv_m;
  }

  out.conv.resize(p.conv.size());
  out.mlp.w3 = c.d2.transpose() * dz3;
  out.mlp.b3 = dz3.colwise().sum();
  RowMatrix dd2 = dz3 * p.mlp.w3.transpose();
  RowMatrix dz2 = dd2.cwiseProduct(masks.m2)
                      .cwiseProduct((c.z2.array() > 0.0).cast<double>().matrix());

  out.mlp.w2 = c.d1.transpose() * dz2;
  out.mlp.b2 = dz2.colwise().sum();
  RowMatrix dd1 = dz2 * p.mlp.w2.transpose();
  RowMatrix dz1 = dd1.cwiseProduct(masks.m1)
                      .cwiseProduct((c.z1.array() > 0.0).cast<double>().matrix());

  out.mlp.w1 = c.a0.transpose() * dz1;
  out.mlp.b1 = dz1.colwise().sum();
  RowMatrix da = dz1 * p.mlp.w1.transpose();

  for (int l = static_cast<int>(p.conv.size()) - 1; l >= 0; --l) {
    RowMatrix dz = da.cwiseProduct((c.conv_z[l].array() > 0.0).cast<double>().matrix());
    RowMatrix dagg = s.apply(dz);  // S is symmetric
    out.conv[l].theta = c.conv_in[l].transpose() * dagg;
    out.conv[l].bias = dz.colwise().sum();
    da = dagg * p.conv[l].theta.transpose();
  }
  return loss;
}

Metrics metrics_from_predictions(std::span<const std::int32_t> y_true,
                                 std::span<const std::int32_t> y_pred) {
  Metrics m;
  std::array<std::array<std::int64_t, 2>, 2> confusion{};  // [true][pred]
  std::int64_t correct = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    ++confusion[y_true[i]][y_pred[i]];
    if (y_true[i] == y_pred[i]) ++correct;
  }
  const auto total = static_cast<std::int64_t>(y_true.size());
  m.accuracy = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  for (int c = 0; c < 2; ++c) {
    const auto tp = confusion[c][c];
    const auto fp = confusion[1 - c][c];
    const auto fn = confusion[c][1 - c];
    m.support[c] = confusion[c][0] + confusion[c][1];
    m.precision[c] = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    m.recall[c] = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1[c] = m.precision[c] + m.recall[c] > 0
                  ? 2.0 * m.precision[c] * m.recall[c] / (m.precision[c] + m.recall[c])
                  : 0.0;
    if (total > 0)
      m.f1_weighted += static_cast<double>(m.support[c]) / static_cast<double>(total) * m.f1[c];
  }
  return m;
}

namespace {

std::vector<Matrix*> matrix_tensors(ModelParams& p) {
  std::vector<Matrix*> t;
  for (auto& c : p.conv) t.push_back(&c.theta);
  t.push_back(&p.mlp.w1);
  t.push_back(&p.mlp.w2);
  t.push_back(&p.mlp.w3);
  return t;
}

std::vector<Vector*> vector_tensors(ModelParams& p) {
  std::vector<Vector*> t;
  for (auto& c : p.conv) t.push_back(&c.bias);
  t.push_back(&p.mlp.b1);
  t.push_back(&p.mlp.b2);
  t.push_back(&p.mlp.b3);
  return t;
}

ModelParams zeros_like(const ModelParams& p) {
  ModelParams z = p;
  for (auto& c : z.conv) {
    c.theta.setZero();
    c.bias.setZero();
  }
  z.mlp.w1.setZero();
  z.mlp.w2.setZero();
  z.mlp.w3.setZero();
  z.mlp.b1.setZero();
  z.mlp.b2.setZero();
  z.mlp.b3.setZero();
  return z;
}

}  // namespace

TrainResult train(const HyperIncidence& s, const RowMatrix& features,
                  std::span<const std::int32_t> labels,
                  std::span<const std::int32_t> train_mask, const TrainConfig& cfg) {
  if (train_mask.empty()) throw std::invalid_argument("train: empty train mask");
  bool saw[2] = {false, false};
  for (std::int32_t i : train_mask) {
    if (labels[i] != 0 && labels[i] != 1)
      throw std::invalid_argument("train: unlabeled node in train mask");
    saw[labels[i]] = true;
  }
  if (!saw[0] || !saw[1]) throw std::invalid_argument("train: single-class train mask");

  TrainResult res;
  res.params = init_params(cfg, static_cast<int>(features.cols()), cfg.seed);
  std::mt19937_64 mask_rng(mix_seed(cfg.seed, fnv1a64("dropout")));

  ModelParams m_state = zeros_like(res.params);
  ModelParams v_state = zeros_like(res.params);
  Gradients grads = zeros_like(res.params);
  const double b1 = 0.9, b2 = 0.999, eps = 1e-8;

  auto t0 = std::chrono::steady_clock::now();
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    DropoutMasks masks = make_dropout_masks(s.n, cfg, mask_rng);
    double loss = loss_and_grads(features, s, res.params, labels, train_mask, masks, grads);
    res.train_loss.push_back(loss);

    const int t = epoch + 1;
    auto step = [&](auto& param, auto& grad, auto& mm, auto& vv) {
      if (cfg.optimizer == Optimizer::Sgd) {
        param -= cfg.learning_rate * grad;
        return;
      }
      mm = b1 * mm + (1.0 - b1) * grad;
      vv = b2 * vv + (1.0 - b2) * grad.cwiseProduct(grad);
      const double bc1 = 1.0 - std::pow(b1, t);
      const double bc2 = 1.0 - std::pow(b2, t);
      param.array() -=
          cfg.learning_rate * (mm.array() / bc1) / ((vv.array() / bc2).sqrt() + eps);
    };

    auto pm = matrix_tensors(res.params), gm = matrix_tensors(grads);
    auto mm = matrix_tensors(m_state), vm = matrix_tensors(v_state);
    for (std::size_t i = 0; i < pm.size(); ++i) step(*pm[i], *gm[i], *mm[i], *vm[i]);
    auto pv = vector_tensors(res.params), gv = vector_tensors(grads);
    auto mv = vector_tensors(m_state), vvv = vector_tensors(v_state);
    for (std::size_t i = 0; i < pv.size(); ++i) step(*pv[i], *gv[i], *mv[i], *vvv[i]);
  }
  res.train_time_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<std::int32_t> predict(const ModelParams& params, const HyperIncidence& s,
                                  const RowMatrix& features) {
  RowMatrix logits = forward(features, s, params);
  std::vector<std::int32_t> pred(logits.rows());
  for (Eigen::Index i = 0; i < logits.rows(); ++i)
    pred[i] = logits(i, 1) > logits(i, 0) ? 1 : 0;
  return pred;
}

Metrics evaluate(const ModelParams& params, const HyperIncidence& s, const RowMatrix& features,
                 std::span<const std::int32_t> labels, std::span<const std::int32_t> test_mask) {
  if (test_mask.empty()) throw std::invalid_argument("evaluate: empty test mask");
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::int32_t> pred = predict(params, s, features);
  std::vector<std::int32_t> yt, yp;
  yt.reserve(test_mask.size());
  yp.reserve(test_mask.size());
  for (std::int32_t i : test_mask) {
    yt.push_back(labels[i]);
    yp.push_back(pred[i]);
  }
  Metrics m = metrics_from_predictions(yt, yp);
  m.inference_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

}  // namespace cascata
