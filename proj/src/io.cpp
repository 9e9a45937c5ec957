#include "cascata/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cascata {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void dump_graph(const SocialGraph& g, const std::string& path) {
  auto out = open_out(path);
  out << "nodes " << g.node_count << " edges " << g.edge_count << '\n';
  for (NodeIndex s = 0; s < g.node_count; ++s)
    for (std::int64_t e = g.out_ptr[s]; e < g.out_ptr[s + 1]; ++e)
      out << s << ' ' << g.out_dst[e] << ' ' << g.out_ts[e] << '\n';
}

void dump_user_map(const UserInterner& interner, const std::string& path) {
  auto out = open_out(path);
  for (UserId u = 0; u < static_cast<UserId>(interner.size()); ++u)
    out << u << ' ' << interner.name_of(u) << '\n';
}

void dump_partition(const Partition& p, const std::string& path) {
  auto out = open_out(path);
  for (std::size_t v = 0; v < p.assignment.size(); ++v)
    out << v << ' ' << p.assignment[v] << '\n';
}

void dump_partition_summary(const Partition& p, std::uint64_t seed, const std::string& path) {
  nlohmann::json j{{"k", p.k},
                   {"edge_cut", p.edge_cut},
                   {"imbalance", p.imbalance},
                   {"seed", seed}};
  open_out(path) << j.dump(2) << '\n';
}

void dump_hypergraph(const CascadeHypergraph& h, const std::string& path) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < h.hyperedges.size(); ++j) {
    out << 'h' << ' ' << j;
    for (CascadeIndex c : h.hyperedges[j]) out << ' ' << c;
    out << '\n';
  }
}

void dump_hypergraph_labels(const CascadeHypergraph& h, const std::string& path) {
  auto out = open_out(path);
  for (std::int32_t i = 0; i < h.node_count; ++i)
    out << i << ' ' << to_string(h.labels[i]) << '\n';
}

void dump_feature_rows(const RowMatrix& rows, const std::string& path) {
  auto out = open_out(path);
  nlohmann::json header{{"rows", rows.rows()}, {"cols", rows.cols()}, {"layout", 1}};
  out << header.dump() << '\n';
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      if (j) out << ' ';
      out << fmt(rows(i, j));
    }
    out << '\n';
  }
}

RowMatrix load_feature_rows(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("feature file empty: " + path);
  auto header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.contains("rows") || !header.contains("cols") ||
      header.value("layout", 0) != 1)
    throw std::runtime_error("feature file has a bad header: " + path);
  const Eigen::Index m = header["rows"].get<Eigen::Index>();
  const Eigen::Index d = header["cols"].get<Eigen::Index>();
  RowMatrix rows(m, d);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (!(in >> rows(i, j))) throw std::runtime_error("feature file truncated: " + path);
  return rows;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto r = static_cast<Eigen::Index>(j.size());
  const auto c = r > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = j[i][k].get<double>();
  return m;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

}  // namespace

void save_checkpoint(const ModelParams& params, const TrainConfig& cfg, const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  j["config"] = {{"epochs", cfg.epochs},
                 {"dropout", cfg.dropout},
                 {"learning_rate", cfg.learning_rate},
                 {"optimizer", cfg.optimizer == Optimizer::Adam ? "adam" : "sgd"},
                 {"seed", cfg.seed},
                 {"hidden_dim", cfg.hidden_dim},
                 {"num_conv_layers", cfg.num_conv_layers},
                 {"mlp_hidden1", cfg.mlp_hidden1},
                 {"mlp_hidden2", cfg.mlp_hidden2}};
  j["conv"] = nlohmann::json::array();
  for (const auto& layer : params.conv)
    j["conv"].push_back(
        {{"theta", matrix_to_json(layer.theta)}, {"bias", vector_to_json(layer.bias)}});
  j["mlp"] = {{"w1", matrix_to_json(params.mlp.w1)}, {"b1", vector_to_json(params.mlp.b1)},
              {"w2", matrix_to_json(params.mlp.w2)}, {"b2", vector_to_json(params.mlp.b2)},
              {"w3", matrix_to_json(params.mlp.w3)}, {"b3", vector_to_json(params.mlp.b3)}};
  open_out(path) << j.dump() << '\n';
}

std::pair<ModelParams, TrainConfig> load_checkpoint(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("version", 0) != 1)
    throw std::runtime_error("bad checkpoint: " + path);

  TrainConfig cfg;
  const auto& c = j["config"];
  cfg.epochs = c["epochs"].get<int>();
  cfg.dropout = c["dropout"].get<double>();
  cfg.learning_rate = c["learning_rate"].get<double>();
  cfg.optimizer = c["optimizer"].get<std::string>() == "sgd" ? Optimizer::Sgd : Optimizer::Adam;
  cfg.seed = c["seed"].get<std::uint64_t>();
  cfg.hidden_dim = c["hidden_dim"].get<int>();
  cfg.num_conv_layers = c["num_conv_layers"].get<int>();
  cfg.mlp_hidden1 = c["mlp_hidden1"].get<int>();
  cfg.mlp_hidden2 = c["mlp_hidden2"].get<int>();

  ModelParams p;
  for (const auto& layer : j["conv"])
    p.conv.push_back({matrix_from_json(layer["theta"]), vector_from_json(layer["bias"])});
  p.mlp.w1 = matrix_from_json(j["mlp"]["w1"]);
  p.mlp.b1 = vector_from_json(j["mlp"]["b1"]);
  p.mlp.w2 = matrix_from_json(j["mlp"]["w2"]);
  p.mlp.b2 = vector_from_json(j["mlp"]["b2"]);
  p.mlp.w3 = matrix_from_json(j["mlp"]["w3"]);
  p.mlp.b3 = vector_from_json(j["mlp"]["b3"]);
  return {std::move(p), cfg};
}

}  // namespace cascata
