#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string_view>

namespace cascata {

// Dense math types. Double precision everywhere; row-major variants are used
// on the hot paths that gather/scatter rows (embeddings, message passing).
template <typename T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T>
using RowMatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using VectorT = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Matrix = MatrixT<double>;
using RowMatrix = RowMatrixT<double>;
using Vector = VectorT<double>;

// Interned user id (dense, assigned in first-seen order by the interner).
using UserId = std::int32_t;
// Index of a node inside one SocialGraph (dense, not the same as UserId).
using NodeIndex = std::int32_t;
// Index of a cascade in the cascade list / hypergraph node index.
using CascadeIndex = std::int32_t;
using ClusterId = std::int32_t;

inline constexpr NodeIndex kNoNode = -1;

// splitmix64; used to derive independent sub-seeds from one run seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull + b * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// FNV-1a. std::hash is implementation-defined; this keeps derived seeds
// stable across standard libraries.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace cascata
