#pragma once

#include <cstdint>
#include <cstring>
#include <string>

#include <Eigen/Dense>

namespace sgbn {

// FNV-1a, 64-bit. Used for run manifests and for tying derived artifacts
// (Fisher vectors, SVM models) to the exact parameter values that produced
// them. Not cryptographic.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const Eigen::MatrixXd& m, std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()), h);
}

inline std::uint64_t fnv1a64(const Eigen::VectorXd& v, std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(v.data(), sizeof(double) * static_cast<std::size_t>(v.size()), h);
}

std::string hex64(std::uint64_t value);

}  // namespace sgbn
