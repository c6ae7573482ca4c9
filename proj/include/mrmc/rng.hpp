#pragma once
// Deterministic random-stream helpers. Every generator in the library is a
// pure function of (cfg, seed); sub-streams are derived by splitmix64 mixing
// so that independent quantities never share a stream.

#include <cstdint>
#include <random>
#include "mrmc/linalg.hpp"

namespace mrmc {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 substream(uint64_t seed, uint64_t stream_id) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream_id)));
}

inline cxd cgauss(std::mt19937_64& g) {
  static thread_local std::normal_distribution<double> n(0.0, 1.0);
  // unit-variance complex Gaussian: each component has variance 1/2
  return cxd(n(g) * M_SQRT1_2, n(g) * M_SQRT1_2);
}

inline CMat cgauss_mat(std::mt19937_64& g, int rows, int cols) {
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = cgauss(g);
  return m;
}

inline CVec cgauss_vec(std::mt19937_64& g, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = cgauss(g);
  return v;
}

}  // namespace mrmc
