// confnet/numerics.h

// Copyright 2026  The Confnet-DST Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CONFNET_NUMERICS_H_
#define CONFNET_NUMERICS_H_

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace confnet {

// All numerics are double precision.  Eigen is the dense backend; the
// rest of the library only sees these aliases and the free functions
// below.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Deterministic, portable random stream.  Wraps std::mt19937_64 (whose
/// output sequence is fixed by the C++ standard) and derives doubles and
/// bounded integers by hand, so equal seeds give equal streams on every
/// platform and standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).  Rejection sampling, no modulo bias.
  uint64_t uniform_int(uint64_t n);

  /// Fisher-Yates shuffle driven by uniform_int.  std::shuffle is not
  /// used because its draw pattern is implementation-defined.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// m * v with an explicit dimension check (Eigen would assert/abort).
Vec matvec(const Mat& m, const Vec& v);

/// Numerically stable softmax (max subtraction).  Output entries are in
/// (0,1) and sum to 1 within 1e-12.
Vec softmax(const Vec& logits);

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                  : std::exp(z) / (1.0 + std::exp(z));
}

bool all_finite(const Mat& m);
bool all_finite(const Vec& v);

/// Central-finite-difference gradient check.
///
/// Returns max over coordinates of
///   |analytic_i - central_i| / max(1e-8, |analytic_i| + |central_i|).
/// Throws NumericError if f evaluates to a non-finite value.
double grad_check(const std::function<double(const Vec&)>& f, const Vec& x,
                  const Vec& analytic, double step);

}  // namespace confnet

#endif  // CONFNET_NUMERICS_H_
