// confnet/numerics.cc

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

#include "confnet/numerics.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confnet/errors.h"

namespace confnet {

uint64_t Rng::uniform_int(uint64_t n) {
  if (n == 0) throw ValidationError("uniform_int: n must be positive");
  if (n == 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

Vec matvec(const Mat& m, const Vec& v) {
  if (m.cols() != v.size()) {
    std::ostringstream oss;
    oss << "matvec: dimension mismatch, matrix is " << m.rows() << "x"
        << m.cols() << " but vector has length " << v.size();
    throw ValidationError(oss.str());
  }
  return m * v;
}

Vec softmax(const Vec& logits) {
  if (logits.size() == 0) throw ValidationError("softmax: empty input");
  if (!all_finite(logits)) throw ValidationError("softmax: non-finite input");
  const double m = logits.maxCoeff();
  Vec e = (logits.array() - m).exp();
  return e / e.sum();
}

bool all_finite(const Mat& m) { return m.allFinite(); }
bool all_finite(const Vec& v) { return v.allFinite(); }

double grad_check(const std::function<double(const Vec&)>& f, const Vec& x,
                  const Vec& analytic, double step) {
  if (step <= 0.0) throw ValidationError("grad_check: step must be positive");
  if (analytic.size() != x.size()) {
    throw ValidationError("grad_check: gradient length does not match x");
  }
  double max_err = 0.0;
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + step;
    const double fp = f(probe);
    probe(i) = x(i) - step;
    const double fm = f(probe);
    probe(i) = x(i);
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw NumericError("grad_check: non-finite function evaluation");
    }
    const double central = (fp - fm) / (2.0 * step);
    const double denom =
        std::max(1e-8, std::abs(analytic(i)) + std::abs(central));
    max_err = std::max(max_err, std::abs(analytic(i) - central) / denom);
  }
  return max_err;
}

}  // namespace confnet
