// confnet/gradcheck.h

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

#ifndef CONFNET_GRADCHECK_H_
#define CONFNET_GRADCHECK_H_

#include "confnet/encoder.h"
#include "confnet/model.h"

namespace confnet {

struct GradCheckConfig {
  int instances = 20;
  int emb_dim = 8;
  int hidden_dim = 8;
  int max_positions = 4;
  int max_arcs = 4;
  double lambda = 0.5;
  double step = 1e-5;
};

/// Checks the encoder backward pass alone on seeded random instances:
/// analytic w1/w2 gradients of a random linear functional of the encoded
/// sequence against central finite differences.  Returns the max relative
/// error over all instances.
double encoder_grad_check(Variant variant, uint64_t seed,
                          const GradCheckConfig& config = {});

/// Checks the full pipeline (encoder + context map + scorers + combined
/// loss with the similarity branch) the same way, over all trainable
/// parameters.
double full_model_grad_check(Variant variant, uint64_t seed,
                             const GradCheckConfig& config = {});

}  // namespace confnet

#endif  // CONFNET_GRADCHECK_H_
