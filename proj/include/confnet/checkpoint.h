// confnet/checkpoint.h

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

#ifndef CONFNET_CHECKPOINT_H_
#define CONFNET_CHECKPOINT_H_

#include <string>

#include "json.hpp"

#include "confnet/embeddings.h"
#include "confnet/encoder.h"
#include "confnet/model.h"

namespace confnet {

/// Everything needed to run inference: ontology, the frozen embedding
/// table (with its vocabulary), encoder parameters (with variant tag),
/// classifier parameters (with lambda), and the arc-truncation width the
/// model was trained with.
struct Checkpoint {
  Ontology ontology;
  EmbeddingTable table;
  EncoderParams encoder;
  ModelParams model;
  int max_arcs = 5;

  Checkpoint(Ontology ontology_in, EmbeddingTable table_in,
             EncoderParams encoder_in, ModelParams model_in, int max_arcs_in)
      : ontology(std::move(ontology_in)),
        table(std::move(table_in)),
        encoder(std::move(encoder_in)),
        model(std::move(model_in)),
        max_arcs(max_arcs_in) {}
};

nlohmann::json ontology_to_json(const Ontology& ontology);
Ontology ontology_from_json(const nlohmann::json& j);
Ontology load_ontology(const std::string& path);
void save_ontology(const Ontology& ontology, const std::string& path);

// Versioned checkpoint document.  Parameter arrays round-trip exactly:
// load(save(c)) reproduces every double bit for bit.
nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace confnet

#endif  // CONFNET_CHECKPOINT_H_
