// confnet/confnet-json.h

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

#ifndef CONFNET_CONFNET_JSON_H_
#define CONFNET_CONFNET_JSON_H_

#include <string>

#include "json.hpp"

#include "confnet/confusion-network.h"

namespace confnet {

// Document format:
//   {"utterance_id": str,
//    "positions": [[{"token": str, "score": float}, ...], ...]}
// A one-confnet-per-line JSONL stream is the batch format.

/// Parses and validates one confnet document.  Errors name the offending
/// position index.
ConfusionNetwork parse_confnet(const std::string& text);

ConfusionNetwork confnet_from_json(const nlohmann::json& doc);
nlohmann::json confnet_to_json(const ConfusionNetwork& net);

/// Single-line serialization for JSONL streams.
std::string confnet_to_jsonl(const ConfusionNetwork& net);

}  // namespace confnet

#endif  // CONFNET_CONFNET_JSON_H_
