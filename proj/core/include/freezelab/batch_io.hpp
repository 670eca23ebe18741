#pragma once

#include <iosfwd>

#include "freezelab/sampling.hpp"
#include "json.hpp"

namespace freezelab {

// Header object written in front of every sample stream: law descriptor plus
// dim/count/seed/stream, with an optional "config" echo appended by callers.
nlohmann::ordered_json batch_header(const SampleBatch& batch);

// JSONL: one header object line, then one JSON array of coordinates per row.
void write_jsonl(std::ostream& out, const SampleBatch& batch,
                 const nlohmann::ordered_json& config = nlohmann::ordered_json());

// CSV: the header object on a '#' comment line, a y1,...,yN column line, then
// one row per sample with round-trippable precision.
void write_csv(std::ostream& out, const SampleBatch& batch,
               const nlohmann::ordered_json& config = nlohmann::ordered_json());

// Parses a stream produced by write_jsonl; throws std::runtime_error on
// malformed input.
SampleBatch read_jsonl(std::istream& in);

}  // namespace freezelab
