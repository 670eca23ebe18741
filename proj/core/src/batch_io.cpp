#include "freezelab/batch_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace freezelab {

nlohmann::ordered_json batch_header(const SampleBatch& batch) {
  nlohmann::ordered_json j;
  j["type"] = "header";
  j["law"] = batch.descriptor;
  j["dim"] = batch.dim;
  j["count"] = batch.count;
  j["seed"] = batch.seed;
  j["stream"] = batch.stream;
  return j;
}

namespace {

nlohmann::ordered_json header_with_config(const SampleBatch& batch,
                                          const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j = batch_header(batch);
  if (!config.is_null()) j["config"] = config;
  return j;
}

}  // namespace

void write_jsonl(std::ostream& out, const SampleBatch& batch,
                 const nlohmann::ordered_json& config) {
  out << header_with_config(batch, config).dump() << '\n';
  nlohmann::json row = nlohmann::json::array();
  for (std::size_t i = 0; i < batch.count; ++i) {
    row.clear();
    const double* r = batch.row(i);
    for (int c = 0; c < batch.dim; ++c) row.push_back(r[c]);
    out << row.dump() << '\n';
  }
}

void write_csv(std::ostream& out, const SampleBatch& batch,
               const nlohmann::ordered_json& config) {
  out << "# " << header_with_config(batch, config).dump() << '\n';
  for (int c = 0; c < batch.dim; ++c) {
    if (c > 0) out << ',';
    out << 'y' << (c + 1);
  }
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < batch.count; ++i) {
    const double* r = batch.row(i);
    for (int c = 0; c < batch.dim; ++c) {
      if (c > 0) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", r[c]);
      out << buf;
    }
    out << '\n';
  }
}

SampleBatch read_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_jsonl: empty stream");
  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("read_jsonl: bad header line: ") + e.what());
  }
  if (!header.is_object() || header.value("type", std::string()) != "header")
    throw std::runtime_error("read_jsonl: first line is not a header object");
  for (const char* key : {"law", "dim", "count", "seed", "stream"})
    if (!header.contains(key))
      throw std::runtime_error(std::string("read_jsonl: header missing field ") + key);

  SampleBatch batch;
  batch.descriptor = header["law"];
  batch.dim = header["dim"].get<int>();
  batch.count = header["count"].get<std::size_t>();
  batch.seed = header["seed"].get<std::uint64_t>();
  batch.stream = header["stream"].get<std::uint64_t>();
  if (batch.dim <= 0) throw std::runtime_error("read_jsonl: nonpositive dim");
  batch.data.reserve(batch.count * static_cast<std::size_t>(batch.dim));

  for (std::size_t i = 0; i < batch.count; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("read_jsonl: stream ended before all rows were read");
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("read_jsonl: bad row: ") + e.what());
    }
    if (!row.is_array() || static_cast<int>(row.size()) != batch.dim)
      throw std::runtime_error("read_jsonl: row has wrong arity");
    for (const auto& v : row) batch.data.push_back(v.get<double>());
  }
  return batch;
}

}  // namespace freezelab
