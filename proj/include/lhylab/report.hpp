#pragma once
// Machine-readable emission: one JSON report per command, fixed-schema CSV
// for sweeps. Key order in JSON is alphabetical (library default), so equal
// inputs serialize to equal bytes; the timestamp is the only run-varying
// field and carries its own line for easy exclusion from hashes.

#include <string>
#include <vector>

#include "json.hpp"

namespace lhy {

struct Report {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  nlohmann::json to_json(bool with_timestamp = true) const;
  std::string serialize(bool with_timestamp = true) const;
  std::string config_hash() const;  // FNV-1a over command + canonical params
};

struct SweepRow {
  std::string quantity;
  double Y = 0.0, d = 0.0, b = 0.0, tau = 0.0;
  double value = 0.0, err = 0.0;
  std::string meta;     // semicolon-separated key=value pairs, no commas
  std::string error;    // nonempty when the row failed
};

// header "quantity,Y,d,b,tau,value,err,meta"; failed rows put the message in
// meta as error=...; rows are emitted in the order given (callers sort by Y)
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace lhy
