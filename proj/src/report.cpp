#include "lhylab/report.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>

namespace lhy {

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json Report::to_json(bool with_timestamp) const {
  nlohmann::json j;
  j["command"] = command;
  j["params"] = params;
  j["results"] = results;
  j["errors"] = errors;
  j["warnings"] = warnings;
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    j["timestamp"] = buf;
  }
  return j;
}

std::string Report::serialize(bool with_timestamp) const {
  return to_json(with_timestamp).dump(2) + "\n";
}

std::string Report::config_hash() const {
  const std::string s = command + "\n" + params.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "quantity,Y,d,b,tau,value,err,meta\n";
  for (const auto& r : rows) {
    std::string meta = r.meta;
    if (!r.error.empty()) {
      if (!meta.empty()) meta += ";";
      meta += "error=" + r.error;
    }
    out += r.quantity + "," + format_double(r.Y) + "," + format_double(r.d) + "," +
           format_double(r.b) + "," + format_double(r.tau) + "," +
           format_double(r.value) + "," + format_double(r.err) + "," + meta + "\n";
  }
  return out;
}

}  // namespace lhy
