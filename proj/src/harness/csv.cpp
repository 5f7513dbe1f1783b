#include <cstdio>
#include <fstream>
#include <string>

#include "irsim/harness.hpp"

namespace irsim::harness {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_string(const std::vector<ResultRow>& rows) {
  std::string out =
      "scenario,scheme,sweep,bits,power_dbm,trials,stderr_db,iters,infeasible\n";
  for (const ResultRow& r : rows) {
    out += r.scenario;
    out += ',';
    out += r.scheme;
    out += ',';
    out += fmt(r.sweep_value);
    out += ',';
    out += std::to_string(r.bits);
    out += ',';
    out += fmt(r.power_dbm);
    out += ',';
    out += std::to_string(r.trials);
    out += ',';
    out += fmt(r.stderr_db);
    out += ',';
    out += fmt(r.mean_iterations);
    out += ',';
    out += std::to_string(r.infeasible);
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  const std::string body = csv_string(rows);
  f.write(body.data(), std::streamsize(body.size()));
  if (!f) throw IoError("short write to " + path);
}

}  // namespace irsim::harness
