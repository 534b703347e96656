#include "hrsg/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hrsg {
namespace {

std::string num(Scalar v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace: " + path);
  out << kTraceCsvHeader << "\n";
  for (const TraceRecord& rec : trace) {
    out << num(rec.t) << "," << num(rec.r) << "," << num(rec.y) << "," << num(rec.e)
        << "," << num(rec.u) << "," << num(rec.gains.kp) << "," << num(rec.gains.ki)
        << "," << num(rec.gains.kff) << "," << num(rec.fault_flow) << "," << num(rec.tgt)
        << "," << num(rec.x1) << "," << num(rec.x2) << ",";
    if (rec.loss) out << num(rec.loss->data_loss);
    out << ",";
    if (rec.loss) out << num(rec.loss->physics_loss);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failure on trace: " + path);
}

Trace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read trace: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader)
    throw std::runtime_error("unexpected trace header in " + path);

  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    while (cells.size() < 14) cells.emplace_back();  // trailing empties
    if (cells.size() != 14)
      throw std::runtime_error("malformed trace row in " + path + ": " + line);

    TraceRecord rec;
    rec.t = std::stod(cells[0]);
    rec.r = std::stod(cells[1]);
    rec.y = std::stod(cells[2]);
    rec.e = std::stod(cells[3]);
    rec.u = std::stod(cells[4]);
    rec.gains.kp = std::stod(cells[5]);
    rec.gains.ki = std::stod(cells[6]);
    rec.gains.kff = std::stod(cells[7]);
    rec.fault_flow = std::stod(cells[8]);
    rec.tgt = std::stod(cells[9]);
    rec.x1 = std::stod(cells[10]);
    rec.x2 = std::stod(cells[11]);
    if (!cells[12].empty() && !cells[13].empty()) {
      PinnLossBreakdown loss;
      loss.data_loss = std::stod(cells[12]);
      loss.physics_loss = std::stod(cells[13]);
      rec.loss = loss;
    }
    trace.push_back(rec);
  }
  return trace;
}

}  // namespace hrsg
