#include "pipescope/irm_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pipescope/error.hpp"

namespace pipescope {

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
    text.remove_suffix(1);
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::ParseError, "not a number: '" + std::string(text) + "'");
  }
  return value;
}

void write_irm(std::ostream& os, const SampledIRM& irm, bool sparse) {
  const std::size_t n = irm.leaf_count();
  if (irm.k.size() != n * n) {
    throw Error(Errc::MismatchedSeriesLength, "kernel count does not match the leaf count");
  }
  nlohmann::json header;
  header["dt"] = irm.dt;
  header["n"] = irm.samples();
  header["horizon"] = irm.horizon;
  header["leaves"] = irm.leaves;
  header["direct"] = irm.direct;
  header["sparse"] = sparse;
  os << header.dump() << '\n' << "i,j,t,k\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& kern = irm.kernel(i, j);
      if (kern.size() != irm.samples()) {
        throw Error(Errc::MismatchedSeriesLength, "kernels differ in length");
      }
      for (std::size_t s = 0; s < kern.size(); ++s) {
        if (sparse && kern[s] == 0.0) continue;
        os << i << ',' << j << ',' << format_number(static_cast<double>(s) * irm.dt) << ','
           << format_number(kern[s]) << '\n';
      }
    }
  }
}

void write_irm(const std::string& path, const SampledIRM& irm, bool sparse) {
  std::ofstream os(path);
  if (!os) throw Error(Errc::ParseError, "cannot open '" + path + "' for writing");
  write_irm(os, irm, sparse);
}

SampledIRM read_irm(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::ParseError, "missing IRM header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad IRM header: ") + e.what());
  }
  SampledIRM irm;
  std::size_t samples = 0;
  bool sparse = false;
  try {
    irm.dt = header.at("dt").get<double>();
    samples = header.at("n").get<std::size_t>();
    irm.horizon = header.at("horizon").get<double>();
    irm.leaves = header.at("leaves").get<std::vector<std::string>>();
    irm.direct = header.at("direct").get<std::vector<double>>();
    sparse = header.value("sparse", false);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad IRM header: ") + e.what());
  }
  if (!(irm.dt > 0.0)) throw Error(Errc::ParseError, "IRM header needs dt > 0");
  const std::size_t n = irm.leaves.size();
  if (irm.direct.size() != n) throw Error(Errc::ParseError, "direct list must match leaves");
  irm.k.assign(n * n, std::vector<double>(samples, 0.0));
  std::vector<std::size_t> filled(n * n, 0);

  if (!std::getline(is, line) || line.rfind("i,j,t,k", 0) != 0) {
    throw Error(Errc::ParseError, "expected CSV header i,j,t,k");
  }
  std::size_t line_no = 2;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::string_view rest(line);
    std::string_view field[4];
    for (int f = 0; f < 4; ++f) {
      auto comma = rest.find(',');
      if (f < 3 && comma == std::string_view::npos) {
        throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 4 fields");
      }
      field[f] = rest.substr(0, f < 3 ? comma : rest.size());
      if (f < 3) rest.remove_prefix(comma + 1);
    }
    const double di = parse_number(field[0]);
    const double dj = parse_number(field[1]);
    const double t = parse_number(field[2]);
    const double k = parse_number(field[3]);
    const auto s = std::llround(t / irm.dt);
    if (di < 0 || dj < 0 || di >= static_cast<double>(n) || dj >= static_cast<double>(n) ||
        s < 0 || static_cast<std::size_t>(s) >= samples ||
        std::abs(static_cast<double>(s) * irm.dt - t) > 1e-6 * irm.dt) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": index out of range");
    }
    const auto idx = static_cast<std::size_t>(di) * n + static_cast<std::size_t>(dj);
    irm.k[idx][static_cast<std::size_t>(s)] = k;
    ++filled[idx];
  }
  if (!sparse) {
    for (std::size_t idx = 0; idx < filled.size(); ++idx) {
      if (filled[idx] != samples) {
        throw Error(Errc::MismatchedSeriesLength,
                    "kernel " + std::to_string(idx / n) + "," + std::to_string(idx % n) + " has " +
                        std::to_string(filled[idx]) + " of " + std::to_string(samples) +
                        " samples");
      }
    }
  }
  return irm;
}

SampledIRM read_irm(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  return read_irm(is);
}

}  // namespace pipescope
