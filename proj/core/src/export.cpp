#include "irb/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace irb {

ExportError::ExportError(const std::string& path, const std::string& what)
    : std::runtime_error(path + ": " + what), path_(path) {}

namespace {

std::vector<int> labels(const std::vector<GridFunction>& iterates, const std::vector<int>& index) {
  if (iterates.empty()) throw std::invalid_argument("export needs at least one iterate");
  for (const auto& f : iterates) {
    if (!f.same_grid(iterates.front())) throw std::invalid_argument("export: iterates are on different grids");
  }
  if (index.empty()) {
    std::vector<int> out(iterates.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<int>(i);
    return out;
  }
  if (index.size() != iterates.size()) throw std::invalid_argument("export: index/iterate count mismatch");
  return index;
}

std::string g17(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError(path, "cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ExportError(path, "write failed");
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<GridFunction>& iterates, const std::vector<int>& index) {
  const std::vector<int> idx = labels(iterates, index);
  os << "x";
  for (int k : idx) os << ",f" << k;
  os << "\n";
  const GridFunction& g = iterates.front();
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << g17(g.x(i));
    for (const auto& f : iterates) os << ',' << g17(f[i]);
    os << "\n";
  }
}

void export_csv(const std::vector<GridFunction>& iterates, const std::string& path,
                const std::vector<int>& index) {
  auto out = open_out(path);
  write_csv(out, iterates, index);
  finish(out, path);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  t.header = split(line);
  t.columns.resize(t.header.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) throw std::runtime_error("csv: ragged row");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      const auto r = std::from_chars(cells[c].data(), cells[c].data() + cells[c].size(), v);
      if (r.ec != std::errc()) throw std::runtime_error("csv: bad number '" + cells[c] + "'");
      t.columns[c].push_back(v);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

void write_svg(std::ostream& os, const std::vector<GridFunction>& iterates, const std::vector<int>& index) {
  static constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd",
                                             "#d62728", "#8c564b", "#e377c2", "#17becf"};
  constexpr double kW = 800.0;
  constexpr double kH = 600.0;
  constexpr double kPad = 40.0;
  const std::vector<int> idx = labels(iterates, index);

  double lo = iterates.front()[0];
  double hi = lo;
  for (const auto& f : iterates) {
    for (double v : f.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const GridFunction& g = iterates.front();
  const auto px = [&](double x) { return kPad + (x - g.lo()) / (g.hi() - g.lo()) * (kW - 2 * kPad); };
  const auto py = [&](double y) { return kH - kPad - (y - lo) / (hi - lo) * (kH - 2 * kPad); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  os << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kW - 2 * kPad << "\" height=\""
     << kH - 2 * kPad << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  char buf[64];
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    const auto& f = iterates[k];
    os << "<polyline id=\"f" << idx[k] << "\" fill=\"none\" stroke=\"" << kPalette[k % std::size(kPalette)]
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(f.x(i)), py(f[i]));
      os << buf;
    }
    os << "\"/>\n";
  }
  std::snprintf(buf, sizeof buf, "%.6g", hi);
  os << "<text x=\"4\" y=\"" << kPad << "\" font-size=\"12\">" << buf << "</text>\n";
  std::snprintf(buf, sizeof buf, "%.6g", lo);
  os << "<text x=\"4\" y=\"" << kH - kPad << "\" font-size=\"12\">" << buf << "</text>\n";
  os << "</svg>\n";
}

void export_svg(const std::vector<GridFunction>& iterates, const std::string& path,
                const std::vector<int>& index) {
  auto out = open_out(path);
  write_svg(out, iterates, index);
  finish(out, path);
}

// ---------------------------------------------------------------------------

namespace {

// JSON has no infinity/NaN; such values become null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

}  // namespace

std::string report_json(const Scenario& sc, const Certificate& cert, const IterationReport& rep) {
  using nlohmann::json;
  json j;
  j["scenario"] = {
      {"name", sc.name},
      {"domain", {num(sc.a), num(sc.b)}},
      {"nx", sc.n_x},
      {"delta", num(sc.delta)},
      {"n", sc.n},
      {"nt", sc.n_t},
      {"space", sc.space.to_string()},
      {"tol", num(sc.tol)},
      {"kmax", sc.k_max},
      {"config", write_config(sc)},
  };
  j["certificate"] = {
      {"kind", to_string(cert.kind)},
      {"method", to_string(cert.method)},
      {"S", num(cert.S)},
      {"criterion", num(cert.criterion)},
      {"pass", cert.pass},
      {"n", cert.n},
      {"samples_t", cert.samples_t},
      {"samples_x", cert.samples_x},
      {"non_injective_probes", cert.non_injective_probes},
  };
  if (cert.kind == Certificate::Kind::bounded) {
    j["certificate"]["M"] = num(cert.M);
    j["certificate"]["M_resolution"] = num(cert.M_resolution);
  } else {
    j["certificate"]["L"] = num(cert.L);
    j["certificate"]["p"] = num(cert.p);
  }
  j["iterations"] = {{"count", rep.iterations}, {"converged", rep.converged}, {"kept", rep.kept_index}};
  j["residuals"] = json::array();
  for (double r : rep.residuals) j["residuals"].push_back(num(r));
  j["bounds"] = json::array();
  for (double b : rep.bounds) j["bounds"].push_back(num(b));
  j["warnings"] = rep.warnings;
  return j.dump(2) + "\n";
}

void export_report(const Scenario& sc, const Certificate& cert, const IterationReport& rep,
                   const std::string& path) {
  auto out = open_out(path);
  out << report_json(sc, cert, rep);
  finish(out, path);
}

}  // namespace irb
