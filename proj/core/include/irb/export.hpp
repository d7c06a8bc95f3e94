#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "irb/certify.hpp"
#include "irb/fixpoint.hpp"
#include "irb/grid.hpp"
#include "irb/scenario.hpp"

namespace irb {

/// Raised for unwritable or unreadable artifact paths.
class ExportError : public std::runtime_error {
 public:
  ExportError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Columns x, f<index[0]>, f<index[1]>, ...; all iterates must share a grid.
/// `index` defaults to 0, 1, 2, ...
void write_csv(std::ostream& os, const std::vector<GridFunction>& iterates,
               const std::vector<int>& index = {});
void export_csv(const std::vector<GridFunction>& iterates, const std::string& path,
                const std::vector<int>& index = {});

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};
CsvTable read_csv(std::istream& is);

/// One polyline per iterate on a 800x600 canvas.
void write_svg(std::ostream& os, const std::vector<GridFunction>& iterates,
               const std::vector<int>& index = {});
void export_svg(const std::vector<GridFunction>& iterates, const std::string& path,
                const std::vector<int>& index = {});

/// JSON with keys scenario, certificate, iterations, residuals, bounds, warnings.
std::string report_json(const Scenario& sc, const Certificate& cert, const IterationReport& rep);
void export_report(const Scenario& sc, const Certificate& cert, const IterationReport& rep,
                   const std::string& path);

}  // namespace irb
