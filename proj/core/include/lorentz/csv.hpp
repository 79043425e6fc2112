#pragma once
/**
 * CSV formats. Every file opens with `# key=value` metadata lines followed by
 * a column header and data rows:
 *
 *   transition histogram:  s_bin,h_bin,count        (non-empty bins only)
 *   density grid:          x_bin,y_bin,theta_bin,weight (non-empty cells only)
 *
 * Doubles are written in shortest round-trip form, so identical runs produce
 * identical bytes and readers recover the exact values.
 */

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/kinetic.hpp"
#include "lorentz/transition.hpp"

namespace lorentz {

using CsvMeta = std::vector<std::pair<std::string, std::string>>;

std::string format_double(double v);
std::string join_doubles(const std::vector<double> &v);

void write_meta(std::ostream &os, const CsvMeta &meta);

/// Leading `# key=value` lines; stops before the first other line.
std::map<std::string, std::string> read_meta(std::istream &is);

void write_histogram_csv(std::ostream &os, const TransitionHistogram &h, const CsvMeta &extra = {});
TransitionHistogram read_histogram_csv(std::istream &is);

void write_density_csv(std::ostream &os, const DensityGrid &g, const CsvMeta &extra = {});
DensityGrid read_density_csv(std::istream &is);

/// Writes through a temporary sibling file renamed over `path` on success;
/// on failure the temporary is removed and `path` is left untouched.
void write_file_atomic(const std::filesystem::path &path, const std::function<void(std::ostream &)> &writer);

} // namespace lorentz
