#pragma once

#include "svm/grid.hpp"
#include "svm/sde.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace svm::io {

inline constexpr const char* csv_layout_version = "1";

/// Long-format field file: header "t,x,<name>..." and one row per (snapshot, node).
/// All columns must share the snapshot times and grid. Masked nodes print "nan".
void write_field_csv(const std::filesystem::path& path, const std::vector<std::pair<std::string, FieldSeries>>& columns);

/// Ensemble file: header "path,point,t,x0[,x1...]"; at most `max_paths` paths.
void write_ensemble_csv(const std::filesystem::path& path, const PathEnsemble& ensemble, std::size_t max_paths);

/// Reads a long-format field CSV written by write_field_csv.
[[nodiscard]] std::vector<std::pair<std::string, FieldSeries>> read_field_csv(const std::filesystem::path& path,
                                                                              const Grid1D& grid);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace svm::io
