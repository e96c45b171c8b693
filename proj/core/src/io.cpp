#include "svm/io.hpp"

#include "svm/errors.hpp"
#include "svm/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace svm::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    return out;
}

double parse_cell(const std::string& cell) {
    if (cell == "nan") return std::nan("");
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw Error("malformed CSV number '" + cell + "'");
    return v;
}

}  // namespace

void write_field_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, FieldSeries>>& columns) {
    if (columns.empty()) throw InvalidArgument("write_field_csv: no columns");
    const FieldSeries& lead = columns.front().second;
    for (const auto& [name, series] : columns) {
        if (series.size() != lead.size()) throw InvalidArgument("write_field_csv: column '" + name + "' length differs");
        for (std::size_t k = 0; k < series.size(); ++k) {
            require_same_grid(series[k].grid(), lead[k].grid(), "write_field_csv");
            if (series[k].time() != lead[k].time())
                throw InvalidArgument("write_field_csv: column '" + name + "' snapshot times differ");
        }
    }
    auto out = open_out(path);
    std::string line = "t,x";
    for (const auto& c : columns) line += "," + c.first;
    out << line << '\n';
    fmt::memory_buffer buf;
    for (std::size_t k = 0; k < lead.size(); ++k) {
        const GridField& f = lead[k];
        const double t = f.time().value_or(std::nan(""));
        for (std::size_t i = 0; i < f.size(); ++i) {
            buf.clear();
            fmt::format_to(std::back_inserter(buf), "{},{}", format_double(t), format_double(f.grid().x(i)));
            for (const auto& c : columns) {
                const GridField& g = c.second[k];
                fmt::format_to(std::back_inserter(buf), ",{}", g.valid(i) ? format_double(g[i]) : "nan");
            }
            buf.push_back('\n');
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
    }
}

void write_ensemble_csv(const std::filesystem::path& path, const PathEnsemble& ensemble, std::size_t max_paths) {
    auto out = open_out(path);
    std::string header = "path,point,t";
    for (std::size_t d = 0; d < ensemble.dim(); ++d) header += ",x" + std::to_string(d);
    out << header << '\n';
    const std::size_t n = std::min(max_paths, ensemble.n_paths());
    fmt::memory_buffer buf;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t j = 0; j < ensemble.grid().n_points(); ++j) {
            buf.clear();
            fmt::format_to(std::back_inserter(buf), "{},{},{}", p, j, format_double(ensemble.grid().time(j)));
            for (double x : ensemble.point(p, j)) fmt::format_to(std::back_inserter(buf), ",{}", format_double(x));
            buf.push_back('\n');
            out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        }
    }
}

std::vector<std::pair<std::string, FieldSeries>> read_field_csv(const std::filesystem::path& path,
                                                                const Grid1D& grid) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV '" + path.string() + "'");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 3 || header[0] != "t" || header[1] != "x") throw Error("field CSV header must start with t,x");
    const std::size_t n_cols = header.size() - 2;
    const std::size_t n_nodes = grid.size();
    std::vector<std::vector<double>> values(n_cols);
    std::vector<double> snapshot_times;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(parse_cell(cell));
        if (cells.size() != header.size()) throw Error("field CSV row " + std::to_string(row + 2) + " has wrong width");
        if (row % n_nodes == 0) snapshot_times.push_back(cells[0]);
        for (std::size_t c = 0; c < n_cols; ++c) values[c].push_back(cells[c + 2]);
        ++row;
    }
    if (row % n_nodes != 0) throw Error("field CSV row count is not a multiple of the grid size");
    std::vector<std::pair<std::string, FieldSeries>> out;
    for (std::size_t c = 0; c < n_cols; ++c) {
        FieldSeries s;
        for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
            std::vector<double> v(values[c].begin() + static_cast<std::ptrdiff_t>(k * n_nodes),
                                  values[c].begin() + static_cast<std::ptrdiff_t>((k + 1) * n_nodes));
            std::vector<std::uint8_t> ok(n_nodes);
            for (std::size_t i = 0; i < n_nodes; ++i) {
                ok[i] = !std::isnan(v[i]);
                if (!ok[i]) v[i] = 0.0;
            }
            const double t = snapshot_times[k];
            s.snapshots.emplace_back(grid, std::move(v), std::move(ok),
                                     std::isnan(t) ? std::nullopt : std::optional<double>(t));
        }
        out.emplace_back(header[c + 2], std::move(s));
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    auto out = open_out(path);
    out << content;
}

}  // namespace svm::io
