// Deterministic file output with read-back validation.
#include "rarefaction/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rarefaction/errors.hpp"

namespace rarefaction {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void fail(const std::filesystem::path& path,
                       const std::string& what) {
  throw IoError(path.string() + ": " + what);
}

}  // namespace

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (table.columns.empty()) fail(path, "refusing to write a CSV with no columns");
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      fail(path, "row width does not match the column list");
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) out << ',';
      out << table.columns[j];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) out << ',';
        out << format_double(row[j]);
      }
      out << '\n';
    }
    if (!out.flush()) fail(path, "write failed");
  }
  const CsvTable back = read_csv(path);
  if (back.columns != table.columns)
    fail(path, "read-back column schema mismatch");
  if (back.rows.size() != table.rows.size())
    fail(path, "read-back row count mismatch");
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    for (std::size_t j = 0; j < back.rows[i].size(); ++j) {
      const double a = table.rows[i][j], b = back.rows[i][j];
      if (!(a == b) && !(a != a && b != b))
        fail(path, "read-back value did not round-trip");
    }
  }
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) fail(path, "missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  if (table.columns.empty()) fail(path, "empty header line");

  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(table.columns.size());
    const char* p = line.c_str();
    while (true) {
      char* end = nullptr;
      const double x = std::strtod(p, &end);
      if (end == p)
        fail(path, "unparsable number at line " + std::to_string(lineno));
      row.push_back(x);
      p = end;
      if (*p == ',') {
        ++p;
      } else if (*p == '\0') {
        break;
      } else {
        fail(path, "unexpected character at line " + std::to_string(lineno));
      }
    }
    if (row.size() != table.columns.size())
      fail(path, "row width mismatch at line " + std::to_string(lineno));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& value) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out << value.dump(2) << '\n';
    if (!out.flush()) fail(path, "write failed");
  }
  const nlohmann::ordered_json back = read_json(path);
  if (back != value) fail(path, "read-back JSON mismatch");
}

nlohmann::ordered_json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  nlohmann::ordered_json value;
  try {
    in >> value;
  } catch (const std::exception& e) {
    fail(path, std::string("JSON parse error: ") + e.what());
  }
  return value;
}

std::filesystem::path resolve_output_root(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("RAREFACTION_OUTPUT_ROOT"); env && *env)
    return env;
  return "out";
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(dir, "cannot create directory: " + ec.message());
}

void write_plot_script(const std::filesystem::path& path,
                       const PlotSpec& spec) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open for writing");
  out << "# gnuplot script; run: gnuplot -p " << path.filename().string()
      << "\n";
  out << "set datafile separator ','\n";
  out << "set key autotitle columnhead\n";
  out << "set title '" << spec.title << "'\n";
  out << "set xlabel '" << spec.xlabel << "'\n";
  out << "set ylabel '" << spec.ylabel << "'\n";
  if (spec.logx) out << "set logscale x\n";
  if (spec.logy) out << "set logscale y\n";
  out << "plot ";
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    if (i) out << ", \\\n     ";
    out << "'" << spec.csv_file << "' using '" << spec.series[i].x << "':'"
        << spec.series[i].y << "' with lines title '" << spec.series[i].title
        << "'";
  }
  out << "\n";
  if (!out.flush()) fail(path, "write failed");
}

}  // namespace rarefaction
