// CSV and JSON output with deterministic formatting and read-back schema
// validation, plus output-root resolution and gnuplot script emission.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rarefaction {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  // each row matches columns.size()
};

// Writes with %.17g (locale-free '.' decimal), then re-reads and checks the
// parsed schema and values round-trip. Throws IoError on any failure.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

CsvTable read_csv(const std::filesystem::path& path);

// Serializes with 2-space indentation, then re-parses the file. ordered_json
// keeps member order deterministic.
void write_json(const std::filesystem::path& path,
                const nlohmann::ordered_json& value);

nlohmann::ordered_json read_json(const std::filesystem::path& path);

// Output root: explicit flag value if nonempty, else the RAREFACTION_OUTPUT_ROOT
// environment variable, else ./out.
std::filesystem::path resolve_output_root(const std::string& flag_value);

// Creates the directory (parents included); IoError on failure.
void ensure_dir(const std::filesystem::path& dir);

struct PlotSeries {
  std::string x, y;  // CSV column names
  std::string title;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::string csv_file;  // path relative to the script
  std::vector<PlotSeries> series;
};

// Emits a gnuplot-syntax text script next to the data; no rendering happens.
void write_plot_script(const std::filesystem::path& path, const PlotSpec& spec);

}  // namespace rarefaction
