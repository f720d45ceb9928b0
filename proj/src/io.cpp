#include "blochsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace blochsim {

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write_file: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("atomic_write_file: short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

template <typename CellFn>
std::string grid_csv(std::size_t rows, std::size_t cols, const std::string& header, CellFn cell) {
  std::string out = "# " + header + "\n";
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (j) out += ',';
      out += cell(i, j);
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string matrix_csv(const RealMat& m, const std::string& header) {
  return grid_csv(m.rows(), m.cols(), header,
                  [&](std::size_t i, std::size_t j) { return format_sci(m(i, j)); });
}

std::string counts_csv(const Mat<std::int64_t>& m, const std::string& header) {
  return grid_csv(m.rows(), m.cols(), header,
                  [&](std::size_t i, std::size_t j) { return std::to_string(m(i, j)); });
}

std::string violations_csv(const RealMat& v, const std::string& header) {
  return grid_csv(v.rows(), v.cols(), header, [&](std::size_t i, std::size_t j) {
    return v(i, j) > 0.0 ? format_sci(v(i, j)) : std::string();
  });
}

std::string significance_csv(const RealMat& s, const std::string& header) {
  return grid_csv(s.rows(), s.cols(), header, [&](std::size_t i, std::size_t j) {
    return std::isnan(s(i, j)) ? std::string() : format_sci(s(i, j));
  });
}

RealMat read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_csv: cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && rows.empty()) continue;  // leading blank lines
    if (!line.empty() && line.front() == '#') continue;
    if (line.empty()) continue;
    ++data_row;

    std::vector<double> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string field = line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (field.empty()) {
        cells.push_back(0.0);
      } else {
        try {
          std::size_t used = 0;
          const double v = std::stod(field, &used);
          if (used != field.size()) throw std::invalid_argument(field);
          cells.push_back(v);
        } catch (const std::exception&) {
          throw std::runtime_error("read_matrix_csv: bad number '" + field + "' in data row " +
                                   std::to_string(data_row));
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && cells.size() != rows.front().size())
      throw std::runtime_error("read_matrix_csv: ragged row " + std::to_string(data_row) +
                               " has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(rows.front().size()));
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw std::runtime_error("read_matrix_csv: no data rows in " + path.string());

  RealMat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

namespace {

// Fixed warm palette (black → red → yellow → white), 256 shades.
void palette_rgb(double t, unsigned char rgb[3]) {
  const double r = std::min(1.0, 3.0 * t);
  const double g = std::min(1.0, std::max(0.0, 3.0 * t - 1.0));
  const double b = std::min(1.0, std::max(0.0, 3.0 * t - 2.0));
  rgb[0] = static_cast<unsigned char>(std::lround(255.0 * r));
  rgb[1] = static_cast<unsigned char>(std::lround(255.0 * g));
  rgb[2] = static_cast<unsigned char>(std::lround(255.0 * b));
}

}  // namespace

std::string pixmap_heatmap(const RealMat& m, int block_size, bool use_palette) {
  if (block_size < 1) throw std::invalid_argument("pixmap_heatmap: block_size must be >= 1");
  double mx = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mx = std::max(mx, m(i, j));

  const std::size_t w = m.cols() * block_size;
  const std::size_t h = m.rows() * block_size;
  std::string out = use_palette ? "P6\n" : "P5\n";
  out += "# max=" + format_sci(mx) + "\n";
  out += std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + w * h * (use_palette ? 3 : 1));

  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string row_bytes;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double t = mx > 0.0 ? std::max(0.0, m(i, j)) / mx : 0.0;
      if (use_palette) {
        unsigned char rgb[3];
        palette_rgb(t, rgb);
        for (int rep = 0; rep < block_size; ++rep)
          row_bytes.append(reinterpret_cast<const char*>(rgb), 3);
      } else {
        const char shade = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t)));
        row_bytes.append(static_cast<std::size_t>(block_size), shade);
      }
    }
    for (int rep = 0; rep < block_size; ++rep) out += row_bytes;
  }
  return out;
}

}  // namespace blochsim
