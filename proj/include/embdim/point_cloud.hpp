#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "embdim/descriptor.hpp"

namespace embdim {

// A finite set of points in R^n, stored row-major. Optionally carries a label
// and the descriptor of the manifold the points were sampled from.
class PointCloud {
 public:
  PointCloud(int ambient_dim, std::vector<double> flat)
      : dim_(ambient_dim), data_(std::move(flat)) {
    if (dim_ < 1) throw std::invalid_argument("PointCloud: ambient_dim must be >= 1");
    if (data_.empty() || data_.size() % static_cast<std::size_t>(dim_) != 0)
      throw std::invalid_argument("PointCloud: need a nonempty multiple of ambient_dim values");
    for (double v : data_) {
      if (!std::isfinite(v)) throw std::invalid_argument("PointCloud: coordinates must be finite");
    }
  }

  int ambient_dim() const { return dim_; }
  std::size_t size() const { return data_.size() / static_cast<std::size_t>(dim_); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }

  const std::vector<double>& flat() const { return data_; }

  std::optional<std::string> label;
  std::optional<ManifoldDescriptor> truth;

  // CSV: one point per row, ambient_dim comma-separated coordinates, '.' decimal
  // separator, no header. Values are written in shortest round-trip form.
  void save_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("PointCloud: cannot open " + path + " for writing");
    save_csv(os);
  }

  static PointCloud load_csv(std::istream& is);
  static PointCloud load_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("PointCloud: cannot open " + path);
    return load_csv(is);
  }

 private:
  int dim_;
  std::vector<double> data_;
};

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace detail

inline void PointCloud::save_csv(std::ostream& os) const {
  std::string line;
  for (std::size_t i = 0; i < size(); ++i) {
    line.clear();
    const auto p = (*this)[i];
    for (int j = 0; j < dim_; ++j) {
      if (j > 0) line.push_back(',');
      detail::append_double(line, p[j]);
    }
    line.push_back('\n');
    os << line;
  }
}

inline PointCloud PointCloud::load_csv(std::istream& is) {
  std::vector<double> data;
  int dim = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int cols = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      const char* field_end = p;
      while (field_end < end && *field_end != ',') ++field_end;
      double v = 0.0;
      const auto res = std::from_chars(p, field_end, v);
      if (res.ec != std::errc{} || res.ptr != field_end)
        throw std::invalid_argument("PointCloud CSV: bad number at line " + std::to_string(lineno));
      data.push_back(v);
      ++cols;
      p = field_end < end ? field_end + 1 : end;
    }
    if (dim == -1) dim = cols;
    if (cols != dim)
      throw std::invalid_argument("PointCloud CSV: inconsistent column count at line " +
                                  std::to_string(lineno));
  }
  if (dim <= 0) throw std::invalid_argument("PointCloud CSV: no data");
  return PointCloud(dim, std::move(data));
}

// Euclidean distance between two points of equal dimension.
inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace embdim
