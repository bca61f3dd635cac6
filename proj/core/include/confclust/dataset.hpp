#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace confclust {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using PointRef = Eigen::Ref<const Eigen::VectorXd>;

/// n x d matrix of observations, one point per row. Every coordinate is
/// finite and d >= 1.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(RowMatrix points);
  static Dataset from_points(std::span<const Vector> points);

  std::size_t n() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(points_.cols()); }
  bool empty() const { return points_.rows() == 0; }

  Eigen::Map<const Vector> point(std::size_t i) const {
    return Eigen::Map<const Vector>(points_.data() + i * d(), static_cast<Eigen::Index>(d()));
  }
  const RowMatrix& matrix() const { return points_; }

  Dataset subset(std::span<const std::size_t> rows) const;
  Vector mean() const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
           a.points_ == b.points_;
  }

 private:
  RowMatrix points_;
};

/// Raised for malformed CSV input; carries the 1-based line and column.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what), row_(row), column_(column) {}
  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

Dataset read_csv(std::istream& in, bool has_header);
Dataset load_csv(const std::filesystem::path& path, bool has_header);
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

struct SplitPair {
  Dataset fit_half;
  Dataset calib_half;
  std::uint64_t seed = 0;
  std::vector<std::size_t> fit_index;
  std::vector<std::size_t> calib_index;
};

/// Uniformly random split into a fitting half of size ceil(n/2) and a
/// calibration half of size floor(n/2). Requires n >= 2.
SplitPair split_half(const Dataset& data, std::uint64_t seed);

struct Box {
  Vector lo;
  Vector hi;

  std::size_t dim() const { return static_cast<std::size_t>(lo.size()); }
  double volume() const;
  bool contains(const PointRef& y) const;
};

/// Isotropic Gaussian blobs (per_blob draws around each center with standard
/// deviation sigma) followed by noise_n uniform draws on noise_box.
Dataset gen_blobs(std::span<const Vector> centers, std::size_t per_blob, double sigma,
                  std::size_t noise_n, const Box& noise_box, std::uint64_t seed);

/// Points on `arcs` half-circle arcs of the given radius laid out on a grid
/// whose cells are `spacing` radii wide; arc j is rotated by j*pi/2. Radial
/// noise is normal with standard deviation `thickness`, truncated at 3
/// standard deviations.
Dataset gen_crescents(std::size_t arcs, std::size_t per_arc, double radius, double thickness,
                      std::uint64_t seed, double spacing = 5.0);

/// Center of the circle carrying arc j in the gen_crescents layout.
Vector crescent_center(std::size_t j, std::size_t arcs, double radius, double spacing = 5.0);

}  // namespace confclust
