#include "confclust/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "confclust/rng.hpp"

namespace confclust {

Dataset::Dataset(RowMatrix points) : points_(std::move(points)) {
  if (points_.rows() == 0) throw std::invalid_argument("Dataset: no points");
  if (points_.cols() == 0) throw std::invalid_argument("Dataset: dimension must be >= 1");
  if (!points_.allFinite()) throw std::invalid_argument("Dataset: non-finite coordinate");
}

Dataset Dataset::from_points(std::span<const Vector> points) {
  if (points.empty()) throw std::invalid_argument("Dataset: no points");
  const auto d = points.front().size();
  RowMatrix m(static_cast<Eigen::Index>(points.size()), d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw std::invalid_argument("Dataset: ragged point dimensions");
    m.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return Dataset(std::move(m));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  RowMatrix m(static_cast<Eigen::Index>(rows.size()), points_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= n()) throw std::out_of_range("Dataset::subset: row index out of range");
    m.row(static_cast<Eigen::Index>(i)) = points_.row(static_cast<Eigen::Index>(rows[i]));
  }
  return Dataset(std::move(m));
}

Vector Dataset::mean() const { return points_.colwise().mean().transpose(); }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Dataset read_csv(std::istream& in, bool has_header) {
  std::vector<double> values;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      std::string_view cell =
          trim(view.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      ++col;
      double x = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, x);
      if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(x)) {
        std::ostringstream msg;
        msg << "CSV parse error at row " << line_no << ", column " << col << ": '" << cell
            << "' is not a finite number";
        throw CsvError(msg.str(), line_no, col);
      }
      values.push_back(x);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      columns = col;
    } else if (col != columns) {
      std::ostringstream msg;
      msg << "CSV error at row " << line_no << ": expected " << columns << " columns, found " << col;
      throw CsvError(msg.str(), line_no, col);
    }
    ++rows;
  }
  if (rows == 0) throw CsvError("CSV error: no data rows", line_no, 0);
  RowMatrix m = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(rows),
                                      static_cast<Eigen::Index>(columns));
  return Dataset(std::move(m));
}

Dataset load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_csv(in, has_header);
}

void write_csv(std::ostream& out, const Dataset& data) {
  char buf[32];
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.d(); ++j) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, data.point(i)[static_cast<Eigen::Index>(j)]);
      if (j) out << ',';
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, data);
}

SplitPair split_half(const Dataset& data, std::uint64_t seed) {
  if (data.n() < 2) throw std::invalid_argument("split_half: need at least 2 points");
  std::vector<std::size_t> order(data.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed, 0x5311);
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t fit_n = (data.n() + 1) / 2;
  SplitPair split;
  split.seed = seed;
  split.fit_index.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(fit_n));
  split.calib_index.assign(order.begin() + static_cast<std::ptrdiff_t>(fit_n), order.end());
  split.fit_half = data.subset(split.fit_index);
  split.calib_half = data.subset(split.calib_index);
  return split;
}

double Box::volume() const {
  if (lo.size() == 0) return 0.0;
  return (hi - lo).cwiseMax(0.0).prod();
}

bool Box::contains(const PointRef& y) const {
  return (y.array() >= lo.array()).all() && (y.array() <= hi.array()).all();
}

Dataset gen_blobs(std::span<const Vector> centers, std::size_t per_blob, double sigma,
                  std::size_t noise_n, const Box& noise_box, std::uint64_t seed) {
  if (centers.empty()) throw std::invalid_argument("gen_blobs: no centers");
  if (!(sigma > 0.0)) throw std::invalid_argument("gen_blobs: sigma must be positive");
  const auto d = centers.front().size();
  for (const auto& c : centers)
    if (c.size() != d) throw std::invalid_argument("gen_blobs: centers differ in dimension");
  if (noise_n > 0) {
    if (noise_box.dim() != static_cast<std::size_t>(d) || noise_box.hi.size() != d)
      throw std::invalid_argument("gen_blobs: noise box dimension mismatch");
    if (!((noise_box.hi - noise_box.lo).array() > 0.0).all())
      throw std::invalid_argument("gen_blobs: degenerate noise box");
  }
  const std::size_t n = centers.size() * per_blob + noise_n;
  if (n == 0) throw std::invalid_argument("gen_blobs: no points requested");
  RowMatrix m(static_cast<Eigen::Index>(n), d);
  Rng rng(seed, 0xb10b);
  Eigen::Index row = 0;
  for (const auto& c : centers)
    for (std::size_t i = 0; i < per_blob; ++i, ++row)
      for (Eigen::Index j = 0; j < d; ++j) m(row, j) = c[j] + sigma * rng.normal();
  for (std::size_t i = 0; i < noise_n; ++i, ++row)
    for (Eigen::Index j = 0; j < d; ++j) m(row, j) = rng.uniform(noise_box.lo[j], noise_box.hi[j]);
  return Dataset(std::move(m));
}

Vector crescent_center(std::size_t j, std::size_t arcs, double radius, double spacing) {
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(arcs))));
  Vector c(2);
  c << spacing * radius * static_cast<double>(j % cols), -spacing * radius * static_cast<double>(j / cols);
  return c;
}

Dataset gen_crescents(std::size_t arcs, std::size_t per_arc, double radius, double thickness,
                      std::uint64_t seed, double spacing) {
  if (arcs == 0 || per_arc == 0) throw std::invalid_argument("gen_crescents: need arcs >= 1 and per_arc >= 1");
  if (!(radius > 0.0) || !(thickness > 0.0))
    throw std::invalid_argument("gen_crescents: radius and thickness must be positive");
  if (!(spacing > 0.0)) throw std::invalid_argument("gen_crescents: spacing must be positive");
  RowMatrix m(static_cast<Eigen::Index>(arcs * per_arc), 2);
  Rng rng(seed, 0xc4e5);
  Eigen::Index row = 0;
  for (std::size_t a = 0; a < arcs; ++a) {
    const Vector c = crescent_center(a, arcs, radius, spacing);
    const double start = static_cast<double>(a) * std::numbers::pi / 2.0;
    for (std::size_t i = 0; i < per_arc; ++i, ++row) {
      const double angle = start + std::numbers::pi * rng.uniform();
      double z;
      do {
        z = rng.normal();
      } while (std::abs(z) > 3.0);
      const double r = radius + thickness * z;
      m(row, 0) = c[0] + r * std::cos(angle);
      m(row, 1) = c[1] + r * std::sin(angle);
    }
  }
  return Dataset(std::move(m));
}

}  // namespace confclust
