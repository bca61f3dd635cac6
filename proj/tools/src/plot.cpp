#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "confclust/selection.hpp"
#include "confclust/serialize.hpp"
#include "confclust_cli/commands.hpp"

namespace confclust::cli {

namespace {

constexpr double kPanel = 480.0;
constexpr double kMargin = 40.0;
constexpr double kLegend = 170.0;
constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                               "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
constexpr const char* kOutsideColor = "#b0b0b0";

std::string num(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string exact(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

const char* color(int cluster) {
  return cluster < 0 ? kOutsideColor : kPalette[static_cast<std::size_t>(cluster) % kPalette.size()];
}

// World-to-pixel map with one scale for both axes; y grows upwards.
struct Frame {
  double x0, y0, lo_x, lo_y, scale;
  double px(double x) const { return x0 + (x - lo_x) * scale; }
  double py(double y) const { return y0 + kPanel - (y - lo_y) * scale; }
};

Frame fit_frame(Box box, double x0, double y0) {
  const Vector span = box.hi - box.lo;
  const double side = std::max({span[0], span[1], 1e-9}) * 1.1;
  const Vector mid = 0.5 * (box.lo + box.hi);
  return {x0, y0, mid[0] - side / 2, mid[1] - side / 2, kPanel / side};
}

void data_panel(std::ostream& svg, const Dataset& data, const PredictionSet& set, const Clustering& clustering,
                const std::optional<VolumeEstimate>& volume) {
  Box box{data.matrix().colwise().minCoeff().transpose(), data.matrix().colwise().maxCoeff().transpose()};
  for (const auto& c : set.components) {
    if (c.empty) continue;
    const Box b = c.bounds();
    if (!b.lo.allFinite() || !b.hi.allFinite()) continue;
    box.lo = box.lo.cwiseMin(b.lo);
    box.hi = box.hi.cwiseMax(b.hi);
  }
  const Frame f = fit_frame(box, kMargin, kMargin);

  svg << "<g class=\"panel data\" data-scale=\"" << exact(f.scale) << "\" data-origin-x=\"" << exact(f.px(0))
      << "\" data-origin-y=\"" << exact(f.py(0)) << "\">\n";
  svg << "<rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(kPanel)
      << "\" height=\"" << num(kPanel) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<clipPath id=\"clip-data\"><rect x=\"" << num(kMargin) << "\" y=\"" << num(kMargin) << "\" width=\""
      << num(kPanel) << "\" height=\"" << num(kPanel) << "\"/></clipPath>\n";
  svg << "<g clip-path=\"url(#clip-data)\">\n";
  for (std::size_t j = 0; j < set.components.size(); ++j) {
    const auto& c = set.components[j];
    if (c.empty || !std::isfinite(c.radius)) continue;
    const int cluster = j < clustering.component_of.size() ? clustering.component_of[j] : -1;
    const char* col = color(cluster);
    const std::string style = std::string("fill=\"") + col + "\" fill-opacity=\"0.15\" stroke=\"" + col +
                              "\" stroke-width=\"1.2\"";
    if (c.shape == Component::Shape::ball) {
      svg << "<circle class=\"component\" cx=\"" << exact(f.px(c.center[0])) << "\" cy=\"" << exact(f.py(c.center[1]))
          << "\" r=\"" << exact(c.radius * f.scale) << "\" data-radius=\"" << exact(c.radius)
          << "\" data-cluster=\"" << cluster << "\" " << style << "/>\n";
    } else {
      const Eigen::SelfAdjointEigenSolver<Matrix> eig(c.shape_matrix());
      const Vector axes = (eig.eigenvalues().cwiseMax(0.0) * c.r2).cwiseSqrt();
      const Vector major = eig.eigenvectors().col(1);
      // y is flipped on screen, so the rotation changes sign.
      const double deg = -std::atan2(major[1], major[0]) * 180.0 / std::acos(-1.0);
      svg << "<ellipse class=\"component\" cx=\"0\" cy=\"0\" rx=\"" << exact(axes[1] * f.scale) << "\" ry=\""
          << exact(axes[0] * f.scale) << "\" transform=\"translate(" << num(f.px(c.center[0]), 4) << " "
          << num(f.py(c.center[1]), 4) << ") rotate(" << num(deg, 4) << ")\" data-radius=\"" << exact(c.radius)
          << "\" data-cluster=\"" << cluster << "\" " << style << "/>\n";
    }
  }
  for (std::size_t i = 0; i < data.n(); ++i) {
    const int label = i < clustering.point_labels.size() ? clustering.point_labels[i] : -1;
    const auto p = data.point(i);
    svg << "<circle class=\"point\" cx=\"" << num(f.px(p[0])) << "\" cy=\"" << num(f.py(p[1]))
        << "\" r=\"2\" fill=\"" << color(label) << "\"/>\n";
  }
  svg << "</g>\n";

  const double lx = kMargin + kPanel + 15.0;
  double ly = kMargin + 14.0;
  auto line = [&](const std::string& text) {
    svg << "<text class=\"legend\" x=\"" << num(lx) << "\" y=\"" << num(ly) << "\">" << text << "</text>\n";
    ly += 18.0;
  };
  line("alpha = " + short_num(set.alpha));
  if (volume) line("volume = " + short_num(volume->value) + " &#177; " + short_num(volume->std_error));
  line("clusters = " + std::to_string(clustering.r));
  line("components = " + std::to_string(set.nonempty_count()) + " / " + std::to_string(set.components.size()));
  for (std::size_t c = 0; c < std::min<std::size_t>(clustering.r, kPalette.size()); ++c) {
    svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 10.0) << "\" width=\"10\" height=\"10\" fill=\""
        << color(static_cast<int>(c)) << "\"/>\n";
    svg << "<text class=\"legend\" x=\"" << num(lx + 16.0) << "\" y=\"" << num(ly) << "\">cluster " << c
        << "</text>\n";
    ly += 16.0;
  }
  svg << "</g>\n";
}

void curve_panel(std::ostream& svg, const VolumeCurve& curve, double x0) {
  const double y0 = kMargin;
  double vmax = 0.0;
  for (double v : curve.volumes)
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  if (!(vmax > 0.0)) vmax = 1.0;
  const double kmin = static_cast<double>(curve.ks.front());
  const double kspan = std::max(1.0, static_cast<double>(curve.ks.back()) - kmin);
  auto px = [&](std::size_t k) { return x0 + (static_cast<double>(k) - kmin) / kspan * kPanel; };
  auto py = [&](double v) { return y0 + kPanel - v / (vmax * 1.05) * kPanel; };
  const std::size_t best = select_k_min_volume(curve);

  svg << "<g class=\"panel curve\">\n";
  svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(kPanel) << "\" height=\""
      << num(kPanel) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  svg << "<polyline class=\"volume-curve\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.ks.size(); ++i)
    if (std::isfinite(curve.volumes[i]))
      svg << (i ? " " : "") << num(px(curve.ks[i])) << "," << num(py(curve.volumes[i]));
  svg << "\"/>\n";
  for (std::size_t i = 0; i < curve.ks.size(); ++i) {
    if (!std::isfinite(curve.volumes[i])) continue;
    const bool is_best = curve.ks[i] == best;
    svg << "<circle class=\"curve-point\" cx=\"" << num(px(curve.ks[i])) << "\" cy=\"" << num(py(curve.volumes[i]))
        << "\" r=\"" << (is_best ? 5 : 3) << "\" fill=\"" << (is_best ? "#d62728" : "#1f77b4") << "\" data-k=\""
        << curve.ks[i] << "\" data-volume=\"" << exact(curve.volumes[i]) << "\"/>\n";
  }
  for (std::size_t i = 0; i < curve.ks.size(); i += std::max<std::size_t>(1, curve.ks.size() / 10))
    svg << "<text x=\"" << num(px(curve.ks[i])) << "\" y=\"" << num(y0 + kPanel + 16.0)
        << "\" text-anchor=\"middle\">" << curve.ks[i] << "</text>\n";
  svg << "<text x=\"" << num(x0 + kPanel / 2) << "\" y=\"" << num(y0 + kPanel + 34.0)
      << "\" text-anchor=\"middle\">k</text>\n";
  svg << "<text x=\"" << num(x0 - 8.0) << "\" y=\"" << num(y0 + 4.0) << "\" text-anchor=\"end\">"
      << short_num(vmax * 1.05) << "</text>\n";
  svg << "<text x=\"" << num(x0 + kPanel / 2) << "\" y=\"" << num(y0 - 12.0)
      << "\" text-anchor=\"middle\">k versus volume (minimum at k = " << best << ")</text>\n";
  svg << "</g>\n";
}

}  // namespace

int cmd_plot(const PlotConfig& config, std::ostream& out, std::ostream& err) {
  const auto& dir = config.dir;
  const Dataset data = load_csv(dir / "data.csv", false);
  if (data.d() != 2)
    throw std::invalid_argument("plots are 2-D only; the data has dimension " + std::to_string(data.d()));
  const auto set = read_json(dir / "prediction_set.json").get<PredictionSet>();
  const auto clustering = read_json(dir / "clustering.json").get<Clustering>();
  std::optional<VolumeEstimate> volume;
  if (std::filesystem::exists(dir / "volume.json")) volume = read_json(dir / "volume.json").get<VolumeEstimate>();
  std::optional<VolumeCurve> curve;
  if (std::filesystem::exists(dir / "curve.json")) curve = read_json(dir / "curve.json").get<VolumeCurve>();
  if (set.nonempty_count() == 0) err << "warning: the prediction set is empty; plotting the data only\n";

  const double curve_x = kMargin + kPanel + kLegend + kMargin;
  const double width = curve ? curve_x + kPanel + kMargin : kMargin + kPanel + kLegend;
  const double height = kPanel + 2 * kMargin + 20.0;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width, 0) << "\" height=\"" << num(height, 0)
      << "\" viewBox=\"0 0 " << num(width, 0) << " " << num(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  data_panel(svg, data, set, clustering, volume);
  if (curve && !curve->ks.empty()) curve_panel(svg, *curve, curve_x);
  svg << "</svg>\n";

  const auto path = config.svg.value_or(dir / "plot.svg");
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write " + path.string());
  file << svg.str();
  if (!file) throw std::runtime_error("failed writing " + path.string());
  out << "wrote " << path.string() << "\n";
  return kOk;
}

}  // namespace confclust::cli
