#include "confclust/serialize.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace confclust {

json real_to_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::invalid_argument("expected a real number in JSON, got " + j.dump());
}

namespace {

json reals(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(real_to_json(x));
  return a;
}

std::vector<double> reals_from(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(real_from_json(x));
  return v;
}

json vec(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(real_to_json(v[i]));
  return a;
}

Vector vec_from(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = real_from_json(j[i]);
  return v;
}

json vecs(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec(v));
  return a;
}

std::vector<Vector> vecs_from(const json& j) {
  std::vector<Vector> out;
  for (const auto& v : j) out.push_back(vec_from(v));
  return out;
}

json mat(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec(m.row(r).transpose()));
  return a;
}

Matrix mat_from(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols)
      throw std::invalid_argument("ragged matrix in JSON");
    m.row(r) = vec_from(j[static_cast<std::size_t>(r)]).transpose();
  }
  return m;
}

}  // namespace

void to_json(json& j, const Box& b) { j = json{{"lo", vec(b.lo)}, {"hi", vec(b.hi)}}; }
void from_json(const json& j, Box& b) {
  b.lo = vec_from(j.at("lo"));
  b.hi = vec_from(j.at("hi"));
}

void to_json(json& j, const SphereModel& m) {
  j = json{{"k", m.k()},           {"d", m.d()},
           {"centers", vecs(m.centers)}, {"sigmas", reals(m.sigmas)},
           {"weights", reals(m.weights)}, {"counts", m.counts}};
}
void from_json(const json& j, SphereModel& m) {
  m.centers = vecs_from(j.at("centers"));
  m.sigmas = reals_from(j.at("sigmas"));
  m.weights = reals_from(j.at("weights"));
  m.counts = j.at("counts").get<std::vector<std::size_t>>();
}

void to_json(json& j, const GeneralModel& m) {
  json covs = json::array();
  for (const auto& c : m.covariances) covs.push_back(mat(c));
  j = json{{"k", m.k()}, {"d", m.d()}, {"weights", reals(m.weights)}, {"means", vecs(m.means)}, {"covariances", covs}};
}
void from_json(const json& j, GeneralModel& m) {
  m.weights = reals_from(j.at("weights"));
  m.means = vecs_from(j.at("means"));
  m.covariances.clear();
  for (const auto& c : j.at("covariances")) m.covariances.push_back(mat_from(c));
}

void to_json(json& j, const LevelSetModel& m) {
  j = json{{"k_nn", m.k_nn},
           {"level", real_to_json(m.level)},
           {"radius", real_to_json(m.radius)},
           {"adaptive", m.adaptive},
           {"kept", m.kept},
           {"kept_points", vecs(m.kept_points)},
           {"kept_densities", reals(m.kept_densities)}};
}
void from_json(const json& j, LevelSetModel& m) {
  m.k_nn = j.at("k_nn").get<std::size_t>();
  m.level = real_from_json(j.at("level"));
  m.radius = real_from_json(j.at("radius"));
  m.adaptive = j.at("adaptive").get<bool>();
  m.kept = j.at("kept").get<std::vector<std::size_t>>();
  m.kept_points = vecs_from(j.at("kept_points"));
  m.kept_densities = reals_from(j.at("kept_densities"));
}

void to_json(json& j, const Residual& r) {
  j = json{{"kind", to_string(r.kind())}};
  switch (r.kind()) {
    case ResidualKind::plain_distance:
    case ResidualKind::levelset_distance:
      j["centers"] = vecs(r.centers());
      break;
    case ResidualKind::weighted_sphere:
      j["centers"] = vecs(r.centers());
      j["sigmas"] = reals(r.sigmas());
      j["weights"] = reals(r.weights());
      break;
    case ResidualKind::levelset_adaptive:
      j["centers"] = vecs(r.centers());
      j["densities"] = reals(r.densities());
      break;
    case ResidualKind::gmm_inverse_density:
    case ResidualKind::gmm_log_form:
    case ResidualKind::maxmix_score:
      j["model"] = r.general_model();
      break;
  }
}

void from_json(const json& j, Residual& r) {
  const ResidualKind kind = residual_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case ResidualKind::plain_distance:
      r = Residual::plain_distance(vecs_from(j.at("centers")));
      break;
    case ResidualKind::levelset_distance:
      r = Residual::nearest_point(vecs_from(j.at("centers")));
      break;
    case ResidualKind::levelset_adaptive:
      r = Residual::nearest_point(vecs_from(j.at("centers")), reals_from(j.at("densities")));
      break;
    case ResidualKind::weighted_sphere: {
      SphereModel m;
      m.centers = vecs_from(j.at("centers"));
      m.sigmas = reals_from(j.at("sigmas"));
      m.weights = reals_from(j.at("weights"));
      r = Residual::weighted_sphere(m);
      break;
    }
    default:
      r = Residual::gaussian(kind, j.at("model").get<GeneralModel>());
  }
}

void to_json(json& j, const PredictionSet& s) {
  json comps = json::array();
  for (const auto& c : s.components) {
    if (c.shape == Component::Shape::ball) {
      comps.push_back({{"center", vec(c.center)}, {"radius", real_to_json(c.radius)}, {"empty", c.empty}});
    } else {
      comps.push_back({{"mu", vec(c.center)},
                       {"sigma", mat(c.shape_matrix())},
                       {"r2", real_to_json(c.r2)},
                       {"empty", c.empty}});
    }
  }
  j = json{{"alpha", s.alpha},
           {"threshold", real_to_json(s.threshold)},
           {"kind", to_string(s.residual.kind())},
           {"components", comps},
           {"residual", s.residual}};
}

void from_json(const json& j, PredictionSet& s) {
  s.alpha = j.at("alpha").get<double>();
  s.threshold = real_from_json(j.at("threshold"));
  s.residual = j.at("residual").get<Residual>();
  s.components.clear();
  for (const auto& c : j.at("components")) {
    const bool empty = c.value("empty", false);
    if (c.contains("radius")) {
      s.components.push_back(Component::ball(vec_from(c.at("center")), empty ? -1.0 : real_from_json(c.at("radius"))));
    } else {
      auto g = std::make_shared<const GaussianComponent>(vec_from(c.at("mu")), mat_from(c.at("sigma")));
      s.components.push_back(Component::ellipsoid(std::move(g), empty ? -1.0 : real_from_json(c.at("r2"))));
    }
  }
}

void to_json(json& j, const VolumeEstimate& v) {
  j = json{{"value", v.value},         {"std_error", v.std_error}, {"n_samples", v.n_samples},
           {"seed", v.seed},           {"proposal_box", v.proposal_box}};
}
void from_json(const json& j, VolumeEstimate& v) {
  v.value = j.at("value").get<double>();
  v.std_error = j.at("std_error").get<double>();
  v.n_samples = j.at("n_samples").get<std::size_t>();
  v.seed = j.at("seed").get<std::uint64_t>();
  v.proposal_box = j.at("proposal_box").get<Box>();
}

void to_json(json& j, const Clustering& c) {
  j = json{{"r", c.r}, {"component_of", c.component_of}, {"point_labels", c.point_labels}};
}
void from_json(const json& j, Clustering& c) {
  c.r = j.at("r").get<std::size_t>();
  c.component_of = j.at("component_of").get<std::vector<int>>();
  c.point_labels = j.at("point_labels").get<std::vector<int>>();
}

void to_json(json& j, const VolumeCurve& c) {
  j = json{{"ks", c.ks}, {"volumes", reals(c.volumes)}, {"std_errors", reals(c.std_errors)}};
  if (c.bootstrap) j["bootstrap_curves"] = mat(*c.bootstrap);
}
void from_json(const json& j, VolumeCurve& c) {
  c.ks = j.at("ks").get<std::vector<std::size_t>>();
  c.volumes = reals_from(j.at("volumes"));
  c.std_errors = reals_from(j.at("std_errors"));
  if (c.ks.size() != c.volumes.size() || c.ks.size() != c.std_errors.size())
    throw std::invalid_argument("volume curve arrays differ in length");
  if (j.contains("bootstrap_curves")) c.bootstrap = mat_from(j.at("bootstrap_curves"));
  else c.bootstrap.reset();
}

void to_json(json& j, const TestDecision& d) {
  json ivs = json::array();
  for (const auto& iv : d.intervals)
    ivs.push_back({{"t", iv.t}, {"k", iv.k}, {"lo", real_to_json(iv.lo)}, {"hi", real_to_json(iv.hi)}});
  json rej = json::object();
  for (std::size_t i = 0; i < d.ks.size(); ++i) rej[std::to_string(d.ks[i])] = static_cast<bool>(d.rejected[i]);
  j = json{{"k_hat", d.k_hat}, {"ks", d.ks}, {"rejected", rej}, {"intervals", ivs}};
}
void from_json(const json& j, TestDecision& d) {
  d.k_hat = j.at("k_hat").get<std::size_t>();
  d.ks = j.at("ks").get<std::vector<std::size_t>>();
  d.rejected.clear();
  for (std::size_t k : d.ks) d.rejected.push_back(j.at("rejected").at(std::to_string(k)).get<bool>());
  d.intervals.clear();
  for (const auto& iv : j.at("intervals"))
    d.intervals.push_back({iv.at("t").get<std::size_t>(), iv.at("k").get<std::size_t>(),
                           real_from_json(iv.at("lo")), real_from_json(iv.at("hi"))});
}

json model_to_json(const FittedModel& model) {
  return std::visit(
      [](const auto& m) {
        json j = m;
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SphereModel>) j["type"] = "sphere";
        else if constexpr (std::is_same_v<T, GeneralModel>) j["type"] = "general";
        else j["type"] = "levelset";
        return j;
      },
      model);
}

FittedModel model_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "sphere") return j.get<SphereModel>();
  if (type == "general") return j.get<GeneralModel>();
  if (type == "levelset") return j.get<LevelSetModel>();
  throw std::invalid_argument("unknown model type '" + type + "'");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace confclust
