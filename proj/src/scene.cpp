#include "scene.hpp"

#include <cmath>

#include "config.hpp"
#include "json.hpp"

namespace rist {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double azimuth(const Vec3& from, const Vec3& to) {
  return std::atan2(to.y - from.y, to.x - from.x);
}

CVec steering_vector(double theta, int m) {
  if (m < 1) throw DomainError("steering_vector: need m >= 1");
  CVec a(m);
  const double phase_step = -kPi * std::sin(theta);
  for (int i = 0; i < m; ++i) a[i] = std::polar(1.0, phase_step * i);
  return a;
}

double pathloss_db(double d) {
  if (d <= 0.0) throw DomainError("pathloss_db: distance must be > 0");
  return 30.0 + 22.0 * std::log10(d);
}

double pathloss_gain(double d) { return std::pow(10.0, -pathloss_db(d) / 10.0); }

CVec gen_target_channel(double theta, double distance_m, int m) {
  CVec g = steering_vector(theta, m);
  const double amp = std::sqrt(pathloss_gain(distance_m));
  for (auto& v : g) v *= amp;
  return g;
}

CVec gen_rician_channel(std::span<const cplx> los_component, double gain,
                        double k_factor_db, PhiloxStream& rng) {
  const double k = std::pow(10.0, k_factor_db / 10.0);
  const double w_los = std::sqrt(k / (1.0 + k));
  const double w_nlos = std::sqrt(1.0 / (1.0 + k));
  const double amp = std::sqrt(gain);
  CVec h(los_component.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    h[i] = amp * (w_los * los_component[i] + w_nlos * rng.cgaussian());
  return h;
}

CMat gen_rician_matrix(const CMat& los_component, double gain,
                       double k_factor_db, PhiloxStream& rng) {
  const double k = std::pow(10.0, k_factor_db / 10.0);
  const double w_los = std::sqrt(k / (1.0 + k));
  const double w_nlos = std::sqrt(1.0 / (1.0 + k));
  const double amp = std::sqrt(gain);
  CMat h(los_component.rows(), los_component.cols());
  for (std::size_t idx = 0; idx < h.data().size(); ++idx)
    h.data()[idx] =
        amp * (w_los * los_component.data()[idx] + w_nlos * rng.cgaussian());
  return h;
}

Vec3 sample_user_position(const Vec3& top_left_corner, double size_x,
                          double size_y, PhiloxStream& rng) {
  Vec3 p;
  p.x = top_left_corner.x + size_x * rng.uniform();
  p.y = top_left_corner.y - size_y * rng.uniform();
  p.z = top_left_corner.z;
  return p;
}

Scene build_scene(const ExperimentConfig& cfg, std::uint64_t realization,
                  int num_users) {
  Scene scene;
  scene.bs_position = cfg.bs_position;
  scene.ris_position = cfg.ris_position;
  scene.target_angles = cfg.target_angles_rad();

  const int m = cfg.num_antennas;
  const int n = cfg.num_ris_elements;

  for (const double theta : scene.target_angles)
    scene.g.push_back(gen_target_channel(theta, cfg.target_distance_m, m));

  // BS-RIS link: Rician around the steering outer product
  // a_ris(AoA at RIS) a_bs(AoD at BS)^H.
  {
    PhiloxStream rng =
        make_stream(cfg.master_seed, StreamRole::scene_channels, realization, 0);
    const CVec a_bs = steering_vector(cfg.ris_angle_from_bs(), m);
    const CVec a_ris =
        steering_vector(azimuth(cfg.ris_position, cfg.bs_position), n);
    const CMat los = outer_product(a_ris, a_bs);
    const double gain = pathloss_gain(distance(cfg.bs_position, cfg.ris_position));
    scene.h_br = gen_rician_matrix(los, gain, cfg.rician_k_db, rng);
  }

  for (int u = 0; u < num_users; ++u) {
    PhiloxStream pos_rng =
        make_stream(cfg.master_seed, StreamRole::user_positions, realization, u);
    const Vec3 user = sample_user_position(
        cfg.user_region_corner, cfg.user_region_size_x, cfg.user_region_size_y,
        pos_rng);
    scene.user_positions.push_back(user);

    PhiloxStream ch_rng = make_stream(cfg.master_seed, StreamRole::scene_channels,
                                      realization, 1 + u);
    const CVec los = steering_vector(azimuth(cfg.ris_position, user), n);
    const double gain = pathloss_gain(distance(cfg.ris_position, user));
    scene.h_ru.push_back(
        gen_rician_channel(los, gain, cfg.rician_k_db, ch_rng));
  }

  return scene;
}

namespace {

using nlohmann::json;

json cvec_to_json(const CVec& v) {
  json arr = json::array();
  for (const auto& z : v) arr.push_back({z.real(), z.imag()});
  return arr;
}

CVec cvec_from_json(const json& arr) {
  CVec v;
  for (const auto& e : arr) v.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return v;
}

json cmat_to_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat cmat_from_json(const json& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r > 0 ? static_cast<int>(rows.at(0).size()) : 0;
  CMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      m(i, j) = cplx(rows.at(i).at(j).at(0).get<double>(),
                     rows.at(i).at(j).at(1).get<double>());
  return m;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& a) {
  return {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  json j;
  j["bs_position"] = vec3_to_json(scene.bs_position);
  j["ris_position"] = vec3_to_json(scene.ris_position);
  j["user_positions"] = json::array();
  for (const auto& p : scene.user_positions)
    j["user_positions"].push_back(vec3_to_json(p));
  j["target_angles"] = scene.target_angles;
  j["h_br"] = cmat_to_json(scene.h_br);
  j["h_ru"] = json::array();
  for (const auto& h : scene.h_ru) j["h_ru"].push_back(cvec_to_json(h));
  j["g"] = json::array();
  for (const auto& g : scene.g) j["g"].push_back(cvec_to_json(g));
  return j.dump(2);
}

Scene scene_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scene scene;
  scene.bs_position = vec3_from_json(j.at("bs_position"));
  scene.ris_position = vec3_from_json(j.at("ris_position"));
  for (const auto& p : j.at("user_positions"))
    scene.user_positions.push_back(vec3_from_json(p));
  scene.target_angles = j.at("target_angles").get<std::vector<double>>();
  scene.h_br = cmat_from_json(j.at("h_br"));
  for (const auto& h : j.at("h_ru")) scene.h_ru.push_back(cvec_from_json(h));
  for (const auto& g : j.at("g")) scene.g.push_back(cvec_from_json(g));
  return scene;
}

}  // namespace rist
