#include <cmath>

#include "config.hpp"
#include "doctest.h"
#include "frontend.hpp"
#include "metrics.hpp"
#include "oracle_helpers.hpp"

using namespace rist;

TEST_CASE("illumination power") {
  PhiloxStream rng(31, 700);

  SUBCASE("identity covariance gives rho ||g||^2") {
    CVec g(6);
    for (auto& v : g) v = rng.cgaussian();
    const double p = illumination_power(HermitianMatrix::identity(6), g, 2.5);
    CHECK(p == doctest::Approx(2.5 * norm2(g) * norm2(g)));
  }

  SUBCASE("channel orthogonal to the covariance range gets nothing") {
    const CVec e0 = {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    const CVec e1 = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    const double p =
        illumination_power(HermitianMatrix::from_outer(e0), e1, 1.0);
    CHECK(p == doctest::Approx(0.0));
  }

  SUBCASE("linear in rho and invariant to a global phase on g") {
    const HermitianMatrix r = oracle::random_unit_diag_psd(5, rng);
    CVec g(5);
    for (auto& v : g) v = rng.cgaussian();
    const double p1 = illumination_power(r, g, 1.0);
    CHECK(illumination_power(r, g, 3.0) == doctest::Approx(3.0 * p1));
    CVec g_rot = g;
    const cplx phase = std::polar(1.0, 1.234);
    for (auto& v : g_rot) v *= phase;
    CHECK(illumination_power(r, g_rot, 1.0) == doctest::Approx(p1));
  }

  SUBCASE("matches the sampled quantized waveform") {
    const int m = 4;
    PhiloxStream wrng(31, 701);
    const CMat w = oracle::random_cmat(m, m, wrng);
    const HermitianMatrix r_z = arcsine_covariance(
        normalize_covariance(hermitian_unchecked(mat_mul(w, w.adjoint()))));
    CVec g(m);
    for (auto& v : g) v = wrng.cgaussian();

    PhiloxStream rng2(31, 702);
    const int tsamples = 1000000;
    const QuantizedWaveform wf = gen_quantized_waveform(w, tsamples, 4.0, rng2);
    double acc = 0.0;
    for (int n = 0; n < tsamples; ++n) {
      cplx dot = 0.0;
      for (int i = 0; i < m; ++i) dot += std::conj(g[i]) * wf.samples(i, n);
      acc += std::norm(dot);
    }
    const double rho = 1.0;  // per-antenna unit power
    const double sampled = rho * acc / tsamples;
    CHECK(sampled ==
          doctest::Approx(illumination_power(r_z, g, rho)).epsilon(0.01));
  }

  CHECK_THROWS_AS(
      illumination_power(HermitianMatrix::identity(3), CVec(2), 1.0),
      DimensionError);
  CHECK_THROWS_AS(
      illumination_power(HermitianMatrix::identity(2), CVec(2), 0.0),
      DomainError);
}

TEST_CASE("worst case illumination" * doctest::timeout(600)) {
  ExperimentConfig cfg;
  cfg.num_antennas = 8;
  cfg.num_ris_elements = 8;

  SUBCASE("single target equals its own power") {
    ExperimentConfig single = cfg;
    single.target_angles_deg = {-30.0};
    const Scene scene = build_scene(single, 0, 1);
    const PrecoderDesign d = design_precoder(single, DesignKind::unquantized_isac);
    const IlluminationReport rep = worst_case_illumination(d, scene, 1.0);
    REQUIRE(rep.per_target.size() == 1);
    CHECK(rep.worst_case == doctest::Approx(rep.per_target[0].power_linear));
    CHECK(rep.reference == "unquantized_isac");
  }

  SUBCASE("raising beta diverts power away from the targets") {
    const Scene scene = build_scene(cfg, 0, 1);
    DesignInputs in = design_inputs_from_config(cfg);
    in.beta = 0.2;
    const PrecoderDesign low = design_precoder(in);
    in.beta = 0.8;
    const PrecoderDesign high = design_precoder(in);
    CHECK(worst_case_illumination(high, scene, 1.0).worst_case <=
          worst_case_illumination(low, scene, 1.0).worst_case);
  }

  SUBCASE("radar-only design dominates the ISAC trade-off across seeds") {
    PhiloxStream rng(31, 703);
    for (int seed = 0; seed < 3; ++seed) {
      ExperimentConfig geo = cfg;
      geo.target_angles_deg = {-60.0 + 40.0 * rng.uniform(),
                               10.0 + 50.0 * rng.uniform()};
      const Scene scene = build_scene(geo, 0, 1);
      DesignInputs in = design_inputs_from_config(geo);
      in.beta = 0.5;
      const PrecoderDesign prop = design_precoder(in, DesignKind::proposed);
      const PrecoderDesign radar =
          design_precoder(in, DesignKind::unquantized_radar);
      CHECK(worst_case_illumination(radar, scene, 1.0).worst_case >=
            worst_case_illumination(prop, scene, 1.0).worst_case);
    }
  }
}

TEST_CASE("illumination csv") {
  IlluminationReport rep;
  rep.reference = "proposed";
  rep.per_target = {{-0.5, 2.0}, {0.1, 4.0}};
  rep.worst_case = 2.0;
  CHECK(illumination_csv_header() ==
        "beta,scheme,target_angle_deg,power_linear,power_db,worst_case_db\n");
  const std::string rows = illumination_csv_rows(0.3, rep);
  CHECK(rows.find("0.3,proposed,") == 0);
  CHECK(rows.find("3.010299957") != std::string::npos);  // 10 log10 2
  int lines = 0;
  for (const char c : rows)
    if (c == '\n') ++lines;
  CHECK(lines == 2);
}
