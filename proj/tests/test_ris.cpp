#include <cmath>

#include "doctest.h"
#include "oracle_helpers.hpp"
#include "ris.hpp"

using namespace rist;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("phase resolution") {
  const PhaseResolution b2 = PhaseResolution::from_bits(2);
  CHECK(b2.num_levels() == 4);
  CHECK(b2.delta_omega() == doctest::Approx(kPi / 2));
  CHECK_FALSE(b2.is_infinite());

  const PhaseResolution inf = PhaseResolution::infinite();
  CHECK(inf.is_infinite());
  CHECK_THROWS_AS(inf.delta_omega(), DomainError);

  CHECK(PhaseResolution::parse("inf").is_infinite());
  CHECK(PhaseResolution::parse("3").bits == 3);
  CHECK_THROWS_AS(PhaseResolution::parse("zero"), DomainError);
  CHECK_THROWS_AS(PhaseResolution::from_bits(0), DomainError);
}

TEST_CASE("cascade channel") {
  SUBCASE("identity link passes the waveform through") {
    const CVec h_ru(3, cplx(1.0, 0.0));
    const CMat h_br = CMat::identity(3);
    const CVec z = {cplx(0.5, 0.5), cplx(-1.0, 0.0), cplx(0.0, 2.0)};
    const CVec h_c = cascade_channel(h_ru, h_br, z);
    for (int i = 0; i < 3; ++i) CHECK(h_c[i] == z[i]);
  }

  SUBCASE("conjugation of the user link") {
    const CVec h_ru = {cplx(1.0, 0.0), cplx(0.0, 1.0)};
    CMat h_br(2, 1);
    h_br(0, 0) = 1.0;
    h_br(1, 0) = 1.0;
    const CVec z = {cplx(1.0, 0.0)};
    const CVec h_c = cascade_channel(h_ru, h_br, z);
    CHECK(h_c[0] == cplx(1.0, 0.0));
    CHECK(h_c[1] == cplx(0.0, -1.0));  // conj(j) = -j
  }

  SUBCASE("linear in the waveform") {
    PhiloxStream rng(21, 500);
    const CMat h_br = oracle::random_cmat(5, 3, rng);
    CVec h_ru(5), z1(3), z2(3), zs(3);
    for (auto& v : h_ru) v = rng.cgaussian();
    for (int i = 0; i < 3; ++i) {
      z1[i] = rng.cgaussian();
      z2[i] = rng.cgaussian();
      zs[i] = z1[i] + z2[i];
    }
    const CVec a = cascade_channel(h_ru, h_br, z1);
    const CVec b = cascade_channel(h_ru, h_br, z2);
    const CVec s = cascade_channel(h_ru, h_br, zs);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(s[i] - a[i] - b[i]) < 1e-12);
  }

  CHECK_THROWS_AS(cascade_channel(CVec(2), CMat::identity(3), CVec(3)),
                  DimensionError);
}

TEST_CASE("optimal phase") {
  SUBCASE("analytic two-element example") {
    const CVec h_c = {cplx(1.0, 1.0), cplx(-1.0, 0.0)};
    const CVec phi = optimal_phase(h_c);
    CHECK(std::arg(phi[0]) == doctest::Approx(-kPi / 4));
    CHECK(std::abs(std::abs(std::arg(phi[1])) - kPi) < 1e-12);
    const cplx gain = dot_plain(phi, h_c);
    CHECK(gain.real() == doctest::Approx(std::sqrt(2.0) + 1.0));
    CHECK(std::abs(gain.imag()) < 1e-12);
  }

  SUBCASE("all-real-positive input needs no rotation") {
    const CVec h_c = {cplx(2.0, 0.0), cplx(0.5, 0.0)};
    for (const auto& p : optimal_phase(h_c)) CHECK(p == cplx(1.0, 0.0));
  }

  SUBCASE("zero entries get unit phase") {
    const CVec h_c = {cplx(0.0, 0.0), cplx(1.0, 0.0)};
    CHECK(optimal_phase(h_c)[0] == cplx(1.0, 0.0));
  }

  SUBCASE("beats random competitors") {
    PhiloxStream rng(22, 501);
    for (int inst = 0; inst < 10; ++inst) {
      CVec h(5);
      for (auto& v : h) v = rng.cgaussian();
      const double best = instantaneous_snr(optimal_phase(h), h, 1.0);
      for (int c = 0; c < 1000; ++c) {
        CVec cand(5);
        for (auto& v : cand) v = std::polar(1.0, 2 * kPi * rng.uniform());
        CHECK(instantaneous_snr(cand, h, 1.0) <= best * (1.0 + 1e-12));
      }
    }
  }

  SUBCASE("aligned gain is purely real at scale") {
    PhiloxStream rng(22, 502);
    for (int inst = 0; inst < 200; ++inst) {
      CVec h(100);
      for (auto& v : h) v = rng.cgaussian();
      const cplx alpha = dot_plain(optimal_phase(h), h);
      CHECK(std::abs(alpha.imag()) < 1e-12);
      CHECK(alpha.real() >= 0.0);
    }
  }
}

TEST_CASE("embed symbol") {
  const CVec phi = {cplx(1.0, 0.0), cplx(0.0, -1.0)};

  const CVec same = embed_symbol(phi, cplx(1.0, 0.0));
  for (int i = 0; i < 2; ++i) CHECK(same[i] == phi[i]);

  const CVec ones(3, cplx(1.0, 0.0));
  const CVec rotated = embed_symbol(ones, cplx(0.0, 1.0));
  for (const auto& v : rotated) CHECK(v == cplx(0.0, 1.0));

  SUBCASE("angle shift and demodulation") {
    PhiloxStream rng(23, 503);
    const cplx s = std::polar(1.0, 2 * kPi * rng.uniform());
    CVec p(8);
    for (auto& v : p) v = std::polar(1.0, 2 * kPi * rng.uniform());
    const CVec omega = embed_symbol(p, s);
    for (int i = 0; i < 8; ++i) {
      const double diff =
          std::remainder(std::arg(omega[i]) - std::arg(p[i]) - std::arg(s),
                         2 * kPi);
      CHECK(std::abs(diff) < 1e-12);
      CHECK(std::abs(omega[i] * std::conj(s) - p[i]) < 1e-12);
    }
  }

  CHECK_THROWS_AS(embed_symbol(phi, cplx(0.5, 0.0)), DomainError);
}

TEST_CASE("discrete projection") {
  SUBCASE("one-bit example") {
    const CVec omega = {std::polar(1.0, 0.6 * kPi)};
    const CVec p = project_discrete(omega, PhaseResolution::from_bits(1));
    CHECK(p[0].real() == doctest::Approx(-1.0));
  }
  SUBCASE("two-bit example") {
    const CVec omega = {std::polar(1.0, 0.3 * kPi)};
    const CVec p = project_discrete(omega, PhaseResolution::from_bits(2));
    CHECK(p[0].imag() == doctest::Approx(1.0));  // nearest is j
  }
  SUBCASE("infinite resolution passes through") {
    const CVec omega = {std::polar(1.0, 1.2345)};
    const CVec p = project_discrete(omega, PhaseResolution::infinite());
    CHECK(p[0] == omega[0]);
  }
  SUBCASE("exhaustive candidates never beat the projection (b = 3)") {
    PhiloxStream rng(24, 504);
    const PhaseResolution b3 = PhaseResolution::from_bits(3);
    for (int rep = 0; rep < 500; ++rep) {
      const cplx omega = std::polar(1.0, 2 * kPi * rng.uniform());
      const std::vector<int> idx =
          project_discrete_indices(std::span<const cplx>(&omega, 1), b3);
      const double chosen =
          std::abs(std::remainder(std::arg(omega) - idx[0] * b3.delta_omega(),
                                  2 * kPi));
      for (int k = 0; k < 8; ++k) {
        const double cand = std::abs(
            std::remainder(std::arg(omega) - k * b3.delta_omega(), 2 * kPi));
        CHECK(chosen <= cand + 1e-12);
      }
      CHECK(chosen <= b3.delta_omega() / 2 + 1e-12);
    }
  }
  SUBCASE("midpoint resolves to the smaller index") {
    const CVec omega = {std::polar(1.0, kPi / 4)};  // exactly between 0 and pi/2
    const std::vector<int> idx =
        project_discrete_indices(omega, PhaseResolution::from_bits(2));
    CHECK(idx[0] == 0);
  }
  SUBCASE("projected angles are exact grid multiples") {
    PhiloxStream rng(24, 505);
    const PhaseResolution b4 = PhaseResolution::from_bits(4);
    CVec omega(16);
    for (auto& v : omega) v = std::polar(1.0, 2 * kPi * rng.uniform());
    const std::vector<int> idx = project_discrete_indices(omega, b4);
    const CVec p = project_discrete(omega, b4);
    for (int i = 0; i < 16; ++i)
      CHECK(p[i] == std::polar(1.0, idx[i] * b4.delta_omega()));
  }
}

TEST_CASE("ris state and trace") {
  PhiloxStream rng(24, 507);
  const int n = 6;
  CVec h(n);
  for (auto& v : h) v = rng.cgaussian();
  const CVec phi = optimal_phase(h);
  const CVec omega = embed_symbol(phi, std::polar(1.0, 0.77));
  const PhaseResolution b3 = PhaseResolution::from_bits(3);

  const RisState state = make_ris_state(phi, project_discrete(omega, b3), b3);
  CHECK(state.phi_angles.size() == n);
  CHECK(omega_in_feasible_set(state));  // exact grid multiples
  for (const double a : state.phi_angles) {
    CHECK(a >= 0.0);
    CHECK(a < 2 * kPi);
  }

  RisState off = state;
  off.omega_angles[2] += 1e-9;  // no longer a bitwise grid multiple
  CHECK_FALSE(omega_in_feasible_set(off));

  const RisState cont = make_ris_state(phi, omega, PhaseResolution::infinite());
  CHECK(omega_in_feasible_set(cont));

  CHECK(ris_trace_csv_header() == "n,i,omega_angle\n");
  const std::string rows = ris_trace_csv_rows(7, state);
  CHECK(rows.rfind("7,0,", 0) == 0);
  int lines = 0;
  for (const char c : rows)
    if (c == '\n') ++lines;
  CHECK(lines == n);
}

TEST_CASE("instantaneous snr") {
  const CVec h_c = {cplx(3.0, 0.0), cplx(0.0, 4.0)};
  const CVec phi = optimal_phase(h_c);
  CHECK(instantaneous_snr(phi, h_c, 2.0) == doctest::Approx(49.0 / 2.0));

  const CVec zeros(4, cplx(0.0, 0.0));
  const CVec ones(4, cplx(1.0, 0.0));
  CHECK(instantaneous_snr(ones, zeros, 1.0) == 0.0);

  CHECK_THROWS_AS(instantaneous_snr(ones, zeros, 0.0), DomainError);
  CHECK_THROWS_AS(instantaneous_snr(ones, zeros, -1.0), DomainError);

  SUBCASE("discrete projection sits close to the exhaustive optimum") {
    PhiloxStream rng(25, 506);
    const int n = 4;
    const PhaseResolution b2 = PhaseResolution::from_bits(2);
    for (int inst = 0; inst < 25; ++inst) {
      CVec h(n);
      for (auto& v : h) v = rng.cgaussian();
      const CVec omega = embed_symbol(optimal_phase(h), cplx(1.0, 0.0));
      const double projected =
          std::norm(dot_plain(project_discrete(omega, b2), h));

      double exhaustive = 0.0;  // 4^4 candidates
      for (int c = 0; c < 256; ++c) {
        CVec cand(n);
        int code = c;
        for (int i = 0; i < n; ++i) {
          cand[i] = std::polar(1.0, (code & 3) * b2.delta_omega());
          code >>= 2;
        }
        exhaustive = std::max(exhaustive, std::norm(dot_plain(cand, h)));
      }
      CHECK(projected <= exhaustive * (1.0 + 1e-12));
      CHECK(projected >= 0.25 * exhaustive);  // coarse sanity on the gap
    }
  }
}
