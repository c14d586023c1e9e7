#pragma once

#include <string>

#include "linalg.hpp"
#include "rng.hpp"

namespace rist {

// 1-bit quantized transmit block: each column is one time sample with
// entries in {(+-1 +- j)/sqrt(2)}; the actual transmit signal is
// power_scale * samples with power_scale = sqrt(P/M).
struct QuantizedWaveform {
  CMat samples;  // M x T
  double power_scale = 1.0;
};

// (sgn(Re) + j sgn(Im)) / sqrt(2), sgn(0) = +1. Unit modulus per entry, so
// the per-antenna power constraint is met exactly.
cplx one_bit_quantize(cplx x);
CVec one_bit_quantize(std::span<const cplx> x);

// diag^{-1/2}(R) R diag^{-1/2}(R); requires strictly positive diagonal.
HermitianMatrix normalize_covariance(const HermitianMatrix& r);

// Arcsine (van Vleck) rule: R_z = (2/pi) casin(R_x_tilde). Requires unit
// diagonal so that the output diagonal is again exactly 1.
HermitianMatrix arcsine_covariance(const HermitianMatrix& r_x_tilde);

// Columns z_n = Q(W t_n) with t_n ~ CN(0, I).
QuantizedWaveform gen_quantized_waveform(const CMat& w, int num_samples,
                                         double total_power, PhiloxStream& rng);

// Binary dump: 16-byte header (8-byte magic "RISTWAV1", uint32 M, uint32 T)
// followed by row-major interleaved float64 re/im, little-endian.
void write_waveform(const QuantizedWaveform& wf, const std::string& path);
QuantizedWaveform read_waveform(const std::string& path);

}  // namespace rist
