#include "frontend.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace rist {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

cplx one_bit_quantize(cplx x) {
  const double re = x.real() >= 0.0 ? kInvSqrt2 : -kInvSqrt2;
  const double im = x.imag() >= 0.0 ? kInvSqrt2 : -kInvSqrt2;
  return {re, im};
}

CVec one_bit_quantize(std::span<const cplx> x) {
  CVec z(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = one_bit_quantize(x[i]);
  return z;
}

HermitianMatrix normalize_covariance(const HermitianMatrix& r) {
  const int n = r.dim();
  std::vector<double> inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    const double d = r(i, i).real();
    if (d <= 0.0)
      throw DomainError("normalize_covariance: non-positive diagonal entry " +
                        std::to_string(d) + " at index " + std::to_string(i));
    inv_sqrt[i] = 1.0 / std::sqrt(d);
  }
  CMat out(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      out(i, j) = r(i, j) * (inv_sqrt[i] * inv_sqrt[j]);
      out(j, i) = std::conj(out(i, j));
    }
  }
  return hermitian_unchecked(std::move(out));
}

HermitianMatrix arcsine_covariance(const HermitianMatrix& r_x_tilde) {
  const int n = r_x_tilde.dim();
  for (int i = 0; i < n; ++i)
    if (std::abs(r_x_tilde(i, i).real() - 1.0) > 1e-9)
      throw DomainError("arcsine_covariance: input diagonal must be 1");
  CMat out = casin_elementwise(r_x_tilde.mat());
  out *= 2.0 / 3.14159265358979323846;
  for (int i = 0; i < n; ++i) out(i, i) = 1.0;  // (2/pi) asin(1) exactly
  return hermitian_unchecked(std::move(out));
}

QuantizedWaveform gen_quantized_waveform(const CMat& w, int num_samples,
                                         double total_power,
                                         PhiloxStream& rng) {
  if (num_samples < 1)
    throw DomainError("gen_quantized_waveform: need at least one sample");
  if (total_power <= 0.0)
    throw DomainError("gen_quantized_waveform: total power must be > 0");
  const int m = w.rows();
  QuantizedWaveform wf;
  wf.samples = CMat(m, num_samples);
  wf.power_scale = std::sqrt(total_power / m);
  CVec t(w.cols());
  for (int n = 0; n < num_samples; ++n) {
    for (auto& v : t) v = rng.cgaussian();
    const CVec x = mat_vec(w, t);
    for (int i = 0; i < m; ++i) wf.samples(i, n) = one_bit_quantize(x[i]);
  }
  return wf;
}

namespace {
constexpr char kMagic[8] = {'R', 'I', 'S', 'T', 'W', 'A', 'V', '1'};
}

void write_waveform(const QuantizedWaveform& wf, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(kMagic, 8);
  const std::uint32_t m = wf.samples.rows();
  const std::uint32_t t = wf.samples.cols();
  out.write(reinterpret_cast<const char*>(&m), 4);
  out.write(reinterpret_cast<const char*>(&t), 4);
  for (const auto& z : wf.samples.data()) {
    const double re = z.real(), im = z.imag();
    out.write(reinterpret_cast<const char*>(&re), 8);
    out.write(reinterpret_cast<const char*>(&im), 8);
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

QuantizedWaveform read_waveform(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("'" + path + "' is not a waveform dump");
  std::uint32_t m = 0, t = 0;
  in.read(reinterpret_cast<char*>(&m), 4);
  in.read(reinterpret_cast<char*>(&t), 4);
  QuantizedWaveform wf;
  wf.samples = CMat(static_cast<int>(m), static_cast<int>(t));
  for (auto& z : wf.samples.data()) {
    double re = 0.0, im = 0.0;
    in.read(reinterpret_cast<char*>(&re), 8);
    in.read(reinterpret_cast<char*>(&im), 8);
    z = {re, im};
  }
  if (!in) throw IoError("truncated waveform dump '" + path + "'");
  return wf;
}

}  // namespace rist
