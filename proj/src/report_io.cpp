#include "westervelt/report_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "westervelt/errors.hpp"

namespace westervelt {

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  if (ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, p);
}

namespace {

std::ofstream open_out(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void write_series(const std::string& path, const std::vector<SeriesSample>& series,
                  double r_hat) {
  std::ofstream out = open_out(path);
  out << "t,sup_u_dev,sup_v,bc_residual,energy\n";
  for (const SeriesSample& s : series) {
    const double dev = std::max(s.u_max - r_hat, r_hat - s.u_min);
    out << format_double(s.t) << ',' << format_double(dev) << ',' << format_double(s.sup_v)
        << ',' << format_double(s.bc_residual) << ',' << format_double(s.energy) << '\n';
  }
  finish(out, path);
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ofstream out = open_out(path);
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
  finish(out, path);
}

void write_spectrum_csv(const std::string& path, const ComplexVector& eigenvalues,
                        double zero_tol) {
  std::vector<int> idx(eigenvalues.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (eigenvalues[a].real() != eigenvalues[b].real())
      return eigenvalues[a].real() > eigenvalues[b].real();
    return eigenvalues[a].imag() < eigenvalues[b].imag();
  });
  std::ofstream out = open_out(path);
  out << "re,im,is_zero_cluster\n";
  for (int i : idx) {
    const bool zero = std::abs(eigenvalues[i]) < zero_tol;
    out << format_double(eigenvalues[i].real()) << ',' << format_double(eigenvalues[i].imag())
        << ',' << (zero ? '1' : '0') << '\n';
  }
  finish(out, path);
}

}  // namespace westervelt
