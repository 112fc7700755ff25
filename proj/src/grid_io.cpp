#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>

#include "qwb/csv.hpp"
#include "qwb/grid.hpp"

namespace qwb {

namespace {

constexpr std::array<char, 4> kMagic{'Q', 'W', 'F', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b.data(), b.size());
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), b.size());
  if (!is) throw Error(ErrorCode::IoError, "truncated QWF1 stream");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_csv(std::ostream& os, const GridWavefunction& psi) {
  CsvTable t{{"x", "re_psi", "im_psi", "abs2_psi"}, {}};
  t.rows.reserve(psi.amp.size());
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    t.rows.push_back({psi.grid.x(i), psi.amp[i].real(), psi.amp[i].imag(), std::norm(psi.amp[i])});
  }
  t.write(os);
}

void write_binary(std::ostream& os, const GridWavefunction& psi) {
  os.write(kMagic.data(), kMagic.size());
  put_u64(os, psi.grid.n());
  put_f64(os, psi.grid.dx());
  put_f64(os, psi.grid.x_min());
  put_f64(os, psi.mass);
  put_f64(os, psi.hbar);
  for (const auto& a : psi.amp) {
    put_f64(os, a.real());
    put_f64(os, a.imag());
  }
  if (!os) throw Error(ErrorCode::IoError, "QWF1 write failed");
}

GridWavefunction read_binary(std::istream& is) {
  std::array<char, 4> magic{};
  is.read(magic.data(), magic.size());
  if (!is || magic != kMagic) throw Error(ErrorCode::IoError, "missing QWF1 magic");
  const std::uint64_t n = get_u64(is);
  const double dx = get_f64(is);
  const double x_min = get_f64(is);
  const double mass = get_f64(is);
  const double hbar = get_f64(is);
  if (n > (std::uint64_t{1} << 32)) throw Error(ErrorCode::IoError, "implausible QWF1 sample count");
  Grid1D grid(x_min, dx, static_cast<std::size_t>(n));
  std::vector<cplx> amp(grid.n());
  for (auto& a : amp) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    a = {re, im};
  }
  return GridWavefunction(grid, std::move(amp), mass, hbar);
}

}  // namespace qwb
