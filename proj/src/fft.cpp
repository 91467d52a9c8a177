#include "formwave/fft.hpp"

#include <cmath>
#include <numbers>

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "formwave/errors.hpp"

namespace formwave {

namespace {

std::mutex plan_mutex;

fftw_plan plan_for(const GridSpec& grid, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard lock(plan_mutex);
  const auto key = std::make_tuple(grid.dim(), grid.points_per_axis(), sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::vector<int> dims(grid.dim(), grid.points_per_axis());
  std::vector<cplx> scratch(grid.node_count());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_dft(grid.dim(), dims.data(), buf, buf,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE | FFTW_UNALIGNED);
  require(p != nullptr, ErrorCode::invalid_argument, "FFT plan creation failed");
  plans.emplace(key, p);
  return p;
}

FormField transform(const FormField& u, int sign, Space target) {
  FormField out = u;
  out.set_space(target);
  const auto count = static_cast<long>(out.component_count());
#pragma omp parallel for schedule(static)
  for (long c = 0; c < count; ++c) dft_inplace(out.grid(), out.component(c), sign);
  if (sign > 0) out *= 1.0 / static_cast<double>(out.node_count());
  return out;
}

}  // namespace

void dft_inplace(const GridSpec& grid, std::span<cplx> values, int sign) {
  require(values.size() == grid.node_count(), ErrorCode::grid_mismatch,
          "transform buffer does not match the grid");
  fftw_plan p = plan_for(grid, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(values.data());
  fftw_execute_dft(p, buf, buf);
}

FormField to_fourier(const FormField& u) {
  require(u.space() == Space::physical, ErrorCode::wrong_space, "to_fourier expects physical input");
  return transform(u, -1, Space::fourier);
}

FormField to_physical(const FormField& u) {
  require(u.space() == Space::fourier, ErrorCode::wrong_space, "to_physical expects Fourier input");
  return transform(u, +1, Space::physical);
}

GridSpec frequency_grid(const GridSpec& g) {
  return GridSpec(g.dim(), g.points_per_axis(), g.points_per_axis() * std::numbers::pi / (2.0 * g.half_width()));
}

FormField continuous_fourier(const FormField& u) {
  const GridSpec& g = u.grid();
  const FormField hat = to_fourier(u);
  const GridSpec xi = frequency_grid(g);
  FormField out(xi, u.rank());
  const int dim = g.dim();
  const int n = g.points_per_axis();
  const double scale = g.cell_volume() * std::pow(2.0 * std::numbers::pi, -0.5 * dim);
  std::vector<int> src(dim), dst(dim);
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    g.node_indices(node, src);
    int parity = 0;
    for (int a = 0; a < dim; ++a) {
      const int k = src[a] < n / 2 ? src[a] : src[a] - n;
      dst[a] = k + n / 2;
      parity += k;
    }
    // exp(i xi L) = (-1)^k per axis from the box offset x_0 = -L
    const double phase = (parity % 2 == 0) ? scale : -scale;
    const std::size_t target = xi.node_at(dst);
    for (std::size_t c = 0; c < u.component_count(); ++c) out.at(c, target) = phase * hat.at(c, node);
  }
  return out;
}

}  // namespace formwave
