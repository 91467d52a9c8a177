#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "formwave/cutoff.hpp"
#include "formwave/forms.hpp"
#include "formwave/radial_kernel.hpp"

namespace formwave {

/// Coefficients p_m with h_ell(z) = exp(iz) sum_{m=0..ell} p_m z^-(m+1), built by the
/// upward recurrence h_{l+1} = (2l+1)/z h_l - h_{l-1} from h_{-1} = exp(iz)/z.
std::vector<cplx> spherical_hankel_coefficients(int ell);
/// Same coefficients from the factorial closed form.
std::vector<cplx> spherical_hankel_coefficients_closed(int ell);
/// Spherical Hankel function of the first kind h_ell(z).
cplx spherical_hankel(int ell, cplx z);
/// Cylindrical H^1_{ell + 1/2}(z) = sqrt(2z/pi) h_ell(z).
cplx hankel_half_integer(int ell, cplx z);

/// c_N = 1 / ((N-2) |S^{N-1}| (N-4)!!): makes (Delta + omega^2) Phi = delta.
double analytic_c_N(int dim);

/// Phi(x) = phi(|x|): phi(t) = -i c_N omega^(ell+1) t^-ell h_ell(omega t), ell = (N-3)/2,
/// i.e. c_N omega^nu t^-nu H^1_nu(omega t) up to the factor -i sqrt(pi/2).
/// Outgoing for real omega: phi ~ exp(i omega t).
class HankelKernel {
 public:
  HankelKernel(int dim, cplx omega);
  HankelKernel(int dim, cplx omega, double c_N);

  int dim() const noexcept { return dim_; }
  int ell() const noexcept { return (dim_ - 3) / 2; }
  double nu() const noexcept { return 0.5 * (dim_ - 2); }
  cplx omega() const noexcept { return profile_.wavenumber; }
  double c_N() const noexcept { return profile_.scale; }
  const RadialProfile& profile() const noexcept { return profile_; }

  cplx phi(double t) const;
  cplx phi_prime(double t) const;
  void evaluate(double t, cplx& value, cplx& derivative) const;
  /// Pointwise complex conjugate kernel (incoming for real omega).
  RadialProfile conjugate_profile() const;

 private:
  int dim_;
  RadialProfile profile_;
};

struct BoundRatios {
  double phi = 0.0;        ///< sup |phi| / (t^(2-N) + t^((1-N)/2))
  double phi_prime = 0.0;  ///< sup |phi'| / (t^(1-N) + t^((1-N)/2))
};

/// Sup ratios over `samples` log-spaced radii in [t_min, t_max].
BoundRatios kernel_bound_ratios(const HankelKernel& k, double t_min, double t_max, int samples);

/// |phi'' + (N-1)/t phi' + omega^2 phi| relative to the sum of term magnitudes, with
/// phi'' from an eighth-order difference quotient of the closed form.
double ode_residual(const HankelKernel& k, double t);

/// CSV rows t, re_phi, im_phi, re_dphi, im_dphi.
void write_kernel_table(std::ostream& out, const HankelKernel& k, std::span<const double> t);

/// Evaluation points as a flat point-major coordinate list.
struct PointSet {
  int dim = 3;
  std::vector<double> coords;
  std::vector<std::size_t> nodes;  ///< grid node of each point when taken from a grid

  std::size_t size() const noexcept { return coords.size() / dim; }
};

/// Grid nodes with inner <= |x| <= outer whose indices are multiples of `stride`
/// relative to the origin node.
PointSet window_points(const GridSpec& grid, double inner, double outer, int stride = 1);

/// (e * h)(x) = sum_I sum_y e_I(x - y) h_I(y) h^N at grid nodes; e is taken as zero where
/// x - y leaves the box.
std::vector<cplx> form_convolution(const FormField& e, const FormField& h,
                                   std::span<const std::size_t> eval_nodes);

/// Componentwise (Phi * u_I)(x), point-major, by direct quadrature over the support of u.
std::vector<cplx> kernel_convolution(const RadialProfile& kernel, const FormField& u,
                                     const PointSet& points, double exclusion);

struct PairSamples {
  int rank = 0;
  std::vector<cplx> e;  ///< point-major, binomial(N, q) per point
  std::vector<cplx> h;  ///< point-major, binomial(N, q+1) per point
};

enum class CellCorrection {
  ball,     ///< coincident cell replaced by the ball integral of t^(2-N) over the cell volume
  lattice,  ///< punctured-lattice h^2 correction from the Epstein zeta value
};

/// Regularized sum over Z^N minus the origin of |n|^(2-N) (analytic continuation).
double lattice_zeta(int dim);

struct RepresentationOptions {
  /// Allow evaluation at grid nodes inside the support, correcting the singular cell.
  bool singular_correction = false;
  CellCorrection cell = CellCorrection::ball;
  /// Minimum distance, in cells, between eval points and the source support.
  double guard_cells = 2.0;
  /// Sources are taken from |y| <= support_radius; 0 detects the support from (F, G).
  double support_radius = 0.0;
};

/// E = G * rot Phi^I - i omega F * Phi^I - (i/omega) (div F) * div Phi^I and its magnetic
/// analogue, evaluated by direct quadrature at `points`.
PairSamples representation_solution(const FormField& F, const FormField& G, const HankelKernel& kernel,
                                    const PointSet& points, RepresentationOptions opts = {});
/// Same with an arbitrary radial profile (e.g. the conjugate kernel) at frequency omega.
PairSamples representation_solution(const FormField& F, const FormField& G, const RadialProfile& kernel,
                                    cplx omega, const PointSet& points, RepresentationOptions opts = {});

/// Per point |(S(x/|x|) + Id) u(x)|^2, the pointwise radiation defect density.
std::vector<double> radiation_defect_samples(const PairSamples& u, const PointSet& points);
/// Per point |u(x)|^2.
std::vector<double> magnitude_samples(const PairSamples& u, const PointSet& points);

/// ||(M + i omega) u - (F, G)|| / ||i omega u|| at `points`, with M applied by fourth-order
/// central differences of step `step` on the representation solution u. Off-grid points
/// must lie outside the support of (F, G).
double representation_residual(const FormField& F, const FormField& G, const HankelKernel& kernel,
                               const PointSet& points, double step, RepresentationOptions opts = {});

/// Point samples of a grid pair at the nodes of `points`.
PairSamples sample_pair(const FormPair& p, const PointSet& points);
/// Relative l2 distance between two sample sets.
double relative_difference(const PairSamples& a, const PairSamples& b);

struct Calibration {
  double c_N = 0.0;
  double residual = 0.0;  ///< ||c_N u_unit - v|| / ||v|| on the window
  std::size_t points = 0;
};

/// Fits c_N so that the unit-scale kernel convolution of a scalar bump matches the
/// spectral Helmholtz solution at Im omega > 0 on the annulus [r2 + 2h, window_outer].
/// Window nodes are subsampled by `stride`. Throws calibration_failed when the residual
/// exceeds `tol`.
Calibration calibrate_c_N(const GridSpec& grid, const CutoffProfile& source, cplx omega,
                          double window_outer, double tol = 1e-3, int stride = 1);

}  // namespace formwave
