#include "formwave/material.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "formwave/cutoff.hpp"
#include "formwave/errors.hpp"
#include "formwave/multi_index.hpp"

namespace formwave {

namespace {

using Matrix = Eigen::MatrixXd;

Matrix block_of(const MaterialMap::Perturbation& p, std::size_t k) {
  const auto m = static_cast<Eigen::Index>(p.size);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      p.blocks.data() + k * p.size * p.size, m, m);
}

void validate(const GridSpec& grid, const MaterialMap::Perturbation& p, std::size_t size,
              const char* name) {
  require(p.size == size, ErrorCode::rank_mismatch,
          std::string(name) + " block size does not match binomial(N, rank)");
  require(p.blocks.size() == p.nodes.size() * size * size, ErrorCode::invalid_argument,
          std::string(name) + " block storage does not match the node list");
  for (std::size_t node : p.nodes)
    require(node < grid.node_count(), ErrorCode::grid_mismatch,
            std::string(name) + " node index outside the grid");
}

Matrix seeded_symmetric(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix b(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= i; ++j) b(i, j) = b(j, i) = dist(rng);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(b);
  const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  return norm > 0.0 ? Matrix(b / norm) : Matrix::Identity(m, m);
}

template <class Profile>
MaterialMap::Perturbation radial(const GridSpec& grid, std::size_t m, const Matrix& b,
                                 double amplitude, Profile profile) {
  MaterialMap::Perturbation p;
  p.size = m;
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    const double w = amplitude * profile(grid.node_radius(node));
    if (w == 0.0) continue;
    p.nodes.push_back(node);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) p.blocks.push_back(w * b(i, j));
  }
  return p;
}

}  // namespace

MaterialMap::MaterialMap(const GridSpec& grid, int rank, Perturbation eps, Perturbation mu,
                         double tau, double support_radius)
    : grid_(grid), rank_(rank), eps_(std::move(eps)), mu_(std::move(mu)), tau_(tau),
      support_radius_(support_radius) {
  require(rank >= 0 && rank < grid.dim(), ErrorCode::rank_overflow, "material rank must lie in [0, N)");
  require(tau >= 0.0, ErrorCode::invalid_argument, "decay order tau must be non-negative");
  validate(grid, eps_, binomial(grid.dim(), rank), "eps");
  validate(grid, mu_, binomial(grid.dim(), rank + 1), "mu");
}

MaterialMap MaterialMap::identity(const GridSpec& grid, int rank) {
  return MaterialMap(grid, rank, {binomial(grid.dim(), rank), {}, {}},
                     {binomial(grid.dim(), rank + 1), {}, {}},
                     std::numeric_limits<double>::infinity(), 0.0);
}

MaterialMap MaterialMap::compact_family(const GridSpec& grid, int rank, double amplitude,
                                        double r1, double r2, std::uint64_t seed) {
  const CutoffProfile eta(r1, r2);
  const auto profile = [&](double r) { return eta.bump(r); };
  const std::size_t ne = binomial(grid.dim(), rank);
  const std::size_t nh = binomial(grid.dim(), rank + 1);
  return MaterialMap(grid, rank, radial(grid, ne, seeded_symmetric(ne, seed), amplitude, profile),
                     radial(grid, nh, seeded_symmetric(nh, seed + 1), amplitude, profile),
                     std::numeric_limits<double>::infinity(), r2);
}

MaterialMap MaterialMap::decaying_family(const GridSpec& grid, int rank, double amplitude,
                                         double tau, std::uint64_t seed) {
  const auto profile = [&](double r) { return std::pow(1.0 + r * r, -0.5 * tau); };
  const std::size_t ne = binomial(grid.dim(), rank);
  const std::size_t nh = binomial(grid.dim(), rank + 1);
  return MaterialMap(grid, rank, radial(grid, ne, seeded_symmetric(ne, seed), amplitude, profile),
                     radial(grid, nh, seeded_symmetric(nh, seed + 1), amplitude, profile), tau,
                     std::numeric_limits<double>::infinity());
}

MaterialMap MaterialMap::from_columns(std::span<const FormField> records, double tau) {
  require(!records.empty(), ErrorCode::io_error, "material dump holds no records");
  const GridSpec grid = records.front().grid();
  const int q = records.front().rank();
  const std::size_t ne = binomial(grid.dim(), q);
  const std::size_t nh = binomial(grid.dim(), q + 1);
  require(records.size() == ne + nh, ErrorCode::io_error,
          "material dump needs binomial(N,q) + binomial(N,q+1) records");
  for (std::size_t r = 0; r < records.size(); ++r) {
    const int want = r < ne ? q : q + 1;
    require(records[r].grid() == grid && records[r].rank() == want, ErrorCode::io_error,
            "material dump record " + std::to_string(r) + " has the wrong grid or rank");
    require(records[r].space() == Space::physical, ErrorCode::io_error,
            "material dump records must be physical-space fields");
  }
  double support = 0.0;
  auto gather = [&](std::size_t first, std::size_t m) {
    Perturbation p;
    p.size = m;
    std::vector<double> block(m * m);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      bool nonzero = false;
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
          const cplx v = records[first + j].at(i, node);
          require(std::abs(v.imag()) <= 1e-14 * (1.0 + std::abs(v.real())),
                  ErrorCode::not_admissible, "material entries must be real");
          block[i * m + j] = v.real() - (i == j ? 1.0 : 0.0);
          nonzero = nonzero || block[i * m + j] != 0.0;
        }
      }
      if (!nonzero) continue;
      p.nodes.push_back(node);
      p.blocks.insert(p.blocks.end(), block.begin(), block.end());
      support = std::max(support, grid.node_radius(node));
    }
    return p;
  };
  Perturbation eps = gather(0, ne);
  Perturbation mu = gather(ne, nh);
  return MaterialMap(grid, q, std::move(eps), std::move(mu), tau, support);
}

double MaterialMap::perturbation_norm() const {
  double norm = 0.0;
  for (const Perturbation* p : {&eps_, &mu_}) {
    for (std::size_t k = 0; k < p->nodes.size(); ++k) {
      Eigen::JacobiSVD<Matrix> svd(block_of(*p, k));
      norm = std::max(norm, svd.singularValues()(0));
    }
  }
  return norm;
}

AdmissibilityReport MaterialMap::check(double min_eigenvalue_floor) const {
  AdmissibilityReport rep;
  const bool decays = std::isfinite(tau_);
  for (const Perturbation* p : {&eps_, &mu_}) {
    if (p->size == 0) continue;
    for (std::size_t k = 0; k < p->nodes.size(); ++k) {
      const Matrix a = block_of(*p, k);
      rep.symmetry_defect = std::max(rep.symmetry_defect, (a - a.transpose()).norm());
      const Matrix full = Matrix::Identity(a.rows(), a.cols()) + 0.5 * (a + a.transpose());
      Eigen::SelfAdjointEigenSolver<Matrix> eig(full, Eigen::EigenvaluesOnly);
      rep.min_eigenvalue = std::min(rep.min_eigenvalue, eig.eigenvalues()(0));
      Eigen::JacobiSVD<Matrix> svd(a);
      const double r = grid_.node_radius(p->nodes[k]);
      double bound = svd.singularValues()(0);
      if (decays) {
        bound *= std::pow(1.0 + r, tau_);
      } else if (r > support_radius_ + 1e-12) {
        bound = std::numeric_limits<double>::infinity();
      }
      rep.decay_bound = std::max(rep.decay_bound, bound);
    }
  }
  rep.admissible = rep.symmetry_defect <= 1e-12 && rep.min_eigenvalue >= min_eigenvalue_floor &&
                   std::isfinite(rep.decay_bound);
  return rep;
}

const MaterialMap& MaterialMap::validated() const {
  const AdmissibilityReport rep = check();
  if (!rep.admissible) {
    std::ostringstream msg;
    msg << "material map rejected: symmetry defect " << rep.symmetry_defect
        << ", smallest eigenvalue " << rep.min_eigenvalue << ", decay bound " << rep.decay_bound;
    fail(ErrorCode::not_admissible, msg.str());
  }
  return *this;
}

FormField MaterialMap::apply_perturbation(const FormField& u) const {
  require(u.grid() == grid_, ErrorCode::grid_mismatch, "field and material on different grids");
  require(u.space() == Space::physical, ErrorCode::wrong_space, "material acts on physical fields");
  require(u.rank() == rank_ || u.rank() == rank_ + 1, ErrorCode::rank_mismatch,
          "material acts on rank q or q+1 fields");
  const Perturbation& p = u.rank() == rank_ ? eps_ : mu_;
  FormField out(grid_, u.rank());
  const std::size_t m = p.size;
  const auto count = static_cast<long>(p.nodes.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    const std::size_t node = p.nodes[k];
    const double* a = p.blocks.data() + k * m * m;
    for (std::size_t i = 0; i < m; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += a[i * m + j] * u.at(j, node);
      out.at(i, node) = s;
    }
  }
  return out;
}

FormField MaterialMap::apply(const FormField& u) const { return u + apply_perturbation(u); }

}  // namespace formwave
