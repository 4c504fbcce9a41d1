#include "twobody/bound_band.hpp"

#include "twobody/csv.hpp"
#include "twobody/errors.hpp"
#include "twobody/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>

namespace twobody {
namespace {

constexpr double kPi = std::numbers::pi;

double cubic(int sigma, double u, double x) {
  return sigma * x * x * x + 2.0 * u * x * x + sigma * (u * u - 1.0) * x + u;
}

double cubic_derivative(int sigma, double u, double x) {
  return 3.0 * sigma * x * x + 4.0 * u * x + sigma * (u * u - 1.0);
}

// Real roots of the secular cubic via its companion matrix, polished by Newton.
std::vector<double> real_roots(int sigma, double u) {
  Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
  // monic: x^3 + a2 x^2 + a1 x + a0
  const double a2 = 2.0 * u / sigma, a1 = (u * u - 1.0), a0 = u / sigma;
  companion(0, 0) = -a2;
  companion(0, 1) = -a1;
  companion(0, 2) = -a0;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(companion, false);
  std::vector<double> roots;
  for (int k = 0; k < 3; ++k) {
    const std::complex<double> z = es.eigenvalues()[k];
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    double x = z.real();
    for (int it = 0; it < 50; ++it) {
      const double d = cubic_derivative(sigma, u, x);
      if (d == 0.0) break;
      const double step = cubic(sigma, u, x) / d;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::abs(x)) break;
    }
    roots.push_back(x);
  }
  return roots;
}

bool on_grid(double K, std::size_t n, double* m_out) {
  const double m = K * double(n) / (2.0 * kPi);
  if (m_out) *m_out = std::round(m);
  return std::abs(m - std::round(m)) < 1e-9;
}

}  // namespace

MomentumSector MomentumSector::make(double K, double kappa, double U) {
  double J = 2.0 * kappa * std::cos(0.5 * K);
  if (std::abs(J) < 1e-14 * kappa) J = 0.0;
  return {K, J, J == 0.0 ? std::copysign(HUGE_VAL, U) : U / J};
}

std::string_view to_string(Branch b) { return b == Branch::Upper ? "upper" : "lower"; }

double BoundState::cubic_residual() const {
  const double x = std::exp(beta);
  const double scale = x * x * x + 2.0 * std::abs(u) * x * x + (u * u + 1.0) * x + std::abs(u);
  return std::abs(cubic(parity, u, x)) / scale;
}

std::vector<double> BoundState::relative_amplitudes(std::size_t r_max) const {
  const double x = std::exp(beta);
  std::vector<double> psi(r_max + 1);
  // r = 1 row of the sector eigen-equation fixes psi_0 against the tail.
  psi[0] = (u * parity / x + 1.0) / std::numbers::sqrt2;
  double tail = 1.0;
  for (std::size_t r = 1; r <= r_max; ++r) {
    tail *= parity / x;
    psi[r] = tail;
  }
  return psi;
}

HermitianOperator build_heq(double K, double kappa, double U, std::size_t length) {
  const double J = MomentumSector::make(K, kappa, U).J;
  std::vector<HermitianOperator::Triplet> t;
  const auto add_hop = [&t](Eigen::Index a, Eigen::Index b, double v) {
    if (v == 0.0) return;
    t.emplace_back(a, b, v);
    t.emplace_back(b, a, v);
  };
  if (U != 0.0) {
    t.emplace_back(0, 0, U);
    if (length >= 1) t.emplace_back(1, 1, U);
  }
  if (length >= 1) add_hop(0, 1, -std::numbers::sqrt2 * J);
  for (std::size_t r = 1; r < length; ++r)
    add_hop(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r + 1), -J);
  return HermitianOperator(length + 1, t);
}

std::vector<double> chain_isolated_levels(double K, double kappa, double U, std::size_t length) {
  const double J = MomentumSector::make(K, kappa, U).J;
  const auto n = static_cast<Eigen::Index>(length + 1);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd e = Eigen::VectorXd::Constant(n - 1, -J);
  d[0] = U;
  if (n > 1) {
    d[1] = U;
    e[0] = -std::numbers::sqrt2 * J;
  }
  const Eigen::VectorXd w = tridiagonal_eigenvalues(d, e);
  std::vector<double> out;
  const double edge = 2.0 * std::abs(J);
  for (Eigen::Index k = 0; k < w.size(); ++k)
    if (std::abs(w[k]) > edge * (1.0 + 1e-12)) out.push_back(w[k]);
  return out;
}

SectorSolution solve_bound_states(double K, double kappa, double U,
                                  const BoundSolveOptions& options) {
  SectorSolution sol{MomentumSector::make(K, kappa, U), {}, false};
  if (sol.sector.flat()) {
    sol.flat = true;
    return sol;
  }
  if (U == 0.0) return sol;

  const auto levels = chain_isolated_levels(K, kappa, U, options.validation_length);
  const double J = sol.sector.J, u = sol.sector.u;
  for (int sigma : {1, -1}) {
    for (double x : real_roots(sigma, u)) {
      if (!(x > 1.0)) continue;
      const double energy = -sigma * J * (x + 1.0 / x);
      // Keep only roots realized as an isolated level of the truncated chain.
      const auto hit = std::find_if(levels.begin(), levels.end(), [&](double lv) {
        return std::abs(lv - energy) < options.validation_tolerance;
      });
      if (hit == levels.end()) continue;
      const bool duplicate = std::any_of(sol.states.begin(), sol.states.end(), [&](const BoundState& s) {
        return std::abs(s.energy - energy) < options.validation_tolerance;
      });
      if (duplicate) continue;
      BoundState s;
      s.K = K;
      s.parity = sigma;
      s.beta = std::log(x);
      s.energy = energy;
      s.J = J;
      s.u = u;
      sol.states.push_back(s);
    }
  }
  if (sol.states.size() > 2)
    throw LinalgError("more than two bound states in sector K = " + std::to_string(K));
  std::sort(sol.states.begin(), sol.states.end(),
            [](const BoundState& a, const BoundState& b) { return a.energy > b.energy; });
  if (sol.states.size() == 2) {
    sol.states[0].branch = Branch::Upper;
    sol.states[1].branch = Branch::Lower;
  } else if (sol.states.size() == 1) {
    sol.states[0].branch = U < 0.0 ? Branch::Lower : Branch::Upper;
  }
  return sol;
}

std::vector<double> momentum_grid(std::size_t sites) {
  if (sites % 2 == 0) throw InvalidArgument("momentum grid needs odd N");
  const int half = static_cast<int>(sites - 1) / 2;
  std::vector<double> ks;
  for (int m = -half; m <= half; ++m) ks.push_back(2.0 * kPi * m / double(sites));
  return ks;
}

StateVector bound_state_realspace(const BoundState& bound, const TwoBosonBasis& basis) {
  const std::size_t n = basis.sites();
  if (n % 2 == 0) throw InvalidArgument("bound_state_realspace needs odd N");
  if (!on_grid(bound.K, n, nullptr))
    throw InvalidArgument("K = " + std::to_string(bound.K) + " is not on the 2 pi m / N grid");

  const std::size_t r_max = (n - 1) / 2;
  const auto psi = bound.relative_amplitudes(r_max);
  const double K = bound.K;
  const double inv_sqrt_n = 1.0 / std::sqrt(double(n));
  const int ni = static_cast<int>(n);

  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(basis.dim()));
  for (int j = 1; j <= ni; ++j) {
    const std::complex<double> plane = std::polar(inv_sqrt_n, K * j);
    v[static_cast<Eigen::Index>(basis.rank(j, j))] += psi[0] * plane;
    for (std::size_t r = 1; r <= r_max; ++r) {
      const int partner = (j - 1 + static_cast<int>(r)) % ni + 1;
      v[static_cast<Eigen::Index>(basis.rank(j, partner))] +=
          psi[r] * plane * std::polar(1.0, 0.5 * K * double(r));
    }
  }
  v.normalize();
  return v;
}

bool BandStructure::complete(Branch b) const {
  return std::all_of(sectors.begin(), sectors.end(),
                     [&](const SectorSolution& s) {
                       return std::any_of(s.states.begin(), s.states.end(),
                                          [&](const BoundState& st) { return st.branch == b; });
                     });
}

double BandStructure::min_edge_gap() const {
  double gap = HUGE_VAL;
  for (const auto& s : sectors)
    for (const auto& st : s.states) gap = std::min(gap, std::abs(st.energy) - 2.0 * std::abs(st.J));
  return gap;
}

const BoundState* BandStructure::find(std::size_t sector, Branch b) const {
  for (const auto& st : sectors.at(sector).states)
    if (st.branch == b) return &st;
  return nullptr;
}

std::size_t BandStructure::state_count() const {
  std::size_t c = 0;
  for (const auto& s : sectors) c += s.states.size();
  return c;
}

BandStructure band_scan(double kappa, double U, std::size_t sites,
                        const BoundSolveOptions& options) {
  BandStructure band;
  band.kappa = kappa;
  band.U = U;
  band.sites = sites;
  for (double K : momentum_grid(sites)) band.sectors.push_back(solve_bound_states(K, kappa, U, options));
  return band;
}

void write_band_csv(std::ostream& out, const BandStructure& band) {
  out << "K,branch,beta,energy\n";
  for (const auto& s : band.sectors)
    for (const auto& st : s.states)
      out << fmt_num(st.K) << ',' << to_string(st.branch) << ',' << fmt_num(st.beta) << ','
          << fmt_num(st.energy) << '\n';
}

}  // namespace twobody
