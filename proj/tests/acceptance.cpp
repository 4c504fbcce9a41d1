// Acceptance checks for the headline results. Prints one PASS/FAIL line per
// criterion, preceded by the measured quantities. Usage:
//   twobody_acceptance [criterion numbers...]   (default: all)

#include "oracles.hpp"

#include "twobody/basis.hpp"
#include "twobody/bound_band.hpp"
#include "twobody/hamiltonian.hpp"
#include "twobody/observables.hpp"
#include "twobody/propagator.hpp"
#include "twobody/quench.hpp"
#include "twobody/three_site.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <thread>
#include <vector>

using namespace twobody;

namespace {

constexpr double pi = std::numbers::pi;

// reference quench: N = 111, U = V = -6.24, kappa = 1
constexpr std::size_t kSites = 111;
constexpr double kKappa = 1.0;
constexpr double kU = -6.24;
constexpr double kBlochField = -0.097120;
constexpr double kDecayField = -0.097815;

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

class Report {
 public:
  void add(const std::string& name, bool ok, const char* fmt, ...) __attribute__((format(printf, 4, 5))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    checks_.push_back({name, ok, buf});
    std::printf("    [%s] %-34s %s\n", ok ? "ok" : "xx", name.c_str(), buf);
    std::fflush(stdout);
  }
  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    std::printf("    [..] %s\n", buf);
    std::fflush(stdout);
  }
  bool ok() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.ok; });
  }

 private:
  std::vector<Check> checks_;
};

ModelParams reference_model(double F) {
  ModelParams p;
  p.sites = kSites;
  p.kappa = kKappa;
  p.U = p.V = kU;
  p.F = F;
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double mean_over(const QuenchTrajectory& tr, const std::vector<double>& v, double lo, double hi) {
  double s = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    if (tr.times[k] >= lo - 1e-9 && tr.times[k] <= hi + 1e-9) {
      s += v[k];
      ++n;
    }
  return s / n;
}

// ---------------------------------------------------------------------------

void criterion1(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  const double U = -6.0, kappa = 0.4;
  std::vector<double> times;
  for (int k = 0; k <= 4000; ++k) times.push_back(0.05 * k);

  // Independent exact evolution: second-quantized 6x6 H, Eigen eigensolver.
  auto exact = [&](double F, int target_i, int target_j) {
    Eigen::MatrixXd h = oracle::fock_hamiltonian(3, kappa, U, U, F, false);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    TwoBosonBasis basis(3);
    const auto p = static_cast<Eigen::Index>(basis.rank(1, 1));
    const auto q = static_cast<Eigen::Index>(basis.rank(target_i, target_j));
    std::vector<double> out;
    for (double t : times) {
      std::complex<double> a = 0.0;
      for (Eigen::Index n = 0; n < 6; ++n)
        a += es.eigenvectors()(q, n) * es.eigenvectors()(p, n) * std::polar(1.0, -es.eigenvalues()[n] * t);
      out.push_back(std::norm(a));
    }
    return out;
  };

  std::vector<double> loss = exact(-3.0, 1, 1);
  for (double& v : loss) v = 1.0 - v;
  OscillationFit fit = fit_oscillation(times, loss);
  const double amp_ref = 18.0 / 19.0;
  const double period_ref = 3 * std::abs(U) * pi / (std::sqrt(76.0) * kappa * kappa);
  r.add("F=-3 amplitude", std::abs(fit.amplitude - amp_ref) <= 0.1 * amp_ref, "%.4f vs 18/19=%.4f (+-10%%)",
        fit.amplitude, amp_ref);
  r.add("F=-3 period", std::abs(fit.period - period_ref) <= 0.1 * period_ref, "%.3f vs %.3f (+-10%%)",
        fit.period, period_ref);

  std::vector<double> up = exact(-1.0, 1, 3);
  const double peak_up = *std::max_element(up.begin(), up.end());
  r.add("F=-1 peak transfer to |up>", peak_up < 0.01, "max |<up|psi>|^2 = %.5f (< 0.01)", peak_up);
  std::vector<double> loss1 = exact(-1.0, 1, 1);
  double peak_loss = 0.0;
  for (double v : loss1) peak_loss = std::max(peak_loss, 1.0 - v);
  auto c = effective_constants(-1.0, U, kappa);
  double peak_analytic = 0.0;
  for (double t : times) peak_analytic = std::max(peak_analytic, transfer_probability(t, c));
  r.note("F=-1 analytic peak P = %.5f; exact 1-|<p|psi>|^2 peaks at %.4f through the (1,2) admixture",
         peak_analytic, peak_loss);
  const double elapsed = seconds_since(t0);
  r.add("runtime", elapsed < 1.0, "%.3f s (< 1 s)", elapsed);
}

void criterion2(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  auto grid = momentum_grid(kSites);
  // 20 momenta spread evenly over the grid, endpoints included
  std::vector<double> picks;
  for (int k = 0; k < 20; ++k) picks.push_back(grid[static_cast<std::size_t>(std::lround(k * (grid.size() - 1) / 19.0))]);

  TwoBosonBasis basis(kSites);
  ModelParams ring = reference_model(0.0);
  ring.boundary = Boundary::Ring;
  const HermitianOperator h0 = build_h0(ring, basis);

  double worst_energy = 0.0, worst_residual = 0.0, worst_K = 0.0;
  std::size_t states = 0, over = 0;
  bool counts_match = true;
  for (double K : picks) {
    auto sol = solve_bound_states(K, kKappa, kU);
    const double J = 2.0 * kKappa * std::cos(K / 2.0);
    Eigen::VectorXd ev = oracle::symmetric_eigenvalues(oracle::sector_chain(J, kU, 400));
    std::vector<double> isolated;
    for (double e : ev)
      if (std::abs(e) > 2.0 * J + 1e-9) isolated.push_back(e);
    if (isolated.size() != sol.states.size()) counts_match = false;
    for (const BoundState& b : sol.states) {
      double best = 1e300;
      for (double e : isolated) best = std::min(best, std::abs(e - b.energy));
      worst_energy = std::max(worst_energy, best);
      StateVector v = bound_state_realspace(b, basis);
      const double res = (h0.apply(v) - b.energy * v).norm();
      if (res >= 1e-6) ++over;
      if (res > worst_residual) {
        worst_residual = res;
        worst_K = K;
      }
      ++states;
    }
  }
  r.add("bound-state count vs chain", counts_match, "%zu states over 20 momenta", states);
  r.add("energy vs L=400 chain", worst_energy < 1e-8, "max |de| = %.2e (< 1e-8)", worst_energy);
  r.add("ring residual ||H0 psi - e psi||", worst_residual < 1e-6, "max %.2e at K=%.4f pi, %zu/%zu >= 1e-6",
        worst_residual, worst_K / pi, over, states);
  const double elapsed = seconds_since(t0);
  r.add("runtime", elapsed < 10.0, "%.2f s (< 10 s)", elapsed);
}

void criterion3(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  auto strong = band_scan(kKappa, kU, kSites);
  auto weak = band_scan(kKappa, -5.0, kSites);
  r.add("|U/kappa| = 6.24 complete", strong.complete(Branch::Upper) && strong.complete(Branch::Lower),
        "upper %d lower %d", strong.complete(Branch::Upper), strong.complete(Branch::Lower));
  r.add("|U/kappa| = 5 incomplete", !(weak.complete(Branch::Upper) && weak.complete(Branch::Lower)),
        "upper %d lower %d, %zu of %zu states", weak.complete(Branch::Upper), weak.complete(Branch::Lower),
        weak.state_count(), 2 * weak.sectors.size());
  const double elapsed = seconds_since(t0);
  r.add("runtime", elapsed < 5.0, "%.2f s (< 5 s)", elapsed);
}

const QuenchSetup& reference_setup() {
  static const QuenchSetup setup = prepare_quench(reference_model(0.0), WavePacketSpec{});
  return setup;
}

QuenchTrajectory reference_trajectory(double F, double dt) {
  const QuenchSetup& s = reference_setup();
  const HermitianOperator h = s.h0 + build_stark(F, s.basis);
  return evolve(h, s.psi0, time_grid(800.0, dt), s);
}

void criterion4(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  auto tr = reference_trajectory(kBlochField, 0.5);
  auto min_it = std::min_element(tr.transfer.begin(), tr.transfer.end());
  const double t_min = tr.times[static_cast<std::size_t>(min_it - tr.transfer.begin())];
  r.add("min T(t) over [0,800]", *min_it >= 0.88, "%.4f at t=%.1f (>= 0.88)", *min_it, t_min);
  const double late = mean_over(tr, tr.transfer, 400.0, 800.0);
  r.add("mean T(t) over [400,800]", late >= 0.90 && late <= 0.96, "%.4f (in [0.90, 0.96])", late);
  PeriodEstimate p = estimate_period(tr.energy, 0.5);
  r.add("E(t) period", p.periodic && std::abs(p.period - 64.7) <= 2.0, "%.2f (64.7 +- 2), correlation %.2f",
        p.period, p.peak_correlation);
  const double centre = mean_over(tr, tr.energy, 0.0, 800.0);
  r.add("E(t) mean over [0,800]", std::abs(centre - kU) <= 0.3, "%.4f (-6.24 +- 0.3)", centre);
  if (p.periodic) {
    const double whole = std::floor(800.0 / p.period) * p.period;
    r.note("E(t) mean over %d whole periods [0,%.1f]: %.4f", int(800.0 / p.period), whole,
           mean_over(tr, tr.energy, 0.0, whole));
  }
  r.note("T(t) at 800: %.4f; runtime %.1f s", tr.transfer.back(), seconds_since(t0));
}

void criterion5(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  auto tr = reference_trajectory(kDecayField, 0.5);
  r.add("T(800)", tr.transfer.back() < 0.35, "%.4f (< 0.35)", tr.transfer.back());
  r.add("r(800) / r(0)", tr.distance.back() > 5.0 * tr.distance.front(), "%.3f / %.3f = %.1f (> 5)",
        tr.distance.back(), tr.distance.front(), tr.distance.back() / tr.distance.front());
  const double late = mean_over(tr, tr.energy, 600.0, 800.0);
  r.add("mean E(t) over [600,800]", late > -2.0, "%.4f (> -2)", late);
  r.note("runtime %.1f s", seconds_since(t0));
}

void criterion6(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto fields = field_grid(-0.0995, -0.0950, 7.5e-5);
  auto sweep = sweep_transfer(fields, 800.0, reference_setup(), threads);
  std::size_t failed = 0;
  double lo = 1e300, hi = -1e300;
  for (const auto& p : sweep.points) {
    if (!p.ok) {
      ++failed;
      continue;
    }
    lo = std::min(lo, p.transfer);
    hi = std::max(hi, p.transfer);
  }
  r.add("all sweep points evolved", failed == 0, "%zu points, %zu failed", sweep.points.size(), failed);
  r.add("F_b", sweep.period.periodic && std::abs(sweep.period.period - 0.0015) <= 0.0003,
        "%.6f +- %.6f (0.0015 +- 0.0003), correlation %.2f", sweep.period.period, sweep.period.uncertainty,
        sweep.period.peak_correlation);
  r.add("range of T_tf", hi - lo > 0.4, "%.4f - %.4f = %.4f (> 0.4)", hi, lo, hi - lo);
  const double elapsed = seconds_since(t0);
  r.add("runtime", elapsed <= 1800.0, "%.1f s on %u thread(s) (<= 30 min)", elapsed, threads);
}

void criterion7(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();

  // Reference quench: norm, <H> and the two-particle sum rule along the trajectory.
  {
    const QuenchSetup& s = reference_setup();
    const HermitianOperator h = s.h0 + build_stark(kBlochField, s.basis);
    ChebyshevPropagator prop(h);
    StateVector psi = s.psi0;
    const double e0 = expectation(h, psi);
    double norm_dev = 0.0, energy_dev = 0.0, sum_dev = 0.0;
    for (int k = 1; k <= 16; ++k) {
      psi = prop.evolve(psi, 50.0);
      norm_dev = std::max(norm_dev, std::abs(psi.norm() - 1.0));
      energy_dev = std::max(energy_dev, std::abs(expectation(h, psi) - e0));
      // the rule is stated for normalized states; the norm drift is checked above
      sum_dev = std::max(sum_dev, std::abs(pair_probability_sum(s.basis, psi.normalized()) - 1.0));
    }
    r.add("unitarity, N=111 to t=800", norm_dev <= 1e-8, "max | ||psi|| - 1 | = %.2e", norm_dev);
    r.add("<H> conservation, N=111", energy_dev <= 1e-8, "max |d<H>| = %.2e", energy_dev);
    r.add("probability sum rule", sum_dev <= 1e-10, "max deviation %.2e", sum_dev);
  }

  // Spectral vs Chebyshev to t = 800 on a shorter chain with the same couplings;
  // a dense N=111 decomposition alone exceeds this criterion's time budget.
  {
    ModelParams m = reference_model(0.0);
    m.sites = 41;
    WavePacketSpec packet;
    packet.NA = 21;
    QuenchSetup s = prepare_quench(m, packet);
    const HermitianOperator h = s.h0 + build_stark(kBlochField, s.basis);
    SpectralPropagator exact(h);
    ChebyshevPropagator cheb(h);
    const double diff = (exact.evolve(s.psi0, 800.0) - cheb.evolve(s.psi0, 800.0)).norm();
    r.add("spectral vs Chebyshev, N=41, t=800", diff < 1e-6, "||dpsi|| = %.2e (< 1e-6)", diff);
  }

  // Hamiltonian against the second-quantized construction.
  {
    double worst = 0.0;
    for (int n = 2; n <= 6; ++n)
      for (bool ring : {false, true}) {
        ModelParams p = reference_model(ring ? 0.0 : kBlochField);
        p.sites = static_cast<std::size_t>(n);
        p.boundary = ring ? Boundary::Ring : Boundary::Open;
        Eigen::MatrixXd d = build_h(p, TwoBosonBasis(p.sites)).to_dense() -
                            oracle::fock_hamiltonian(n, p.kappa, p.U, p.V, p.F, ring);
        worst = std::max(worst, d.cwiseAbs().maxCoeff());
      }
    r.add("H vs brute force, N<=6", worst < 1e-14, "max |dH| = %.1e", worst);
  }
  const double elapsed = seconds_since(t0);
  r.add("runtime", elapsed < 60.0, "%.1f s (< 60 s)", elapsed);
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Report&)>>> criteria = {
      {"three-site analytic check", criterion1},  {"bound-band oracle", criterion2},
      {"completeness threshold", criterion3},     {"Bloch-oscillation quench", criterion4},
      {"decay quench", criterion5},               {"field-period extraction", criterion6},
      {"property suite", criterion7},
  };
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));

  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    std::printf("criterion %d: %s\n", id, criteria[k].first);
    std::fflush(stdout);
    Report report;
    try {
      criteria[k].second(report);
    } catch (const std::exception& e) {
      report.add("exception", false, "%s", e.what());
    }
    const bool ok = report.ok();
    failures += !ok;
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, criteria[k].first);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
