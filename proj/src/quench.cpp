#include "twobody/quench.hpp"

#include "twobody/csv.hpp"
#include "twobody/errors.hpp"
#include "twobody/hamiltonian.hpp"
#include "twobody/observables.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

namespace twobody {

void WavePacketSpec::validate(std::size_t sites) const {
  if (!(std::abs(K0) <= std::numbers::pi)) throw InvalidArgument("packet K0 must satisfy |K0| <= pi");
  if (!(alpha > 0.0)) throw InvalidArgument("packet width alpha must be positive");
  if (NA < 1 || static_cast<std::size_t>(NA) > sites)
    throw InvalidArgument("packet centre NA must lie in [1, N]");
}

BoundProjector::BoundProjector(const BandStructure& band, const TwoBosonBasis& ring_basis) {
  if (band.sites != ring_basis.sites()) throw InvalidArgument("band and basis disagree on N");
  vectors_.resize(static_cast<Eigen::Index>(ring_basis.dim()),
                  static_cast<Eigen::Index>(band.state_count()));
  Eigen::Index col = 0;
  for (std::size_t s = 0; s < band.sectors.size(); ++s)
    for (const auto& st : band.sectors[s].states) {
      vectors_.col(col++) = bound_state_realspace(st, ring_basis);
      labels_.emplace_back(s, st.branch);
    }
}

double BoundProjector::transfer(const StateVector& psi) const {
  return (vectors_.adjoint() * psi).squaredNorm();
}

std::optional<std::size_t> BoundProjector::column(std::size_t sector, Branch b) const {
  for (std::size_t c = 0; c < labels_.size(); ++c)
    if (labels_[c].first == sector && labels_[c].second == b) return c;
  return std::nullopt;
}

StateVector prepare_wavepacket(const WavePacketSpec& spec, const BandStructure& band,
                               const BoundProjector& projector) {
  spec.validate(band.sites);
  StateVector psi = StateVector::Zero(projector.vectors().rows());
  for (std::size_t s = 0; s < band.sectors.size(); ++s) {
    const double K = band.sectors[s].sector.K;
    const double dk = K - spec.K0;
    const double g = std::exp(-dk * dk / (2.0 * spec.alpha * spec.alpha));
    const auto col = projector.column(s, spec.branch);
    if (!col) {
      if (g > 1e-8)
        throw IncompleteBand("no " + std::string(to_string(spec.branch)) +
                             " bound state at K = " + std::to_string(K));
      continue;
    }
    psi += std::polar(g, -double(spec.NA) * K) *
           projector.vectors().col(static_cast<Eigen::Index>(*col));
  }
  const double n = psi.norm();
  if (n == 0.0) throw IncompleteBand("wave packet has no weight on the selected branch");
  return psi / n;
}

double transfer_rate(const StateVector& psi, const BoundProjector& projector) {
  return projector.transfer(psi);
}

QuenchSetup prepare_quench(const ModelParams& model, const WavePacketSpec& packet) {
  ModelParams open = model;
  open.F = 0.0;
  open.boundary = Boundary::Open;
  open.validate();
  if (open.sites % 2 == 0) throw InvalidArgument("quench setup needs odd N");
  packet.validate(open.sites);

  TwoBosonBasis basis(open.sites);
  HermitianOperator h0 = build_h0(open, basis);
  BandStructure band = band_scan(open.kappa, open.U, open.sites);
  BoundProjector projector(band, basis);
  StateVector psi0 = prepare_wavepacket(packet, band, projector);
  return QuenchSetup{open, packet, std::move(basis), std::move(h0), std::move(band),
                     std::move(projector), std::move(psi0)};
}

std::vector<double> time_grid(double t_end, double dt) {
  if (!(dt > 0.0) || t_end < 0.0) throw InvalidArgument("time grid needs dt > 0 and t_end >= 0");
  const auto n = static_cast<std::size_t>(std::llround(std::floor(t_end / dt + 1e-9)));
  std::vector<double> t(n + 1);
  for (std::size_t k = 0; k <= n; ++k) t[k] = double(k) * dt;
  return t;
}

QuenchTrajectory evolve(const HermitianOperator& h, const StateVector& psi0,
                        const std::vector<double>& times, const QuenchSetup& setup,
                        const EvolveOptions& options) {
  if (times.empty() || times.front() != 0.0) throw InvalidArgument("times must start at 0");
  if (!std::is_sorted(times.begin(), times.end())) throw InvalidArgument("times must ascend");
  if (h.dim() != static_cast<std::size_t>(psi0.size()))
    throw InvalidArgument("Hamiltonian and state dimensions differ");

  QuenchTrajectory traj;
  // Observables see the renormalized state; the raw norm is recorded so the
  // propagation error stays visible.
  const auto sample = [&](double t, const StateVector& psi) {
    const double norm = psi.norm();
    if (std::abs(norm - 1.0) > 1e-8)
      throw AccuracyError("norm drifted beyond 1e-8 at t = " + std::to_string(t), std::abs(norm - 1.0));
    const StateVector unit = psi / norm;
    traj.times.push_back(t);
    traj.norm.push_back(norm);
    traj.transfer.push_back(setup.projector.transfer(unit));
    traj.distance.push_back(mean_distance(setup.basis, unit));
    traj.energy.push_back(expectation(setup.h0, unit));
  };

  if (options.backend == Backend::Spectral) {
    std::optional<SpectralPropagator> own;
    const SpectralPropagator* prop = options.spectral;
    if (!prop) prop = &own.emplace(h);
    const StateVector coeff = prop->project(psi0);
    const auto& ed = prop->decomposition();
    const Eigen::MatrixXcd q = ed.vectors.cast<std::complex<double>>();
    StateVector psi = psi0;
    for (double t : times) {
      StateVector c = coeff;
      for (Eigen::Index n = 0; n < c.size(); ++n) c[n] *= std::polar(1.0, -ed.values[n] * t);
      psi = q * c;
      sample(t, psi);
    }
    traj.final_state = std::move(psi);
    return traj;
  }

  const ChebyshevPropagator prop(h, options.chebyshev);
  StateVector psi = psi0;
  double last = 0.0;
  for (double t : times) {
    psi = prop.evolve(psi, t - last);
    last = t;
    sample(t, psi);
  }
  traj.final_state = std::move(psi);
  return traj;
}

void write_trajectory_csv(std::ostream& out, const QuenchTrajectory& traj) {
  out << "t,transfer,distance,energy,norm\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    out << fmt_num(traj.times[k]) << ',' << fmt_num(traj.transfer[k]) << ','
        << fmt_num(traj.distance[k]) << ',' << fmt_num(traj.energy[k]) << ','
        << fmt_num(traj.norm[k]) << '\n';
}

std::optional<double> detect_plateau(const QuenchTrajectory& traj, double window,
                                     double threshold) {
  const auto& t = traj.times;
  const auto& y = traj.transfer;
  std::size_t end = 0;
  for (std::size_t start = 0; start < t.size(); ++start) {
    end = std::max(end, start);
    while (end < t.size() && t[end] - t[start] < window) ++end;
    if (end >= t.size()) break;
    const std::size_t n = end - start + 1;
    double mean = 0.0, sq = 0.0;
    for (std::size_t k = start; k <= end; ++k) mean += y[k];
    mean /= double(n);
    for (std::size_t k = start; k <= end; ++k) sq += (y[k] - mean) * (y[k] - mean);
    if (std::sqrt(sq / double(n)) < threshold) return t[start];
  }
  return std::nullopt;
}

std::vector<EnergyWeight> energy_distribution(const StateVector& psi0,
                                              const SpectralPropagator& spectrum, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) throw InvalidArgument("mass must lie in (0, 1]");
  const StateVector c = spectrum.project(psi0);
  const auto& values = spectrum.decomposition().values;
  std::vector<EnergyWeight> all(static_cast<std::size_t>(c.size()));
  for (Eigen::Index n = 0; n < c.size(); ++n) all[static_cast<std::size_t>(n)] = {values[n], std::norm(c[n])};
  std::stable_sort(all.begin(), all.end(),
                   [](const EnergyWeight& a, const EnergyWeight& b) { return a.weight > b.weight; });
  std::vector<EnergyWeight> kept;
  double acc = 0.0;
  for (const auto& ew : all) {
    kept.push_back(ew);
    acc += ew.weight;
    if (acc >= mass - 1e-12) break;
  }
  std::sort(kept.begin(), kept.end(),
            [](const EnergyWeight& a, const EnergyWeight& b) { return a.energy < b.energy; });
  return kept;
}

std::vector<double> SweepResult::fields() const {
  std::vector<double> f;
  for (const auto& p : points) f.push_back(p.F);
  return f;
}

std::vector<double> SweepResult::transfers() const {
  std::vector<double> v;
  for (const auto& p : points) v.push_back(p.transfer);
  return v;
}

std::vector<double> field_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw InvalidArgument("field grid needs step > 0 and hi >= lo");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5));
  std::vector<double> f(n + 1);
  for (std::size_t k = 0; k <= n; ++k) f[k] = lo + double(k) * step;
  return f;
}

SweepResult sweep_transfer(const std::vector<double>& fields, double t_final,
                           const QuenchSetup& setup, unsigned threads,
                           const ChebyshevOptions& chebyshev) {
  if (!(t_final > 0.0)) throw InvalidArgument("t_f must be positive");
  for (double F : fields)
    if (F == 0.0) throw InvalidArgument("sweep fields must be nonzero");

  SweepResult result;
  result.t_final = t_final;
  result.points.resize(fields.size());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < fields.size(); k = next++) {
      SweepPoint& pt = result.points[k];
      pt.F = fields[k];
      try {
        const HermitianOperator h = setup.h0 + build_stark(pt.F, setup.basis);
        const ChebyshevPropagator prop(h, chebyshev);
        const StateVector psi = prop.evolve(setup.psi0, t_final);
        pt.transfer = setup.projector.transfer(psi);
        pt.ok = true;
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(fields.size())));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  result.period = estimate_period(result);
  return result;
}

PeriodEstimate estimate_period(const std::vector<double>& values, double spacing,
                               double min_correlation) {
  PeriodEstimate est;
  const std::size_t n = values.size();
  if (n < 4) return est;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / double(n);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = values[k] - mean;
  const double c0 = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  if (c0 <= 1e-24 * double(n)) return est;

  std::vector<double> ac(n);
  for (std::size_t lag = 0; lag < n; ++lag) {
    double s = 0.0;
    for (std::size_t k = 0; k + lag < n; ++k) s += x[k] * x[k + lag];
    ac[lag] = s / c0;
  }
  for (std::size_t lag = 1; lag + 1 < n; ++lag) {
    if (ac[lag] >= ac[lag - 1] && ac[lag] > ac[lag + 1]) {
      if (ac[lag] < min_correlation || 2 * lag > n) return est;
      const double y0 = ac[lag - 1], y1 = ac[lag], y2 = ac[lag + 1];
      const double denom = y0 - 2.0 * y1 + y2;
      const double shift = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
      est.periodic = true;
      est.lag = lag;
      est.peak_correlation = y1;
      est.period = (double(lag) + shift) * spacing;
      est.uncertainty = spacing;
      return est;
    }
  }
  return est;
}

PeriodEstimate estimate_period(const SweepResult& sweep) {
  std::vector<double> values;
  for (const auto& p : sweep.points) {
    if (!p.ok) return {};
    values.push_back(p.transfer);
  }
  if (values.size() < 2) return {};
  const double spacing = std::abs(sweep.points[1].F - sweep.points[0].F);
  return estimate_period(values, spacing);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "F,transfer_tf\n";
  for (const auto& p : sweep.points)
    out << fmt_num(p.F) << ',' << (p.ok ? fmt_num(p.transfer) : std::string("nan")) << '\n';
}

}  // namespace twobody
