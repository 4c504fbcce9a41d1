#include "twobody/runner.hpp"

#include "twobody/bound_band.hpp"
#include "twobody/csv.hpp"
#include "twobody/errors.hpp"
#include "twobody/hamiltonian.hpp"
#include "twobody/propagator.hpp"
#include "twobody/spectrum.hpp"
#include "twobody/three_site.hpp"

#include <Eigen/Core>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#ifndef TWOBODY_VERSION
#define TWOBODY_VERSION "0.0.0"
#endif

namespace twobody {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

// -------- config fields --------

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
  return v;
}

long parse_integer(const std::string& text) {
  std::size_t used = 0;
  long v = std::stol(text, &used);
  if (used != text.size()) throw std::invalid_argument(text);
  return v;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("empty list entry");
    out.push_back(parse_double(item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& field_table() {
  static const std::map<std::string, Setter> table = {
      {"model.sites",
       [](RunConfig& c, const std::string& v) {
         long n = parse_integer(v);
         if (n < 0) throw std::invalid_argument(v);
         c.model.sites = static_cast<std::size_t>(n);
       }},
      {"model.kappa", [](RunConfig& c, const std::string& v) { c.model.kappa = parse_double(v); }},
      {"model.U", [](RunConfig& c, const std::string& v) { c.model.U = parse_double(v); }},
      {"model.V", [](RunConfig& c, const std::string& v) { c.model.V = parse_double(v); }},
      {"model.F", [](RunConfig& c, const std::string& v) { c.model.F = parse_double(v); }},
      {"model.boundary",
       [](RunConfig& c, const std::string& v) { c.model.boundary = boundary_from_string(v); }},
      {"packet.K0", [](RunConfig& c, const std::string& v) { c.packet.K0 = parse_double(v); }},
      {"packet.K0_over_pi",
       [](RunConfig& c, const std::string& v) {
         c.packet.K0 = parse_double(v) * std::numbers::pi;
       }},
      {"packet.alpha", [](RunConfig& c, const std::string& v) { c.packet.alpha = parse_double(v); }},
      {"packet.NA",
       [](RunConfig& c, const std::string& v) { c.packet.NA = static_cast<int>(parse_integer(v)); }},
      {"packet.branch",
       [](RunConfig& c, const std::string& v) {
         if (v == "upper")
           c.packet.branch = Branch::Upper;
         else if (v == "lower")
           c.packet.branch = Branch::Lower;
         else
           throw std::invalid_argument(v);
       }},
      {"time.t_end", [](RunConfig& c, const std::string& v) { c.t_end = parse_double(v); }},
      {"time.dt", [](RunConfig& c, const std::string& v) { c.dt = parse_double(v); }},
      {"time.energy_mass", [](RunConfig& c, const std::string& v) { c.energy_mass = parse_double(v); }},
      {"three_site.fields",
       [](RunConfig& c, const std::string& v) { c.three_site_fields = parse_list(v); }},
      {"sweep.F_min", [](RunConfig& c, const std::string& v) { c.sweep_fields.lo = parse_double(v); }},
      {"sweep.F_max", [](RunConfig& c, const std::string& v) { c.sweep_fields.hi = parse_double(v); }},
      {"sweep.F_step",
       [](RunConfig& c, const std::string& v) { c.sweep_fields.step = parse_double(v); }},
      {"sweep.t_final", [](RunConfig& c, const std::string& v) { c.t_final = parse_double(v); }},
      {"spectrum.F_min",
       [](RunConfig& c, const std::string& v) { c.spectrum_fields.lo = parse_double(v); }},
      {"spectrum.F_max",
       [](RunConfig& c, const std::string& v) { c.spectrum_fields.hi = parse_double(v); }},
      {"spectrum.F_step",
       [](RunConfig& c, const std::string& v) { c.spectrum_fields.step = parse_double(v); }},
      {"spectrum.E_min",
       [](RunConfig& c, const std::string& v) {
         c.window_lo = parse_double(v);
         c.has_window = true;
       }},
      {"spectrum.E_max",
       [](RunConfig& c, const std::string& v) {
         c.window_hi = parse_double(v);
         c.has_window = true;
       }},
      {"spectrum.r_threshold",
       [](RunConfig& c, const std::string& v) { c.r_threshold = parse_double(v); }},
  };
  return table;
}

bool odd_sites_needed(Experiment e) {
  return e == Experiment::Band || e == Experiment::Quench || e == Experiment::Sweep;
}

bool check_range(std::vector<std::string>& problems, const char* name, const FieldRange& r) {
  std::size_t before = problems.size();
  if (!(r.step > 0.0)) problems.push_back(std::string(name) + ".F_step: must be positive");
  if (r.hi < r.lo) problems.push_back(std::string(name) + ".F_max: must be >= F_min");
  if (problems.size() == before && (r.hi - r.lo) / r.step > 1e6)
    problems.push_back(std::string(name) + ".F_step: grid exceeds 10^6 points");
  return problems.size() == before;
}

// -------- numeric output helpers --------

json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt_num(x));
}

json config_json(const RunConfig& c) {
  json j;
  j["experiment"] = std::string(to_string(c.experiment));
  j["model"] = {{"sites", c.model.sites},
                {"kappa", num(c.model.kappa)},
                {"U", num(c.model.U)},
                {"V", num(c.model.V)},
                {"F", num(c.model.F)},
                {"boundary", std::string(to_string(c.model.boundary))}};
  switch (c.experiment) {
    case Experiment::ThreeSite: {
      json fields = json::array();
      for (double f : c.three_site_fields) fields.push_back(num(f));
      j["three_site"] = {{"fields", fields}};
      j["time"] = {{"t_end", num(c.t_end)}, {"dt", num(c.dt)}};
      break;
    }
    case Experiment::Band:
      break;
    case Experiment::Spectrum:
      j["spectrum"] = {{"F_min", num(c.spectrum_fields.lo)},
                       {"F_max", num(c.spectrum_fields.hi)},
                       {"F_step", num(c.spectrum_fields.step)},
                       {"r_threshold", num(c.r_threshold)}};
      if (c.has_window) {
        j["spectrum"]["E_min"] = num(c.window_lo);
        j["spectrum"]["E_max"] = num(c.window_hi);
      }
      break;
    case Experiment::Quench:
    case Experiment::Sweep:
      j["packet"] = {{"K0", num(c.packet.K0)},
                     {"alpha", num(c.packet.alpha)},
                     {"NA", c.packet.NA},
                     {"branch", std::string(to_string(c.packet.branch))}};
      if (c.experiment == Experiment::Quench) {
        j["time"] = {{"t_end", num(c.t_end)}, {"dt", num(c.dt)}, {"energy_mass", num(c.energy_mass)}};
      } else {
        j["sweep"] = {{"F_min", num(c.sweep_fields.lo)},
                      {"F_max", num(c.sweep_fields.hi)},
                      {"F_step", num(c.sweep_fields.step)},
                      {"t_final", num(c.t_final)}};
      }
      break;
  }
  return j;
}

// Collects artifacts; every file is written from the calling thread.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    body(out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + path.string());
    files_.push_back(path);
  }

  const std::vector<fs::path>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

void gnuplot_header(std::ostream& out, const std::string& png) {
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set terminal pngcairo size 900,600\n"
      << "set output '" << png << "'\n";
}

// -------- experiments --------

json run_three_site(const RunConfig& c, ArtifactWriter& w, bool plots) {
  const std::vector<double> times = time_grid(c.t_end, c.dt);
  struct Series {
    double F;
    std::vector<double> analytic, exact, unpaired;
  };
  std::vector<Series> all;
  json summary = json::array();
  for (double F : c.three_site_fields) {
    EffectiveConstants k = effective_constants(F, c.model.U, c.model.kappa);
    Series s{F, {}, exact_pair_loss(F, c.model.U, c.model.kappa, times),
             exact_unpaired_population(F, c.model.U, c.model.kappa, times)};
    s.analytic.reserve(times.size());
    for (double t : times) s.analytic.push_back(transfer_probability(t, k));
    OscillationFit fit = fit_oscillation(times, s.exact);
    double peak = *std::max_element(s.exact.begin(), s.exact.end());
    double peak_up = *std::max_element(s.unpaired.begin(), s.unpaired.end());
    summary.push_back({{"F", num(F)},
                       {"analytic_amplitude", num(std::sin(k.theta) * std::sin(k.theta))},
                       {"analytic_period", num(std::numbers::pi / k.omega)},
                       {"tan_theta", num(k.tan_theta)},
                       {"omega", num(k.omega)},
                       {"exact_amplitude", num(fit.amplitude)},
                       {"exact_period", num(fit.period)},
                       {"exact_peak", num(peak)},
                       {"exact_unpaired_peak", num(peak_up)}});
    all.push_back(std::move(s));
  }
  w.write("three_site.csv", [&](std::ostream& out) {
    out << "F,t,analytic,exact,exact_unpaired\n";
    for (const Series& s : all)
      for (std::size_t i = 0; i < times.size(); ++i)
        out << fmt_num(s.F) << ',' << fmt_num(times[i]) << ',' << fmt_num(s.analytic[i]) << ','
            << fmt_num(s.exact[i]) << ',' << fmt_num(s.unpaired[i]) << '\n';
  });
  if (plots) {
    w.write("three_site.gp", [&](std::ostream& out) {
      gnuplot_header(out, "three_site.png");
      out << "set xlabel 't'\nset ylabel '1 - |<p|psi(t)>|^2'\nplot";
      for (std::size_t i = 0; i < all.size(); ++i) {
        std::string f = fmt_num(all[i].F);
        out << (i ? ", \\\n    " : " ") << "'three_site.csv' using 2:($1==" << f
            << " ? $3 : 1/0) with lines title 'analytic F=" << f << "', \\\n    'three_site.csv' using 2:($1=="
            << f << " ? $4 : 1/0) with points pt 7 ps 0.3 title 'exact F=" << f << "'";
      }
      out << '\n';
    });
  }
  return {{"fields", summary}};
}

json run_band(const RunConfig& c, ArtifactWriter& w, bool plots) {
  BandStructure band = band_scan(c.model.kappa, c.model.U, c.model.sites);
  w.write("band.csv", [&](std::ostream& out) { write_band_csv(out, band); });
  if (plots) {
    w.write("band.gp", [&](std::ostream& out) {
      gnuplot_header(out, "band.png");
      out << "set xlabel 'K'\nset ylabel 'energy'\n"
          << "plot 'band.csv' using 1:(stringcolumn(2) eq 'upper' ? $4 : 1/0) with linespoints title 'upper', \\\n"
          << "     'band.csv' using 1:(stringcolumn(2) eq 'lower' ? $4 : 1/0) with linespoints title 'lower'\n";
    });
  }
  return {{"sectors", band.sectors.size()},
          {"bound_states", band.state_count()},
          {"upper_complete", band.complete(Branch::Upper)},
          {"lower_complete", band.complete(Branch::Lower)},
          {"min_edge_gap", num(band.min_edge_gap())}};
}

json run_spectrum(const RunConfig& c, const RunOptions& o, ArtifactWriter& w) {
  ModelParams model = c.model;
  model.F = 0.0;
  std::vector<double> fields = field_grid(c.spectrum_fields.lo, c.spectrum_fields.hi, c.spectrum_fields.step);
  SpectrumOptions so;
  if (c.has_window) {
    so.window = EnergyWindow{c.window_lo, c.window_hi};
  } else if (model.sites * (model.sites + 1) / 2 > so.dense_limit) {
    // bound-band region seen by a packet centred on NA: U + 2 F NA, width 10
    const double centre = model.U + (c.spectrum_fields.lo + c.spectrum_fields.hi) * c.packet.NA;
    so.window = EnergyWindow{centre - 5.0, centre + 5.0};
  }
  so.threads = o.threads;
  std::vector<SpectrumSlice> slices = spectrum_vs_field(fields, model, so);
  LevelTracking tracking = track_levels(slices);
  CrossingOptions co;
  co.r_threshold = c.r_threshold;
  std::vector<AvoidedCrossing> crossings = detect_avoided_crossings(slices, co);

  w.write("spectrum.csv", [&](std::ostream& out) { write_spectrum_csv(out, slices, tracking, c.r_threshold); });
  w.write("crossings.json", [&](std::ostream& out) { write_crossings_json(out, crossings); });
  if (o.emit_plots) {
    w.write("spectrum.gp", [&](std::ostream& out) {
      gnuplot_header(out, "spectrum.png");
      out << "set xlabel 'F'\nset ylabel 'E'\n"
          << "plot 'spectrum.csv' using 1:(stringcolumn(5) eq 'correlated' ? $3 : 1/0) with points pt 7 ps 0.3 "
             "title 'correlated', \\\n"
          << "     'spectrum.csv' using 1:(stringcolumn(5) eq 'uncorrelated' ? $3 : 1/0) with points pt 7 ps 0.3 "
             "title 'uncorrelated'\n";
    });
  }
  std::size_t true_crossings = 0, flagged = 0;
  for (const AvoidedCrossing& x : crossings) {
    true_crossings += x.true_crossing;
    flagged += x.flagged;
  }
  json window = nullptr;
  if (so.window) window = {num(so.window->lower), num(so.window->upper)};
  return {{"slices", slices.size()},
          {"window", window},
          {"tracked_levels", tracking.level_count},
          {"ambiguous_slices", tracking.ambiguous.size()},
          {"crossings", crossings.size()},
          {"true_crossings", true_crossings},
          {"flagged_crossings", flagged}};
}

double window_mean(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= lo && t[i] <= hi) {
      sum += v[i];
      ++n;
    }
  return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

json run_quench(const RunConfig& c, const RunOptions& o, ArtifactWriter& w) {
  QuenchSetup setup = prepare_quench(c.model, c.packet);
  HermitianOperator h = setup.h0 + build_stark(c.model.F, setup.basis);
  std::vector<double> times = time_grid(c.t_end, c.dt);
  QuenchTrajectory traj = evolve(h, setup.psi0, times, setup);

  w.write("trajectory.csv", [&](std::ostream& out) { write_trajectory_csv(out, traj); });

  json summary;
  summary["transfer_initial"] = num(traj.transfer.front());
  summary["transfer_final"] = num(traj.transfer.back());
  summary["transfer_min"] = num(*std::min_element(traj.transfer.begin(), traj.transfer.end()));
  summary["transfer_mean_second_half"] = num(window_mean(traj.times, traj.transfer, c.t_end / 2, c.t_end));
  summary["distance_initial"] = num(traj.distance.front());
  summary["distance_final"] = num(traj.distance.back());
  summary["energy_mean"] = num(window_mean(traj.times, traj.energy, 0.0, c.t_end));
  PeriodEstimate ep = estimate_period(traj.energy, c.dt);
  summary["energy_period"] = ep.periodic ? num(ep.period) : json(nullptr);
  double drift = 0.0;
  for (double n : traj.norm) drift = std::max(drift, std::abs(n - 1.0));
  summary["max_norm_drift"] = num(drift);
  auto plateau = detect_plateau(traj);
  summary["plateau_time"] = plateau ? num(*plateau) : json(nullptr);

  if (c.energy_mass > 0.0) {
    SpectralPropagator sp(h);
    std::vector<EnergyWeight> weights = energy_distribution(setup.psi0, sp, c.energy_mass);
    w.write("energy_distribution.csv", [&](std::ostream& out) {
      out << "energy,weight\n";
      for (const EnergyWeight& e : weights) out << fmt_num(e.energy) << ',' << fmt_num(e.weight) << '\n';
    });
    summary["energy_states"] = weights.size();
  }
  if (o.emit_plots) {
    w.write("trajectory.gp", [&](std::ostream& out) {
      gnuplot_header(out, "trajectory.png");
      out << "set multiplot layout 3,1\nset xlabel 't'\n"
          << "plot 'trajectory.csv' using 1:2 with lines\n"
          << "plot 'trajectory.csv' using 1:3 with lines\n"
          << "plot 'trajectory.csv' using 1:4 with lines\n"
          << "unset multiplot\n";
    });
  }
  return summary;
}

json run_sweep(const RunConfig& c, const RunOptions& o, ArtifactWriter& w) {
  QuenchSetup setup = prepare_quench(c.model, c.packet);
  std::vector<double> fields = field_grid(c.sweep_fields.lo, c.sweep_fields.hi, c.sweep_fields.step);
  SweepResult sweep = sweep_transfer(fields, c.t_final, setup, o.threads);

  std::size_t failed = 0;
  json failures = json::array();
  for (const SweepPoint& p : sweep.points)
    if (!p.ok) {
      ++failed;
      failures.push_back({{"F", num(p.F)}, {"error", p.error}});
    }
  std::vector<double> tr = sweep.transfers();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < tr.size(); ++i)
    if (sweep.points[i].ok) {
      lo = std::min(lo, tr[i]);
      hi = std::max(hi, tr[i]);
    }

  json sidecar;
  sidecar["F_b"] = sweep.period.periodic ? num(sweep.period.period) : json(nullptr);
  sidecar["F_b_uncertainty"] = num(sweep.period.uncertainty);
  sidecar["periodic"] = sweep.period.periodic;
  sidecar["peak_correlation"] = num(sweep.period.peak_correlation);
  sidecar["lag"] = sweep.period.lag;
  sidecar["transfer_range"] = failed == sweep.points.size() ? json(nullptr) : num(hi - lo);
  sidecar["points"] = sweep.points.size();
  sidecar["failed_points"] = failures;
  sidecar["settings"] = config_json(c);

  w.write("sweep.csv", [&](std::ostream& out) { write_sweep_csv(out, sweep); });
  w.write("sweep.json", [&](std::ostream& out) { out << sidecar.dump(2) << '\n'; });
  if (o.emit_plots) {
    w.write("sweep.gp", [&](std::ostream& out) {
      gnuplot_header(out, "sweep.png");
      out << "set xlabel 'F'\nset ylabel 'T(t_f)'\nplot 'sweep.csv' using 1:2 with linespoints\n";
    });
  }
  return {{"F_b", sidecar["F_b"]}, {"transfer_range", sidecar["transfer_range"]}, {"failed_points", failed}};
}

}  // namespace

// -------- public API --------

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::ThreeSite: return "three-site";
    case Experiment::Band: return "band";
    case Experiment::Spectrum: return "spectrum";
    case Experiment::Quench: return "quench";
    case Experiment::Sweep: return "sweep";
  }
  return "?";
}

Experiment experiment_from_string(std::string_view name) {
  for (Experiment e : {Experiment::ThreeSite, Experiment::Band, Experiment::Spectrum, Experiment::Quench,
                       Experiment::Sweep})
    if (to_string(e) == name) return e;
  throw InvalidArgument("unknown experiment '" + std::string(name) +
                        "' (expected three-site, band, spectrum, quench or sweep)");
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error("invalid configuration:\n  " + join(problems, "\n  ")), problems_(std::move(problems)) {}

RunConfig default_config(Experiment e) {
  RunConfig c;
  c.experiment = e;
  switch (e) {
    case Experiment::ThreeSite:
    case Experiment::Spectrum:
      c.model.sites = 3;
      c.model.kappa = 0.4;
      c.model.U = c.model.V = -6.0;
      c.t_end = 200.0;
      c.dt = 0.1;
      break;
    case Experiment::Quench:
      c.model.F = -0.097120;
      break;
    case Experiment::Band:
    case Experiment::Sweep:
      break;
  }
  return c;
}

std::vector<std::string> required_fields(Experiment e) {
  switch (e) {
    case Experiment::ThreeSite:
      return {"model.kappa", "model.U", "three_site.fields", "time.t_end", "time.dt"};
    case Experiment::Band:
      return {"model.sites", "model.kappa", "model.U"};
    case Experiment::Spectrum:
      return {"model.sites", "model.kappa", "model.U", "model.V", "spectrum.F_min", "spectrum.F_max",
              "spectrum.F_step"};
    case Experiment::Quench:
      return {"model.sites", "model.kappa", "model.U", "model.V", "model.F", "packet.K0",
              "packet.alpha", "packet.NA", "time.t_end", "time.dt"};
    case Experiment::Sweep:
      return {"model.sites", "model.kappa", "model.U", "model.V", "packet.K0", "packet.alpha", "packet.NA",
              "sweep.F_min", "sweep.F_max", "sweep.F_step", "sweep.t_final"};
  }
  return {};
}

RunConfig parse_config(Experiment e, std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& err) {
    throw ConfigError({"syntax error at line " + std::to_string(err.line()) + ": " + err.message()});
  }

  RunConfig c = default_config(e);
  std::vector<std::string> problems;
  std::set<std::string> seen;
  const auto& table = field_table();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      problems.push_back(section + ": key outside any section");
      continue;
    }
    for (const auto& [key, value] : body) {
      std::string name = section + "." + key;
      auto it = table.find(name);
      if (it == table.end()) {
        problems.push_back(name + ": unknown field");
        continue;
      }
      seen.insert(name);
      std::string text = value.get_value<std::string>();
      try {
        it->second(c, text);
      } catch (const std::exception&) {
        problems.push_back(name + ": cannot parse '" + text + "'");
      }
    }
  }
  if (seen.count("packet.K0") && seen.count("packet.K0_over_pi"))
    problems.push_back("packet.K0: give either K0 or K0_over_pi, not both");
  if (seen.count("packet.K0_over_pi")) seen.insert("packet.K0");
  if (e == Experiment::ThreeSite && !seen.count("model.V")) c.model.V = c.model.U;
  for (const std::string& name : required_fields(e))
    if (!seen.count(name)) problems.push_back(name + ": missing required field");
  if (!problems.empty()) throw ConfigError(std::move(problems));
  validate(c);
  return c;
}

RunConfig load_config(Experiment e, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config file '" + path.string() + "'"});
  return parse_config(e, in);
}

void validate(const RunConfig& c) {
  std::vector<std::string> problems;
  const ModelParams& m = c.model;
  const Experiment e = c.experiment;
  if (e == Experiment::ThreeSite && m.sites != 3) problems.push_back("model.sites: three-site requires 3");
  if (m.sites < 2) problems.push_back("model.sites: must be at least 2");
  if (m.sites > 2000) problems.push_back("model.sites: at most 2000 supported");
  if (odd_sites_needed(e) && m.sites % 2 == 0)
    problems.push_back("model.sites: must be odd for the momentum grid");
  if (!(m.kappa > 0.0)) problems.push_back("model.kappa: must be positive");
  if (m.boundary == Boundary::Ring && e != Experiment::Band)
    problems.push_back("model.boundary: " + std::string(to_string(e)) + " needs the open chain");
  if (m.boundary == Boundary::Ring && m.F != 0.0) problems.push_back("model.F: must be 0 on a ring");

  if (e == Experiment::ThreeSite) {
    if (m.V != m.U) problems.push_back("model.V: three-site requires V = U");
    for (double F : c.three_site_fields)
      if (F == 0.0 || F == m.U || F == -m.U)
        problems.push_back("three_site.fields: F = " + fmt_num(F) + " is singular (F in {0, U, -U})");
  }
  if (e == Experiment::ThreeSite || e == Experiment::Quench) {
    if (!(c.dt > 0.0)) problems.push_back("time.dt: must be positive");
    if (!(c.t_end >= 0.0)) problems.push_back("time.t_end: must be non-negative");
    if (c.dt > 0.0 && c.t_end / c.dt > 1e7) problems.push_back("time.dt: more than 10^7 samples");
  }
  if (e == Experiment::Quench && !(c.energy_mass >= 0.0 && c.energy_mass <= 1.0))
    problems.push_back("time.energy_mass: must lie in [0, 1]");
  if (e == Experiment::Quench || e == Experiment::Sweep) {
    if (std::abs(c.packet.K0) > std::numbers::pi) problems.push_back("packet.K0: |K0| must be at most pi");
    if (!(c.packet.alpha > 0.0)) problems.push_back("packet.alpha: must be positive");
    if (c.packet.NA < 1 || static_cast<std::size_t>(c.packet.NA) > m.sites)
      problems.push_back("packet.NA: must lie in 1..N");
  }
  if (e == Experiment::Sweep) {
    if (!(c.t_final > 0.0)) problems.push_back("sweep.t_final: must be positive");
    if (check_range(problems, "sweep", c.sweep_fields))
      for (double F : field_grid(c.sweep_fields.lo, c.sweep_fields.hi, c.sweep_fields.step))
        if (F == 0.0) problems.push_back("sweep.F_min: the field grid must not contain F = 0");
  }
  if (e == Experiment::Spectrum) {
    check_range(problems, "spectrum", c.spectrum_fields);
    if (c.has_window && !(c.window_lo < c.window_hi))
      problems.push_back("spectrum.E_max: must exceed E_min (both are needed for a window)");
    if (!(c.r_threshold > 0.0)) problems.push_back("spectrum.r_threshold: must be positive");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

RunOutcome run(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  RunOutcome outcome;
  json manifest;
  manifest["program"] = "twobody";
  manifest["version"] = TWOBODY_VERSION;
  manifest["versions"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", __VERSION__},
                          {"cxx_standard", __cplusplus}};
  manifest["experiment"] = std::string(to_string(config.experiment));
  manifest["config_source"] = options.config_source;
  manifest["threads"] = options.threads;
  manifest["config"] = config_json(config);

  try {
    validate(config);
  } catch (const ConfigError& err) {
    log << err.what() << '\n';
    outcome.exit_code = 2;
    outcome.error = err.what();
    return outcome;
  }

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec || !fs::is_directory(options.out_dir)) {
    outcome.exit_code = 2;
    outcome.error = "output directory '" + options.out_dir.string() + "' is not writable";
    log << outcome.error << '\n';
    return outcome;
  }

  ArtifactWriter writer(options.out_dir);
  try {
    json summary;
    switch (config.experiment) {
      case Experiment::ThreeSite: summary = run_three_site(config, writer, options.emit_plots); break;
      case Experiment::Band: summary = run_band(config, writer, options.emit_plots); break;
      case Experiment::Spectrum: summary = run_spectrum(config, options, writer); break;
      case Experiment::Quench: summary = run_quench(config, options, writer); break;
      case Experiment::Sweep: summary = run_sweep(config, options, writer); break;
    }
    manifest["status"] = "ok";
    manifest["summary"] = summary;
  } catch (const std::exception& err) {
    outcome.exit_code = 3;
    outcome.error = err.what();
    manifest["status"] = "error";
    manifest["error"] = err.what();
    log << "error: " << err.what() << '\n';
  }

  json files = json::array();
  for (const fs::path& p : writer.files()) files.push_back(p.filename().string());
  manifest["files"] = files;
  manifest["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    writer.write("manifest.json", [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
  } catch (const std::exception& err) {
    log << "error: " << err.what() << '\n';
    if (outcome.exit_code == 0) outcome.exit_code = 3;
  }
  outcome.files = writer.files();
  if (outcome.exit_code == 0 && manifest.contains("summary")) log << manifest["summary"].dump(2) << '\n';
  return outcome;
}

}  // namespace twobody
