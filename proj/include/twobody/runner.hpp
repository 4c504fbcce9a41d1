#pragma once

#include "twobody/model.hpp"
#include "twobody/quench.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twobody {

enum class Experiment { ThreeSite, Band, Spectrum, Quench, Sweep };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view name);

struct FieldRange {
  double lo;
  double hi;
  double step;
};

struct RunConfig {
  Experiment experiment = Experiment::Quench;
  ModelParams model;
  WavePacketSpec packet;

  // time grid (three-site, quench)
  double t_end = 800.0;
  double dt = 1.0;
  // quench: probability mass for the energy-space decomposition (0 = skip)
  double energy_mass = 0.0;

  // three-site
  std::vector<double> three_site_fields{-3.0, -1.0};

  // sweep
  FieldRange sweep_fields{-0.0995, -0.0950, 7.5e-5};
  double t_final = 800.0;

  // spectrum
  FieldRange spectrum_fields{-6.0, 0.0, 0.01};
  bool has_window = false;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double r_threshold = 1.0;
};

/// Every problem found while reading or validating a configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Defaults for a bare run: N = 111, U = V = -6.24, kappa = 1 for quench, sweep and
/// band; the 3-site chain for three-site and spectrum.
RunConfig default_config(Experiment e);

/// Reads an INI file ([model], [packet], [time], [sweep], [spectrum],
/// [three_site]). Every field the experiment needs must be present.
RunConfig load_config(Experiment e, const std::filesystem::path& path);
RunConfig parse_config(Experiment e, std::istream& in);

/// Field-level range checks; throws ConfigError listing all violations.
void validate(const RunConfig& config);

/// Fields each experiment requires in a config file, as section.key.
std::vector<std::string> required_fields(Experiment e);

struct RunOptions {
  std::filesystem::path out_dir = "out";
  unsigned threads = 1;
  bool emit_plots = false;
  std::string config_source = "defaults";
};

struct RunOutcome {
  int exit_code = 0;
  std::vector<std::filesystem::path> files;
  std::string error;
};

/// Runs one experiment and writes its CSV/JSON artifacts plus manifest.json.
/// Numerical failures are reported through a nonzero exit code.
RunOutcome run(const RunConfig& config, const RunOptions& options, std::ostream& log);

}  // namespace twobody
