#include "twobody/spectrum.hpp"

#include "twobody/basis.hpp"
#include "twobody/csv.hpp"
#include "twobody/errors.hpp"
#include "twobody/hamiltonian.hpp"
#include "twobody/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>
#include <mutex>
#include <tuple>

namespace twobody {
namespace {

SpectrumSlice diagonalize_slice(double F, const ModelParams& base, const TwoBosonBasis& basis,
                                const HermitianOperator& h0, const Eigen::VectorXd& separation,
                                const SpectrumOptions& options) {
  const HermitianOperator h = h0 + build_stark(F, basis);
  EigenDecomposition ed;
  if (basis.dim() <= options.dense_limit) {
    ed = eigh(h.to_dense());
    if (options.window) {
      std::vector<Eigen::Index> keep;
      for (Eigen::Index k = 0; k < ed.values.size(); ++k)
        if (ed.values[k] >= options.window->lower && ed.values[k] <= options.window->upper)
          keep.push_back(k);
      EigenDecomposition sub;
      sub.values.resize(static_cast<Eigen::Index>(keep.size()));
      sub.vectors.resize(ed.vectors.rows(), static_cast<Eigen::Index>(keep.size()));
      for (std::size_t c = 0; c < keep.size(); ++c) {
        sub.values[static_cast<Eigen::Index>(c)] = ed.values[keep[c]];
        sub.vectors.col(static_cast<Eigen::Index>(c)) = ed.vectors.col(keep[c]);
      }
      ed = std::move(sub);
    }
  } else {
    if (!options.window)
      throw InvalidArgument("spectra above the dense limit need an energy window");
    ed = windowed_eigenpairs(h, options.window->lower, options.window->upper);
  }
  (void)base;

  SpectrumSlice slice;
  slice.F = F;
  slice.window = options.window;
  slice.eigenvalues = ed.values;
  slice.correlations = (ed.vectors.array().square().colwise() * separation.array()).colwise().sum().transpose();
  if (options.keep_vectors) slice.vectors = std::move(ed.vectors);
  return slice;
}

}  // namespace

std::vector<SpectrumSlice> spectrum_vs_field(const std::vector<double>& fields,
                                             const ModelParams& params,
                                             const SpectrumOptions& options) {
  ModelParams open = params;
  open.F = 0.0;
  if (open.boundary != Boundary::Open) throw InvalidArgument("field spectra use the open chain");
  open.validate();
  const TwoBosonBasis basis(open.sites);
  const HermitianOperator h0 = build_h0(open, basis);
  Eigen::VectorXd separation(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t k = 0; k < basis.dim(); ++k)
    separation[static_cast<Eigen::Index>(k)] = basis.unrank(k).separation();

  std::vector<SpectrumSlice> slices(fields.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t k = next++; k < fields.size(); k = next++) {
      try {
        slices[k] = diagonalize_slice(fields[k], open, basis, h0, separation, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(fields.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
  return slices;
}

std::string_view to_string(LevelLabel l) {
  return l == LevelLabel::Correlated ? "correlated" : "uncorrelated";
}

std::vector<LevelLabel> classify_levels(const SpectrumSlice& slice, double r_threshold) {
  std::vector<LevelLabel> labels;
  labels.reserve(static_cast<std::size_t>(slice.correlations.size()));
  for (Eigen::Index k = 0; k < slice.correlations.size(); ++k)
    labels.push_back(slice.correlations[k] <= r_threshold ? LevelLabel::Correlated
                                                          : LevelLabel::Uncorrelated);
  return labels;
}

LevelTracking track_levels(const std::vector<SpectrumSlice>& slices, double min_overlap) {
  LevelTracking tr;
  if (slices.empty()) return tr;
  tr.ids.resize(slices.size());
  const auto first = static_cast<int>(slices[0].eigenvalues.size());
  for (int k = 0; k < first; ++k) tr.ids[0].push_back(k);
  tr.level_count = first;

  for (std::size_t s = 1; s < slices.size(); ++s) {
    const auto& prev = slices[s - 1];
    const auto& cur = slices[s];
    if (prev.vectors.cols() != prev.eigenvalues.size() || cur.vectors.cols() != cur.eigenvalues.size())
      throw InvalidArgument("level tracking needs eigenvectors in every slice");
    const Eigen::MatrixXd overlap = (prev.vectors.transpose() * cur.vectors).cwiseAbs();

    std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> candidates;
    for (Eigen::Index i = 0; i < overlap.rows(); ++i)
      for (Eigen::Index j = 0; j < overlap.cols(); ++j)
        if (overlap(i, j) > 0.05) candidates.emplace_back(overlap(i, j), i, j);
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

    std::vector<int> ids(static_cast<std::size_t>(cur.eigenvalues.size()), -1);
    std::vector<bool> used(static_cast<std::size_t>(prev.eigenvalues.size()), false);
    bool ambiguous = false;
    for (const auto& [ov, i, j] : candidates) {
      if (used[static_cast<std::size_t>(i)] || ids[static_cast<std::size_t>(j)] != -1) continue;
      if (ov < min_overlap) {
        ambiguous = true;
        continue;
      }
      used[static_cast<std::size_t>(i)] = true;
      ids[static_cast<std::size_t>(j)] = tr.ids[s - 1][static_cast<std::size_t>(i)];
    }
    for (auto& id : ids)
      if (id == -1) id = tr.level_count++;
    if (ambiguous) tr.ambiguous.push_back(s);
    tr.ids[s] = std::move(ids);
  }
  return tr;
}

namespace {

struct TrackedLevel {
  double energy;
  double rbar;
};

std::optional<TrackedLevel> lookup(const SpectrumSlice& slice, const std::vector<int>& ids, int id) {
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (ids[k] == id)
      return TrackedLevel{slice.eigenvalues[static_cast<Eigen::Index>(k)],
                          slice.correlations[static_cast<Eigen::Index>(k)]};
  return std::nullopt;
}

}  // namespace

std::vector<AvoidedCrossing> detect_avoided_crossings(const std::vector<SpectrumSlice>& slices,
                                                      const CrossingOptions& options) {
  std::vector<AvoidedCrossing> out;
  if (slices.size() < 2) return out;
  const LevelTracking tr = track_levels(slices, options.min_overlap);
  const auto label = [&](double r) {
    return r <= options.r_threshold ? LevelLabel::Correlated : LevelLabel::Uncorrelated;
  };
  const auto level = [&](std::size_t t, int id) { return lookup(slices[t], tr.ids[t], id); };
  const auto signed_gap = [&](std::size_t t, int a, int b) -> std::optional<double> {
    const auto x = level(t, a), y = level(t, b);
    if (!x || !y) return std::nullopt;
    return y->energy - x->energy;
  };
  const auto flagged = [&](std::size_t lo, std::size_t hi) {
    return std::any_of(tr.ambiguous.begin(), tr.ambiguous.end(),
                       [&](std::size_t s) { return s >= lo && s <= hi; });
  };

  // Labels are read where the gap stops shrinking on either side, away from the mixing region.
  const auto finish = [&](AvoidedCrossing ac, std::size_t lo, std::size_t hi) {
    const int a = ac.level_a, b = ac.level_b;
    const auto gap_at = [&](std::size_t t) {
      const auto d = signed_gap(t, a, b);
      return d ? std::optional<double>(std::abs(*d)) : std::nullopt;
    };
    while (lo > 0) {
      const auto g0 = gap_at(lo - 1), g1 = gap_at(lo);
      if (!g0 || !g1 || *g0 < *g1) break;
      --lo;
    }
    while (hi + 1 < slices.size()) {
      const auto g0 = gap_at(hi + 1), g1 = gap_at(hi);
      if (!g0 || !g1 || *g0 < *g1) break;
      ++hi;
    }
    const auto la = level(lo, a), lb = level(lo, b), ra = level(hi, a), rb = level(hi, b);
    ac.label_a = label(la->rbar);
    ac.label_b = label(lb->rbar);
    const bool mixed = ac.label_a != ac.label_b || label(ra->rbar) != label(rb->rbar);
    ac.flagged = flagged(lo, hi);
    if (options.require_mixed && !mixed && !ac.true_crossing) return;
    out.push_back(ac);
  };

  for (std::size_t s = 0; s + 1 < slices.size(); ++s) {
    const auto& ids = tr.ids[s];
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
      const int a = ids[k], b = ids[k + 1];
      const auto d0 = signed_gap(s, a, b), d1 = signed_gap(s + 1, a, b);
      if (!d0 || !d1) continue;

      // Tracked levels changed order between s and s+1: a true crossing.
      if ((*d0 > 0.0) != (*d1 > 0.0)) {
        AvoidedCrossing ac;
        ac.level_a = a;
        ac.level_b = b;
        ac.true_crossing = true;
        ac.gap = 0.0;
        ac.F_center = slices[s].F + (slices[s + 1].F - slices[s].F) * *d0 / (*d0 - *d1);
        finish(ac, s, s + 1);
        continue;
      }
      if (s == 0) continue;

      // Interior local minimum of the gap at slice s.
      const auto dp = signed_gap(s - 1, a, b);
      if (!dp || (*dp > 0.0) != (*d0 > 0.0)) continue;
      const double g_prev = std::abs(*dp), g_cur = std::abs(*d0), g_next = std::abs(*d1);
      if (!(g_cur <= g_prev && g_cur < g_next)) continue;

      const double f0 = slices[s - 1].F, f1 = slices[s].F, f2 = slices[s + 1].F;
      const double denom = g_prev - 2.0 * g_cur + g_next;
      const double shift = denom > 0.0 ? 0.5 * (g_prev - g_next) / denom : 0.0;
      AvoidedCrossing ac;
      ac.level_a = a;
      ac.level_b = b;
      ac.F_center = f1 + shift * 0.5 * (f2 - f0);
      ac.gap = std::max(g_cur - 0.25 * (g_prev - g_next) * shift, 0.0);
      ac.true_crossing = ac.gap <= options.crossing_tolerance;
      finish(ac, s - 1, s + 1);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const AvoidedCrossing& x, const AvoidedCrossing& y) { return x.F_center < y.F_center; });
  return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectrumSlice>& slices,
                        const LevelTracking& tracking, double r_threshold) {
  out << "F,level_id,energy,rbar,label\n";
  for (std::size_t s = 0; s < slices.size(); ++s) {
    const auto labels = classify_levels(slices[s], r_threshold);
    for (Eigen::Index k = 0; k < slices[s].eigenvalues.size(); ++k) {
      const int id = s < tracking.ids.size() ? tracking.ids[s][static_cast<std::size_t>(k)] : int(k);
      out << fmt_num(slices[s].F) << ',' << id << ',' << fmt_num(slices[s].eigenvalues[k]) << ','
          << fmt_num(slices[s].correlations[k]) << ',' << to_string(labels[static_cast<std::size_t>(k)])
          << '\n';
    }
  }
}

void write_crossings_json(std::ostream& out, const std::vector<AvoidedCrossing>& crossings) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : crossings)
    arr.push_back({{"F_center", c.F_center},
                   {"gap", c.gap},
                   {"classification", {to_string(c.label_a), to_string(c.label_b)}},
                   {"levels", {c.level_a, c.level_b}},
                   {"true_crossing", c.true_crossing},
                   {"flagged", c.flagged}});
  out << arr.dump(2) << '\n';
}

}  // namespace twobody
