#include "pipelines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>

#include "correlations.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "filters.hpp"
#include "linalg.hpp"
#include "liom.hpp"
#include "mps.hpp"
#include "thermo.hpp"

namespace mbl::pipelines {

namespace {

using nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class StageTimer {
 public:
  StageTimer(RunContext& ctx, std::string stage)
      : ctx_(ctx), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    ctx_.record_timing(stage_, std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
  }

 private:
  RunContext& ctx_;
  std::string stage_;
  std::chrono::steady_clock::time_point start_;
};

DenseOperator site_pauli(const ExperimentConfig& c, int site, const std::string& axis) {
  return build_pauli(site, parse_axis(axis[0]), c.n_sites);
}

template <typename Row>
void append_rows(CsvTable& table, const std::vector<std::vector<Row>>& per_realization) {
  for (const auto& rows : per_realization)
    for (const auto& r : rows) table.rows.push_back(r);
}

using Rows = std::vector<std::vector<std::string>>;

// Series that vanish beyond l = 0 (exactly localized models) get the exact
// envelope; everything else the zero-velocity least-squares fit.
struct FitOutcome {
  LocalizationFit fit;
  std::string method;  // "exact_envelope", "zero_velocity" or "failed"
};

FitOutcome fit_with_fallback(const ProbeSeries& series, bool min_t_factor) {
  FitOutcome out;
  try {
    out.fit = exact_localization_fit(series);
    out.method = "exact_envelope";
    return out;
  } catch (const Error&) {
  }
  try {
    out.fit = fit_localization(series, FitAnsatz::ZeroVelocity, min_t_factor);
    out.method = "zero_velocity";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InsufficientData) throw;
    out.fit = LocalizationFit{};
    out.fit.c = kNaN;
    out.fit.mu = kNaN;
    out.method = "failed";
  }
  return out;
}

void add_fit_row(CsvTable& t, const std::string& name, const ExperimentConfig& c, std::uint64_t seed,
                 const std::string& method, const LocalizationFit& f) {
  t.add(name, c.n_sites, seed, c.h, method, f.c, f.mu, f.v, f.residual, f.points_used,
        f.points_floored);
}

CsvTable fit_table() {
  CsvTable t;
  t.header = {"fit", "n", "seed", "h", "method", "c", "mu", "v", "residual", "points", "floored"};
  return t;
}

CsvTable probe_table() {
  CsvTable t;
  t.header = {"kind", "n", "seed", "h", "l_or_d", "t", "value"};
  return t;
}

CsvTable filter_table() {
  CsvTable t;
  t.header = {"check", "n", "seed", "alpha", "value", "bound", "pass"};
  return t;
}

CsvTable correlation_table() {
  CsvTable t;
  t.header = {"theorem", "n", "seed", "k", "E_k", "d", "correlator", "bound", "kappa", "margin"};
  return t;
}

// One partner site per distance: to the right of site_a when possible.
std::vector<std::pair<int, int>> partner_sites(const ExperimentConfig& c) {
  std::vector<std::pair<int, int>> out;  // (site, distance)
  for (int d = 1; d < c.n_sites; ++d) {
    if (c.site_a + d < c.n_sites) {
      out.emplace_back(c.site_a + d, d);
    } else if (c.site_a - d >= 0) {
      out.emplace_back(c.site_a - d, d);
    }
  }
  return out;
}

double median(RealVec v) {
  std::sort(v.data(), v.data() + v.size());
  const Eigen::Index n = v.size();
  return n % 2 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

}  // namespace

PipelineResult spectrum(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "spectrum");
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const RealVec e = ctx.energies(model);
    Rows rows;
    for (Eigen::Index k = 0; k < e.size(); ++k)
      rows.push_back({CsvTable::cell(c.n_sites), CsvTable::cell(model.seed), CsvTable::cell(c.h),
                      CsvTable::cell(static_cast<long>(k)), CsvTable::cell(e(k))});
    return rows;
  });
  PipelineResult res;
  CsvTable t;
  t.header = {"n", "seed", "h", "k", "energy"};
  append_rows(t, per);
  res.tables.emplace_back("spectrum", std::move(t));
  return res;
}

PipelineResult assumptions(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "assumptions");
  const SiteSet supp_a{c.site_a};
  const SiteSet supp_b{c.resolved_site_b()};
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const RealVec e = ctx.energies(model);
    const double norm = std::max(std::abs(e(0)), std::abs(e(e.size() - 1)));
    const double tol = 1e-10 * (norm > 0.0 ? norm : 1.0);
    const auto ai = check_assumption_ai(e, tol);
    double gamma_tilde = kNaN, eta = kNaN;
    bool aii = false;
    if (interaction_distance(supp_a, supp_b, model) >= 2) {
      const RegionSplit split = split_regions(model, supp_a, supp_b);
      const auto res = check_assumption_aii(eigenvalues(split.h_a), eigenvalues(split.h_b), tol);
      gamma_tilde = res.gamma_tilde;
      eta = res.eta;
      aii = res.holds;
    }
    double zeta_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < e.size(); ++k)
      zeta_min = std::min(zeta_min, check_assumption_aiii(e, k, tol).zeta);
    Rows rows;
    rows.push_back({CsvTable::cell(c.n_sites), CsvTable::cell(model.seed), CsvTable::cell(c.h),
                    CsvTable::cell(ai.gamma), CsvTable::cell(gamma_tilde), CsvTable::cell(eta),
                    CsvTable::cell(zeta_min), CsvTable::cell(ai.holds), CsvTable::cell(aii),
                    CsvTable::cell(zeta_min > tol)});
    return rows;
  });
  PipelineResult res;
  CsvTable t;
  t.header = {"n", "seed", "h", "gamma", "gamma_tilde", "eta", "zeta_min", "ai", "aii", "aiii"};
  append_rows(t, per);
  res.tables.emplace_back("assumptions", std::move(t));
  return res;
}

PipelineResult lr_probe(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "lr-probe");
  const auto times = c.times();
  const auto ls = c.distances();
  const auto partners = partner_sites(c);
  struct Out {
    Rows probes, fits;
  };
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const EigenSystem eig = ctx.eigensystem(model);
    const DenseOperator a = site_pauli(c, c.site_a, c.axis_a);
    Out out;
    CsvTable probes = probe_table(), fits = fit_table();

    const ProbeSeries trunc = truncation_series(model, a, eig, ls, times);
    for (const auto& s : trunc.samples)
      probes.add("truncation", c.n_sites, model.seed, c.h, s.distance, s.t, s.value);
    const auto tf = fit_with_fallback(trunc, c.mintfactor.value_or(false));
    add_fit_row(fits, "truncation", c, model.seed, tf.method, tf.fit);

    ProbeSeries comm;
    comm.kind = ProbeKind::Commutator;
    for (const auto& [site, d] : partners) {
      const DenseOperator b = site_pauli(c, site, c.axis_b);
      for (double t : times) comm.samples.push_back({d, t, commutator_probe(a, b, eig, t)});
    }
    for (const auto& s : comm.samples)
      probes.add("commutator", c.n_sites, model.seed, c.h, s.distance, s.t, s.value);
    try {
      add_fit_row(fits, "commutator_ballistic", c, model.seed, "ballistic",
                  fit_localization(comm, FitAnsatz::Ballistic, c.mintfactor.value_or(false)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InsufficientData) throw;
      LocalizationFit none;
      none.c = none.mu = none.v = kNaN;
      add_fit_row(fits, "commutator_ballistic", c, model.seed, "failed", none);
    }

    if (c.e_mob_set) {
      for (const auto& [site, d] : partners) {
        const DenseOperator b = site_pauli(c, site, c.axis_b);
        for (double t : times)
          probes.add("subspace", c.n_sites, model.seed, c.h, d, t,
                     subspace_probe(a, b, eig, t, c.e_mob));
      }
    }
    out.probes = std::move(probes.rows);
    out.fits = std::move(fits.rows);
    return out;
  });
  PipelineResult res;
  CsvTable probes = probe_table(), fits = fit_table();
  for (const auto& o : per) {
    probes.rows.insert(probes.rows.end(), o.probes.begin(), o.probes.end());
    fits.rows.insert(fits.rows.end(), o.fits.begin(), o.fits.end());
  }
  res.tables.emplace_back("probes", std::move(probes));
  res.tables.emplace_back("fits", std::move(fits));
  return res;
}

PipelineResult filter_check(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "filter-check");
  const std::vector<double> alphas =
      c.alpha_grid.empty() ? std::vector<double>{1e-2, 1e-3} : c.alpha_grid;
  const SiteSet supp_a{c.site_a};
  const SiteSet supp_b{c.resolved_site_b()};
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const RegionSplit split = split_regions(model, supp_a, supp_b);
    const DenseOperator a = embed(pauli_matrix(parse_axis(c.axis_a[0])), supp_a, split.region_a);
    const DenseOperator b = embed(pauli_matrix(parse_axis(c.axis_b[0])), supp_b, split.region_b);
    CsvTable t = filter_table();
    double xi = kNaN;
    for (double alpha : alphas) {
      const auto chk = decoupled_filter_check(a, b, split.h_a, split.h_b, alpha);
      xi = chk.xi_gap;
      t.add("decoupled", c.n_sites, model.seed, alpha, chk.error_norm, chk.bound,
            chk.error_norm <= chk.bound);
    }
    if (xi > 0.0) {
      const double alpha = 1e-6 * xi * xi;
      const auto chk = decoupled_filter_check(a, b, split.h_a, split.h_b, alpha);
      t.add("decoupled_limit", c.n_sites, model.seed, alpha, chk.error_norm, 1e-8,
            chk.error_norm <= 1e-8);
    }

    // High-pass case bounds on every element pair of the full spectrum.
    const RealVec e = ctx.energies(model);
    for (double alpha : alphas) {
      for (double f : {0.5, 1.0, 2.0}) {
        const double sigma = f * std::sqrt(alpha);
        const double bound = 0.5 * std::exp(-sigma * sigma / (4.0 * alpha));
        double worst = 0.0;
        for (Eigen::Index r2 = 0; r2 < e.size(); ++r2)
          for (Eigen::Index s = 0; s < e.size(); ++s) {
            const double de = e(s) - e(r2);
            if (std::abs(de) < sigma) continue;
            const double m = highpass_multiplier(de, alpha);
            worst = std::max(worst, de < 0.0 ? m : std::abs(m - 1.0));
          }
        t.add("highpass_case_sigma" + format_double(f) + "sqrt_alpha", c.n_sites, model.seed, alpha,
              worst, bound, worst <= bound + 1e-15);
      }
    }
    return std::move(t.rows);
  });
  PipelineResult res;
  CsvTable t = filter_table();
  append_rows(t, per);
  res.tables.emplace_back("filter_checks", std::move(t));

  CsvTable hk;
  hk.header = {"E", "alpha", "gamma", "value", "bound", "slack", "pass"};
  for (double e : {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0})
    for (double alpha : {0.1, 1.0, 10.0})
      for (double gamma : {0.5, 1.0, 3.0}) {
        if (gamma > std::abs(e)) continue;
        const auto chk = hastings_koma_check(e, alpha, gamma);
        hk.add(e, alpha, gamma, chk.value, chk.bound, chk.slack, chk.holds);
      }
  res.tables.emplace_back("hastings_koma", std::move(hk));
  return res;
}

PipelineResult cluster_a(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "cluster-a");
  const auto times = c.times();
  const auto ls = c.distances();
  const auto partners = partner_sites(c);
  struct Out {
    Rows corr, fits;
    std::size_t total = 0, violations = 0;
  };
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const EigenSystem eig = ctx.eigensystem(model);
    const DenseOperator a = site_pauli(c, c.site_a, c.axis_a);
    const auto fo = fit_with_fallback(truncation_series(model, a, eig, ls, times),
                                      c.mintfactor.value_or(false));
    CsvTable fits = fit_table(), corr = correlation_table();
    add_fit_row(fits, "truncation", c, model.seed, fo.method, fo.fit);
    Out out;
    if (fo.method != "failed") {
      std::vector<ObservablePair> pairs;
      for (const auto& [site, d] : partners)
        pairs.push_back({c.axis_a + std::to_string(c.site_a), c.axis_b + std::to_string(site), a,
                         site_pauli(c, site, c.axis_b), d});
      for (const auto& rep : verify_theorem_a(eig, pairs, fo.fit)) {
        corr.add("1a", c.n_sites, model.seed, static_cast<long>(rep.k), rep.energy, rep.distance,
                 rep.correlator, rep.bound, kNaN, rep.margin);
        ++out.total;
        if (!report_passes(rep)) ++out.violations;
      }
    }
    out.corr = std::move(corr.rows);
    out.fits = std::move(fits.rows);
    return out;
  });
  PipelineResult res;
  CsvTable corr = correlation_table(), fits = fit_table();
  std::size_t total = 0, violations = 0;
  for (const auto& o : per) {
    corr.rows.insert(corr.rows.end(), o.corr.begin(), o.corr.end());
    fits.rows.insert(fits.rows.end(), o.fits.begin(), o.fits.end());
    total += o.total;
    violations += o.violations;
  }
  res.summary["reports"] = total;
  res.summary["violations"] = violations;
  res.summary["violation_fraction"] = total ? static_cast<double>(violations) / total : 0.0;
  res.tables.emplace_back("correlations", std::move(corr));
  res.tables.emplace_back("fits", std::move(fits));
  return res;
}

PipelineResult cluster_b(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "cluster-b");
  const auto times = c.times();
  const auto partners = partner_sites(c);
  struct Out {
    Rows corr, fits;
    std::size_t total = 0, violations = 0;
  };
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const EigenSystem eig = ctx.eigensystem(model);
    const double e_mob = c.e_mob_set ? c.e_mob : median(eig.energies);
    const DenseOperator a = site_pauli(c, c.site_a, c.axis_a);
    const Mat a_eig = eig.to_eigenbasis(a.entries);

    ProbeSeries sub;
    sub.kind = ProbeKind::Subspace;
    std::vector<Mat> b_eigs;
    for (const auto& [site, d] : partners) {
      const DenseOperator b = site_pauli(c, site, c.axis_b);
      b_eigs.push_back(eig.to_eigenbasis(b.entries));
      for (double t : times) sub.samples.push_back({d, t, subspace_probe(a, b, eig, t, e_mob)});
    }
    const auto fo = fit_with_fallback(sub, c.mintfactor.value_or(true));
    CsvTable fits = fit_table(), corr = correlation_table();
    add_fit_row(fits, "subspace", c, model.seed, fo.method, fo.fit);
    Out out;
    if (fo.method != "failed" && fo.fit.mu > 0.0 && fo.fit.c > 0.0) {
      const std::vector<double> kappas = c.kappa_grid.empty() ? kappa_grid(eig) : c.kappa_grid;
      for (std::size_t p = 0; p < partners.size(); ++p) {
        const int d = partners[p].second;
        const auto corrs = connected_correlators(a_eig, b_eigs[p]);
        for (Eigen::Index k = 0; k < eig.dim() && eig.energies(k) <= e_mob; ++k) {
          double best = std::numeric_limits<double>::infinity(), best_kappa = kNaN;
          for (double kappa : kappas) {
            const auto theta = static_cast<double>(idos(eig, eig.energies(k) + kappa));
            const double bound = theorem_b_bound(theta, fo.fit.c, fo.fit.mu, d, kappa);
            if (bound < best) {
              best = bound;
              best_kappa = kappa;
            }
          }
          const double corr_k = corrs[static_cast<std::size_t>(k)];
          corr.add("1b", c.n_sites, model.seed, static_cast<long>(k), eig.energies(k), d, corr_k,
                   best, best_kappa, best - corr_k);
          ++out.total;
          if (best - corr_k < -1e-10) ++out.violations;
        }
      }
    }
    out.corr = std::move(corr.rows);
    out.fits = std::move(fits.rows);
    return out;
  });
  PipelineResult res;
  CsvTable corr = correlation_table(), fits = fit_table();
  std::size_t total = 0, violations = 0;
  for (const auto& o : per) {
    corr.rows.insert(corr.rows.end(), o.corr.begin(), o.corr.end());
    fits.rows.insert(fits.rows.end(), o.fits.begin(), o.fits.end());
    total += o.total;
    violations += o.violations;
  }
  res.summary["reports"] = total;
  res.summary["violations"] = violations;
  res.summary["violation_fraction"] = total ? static_cast<double>(violations) / total : 0.0;
  res.tables.emplace_back("correlations", std::move(corr));
  res.tables.emplace_back("fits", std::move(fits));
  return res;
}

PipelineResult mps(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "mps");
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const EigenSystem eig = ctx.eigensystem(model);
    CsvTable t;
    const Eigen::Index stride = std::max<Eigen::Index>(1, eig.dim() / 16);
    for (Eigen::Index k = 0; k < eig.dim(); k += stride) {
      const Vec psi = eig.state(k);
      const double entropy = entanglement_entropy(psi, c.n_sites / 2);
      // Schmidt spectrum at the middle cut for the smooth max entropy.
      const MpsState full = dense_to_mps(psi, c.n_sites, {});
      const auto half = static_cast<std::size_t>(c.n_sites / 2);
      Eigen::Index rows = 1;
      for (std::size_t i = 0; i < half; ++i) rows *= 2;
      const Eigen::Map<const Mat> mt(psi.data(), eig.dim() / rows, rows);
      const RealVec lam =
          Eigen::SelfAdjointEigenSolver<Mat>(Mat(mt.adjoint() * mt), Eigen::EigenvaluesOnly)
              .eigenvalues();
      std::vector<double> spectrum;
      double total = 0.0;
      for (Eigen::Index i = 0; i < lam.size(); ++i) {
        spectrum.push_back(std::max(lam(i), 0.0));
        total += spectrum.back();
      }
      for (double& v : spectrum) v /= total;
      const double hmax = smooth_max_entropy(spectrum, c.delta);
      if (c.export_mps) {
        std::filesystem::create_directories(c.out_dir);
        export_mps(full, (std::filesystem::path(c.out_dir) /
                          ("mps_s" + std::to_string(model.seed) + "_k" + std::to_string(k) + ".bin"))
                             .string());
      }
      for (int d : c.max_bonds) {
        const MpsState m = dense_to_mps(psi, c.n_sites, {d, 0.0});
        const int largest = *std::max_element(m.bond_dims.begin(), m.bond_dims.end());
        t.add("eigenstate", c.n_sites, model.seed, c.h, static_cast<long>(k), eig.energies(k), d,
              mps_fidelity(m, psi), m.total_discarded(), largest, entropy, hmax);
      }
    }
    return std::move(t.rows);
  });
  PipelineResult res;
  CsvTable t;
  t.header = {"mps",     "n",         "seed",        "h",       "k",      "E_k",
              "max_bond", "fidelity", "discarded", "largest_bond", "entropy", "hmax"};
  append_rows(t, per);
  res.tables.emplace_back("mps", std::move(t));
  return res;
}

PipelineResult liom(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "liom");
  const std::vector<double> alphas =
      c.alpha_grid.empty() ? std::vector<double>{1.0, 0.1, 0.01, 0.0} : c.alpha_grid;
  const auto ls = c.distances();
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const DenseOperator h = assemble(model, c.max_dim);
    const EigenSystem eig = ctx.eigensystem(model);
    CsvTable t;
    for (std::size_t j = 0; j < model.terms.size(); ++j) {
      const auto& supp = model.terms[j].support;
      std::string label = "h" + std::to_string(supp.front());
      if (supp.size() > 1) label += "-" + std::to_string(supp.back());
      for (double alpha : alphas) {
        const LiomReport rep = liom_report(model, h, eig, j, alpha, ls);
        for (const auto& [l, loc] : rep.locality)
          t.add(label, c.n_sites, model.seed, c.h, static_cast<unsigned long>(j), alpha, l,
                rep.conservation, loc);
      }
    }
    return std::move(t.rows);
  });
  PipelineResult res;
  CsvTable t;
  t.header = {"liom", "n", "seed", "h", "j", "alpha", "l", "conservation", "locality"};
  append_rows(t, per);
  res.tables.emplace_back("liom", std::move(t));
  return res;
}

PipelineResult thermalize(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "thermalize");
  const auto times = c.times();
  const SiteSet region_a = c.region_a.empty() ? SiteSet{c.site_a} : make_site_set(c.region_a);
  struct Out {
    Rows thermo, fits;
    bool pass = true;
  };
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const EigenSystem eig = ctx.eigensystem(model);
    const SiteSet chain = site_range(0, c.n_sites);

    // Decay constants from the truncation probe of the observable that
    // saturates ||rho_A - xi_A||_1.
    const Mat rho = gibbs_state(eig, c.beta);
    const PerturbedState init = perturbed_initial(rho, chain, region_a);
    const DenseOperator witness = normalize_observable(
        embed(trace_distance_witness(init.rho_a, init.xi_a), region_a, chain));
    std::vector<int> ls;
    for (int l = 0; neighbourhood(region_a, l, model) != chain; ++l) ls.push_back(l);
    ls.push_back(static_cast<int>(ls.size()));
    const auto fo = fit_with_fallback(truncation_series(model, witness, eig, ls, times),
                                      c.mintfactor.value_or(false));

    const ThermoProbe probe = thermalization_probe(
        model, eig, c.beta, region_a, c.l, times,
        fo.method == "failed" ? std::nullopt : std::optional<LocalizationFit>(fo.fit));
    CsvTable t, fits = fit_table();
    add_fit_row(fits, "truncation_witness", c, model.seed, fo.method, fo.fit);
    Out out;
    const double bound = probe.bound.value_or(kNaN);
    double min_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probe.times.size(); ++i) {
      t.add("distance", c.n_sites, model.seed, c.beta, c.l, probe.times[i], probe.distances[i],
            probe.x, bound);
      min_distance = std::min(min_distance, probe.distances[i]);
    }
    out.pass = probe.bound && min_distance >= bound - 1e-8;
    out.thermo = std::move(t.rows);
    out.fits = std::move(fits.rows);
    return out;
  });
  PipelineResult res;
  CsvTable t, fits = fit_table();
  t.header = {"thermo", "n", "seed", "beta", "l", "t", "distance", "x", "bound"};
  json passes = json::array();
  for (const auto& o : per) {
    t.rows.insert(t.rows.end(), o.thermo.begin(), o.thermo.end());
    fits.rows.insert(fits.rows.end(), o.fits.begin(), o.fits.end());
    passes.push_back(o.pass);
  }
  res.summary["bound_holds"] = passes;
  res.tables.emplace_back("thermo", std::move(t));
  res.tables.emplace_back("fits", std::move(fits));
  return res;
}

PipelineResult fig1a(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "reproduce-fig1a");
  const auto ensemble = parallel_map(c.realizations, c.threads,
                                     [&](int r) { return ctx.energies(ctx.model(c.seed(r))); });
  const DosHistogram hist = dos_histogram(ensemble, c.bins);
  PipelineResult res;
  CsvTable counts, dos, fit;
  counts.header = {"seed", "bin", "center", "count"};
  for (std::size_t r = 0; r < hist.counts.size(); ++r)
    for (std::size_t b = 0; b < hist.centers.size(); ++b)
      counts.add(c.seed(static_cast<int>(r)), static_cast<unsigned long>(b), hist.centers[b],
                 hist.counts[r][b]);
  dos.header = {"bin", "center", "mean", "variance"};
  for (std::size_t b = 0; b < hist.centers.size(); ++b)
    dos.add(static_cast<unsigned long>(b), hist.centers[b], hist.mean[b], hist.variance[b]);
  fit.header = {"amplitude", "mean", "stddev", "rel_l2_error"};
  const GaussianFit g = gaussian_fit(hist.centers, hist.mean);
  fit.add(g.amplitude, g.mean, g.stddev, g.rel_l2_error);
  res.summary["rel_l2_error"] = g.rel_l2_error;
  res.tables.emplace_back("fig1a_counts", std::move(counts));
  res.tables.emplace_back("fig1a_dos", std::move(dos));
  res.tables.emplace_back("fig1a_fit", std::move(fit));
  return res;
}

PipelineResult fig1b(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "reproduce-fig1b");
  const auto ensemble = parallel_map(c.realizations, c.threads,
                                     [&](int r) { return ctx.energies(ctx.model(c.seed(r))); });
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& e : ensemble) {
    lo = std::min(lo, e.minCoeff());
    hi = std::max(hi, e.maxCoeff());
  }
  // bins + 1 grid points from the lowest to the highest ensemble energy.
  std::vector<double> grid(static_cast<std::size_t>(c.bins) + 1);
  for (int i = 0; i <= c.bins; ++i) grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / c.bins;
  grid.back() = hi;

  PipelineResult res;
  CsvTable curves, mean;
  curves.header = {"seed", "E", "theta_fraction"};
  mean.header = {"E", "mean", "variance"};
  std::vector<std::vector<double>> frac(ensemble.size());
  for (std::size_t r = 0; r < ensemble.size(); ++r) {
    const double dim = static_cast<double>(ensemble[r].size());
    for (double e : grid) {
      frac[r].push_back(static_cast<double>(idos(ensemble[r], e)) / dim);
      curves.add(c.seed(static_cast<int>(r)), e, frac[r].back());
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double m = 0.0;
    for (const auto& f : frac) m += f[i];
    m /= static_cast<double>(frac.size());
    double v = 0.0;
    for (const auto& f : frac) v += (f[i] - m) * (f[i] - m);
    v /= static_cast<double>(frac.size());
    mean.add(grid[i], m, v);
  }
  res.tables.emplace_back("fig1b_curves", std::move(curves));
  res.tables.emplace_back("fig1b_mean", std::move(mean));
  return res;
}

PipelineResult fig1c(const ExperimentConfig& c, RunContext& ctx) {
  StageTimer timer(ctx, "reproduce-fig1c");
  auto per = parallel_map(c.realizations, c.threads, [&](int r) {
    const ChainModel model = ctx.model(c.seed(r));
    const EigenSystem eig = ctx.eigensystem(model);
    std::vector<std::pair<double, double>> out;  // (rank fraction, entropy)
    CsvTable t;
    for (Eigen::Index k = 0; k < eig.dim(); ++k) {
      const double entropy = entropy_profile(eig.state(k)).cut_average;
      const double rank = static_cast<double>(k) / static_cast<double>(eig.dim());
      t.add(model.seed, static_cast<long>(k), eig.energies(k), rank, entropy);
    }
    return std::move(t.rows);
  });
  PipelineResult res;
  CsvTable scatter, deciles;
  scatter.header = {"seed", "k", "E_k", "rank_fraction", "entropy"};
  append_rows(scatter, per);

  // Deciles of the per-realization energy rank; "middle" is the band centred
  // on the median rank.
  std::vector<double> sum(10, 0.0), count(10, 0.0);
  double mid_sum = 0.0, mid_count = 0.0;
  for (std::size_t i = 0; i < scatter.rows.size(); ++i) {
    const double rank = scatter.number(i, "rank_fraction");
    const double s = scatter.number(i, "entropy");
    const auto d = static_cast<std::size_t>(std::min(9.0, std::floor(rank * 10.0)));
    sum[d] += s;
    count[d] += 1.0;
    if (rank >= 0.45 && rank < 0.55) {
      mid_sum += s;
      mid_count += 1.0;
    }
  }
  deciles.header = {"decile", "count", "mean_entropy"};
  for (std::size_t d = 0; d < 10; ++d)
    deciles.add(std::to_string(d), count[d], count[d] > 0 ? sum[d] / count[d] : kNaN);
  const double mid = mid_count > 0 ? mid_sum / mid_count : kNaN;
  deciles.add("middle", mid_count, mid);
  res.summary["lowest_decile_entropy"] = count[0] > 0 ? sum[0] / count[0] : kNaN;
  res.summary["middle_decile_entropy"] = mid;
  res.tables.emplace_back("fig1c_entropy", std::move(scatter));
  res.tables.emplace_back("fig1c_deciles", std::move(deciles));
  return res;
}

}  // namespace mbl::pipelines
