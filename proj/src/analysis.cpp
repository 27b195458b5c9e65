#include "medfactor/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace medfactor {

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::vector<double> make_t_grid(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo)) throw std::invalid_argument("bad t grid");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

DeviationReport sup_deviation(const LocalLawCounts& c, std::span<const double> t_grid) {
  if (t_grid.size() < 2) throw std::invalid_argument("sup_deviation: grid too small");
  double max_step = 0;
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    max_step = std::max(max_step, t_grid[i] - t_grid[i - 1]);
  if (t_grid.front() > -3.0 || t_grid.back() < 3.0 || max_step > 0.05 + 1e-12)
    throw std::invalid_argument(
        "sup_deviation: grid must cover [-3, 3] with step <= 0.05");

  DeviationReport rep;
  rep.s = scale_point_from_x(c.x);
  rep.nu = c.nu;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  rep.empirical.reserve(t_grid.size());
  rep.phi2t.reserve(t_grid.size());
  for (const double t : t_grid) {
    const double a = empirical_cdf(c, t);
    const double phi = normal_cdf(2.0 * t);
    rep.empirical.push_back(a);
    rep.phi2t.push_back(phi);
    rep.sup_dev = std::max(rep.sup_dev, std::abs(a - phi));
  }
  rep.scaled_sup_dev = rep.sup_dev * std::sqrt(rep.s.L2);
  return rep;
}

std::vector<RatioRow> ratio_table(const LocalLawCounts& c, double beta_lo, double beta_hi,
                                  std::uint64_t min_count, const PrecisionConfig& cfg) {
  const double lo_valid = a_nu(c.nu) + 0.01;
  if (!(beta_lo >= lo_valid && beta_hi <= 0.99 && beta_lo <= beta_hi))
    throw std::invalid_argument("ratio_table window must sit inside the local-law validity range");
  const ScalePoint s = scale_point_from_x(c.x);
  std::vector<RatioRow> rows;
  for (const auto& [p, cnt] : c.exact_counts) {
    if (p < 3 || cnt < min_count) continue;
    const double beta = beta_of(p, s);
    if (beta < beta_lo || beta > beta_hi) continue;
    RatioRow row;
    row.p = p;
    row.beta = beta;
    row.empirical_count = cnt;
    row.predicted = predict_local_law(c.nu, s, p, cfg);
    row.ratio = static_cast<double>(cnt) / row.predicted.value();
    rows.push_back(row);
  }
  return rows;
}

double median_ratio(std::span<const RatioRow> rows) {
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> r;
  r.reserve(rows.size());
  for (const auto& row : rows) r.push_back(row.ratio);
  std::sort(r.begin(), r.end());
  const std::size_t m = r.size() / 2;
  return r.size() % 2 ? r[m] : 0.5 * (r[m - 1] + r[m]);
}

Lemma1Report lemma1_envelope_check(const LocalLawCounts& c) {
  Lemma1Report rep;
  rep.x = c.x;
  rep.nu = c.nu;
  const ScalePoint s = scale_point_from_x(c.x);
  rep.eta = eta_of(s);
  const double scale = std::pow(s.L2, 2.5) / static_cast<double>(c.x);
  for (const auto& [p, cnt] : c.exact_counts) {
    if (p < 3) continue;  // beta undefined at p = 2
    const double beta = beta_of(p, s);
    if (std::abs(beta - 0.5) < rep.eta) continue;
    ++rep.qualifying;
    const double constant = static_cast<double>(cnt) * static_cast<double>(p) * scale;
    if (constant > rep.implied_constant) {
      rep.implied_constant = constant;
      rep.arg_prime = p;
    }
  }
  rep.vacuous = rep.qualifying == 0;
  return rep;
}

OptimalityReport optimality_study(Nu nu, std::span<const double> L2_grid,
                                  const PrecisionConfig& cfg,
                                  std::optional<double> tau_override) {
  for (const double L2 : L2_grid)
    if (!(L2 >= 16)) throw std::invalid_argument("optimality_study requires L2 >= 16");
  OptimalityReport rep;
  rep.nu = nu;
  rep.tau = tau_override ? *tau_override : estimate_tau(nu, cfg);
  const double center = std::abs(rep.tau) / 4.0;
  rep.pass = true;
  for (const double L2 : L2_grid) {
    OptimalityRow row;
    row.L2 = L2;
    const ScalePoint s = scale_point_from_log(std::exp(L2));
    row.scaled_dev = std::sqrt(L2) * (predict_cdf(nu, s, 0.0, cfg) - 0.5);
    row.band_lo = 0.5 * center;
    row.band_hi = 1.5 * center;
    const double mag = std::abs(row.scaled_dev);
    row.in_band = mag >= row.band_lo && mag <= row.band_hi;
    row.asserted = L2 >= 100.0;
    if (row.asserted && !row.in_band) rep.pass = false;
    rep.rows.push_back(row);
  }
  return rep;
}

ConvergenceReport convergence_study(Nu nu, std::span<const std::uint64_t> x_list,
                                    std::span<const double> L2_list, double t_lo,
                                    double t_hi, double t_step, unsigned workers,
                                    const PrecisionConfig& cfg) {
  for (const std::uint64_t x : x_list)
    if (x > 1'000'000'000ULL)
      throw std::invalid_argument("convergence_study empirical x must be <= 1e9");
  ConvergenceReport rep;
  rep.nu = nu;
  const auto grid = make_t_grid(t_lo, t_hi, t_step);
  for (const std::uint64_t x : x_list) {
    const auto counts = accumulate(x, nu, kDefaultPcut, kDefaultDeltaBeta,
                                   std::uint64_t{1} << 18, workers);
    const auto dev = sup_deviation(counts, grid);
    rep.rows.push_back({"empirical", dev.s.L2, dev.sup_dev, dev.scaled_sup_dev});
  }
  for (const double L2 : L2_list) {
    const ScalePoint s = scale_point_from_log(std::exp(L2));
    const auto pred = predict_cdf_grid(nu, s, grid, cfg);
    double sup = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
      sup = std::max(sup, std::abs(pred[i] - normal_cdf(2.0 * grid[i])));
    rep.rows.push_back({"theory", L2, sup, sup * std::sqrt(L2)});
  }
  return rep;
}

std::string deviation_csv(const DeviationReport& rep) {
  std::string out = "t,empirical,phi2t,diff\n";
  for (std::size_t i = 0; i < rep.t_grid.size(); ++i) {
    out += fmt12(rep.t_grid[i]);
    out += ',';
    out += fmt12(rep.empirical[i]);
    out += ',';
    out += fmt12(rep.phi2t[i]);
    out += ',';
    out += fmt12(rep.empirical[i] - rep.phi2t[i]);
    out += '\n';
  }
  return out;
}

std::string ratio_csv(std::span<const RatioRow> rows) {
  std::string out = "p,beta,empirical,predicted_log,ratio\n";
  for (const auto& r : rows) {
    out += std::to_string(r.p);
    out += ',';
    out += fmt12(r.beta);
    out += ',';
    out += std::to_string(r.empirical_count);
    out += ',';
    out += fmt12(r.predicted.log_magnitude);
    out += ',';
    out += fmt12(r.ratio);
    out += '\n';
  }
  return out;
}

std::string convergence_csv(const ConvergenceReport& rep) {
  std::string out = "source,L2,sup_dev,scaled_sup_dev\n";
  for (const auto& r : rep.rows) {
    out += r.source;
    out += ',';
    out += fmt12(r.L2);
    out += ',';
    out += fmt12(r.sup_dev);
    out += ',';
    out += fmt12(r.scaled_sup_dev);
    out += '\n';
  }
  return out;
}

ConvergenceReport parse_convergence_csv(const std::string& text, Nu nu) {
  ConvergenceReport rep;
  rep.nu = nu;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "source,L2,sup_dev,scaled_sup_dev")
    throw std::invalid_argument("convergence CSV: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ConvergenceRow row;
    std::istringstream ls(line);
    std::string field;
    if (!std::getline(ls, row.source, ',')) throw std::invalid_argument("bad CSV row");
    if (!std::getline(ls, field, ',')) throw std::invalid_argument("bad CSV row");
    row.L2 = std::stod(field);
    if (!std::getline(ls, field, ',')) throw std::invalid_argument("bad CSV row");
    row.sup_dev = std::stod(field);
    if (!std::getline(ls, field, ',')) throw std::invalid_argument("bad CSV row");
    row.scaled_sup_dev = std::stod(field);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace medfactor
