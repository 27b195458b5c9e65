#ifndef MEDFACTOR_ANALYSIS_HPP
#define MEDFACTOR_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "medfactor/density.hpp"
#include "medfactor/local_law.hpp"

namespace medfactor {

// Pointwise confrontation of the empirical CDF with Phi(2t) over a t-grid.
struct DeviationReport {
  ScalePoint s;
  Nu nu = Nu::omega;
  std::vector<double> t_grid;
  std::vector<double> empirical;
  std::vector<double> phi2t;
  double sup_dev = 0;
  double scaled_sup_dev = 0;  // sup_dev * sqrt(L2)
};

// Grid must cover [-3, 3] with step <= 0.05; throws std::invalid_argument
// otherwise.
DeviationReport sup_deviation(const LocalLawCounts& c, std::span<const double> t_grid);

struct RatioRow {
  std::uint64_t p = 0;
  double beta = 0;
  std::uint64_t empirical_count = 0;
  LogValue predicted;
  double ratio = 0;  // empirical / exp(predicted)
};

// One row per exact-counted prime with count >= min_count and beta in
// [beta_lo, beta_hi] (window must sit inside the local-law validity range).
std::vector<RatioRow> ratio_table(const LocalLawCounts& c, double beta_lo, double beta_hi,
                                  std::uint64_t min_count = 30,
                                  const PrecisionConfig& cfg = {});

double median_ratio(std::span<const RatioRow> rows);  // NaN when empty

// Uniform-bound check of M_nu(x,p) <= C x / (p (log_2 x)^{5/2}) over the
// exact primes with |beta_p - 1/2| >= eta_x.
struct Lemma1Report {
  std::uint64_t x = 0;
  Nu nu = Nu::omega;
  double eta = 0;
  bool vacuous = true;           // no exact prime qualifies at this scale
  std::uint64_t qualifying = 0;  // number of qualifying primes
  double implied_constant = 0;   // sup of M p (log_2 x)^{5/2} / x
  std::uint64_t arg_prime = 0;   // prime attaining the sup
};

Lemma1Report lemma1_envelope_check(const LocalLawCounts& c);

// Scaled deviation d(L2) = sqrt(L2) (predict_cdf(L2, 0) - 1/2) against the
// band [0.5, 1.5] |tau|/4; rows with L2 >= 100 gate the pass flag.
struct OptimalityRow {
  double L2 = 0;
  double scaled_dev = 0;
  double band_lo = 0;
  double band_hi = 0;
  bool in_band = false;
  bool asserted = false;  // only rows with L2 >= 100 are gating
};

struct OptimalityReport {
  Nu nu = Nu::omega;
  double tau = 0;
  std::vector<OptimalityRow> rows;
  bool pass = false;
};

// tau_override exists for harness self-tests (e.g. tau = 0 must fail).
OptimalityReport optimality_study(Nu nu, std::span<const double> L2_grid,
                                  const PrecisionConfig& cfg = {},
                                  std::optional<double> tau_override = std::nullopt);

// Mixed empirical / semi-theoretical convergence table.
struct ConvergenceRow {
  std::string source;  // "empirical" or "theory"
  double L2 = 0;
  double sup_dev = 0;
  double scaled_sup_dev = 0;
};

struct ConvergenceReport {
  Nu nu = Nu::omega;
  std::vector<ConvergenceRow> rows;
};

// Default grid [-4, 4] step 0.02. Empirical rows sieve each x (<= 1e9);
// theory rows evaluate predict_cdf on the same grid.
ConvergenceReport convergence_study(Nu nu, std::span<const std::uint64_t> x_list,
                                    std::span<const double> L2_list,
                                    double t_lo = -4.0, double t_hi = 4.0,
                                    double t_step = 0.02, unsigned workers = 1,
                                    const PrecisionConfig& cfg = {});

// CSV schemas (12 significant digits, LF endings).
std::string deviation_csv(const DeviationReport& rep);
std::string ratio_csv(std::span<const RatioRow> rows);
std::string convergence_csv(const ConvergenceReport& rep);
ConvergenceReport parse_convergence_csv(const std::string& text, Nu nu);

// Shared t-grid helper: lo, lo+step, ..., hi (inclusive within rounding).
std::vector<double> make_t_grid(double lo, double hi, double step);

}  // namespace medfactor

#endif
