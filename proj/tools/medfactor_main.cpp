// medfactor: sieve middle-prime-factor statistics, evaluate the theoretical
// densities, and emit comparison reports with provenance manifests.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medfactor/analysis.hpp"
#include "medfactor/counts_io.hpp"
#include "medfactor/density.hpp"
#include "medfactor/local_law.hpp"
#include "medfactor/manifest.hpp"
#include "medfactor/sieve.hpp"
#include "medfactor/special_functions.hpp"

namespace {

using namespace medfactor;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSchema = 4;

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> parse_t_grid(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw std::invalid_argument("--t-grid expects lo:hi:step");
  return make_t_grid(lo, hi, step);
}

// Tracks outputs of one command: written atomically, removed on failure,
// checksummed into the sidecar manifest.
class Run {
 public:
  Run(std::string command) : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.started_at = now_iso8601_utc();
  }

  RunManifest& manifest() { return manifest_; }

  void param(const std::string& key, const std::string& value) {
    manifest_.parameters[key] = value;
  }

  std::string read_input(const std::string& path) {
    const std::string bytes = read_file(path);
    manifest_.input_checksums[path] = sha256_hex(bytes);
    return bytes;
  }

  void write_output(const std::string& path, const std::string& payload) {
    write_file_atomic(path, payload);
    written_.push_back(path);
    manifest_.output_checksums[path] = sha256_hex(payload);
  }

  // Deterministic provenance embedded in payload files.
  nlohmann::json stub() const {
    nlohmann::json j;
    j["command"] = manifest_.command;
    j["parameters"] = manifest_.parameters;
    j["artifact_version"] = manifest_.artifact_version;
    return j;
  }

  nlohmann::json finish() {
    manifest_.finished_at = now_iso8601_utc();
    manifest_.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return manifest_.to_json();
  }

  // Manifest sidecar next to the primary output.
  void finish_to_sidecar(const std::string& primary_out) {
    const auto j = finish();
    write_file_atomic(primary_out + ".manifest.json", j.dump(2) + "\n");
  }

  void remove_outputs() {
    for (const auto& p : written_) std::remove(p.c_str());
  }

 private:
  RunManifest manifest_;
  std::vector<std::string> written_;
  std::chrono::steady_clock::time_point start_;
};

struct SieveArgs {
  std::uint64_t x = 0;
  std::string nu;
  std::uint64_t p_cut = kDefaultPcut;
  double delta_beta = kDefaultDeltaBeta;
  std::uint64_t segments = std::uint64_t{1} << 18;
  unsigned workers = 1;
  std::string out;
};

int cmd_sieve(const SieveArgs& a) {
  Run run("sieve");
  run.param("x", std::to_string(a.x));
  run.param("nu", a.nu);
  run.param("p_cut", std::to_string(a.p_cut));
  run.param("delta_beta", fmt12(a.delta_beta));
  run.param("segments", std::to_string(a.segments));
  run.param("workers", std::to_string(a.workers));
  run.param("out", a.out);
  try {
    const auto counts =
        accumulate(a.x, nu_from_string(a.nu), a.p_cut, a.delta_beta, a.segments, a.workers);
    // embedded stub carries only the parameters that define the counts, so
    // reruns with different worker counts or output paths stay byte-identical
    nlohmann::json stub;
    stub["command"] = "sieve";
    stub["parameters"] = {{"x", std::to_string(a.x)},
                          {"nu", a.nu},
                          {"p_cut", std::to_string(a.p_cut)},
                          {"delta_beta", fmt12(a.delta_beta)}};
    stub["artifact_version"] = kArtifactVersion;
    run.write_output(a.out, serialize_counts(counts, stub));
    run.finish_to_sidecar(a.out);
  } catch (...) {
    run.remove_outputs();
    throw;
  }
  return 0;
}

struct CdfArgs {
  std::string counts;
  std::string t_grid = "-4:4:0.02";
  std::string out;
  std::string pcounts_out;
};

int cmd_cdf(const CdfArgs& a) {
  Run run("cdf");
  run.param("counts", a.counts);
  run.param("t_grid", a.t_grid);
  run.param("out", a.out);
  try {
    const auto grid = parse_t_grid(a.t_grid);
    const auto payload = run.read_input(a.counts);
    const auto counts = counts_from_json(nlohmann::json::parse(payload));
    std::string csv = "t,A\n";
    for (const double t : grid) {
      csv += fmt12(t);
      csv += ',';
      csv += fmt12(empirical_cdf(counts, t));
      csv += '\n';
    }
    run.write_output(a.out, csv);
    if (!a.pcounts_out.empty()) run.write_output(a.pcounts_out, counts_csv(counts));
    run.finish_to_sidecar(a.out);
  } catch (const nlohmann::json::exception& e) {
    run.remove_outputs();
    throw SchemaError(std::string("counts file is not valid JSON: ") + e.what());
  } catch (...) {
    run.remove_outputs();
    throw;
  }
  return 0;
}

struct PredictArgs {
  std::string nu;
  double log2x = 0;
  std::uint64_t x = 0;
  bool has_log2x = false;
  bool has_x = false;
  std::string t_grid = "-4:4:0.02";
  std::string out;
};

int cmd_predict(const PredictArgs& a) {
  if (a.has_log2x == a.has_x)
    throw std::invalid_argument("predict requires exactly one of --log2x or --x");
  Run run("predict");
  run.param("nu", a.nu);
  if (a.has_log2x) run.param("log2x", fmt12(a.log2x));
  if (a.has_x) run.param("x", std::to_string(a.x));
  run.param("t_grid", a.t_grid);
  run.param("out", a.out);
  try {
    const Nu nu = nu_from_string(a.nu);
    const ScalePoint s =
        a.has_x ? scale_point_from_x(a.x) : scale_point_from_log(std::exp(a.log2x));
    const auto grid = parse_t_grid(a.t_grid);
    const auto pred = predict_cdf_grid(nu, s, grid);
    const double root = std::sqrt(s.L2);
    std::string csv = "t,predict_cdf,phi_2t,diff,scaled_diff\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double phi = normal_cdf(2.0 * grid[i]);
      csv += fmt12(grid[i]);
      csv += ',';
      csv += fmt12(pred[i]);
      csv += ',';
      csv += fmt12(phi);
      csv += ',';
      csv += fmt12(pred[i] - phi);
      csv += ',';
      csv += fmt12((pred[i] - phi) * root);
      csv += '\n';
    }
    run.write_output(a.out, csv);
    run.finish_to_sidecar(a.out);
  } catch (...) {
    run.remove_outputs();
    throw;
  }
  return 0;
}

struct CompareArgs {
  std::string counts;
  std::string out;
  std::string ratio_out;
  std::string t_grid = "-4:4:0.02";
  double beta_lo = 0.45;
  double beta_hi = 0.55;
};

int cmd_compare(const CompareArgs& a) {
  Run run("compare");
  run.param("counts", a.counts);
  run.param("out", a.out);
  run.param("t_grid", a.t_grid);
  run.param("beta_lo", fmt12(a.beta_lo));
  run.param("beta_hi", fmt12(a.beta_hi));
  try {
    const auto payload = run.read_input(a.counts);
    const auto counts = counts_from_json(nlohmann::json::parse(payload));
    const auto grid = parse_t_grid(a.t_grid);
    const auto dev = sup_deviation(counts, grid);
    run.write_output(a.out, deviation_csv(dev));

    nlohmann::json summary;
    summary["sup_dev"] = dev.sup_dev;
    summary["scaled_sup_dev"] = dev.scaled_sup_dev;
    if (!a.ratio_out.empty()) {
      const auto rows = ratio_table(counts, a.beta_lo, a.beta_hi);
      run.write_output(a.ratio_out, ratio_csv(rows));
      summary["ratio_rows"] = rows.size();
      if (!rows.empty()) summary["median_ratio"] = median_ratio(rows);
    }
    run.finish_to_sidecar(a.out);
    std::cout << summary.dump(2) << "\n";
  } catch (const nlohmann::json::exception& e) {
    run.remove_outputs();
    throw SchemaError(std::string("counts file is not valid JSON: ") + e.what());
  } catch (...) {
    run.remove_outputs();
    throw;
  }
  return 0;
}

int cmd_constants(const std::string& out) {
  Run run("constants");
  nlohmann::json j;
  j["gamma"] = euler_gamma();
  j["kappa"] = meissel_mertens();
  j["sqrt_2_over_pi"] = std::sqrt(2.0 / M_PI);
  nlohmann::json pz;
  for (int k = 2; k <= 8; ++k) pz[std::to_string(k)] = prime_zeta(k);
  j["prime_zeta"] = pz;
  if (out.empty()) {
    j["manifest"] = run.finish();
    std::cout << j.dump(2) << "\n";
  } else {
    try {
      run.write_output(out, j.dump(2) + "\n");
      run.finish_to_sidecar(out);
    } catch (...) {
      run.remove_outputs();
      throw;
    }
  }
  return 0;
}

int cmd_tau(const std::string& nu_s, const std::string& out) {
  Run run("tau");
  run.param("nu", nu_s);
  const Nu nu = nu_from_string(nu_s);
  nlohmann::json j;
  j["nu"] = nu_s;
  j["tau"] = estimate_tau(nu);
  j["tau_step_1e-3"] = estimate_tau(nu, {}, 1e-3);
  j["tau_step_5e-4"] = estimate_tau(nu, {}, 5e-4);
  if (out.empty()) {
    j["manifest"] = run.finish();
    std::cout << j.dump(2) << "\n";
  } else {
    try {
      run.write_output(out, j.dump(2) + "\n");
      run.finish_to_sidecar(out);
    } catch (...) {
      run.remove_outputs();
      throw;
    }
  }
  return 0;
}

struct TailsArgs {
  std::uint64_t x = 0;
  std::string nu;
  std::uint64_t e_lo = 2;
  std::uint64_t e_hi = 0;
  std::string side;
  double factor = 0;
  unsigned workers = 1;
  std::string out;
};

int cmd_tails(const TailsArgs& a) {
  Run run("tails");
  run.param("x", std::to_string(a.x));
  run.param("nu", a.nu);
  run.param("e_lo", std::to_string(a.e_lo));
  run.param("e_hi", std::to_string(a.e_hi));
  run.param("side", a.side);
  run.param("factor", fmt12(a.factor));
  TailSide side;
  if (a.side == "below") {
    side = TailSide::below;
  } else if (a.side == "above") {
    side = TailSide::above;
  } else {
    throw std::invalid_argument("--side must be below or above");
  }
  const auto rep = tail_count(a.x, nu_from_string(a.nu), a.e_lo, a.e_hi, side, a.factor,
                              std::uint64_t{1} << 18, a.workers);
  nlohmann::json j;
  j["x"] = rep.x;
  j["nu"] = to_string(rep.nu);
  j["e_lo"] = rep.e_lo;
  j["e_hi"] = rep.e_hi;
  j["side"] = a.side;
  j["factor"] = rep.factor;
  j["e_of_x"] = rep.e_of_x;
  j["count"] = rep.count;
  j["bound"] = rep.bound;
  j["count_over_bound"] = static_cast<double>(rep.count) / rep.bound;
  if (a.out.empty()) {
    j["manifest"] = run.finish();
    std::cout << j.dump(2) << "\n";
  } else {
    try {
      run.write_output(a.out, j.dump(2) + "\n");
      run.finish_to_sidecar(a.out);
    } catch (...) {
      run.remove_outputs();
      throw;
    }
  }
  return 0;
}

struct DumpArgs {
  std::uint64_t lo = 2;
  std::uint64_t hi = 0;
  std::string out;
};

int cmd_dump(const DumpArgs& a) {
  Run run("dump");
  run.param("lo", std::to_string(a.lo));
  run.param("hi", std::to_string(a.hi));
  try {
    auto plan = make_segment_plan(a.lo, a.hi);
    std::string csv = "n,factorization\n";
    // single worker keeps rows ordered
    stream_factorizations(plan, [&](const FactorizationView& v) {
      csv += std::to_string(v.n);
      csv += ',';
      csv += format_factorization(v);
      csv += '\n';
    });
    run.write_output(a.out, csv);
    run.finish_to_sidecar(a.out);
  } catch (...) {
    run.remove_outputs();
    throw;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"middle-prime-factor statistics: sieve, predict, compare"};
  app.require_subcommand(1);

  SieveArgs sieve_args;
  auto* sieve = app.add_subcommand("sieve", "sieve middle-prime counts up to x");
  sieve->add_option("--x", sieve_args.x, "upper bound (counts n in [2, x])")->required();
  sieve->add_option("--nu", sieve_args.nu, "omega | Omega")->required();
  sieve->add_option("--p-cut", sieve_args.p_cut, "exact-count cutoff prime");
  sieve->add_option("--delta-beta", sieve_args.delta_beta, "tail bucket width in beta");
  sieve->add_option("--segments", sieve_args.segments, "segment size in integers");
  sieve->add_option("--workers", sieve_args.workers, "worker threads");
  sieve->add_option("--out", sieve_args.out, "counts JSON output path")->required();

  CdfArgs cdf_args;
  auto* cdf = app.add_subcommand("cdf", "empirical CDF A_nu(x, t) from a counts file");
  cdf->add_option("--counts", cdf_args.counts, "counts JSON input")->required();
  cdf->add_option("--t-grid", cdf_args.t_grid, "lo:hi:step");
  cdf->add_option("--out", cdf_args.out, "CSV output path")->required();
  cdf->add_option("--pcounts-out", cdf_args.pcounts_out, "optional (p, count) CSV");

  PredictArgs predict_args;
  auto* predict = app.add_subcommand("predict", "semi-theoretical CDF vs Phi(2t)");
  predict->add_option("--nu", predict_args.nu, "omega | Omega")->required();
  auto* opt_log2x = predict->add_option("--log2x", predict_args.log2x, "log log x");
  auto* opt_x = predict->add_option("--x", predict_args.x, "exact integer x");
  predict->add_option("--t-grid", predict_args.t_grid, "lo:hi:step");
  predict->add_option("--out", predict_args.out, "CSV output path")->required();

  CompareArgs compare_args;
  auto* compare = app.add_subcommand("compare", "deviation and local-law ratio reports");
  compare->add_option("--counts", compare_args.counts, "counts JSON input")->required();
  compare->add_option("--out", compare_args.out, "deviation CSV output")->required();
  compare->add_option("--ratio-out", compare_args.ratio_out, "local-law ratio CSV output");
  compare->add_option("--t-grid", compare_args.t_grid, "lo:hi:step");
  compare->add_option("--beta-lo", compare_args.beta_lo, "ratio window lower beta");
  compare->add_option("--beta-hi", compare_args.beta_hi, "ratio window upper beta");

  std::string constants_out;
  auto* constants = app.add_subcommand("constants", "gamma, kappa, sqrt(2/pi), P(2..8)");
  constants->add_option("--out", constants_out, "JSON output path (default stdout)");

  std::string tau_nu, tau_out;
  auto* tau = app.add_subcommand("tau", "optimality constant estimate");
  tau->add_option("--nu", tau_nu, "omega | Omega")->required();
  tau->add_option("--out", tau_out, "JSON output path (default stdout)");

  TailsArgs tails_args;
  auto* tails = app.add_subcommand("tails", "Hall-Tenenbaum tail count vs bound");
  tails->add_option("--x", tails_args.x, "upper bound")->required();
  tails->add_option("--nu", tails_args.nu, "omega | Omega")->required();
  tails->add_option("--e-lo", tails_args.e_lo, "prime interval lower end");
  tails->add_option("--e-hi", tails_args.e_hi, "prime interval upper end")->required();
  tails->add_option("--side", tails_args.side, "below | above")->required();
  tails->add_option("--factor", tails_args.factor, "threshold factor a or b")->required();
  tails->add_option("--workers", tails_args.workers, "worker threads");
  tails->add_option("--out", tails_args.out, "JSON output path (default stdout)");

  DumpArgs dump_args;
  auto* dump = app.add_subcommand("dump", "debug CSV of raw factorizations");
  dump->add_option("--lo", dump_args.lo, "range lower end (inclusive)");
  dump->add_option("--hi", dump_args.hi, "range upper end (exclusive)")->required();
  dump->add_option("--out", dump_args.out, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sieve->parsed()) return cmd_sieve(sieve_args);
    if (cdf->parsed()) return cmd_cdf(cdf_args);
    if (predict->parsed()) {
      predict_args.has_log2x = opt_log2x->count() > 0;
      predict_args.has_x = opt_x->count() > 0;
      return cmd_predict(predict_args);
    }
    if (compare->parsed()) return cmd_compare(compare_args);
    if (constants->parsed()) return cmd_constants(constants_out);
    if (tau->parsed()) return cmd_tau(tau_nu, tau_out);
    if (tails->parsed()) return cmd_tails(tails_args);
    if (dump->parsed()) return cmd_dump(dump_args);
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
