#include "blochsim/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <future>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blochsim/analysis.hpp"
#include "blochsim/device.hpp"
#include "blochsim/io.hpp"
#include "blochsim/noise.hpp"
#include "blochsim/rng.hpp"

namespace blochsim {

namespace {

namespace fs = std::filesystem;

std::string fraction_label(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", f);
  return buf;
}

// Run fn(0..count-1) on up to `jobs` threads; outputs land in per-index slots
// so the result is identical for any worker count.
template <typename Fn>
void for_each_index(std::size_t count, int jobs, Fn fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    futures.push_back(std::async(std::launch::async, [&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    }));
  std::exception_ptr first;
  for (auto& f : futures) {
    try {
      f.get();
    } catch (...) {
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

void write_manifest(const nlohmann::json& manifest, const fs::path& out_dir) {
  atomic_write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string gamma_header(const std::string& what, int n, const std::string& label) {
  return what + "; rows q=0.." + std::to_string(n - 1) + ", cols r=0.." + std::to_string(n - 1) +
         "; cycle fraction " + label;
}

}  // namespace

int cmd_design(const DeviceConfig& cfg, const fs::path& out_dir) {
  if (!cfg.geometry) throw ConfigError("geometry", "required for the design table");
  std::string csv =
      "# device design table: columns fraction, bloch_period_cm, ramp_per_cm, "
      "curvature_radius_cm\n";
  for (const double f : cfg.run.fractions) {
    GeometrySpec g = *cfg.geometry;
    g.device_length_cm = cfg.run.device_length_cm;
    const FractionDesign row = curvature_for_fraction(f, g);
    csv += format_sci(row.fraction) + "," + format_sci(row.bloch_period_cm) + "," +
           format_sci(row.ramp) + "," + format_sci(row.curvature_radius_cm) + "\n";
    std::cout << "fraction " << fraction_label(f) << ": lambda_B = " << row.bloch_period_cm
              << " cm, B = " << row.ramp << " /cm, R = " << row.curvature_radius_cm << " cm\n";
  }
  atomic_write_file(out_dir / "design.csv", csv);
  write_manifest(make_manifest(cfg, "design"), out_dir);
  return 0;
}

int cmd_simulate(const DeviceConfig& cfg, const fs::path& out_dir, int jobs) {
  const int n = cfg.lattice.num_sites;
  const std::size_t count = cfg.run.fractions.size();

  struct Row {
    double fraction, bloch_period, ramp, diag_fraction, balance;
  };
  std::vector<Row> rows(count);

  for_each_index(count, jobs, [&](std::size_t i) {
    const double f = cfg.run.fractions[i];
    const std::string label = fraction_label(f);
    const CorrelationMatrix gamma = ideal_gamma(cfg, f);
    const DistanceProfile profile = interparticle_distance(gamma);
    const ViolationMatrix v = bell_violation(gamma);

    atomic_write_file(out_dir / ("gamma_f" + label + ".csv"),
                      matrix_csv(gamma.gamma(),
                                 gamma_header("gamma[q][r]: coincidence probability, "
                                              "ordered-pair total 2",
                                              n, label)));
    std::string gcsv =
        "# interparticle distance profile: columns delta, weight, g(delta); cycle fraction " +
        label + "\n";
    for (std::size_t d = 0; d < profile.values.size(); ++d)
      gcsv += std::to_string(d) + "," + std::to_string(profile.weights[d]) + "," +
              format_sci(profile.values[d]) + "\n";
    atomic_write_file(out_dir / ("gdelta_f" + label + ".csv"), gcsv);
    atomic_write_file(
        out_dir / ("violations_f" + label + ".csv"),
        violations_csv(v.values,
                       gamma_header("V[k][l] = (2/3)*sqrt(gamma_kk*gamma_ll) - gamma_kl; "
                                    "non-positive cells blank",
                                    n, label)));

    rows[i] = {f, cfg.run.device_length_cm / f, 2.0 * std::numbers::pi * f / cfg.run.device_length_cm,
               diagonal_fraction(gamma), bunching_balance(gamma)};
  });

  std::string summary =
      "# per-device summary: columns fraction, bloch_period_cm, ramp_per_cm, diagonal_fraction, "
      "bunching_balance\n";
  for (const Row& r : rows) {
    summary += format_sci(r.fraction) + "," + format_sci(r.bloch_period) + "," +
               format_sci(r.ramp) + "," + format_sci(r.diag_fraction) + "," +
               format_sci(r.balance) + "\n";
    std::cout << "fraction " << fraction_label(r.fraction)
              << ": diagonal_fraction = " << r.diag_fraction
              << ", bunching_balance = " << r.balance << "\n";
  }
  atomic_write_file(out_dir / "summary.csv", summary);

  const std::optional<double> turning = device_turning_point(cfg);
  if (turning)
    std::cout << "turning point at cycle fraction " << *turning << "\n";
  else
    std::cout << "no turning point in (0, 0.5]\n";

  nlohmann::json manifest = make_manifest(cfg, "simulate");
  manifest["derived"]["turning_point_fraction"] =
      turning ? nlohmann::json(*turning) : nlohmann::json();
  write_manifest(manifest, out_dir);
  return 0;
}

int cmd_noisy(const DeviceConfig& cfg, const fs::path& out_dir, int jobs) {
  if (!cfg.detection) throw ConfigError("detection", "required for noisy runs");
  const DetectionConfig& det = *cfg.detection;
  const int n = cfg.lattice.num_sites;
  const std::size_t count = cfg.run.fractions.size();
  constexpr int kBootstrapResamples = 1000;

  struct Row {
    double fraction;
    std::int64_t total;
    double s_mean, s_std, max_sig;
  };
  std::vector<Row> rows(count);

  for_each_index(count, jobs, [&](std::size_t i) {
    const double f = cfg.run.fractions[i];
    const std::string label = fraction_label(f);
    const CorrelationMatrix ideal = ideal_gamma(cfg, f);
    const CountsMatrix counts = sample_counts(detection_probability(ideal), det, i);
    const CorrelationMatrix est = estimate_gamma(counts, det);
    const RealMat sigma = poisson_sigma(counts);
    const RealMat sig = violation_significance(bell_violation(est), counts.counts());
    const BootstrapSummary boot =
        bootstrap_similarity(counts, ideal, kBootstrapResamples, det, i);

    atomic_write_file(out_dir / ("counts_f" + label + ".csv"),
                      counts_csv(counts.counts(),
                                 gamma_header("coincidence counts per unordered pair", n, label)));
    atomic_write_file(out_dir / ("gamma_est_f" + label + ".csv"),
                      matrix_csv(est.gamma(),
                                 gamma_header("efficiency-corrected gamma estimate, "
                                              "renormalized to ordered-pair total 2",
                                              n, label)));
    atomic_write_file(out_dir / ("sigma_f" + label + ".csv"),
                      matrix_csv(sigma, gamma_header("Poissonian sigma = sqrt(counts), "
                                                     "1 for empty cells",
                                                     n, label)));
    atomic_write_file(out_dir / ("significance_f" + label + ".csv"),
                      significance_csv(sig, gamma_header("V significance in sigma units; "
                                                         "undefined cells blank",
                                                         n, label)));

    double max_sig = 0.0;
    for (std::size_t k = 0; k < sig.rows(); ++k)
      for (std::size_t l = 0; l < sig.cols(); ++l)
        if (!std::isnan(sig(k, l))) max_sig = std::max(max_sig, sig(k, l));
    rows[i] = {f, counts.total_unordered(), boot.mean, boot.stddev, max_sig};
  });

  std::string summary =
      "# per-device measurement summary: columns fraction, total_counts, similarity_mean, "
      "similarity_std, max_significance\n";
  for (const Row& r : rows) {
    summary += format_sci(r.fraction) + "," + std::to_string(r.total) + "," +
               format_sci(r.s_mean) + "," + format_sci(r.s_std) + "," + format_sci(r.max_sig) +
               "\n";
    std::cout << "fraction " << fraction_label(r.fraction) << ": counts = " << r.total
              << ", S = " << r.s_mean << " +- " << r.s_std << ", max significance = " << r.max_sig
              << " sigma\n";
  }
  atomic_write_file(out_dir / "summary.csv", summary);
  write_manifest(make_manifest(cfg, "noisy"), out_dir);
  return 0;
}

int cmd_oracle(const DeviceConfig& cfg, const fs::path& out_dir, std::uint64_t battery_seed) {
  constexpr double kTol = 1e-9;
  if (cfg.lattice.num_sites > 12)
    throw ConfigError("lattice.num_sites",
                      "oracle leg needs <= 12 sites (pair basis N(N+1)/2); downscale the device");
  if (cfg.input.type == InputType::distinguishable)
    throw ConfigError("input.type", "oracle compares interfering evolutions; use epr or separable");

  double worst = 0.0;
  nlohmann::json device_rows = nlohmann::json::array();
  for (const double f : cfg.run.fractions) {
    const FractionDevice dev = build_fraction_device(cfg, f);
    const TwoPhotonAmplitude state = initial_state(cfg);
    const CorrelationMatrix direct = correlation(evolve_state(state, dev.transfer));
    const CorrelationMatrix oracle =
        fock_oracle(state, build_hamiltonian(dev.lattice), cfg.run.device_length_cm);
    const double dev_max = max_abs_diff(direct.gamma(), oracle.gamma());
    worst = std::max(worst, dev_max);
    device_rows.push_back({{"fraction", f}, {"max_deviation", dev_max}});
    std::cout << "device fraction " << fraction_label(f) << ": max|dGamma| = " << dev_max << "\n";
  }

  constexpr int kBatteryRuns = 20;
  double battery_worst = 0.0;
  for (int i = 0; i < kBatteryRuns; ++i) {
    CounterRng rng(battery_seed, 0xBA77E21u, static_cast<std::uint64_t>(i));
    const std::size_t sites = 3 + rng.next_u64() % 6;  // 3..8
    LatticeSpec spec;
    spec.num_sites = static_cast<int>(sites);
    spec.coupling = 0.2 + rng.next_double();
    spec.ramp = 1.5 * rng.next_double();
    const double z = 15.0 * rng.next_double();
    const std::size_t m = rng.next_u64() % sites;
    std::size_t nn = rng.next_u64() % (sites - 1);
    if (nn >= m) ++nn;
    const TwoPhotonAmplitude state =
        rng.next_double() < 0.5
            ? epr_state(m, nn, 2.0 * std::numbers::pi * rng.next_double(), sites)
            : separable_state(m, nn, sites);
    const Tridiagonal h = build_hamiltonian(spec);
    const CorrelationMatrix direct = correlation(evolve_state(state, propagator(eigensystem(h), z)));
    battery_worst = std::max(battery_worst, max_abs_diff(direct.gamma(),
                                                         fock_oracle(state, h, z).gamma()));
  }
  std::cout << "battery (" << kBatteryRuns << " random instances): max|dGamma| = " << battery_worst
            << "\n";

  const bool pass = worst < kTol && battery_worst < kTol;
  nlohmann::json report;
  report["tolerance"] = kTol;
  report["device"] = device_rows;
  report["battery"] = {{"instances", kBatteryRuns}, {"max_deviation", battery_worst}};
  report["pass"] = pass;
  atomic_write_file(out_dir / "oracle.json", report.dump(2) + "\n");
  write_manifest(make_manifest(cfg, "oracle"), out_dir);
  std::cout << (pass ? "ORACLE PASS" : "ORACLE FAIL") << " (tolerance " << kTol << ")\n";
  return pass ? 0 : 3;
}

int cmd_heatmap(const fs::path& input_csv, const fs::path& output_pixmap, int block_size,
                bool use_palette) {
  RealMat m;
  try {
    m = read_matrix_csv(input_csv);
  } catch (const std::runtime_error& e) {
    throw ConfigError(input_csv.string(), e.what());
  }
  atomic_write_file(output_pixmap, pixmap_heatmap(m, block_size, use_palette));
  std::cout << "wrote " << output_pixmap.string() << " (" << m.rows() << "x" << m.cols()
            << " cells)\n";
  return 0;
}

namespace {

std::vector<double> parse_fractions_list(const std::string& csl) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= csl.size()) {
    const std::size_t comma = csl.find(',', start);
    const std::string field =
        csl.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      const double f = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
      if (!(f > 0.0) || f > 1.0) throw std::invalid_argument(field);
      out.push_back(f);
    } catch (const std::exception&) {
      throw ConfigError("--fractions", "'" + field + "' is not a fraction in (0, 1]");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("--fractions", "empty list");
  return out;
}

fs::path resolve_out_dir(const DeviceConfig& cfg, const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (!cfg.output.empty()) return cfg.output;
  if (const char* env = std::getenv("BLOCHSIM_OUT"); env && *env) return env;
  return "out";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Bloch oscillations of two-photon EPR states in waveguide lattices"};
  app.require_subcommand(1);

  std::string config_path, out_dir_opt, fractions_opt;
  std::uint64_t seed_opt = 0;
  bool seed_given = false;
  int jobs = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON device configuration file")->required();
    sub->add_option("--out", out_dir_opt, "output directory (overrides config and BLOCHSIM_OUT)");
    sub->add_option("--seed", seed_opt, "detection seed override")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--fractions", fractions_opt, "comma-separated cycle fractions override");
  };

  CLI::App* design = app.add_subcommand("design", "emit the bend-radius design table");
  add_common(design);
  CLI::App* simulate = app.add_subcommand("simulate", "ideal correlation sweep over fractions");
  add_common(simulate);
  simulate->add_option("--jobs", jobs, "max concurrent fraction workers")->check(CLI::Range(1, 64));
  CLI::App* noisy = app.add_subcommand("noisy", "emulated measurement run with Poissonian counts");
  add_common(noisy);
  noisy->add_option("--jobs", jobs, "max concurrent fraction workers")->check(CLI::Range(1, 64));
  CLI::App* oracle = app.add_subcommand("oracle", "dual-route evolution cross-check");
  add_common(oracle);

  std::string heat_in, heat_out;
  int block_size = 16;
  bool palette = false;
  CLI::App* heatmap = app.add_subcommand("heatmap", "render a matrix CSV as a binary pixmap");
  heatmap->add_option("input", heat_in, "matrix CSV")->required();
  heatmap->add_option("output", heat_out, "output pixmap (P5, or P6 with --palette)")->required();
  heatmap->add_option("--block", block_size, "pixels per matrix cell")->check(CLI::Range(1, 256));
  heatmap->add_flag("--palette", palette, "use the fixed color palette (P6)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (heatmap->parsed()) return cmd_heatmap(heat_in, heat_out, block_size, palette);

    DeviceConfig cfg = load_config_file(config_path);
    if (seed_given) {
      if (!cfg.detection) cfg.detection = DetectionConfig{};
      cfg.detection->seed = seed_opt;
    }
    if (!fractions_opt.empty()) cfg.run.fractions = parse_fractions_list(fractions_opt);
    const fs::path out = resolve_out_dir(cfg, out_dir_opt);

    if (design->parsed()) return cmd_design(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out, jobs);
    if (noisy->parsed()) return cmd_noisy(cfg, out, jobs);
    if (oracle->parsed())
      return cmd_oracle(cfg, out, cfg.detection ? cfg.detection->seed : 1);
    std::cerr << "config error: no subcommand\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace blochsim
