// wavedet command line front end: filter inspection, chirp/detail dumps,
// detector calibration, Pd sweeps and the scaling benchmark. All outputs are
// CSV (plus optional self-contained SVG charts) written via temp-file rename.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavedet/model_json.hpp"
#include "wavedet/svg.hpp"
#include "wavedet/wavedet.hpp"

namespace {

using wavedet::BoundaryMode;
using wavedet::ExperimentConfig;

struct RunConfig {
  ExperimentConfig exp;
  std::filesystem::path out_dir = ".";
  bool svg = false;
  int verbosity = 1;
};

void apply_config_json(RunConfig& rc, const nlohmann::json& j, bool& had_seed) {
  static const std::vector<std::string> known = {
      "chirp",        "wavelet",     "scales",           "sigma_n",
      "pfa",          "snr_grid",    "trials_per_point", "calibration_trials",
      "master_seed",  "boundary_mode", "workers",        "out_dir",
      "formats",      "verbosity"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::domain_error("unknown config key: " + key);
  }
  if (j.contains("chirp")) {
    const auto& c = j.at("chirp");
    if (c.contains("n_samples")) rc.exp.chirp.n_samples = c.at("n_samples").get<std::size_t>();
    if (c.contains("f0")) rc.exp.chirp.f0 = c.at("f0").get<double>();
    if (c.contains("f1")) rc.exp.chirp.f1 = c.at("f1").get<double>();
    if (c.contains("phase0")) rc.exp.chirp.phase0 = c.at("phase0").get<double>();
  }
  if (j.contains("wavelet")) rc.exp.wavelet = j.at("wavelet").get<std::string>();
  if (j.contains("scales"))
    rc.exp.scales = wavedet::ScaleSet(j.at("scales").get<std::vector<int>>());
  if (j.contains("sigma_n")) rc.exp.sigma_n = j.at("sigma_n").get<double>();
  if (j.contains("pfa")) rc.exp.pfa = j.at("pfa").get<double>();
  if (j.contains("snr_grid"))
    rc.exp.snr_grid = j.at("snr_grid").get<std::vector<double>>();
  if (j.contains("trials_per_point"))
    rc.exp.trials_per_point = j.at("trials_per_point").get<std::uint64_t>();
  if (j.contains("calibration_trials"))
    rc.exp.calibration_trials = j.at("calibration_trials").get<std::uint64_t>();
  if (j.contains("master_seed")) {
    rc.exp.master_seed = j.at("master_seed").get<std::uint64_t>();
    had_seed = true;
  }
  if (j.contains("boundary_mode"))
    rc.exp.mode =
        wavedet::boundary_mode_from_string(j.at("boundary_mode").get<std::string>());
  if (j.contains("workers")) rc.exp.workers = j.at("workers").get<unsigned>();
  if (j.contains("out_dir"))
    rc.out_dir = std::filesystem::path(j.at("out_dir").get<std::string>());
  if (j.contains("formats")) {
    const auto formats = j.at("formats").get<std::vector<std::string>>();
    if (formats.empty()) throw std::domain_error("config: formats must be nonempty");
    rc.svg = false;
    for (const auto& f : formats) {
      if (f == "svg") rc.svg = true;
      else if (f != "csv") throw std::domain_error("config: unknown format " + f);
    }
  }
  if (j.contains("verbosity")) rc.verbosity = j.at("verbosity").get<int>();
}

std::filesystem::path out_path(const RunConfig& rc, const std::string& name) {
  std::filesystem::create_directories(rc.out_dir);
  return rc.out_dir / name;
}

void note(const RunConfig& rc, const std::string& msg) {
  if (rc.verbosity > 0) std::cerr << msg << "\n";
}

int run_filters(int order) {
  const wavedet::WaveletFilter f = wavedet::make_daubechies(order);
  const std::size_t L = f.length();
  std::printf("%s: L = %zu\n", f.name.c_str(), L);
  for (std::size_t n = 0; n < L; ++n)
    std::printf("h[%2zu] = %+.17g    g[%2zu] = %+.17g\n", n, f.h[n], n, f.g[n]);

  bool all_ok = true;
  auto report = [&](const char* name, double residual, double tol) {
    const bool ok = residual <= tol;
    all_ok = all_ok && ok;
    std::printf("check %-18s %s (residual %.3g, tolerance %.1g)\n", name,
                ok ? "PASS" : "FAIL", residual, tol);
  };
  double sum_h = 0, sum_g = 0, energy_h = 0, energy_g = 0;
  for (std::size_t n = 0; n < L; ++n) {
    sum_h += f.h[n];
    sum_g += f.g[n];
    energy_h += f.h[n] * f.h[n];
    energy_g += f.g[n] * f.g[n];
  }
  report("unit_energy_h", std::fabs(energy_h - 1.0), 1e-12);
  report("unit_energy_g", std::fabs(energy_g - 1.0), 1e-12);
  double qmf = 0;
  for (std::size_t n = 0; n < L; ++n) {
    const double want = (n % 2 == 0 ? 1.0 : -1.0) * f.h[L - 1 - n];
    qmf = std::max(qmf, std::fabs(f.g[n] - want));
  }
  report("qmf_relation", qmf, 0.0);
  double orth = 0;
  for (std::size_t k = 1; 2 * k < L; ++k) {
    double acc = 0;
    for (std::size_t n = 0; n + 2 * k < L; ++n) acc += f.h[n] * f.h[n + 2 * k];
    orth = std::max(orth, std::fabs(acc));
  }
  report("double_shift_orth", orth, 1e-10);
  report("sum_h_sqrt2", std::fabs(sum_h - std::sqrt(2.0)), 1e-10);
  report("sum_g_zero", std::fabs(sum_g), 1e-10);
  report("even_length", L % 2 == 0 ? 0.0 : 1.0, 0.0);
  return all_ok ? 0 : 2;
}

int run_chirp(const RunConfig& rc) {
  const wavedet::SampledSignal x = wavedet::gen_chirp(rc.exp.chirp);
  std::string csv = "index,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    csv += std::to_string(i);
    csv += ',';
    csv += wavedet::format_double(x.samples[i]);
    csv += '\n';
  }
  const auto path = out_path(rc, "chirp.csv");
  wavedet::atomic_write_file(path, csv);
  note(rc, "wrote " + path.string());
  return 0;
}

wavedet::SampledSignal load_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("cannot open input file " + path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    const std::string value = line.substr(comma + 1);
    try {
      values.push_back(std::stod(value));
    } catch (const std::exception&) {
      continue;  // header or malformed row
    }
  }
  return wavedet::SampledSignal(std::move(values));
}

int run_dwt(const RunConfig& rc, const std::string& input) {
  const wavedet::SampledSignal x =
      input.empty() ? wavedet::gen_chirp(rc.exp.chirp)
                    : load_signal_csv(input);
  const wavedet::WaveletFilter f = wavedet::make_wavelet(rc.exp.wavelet);
  const wavedet::ConcatDetails d =
      wavedet::concat_details(x, f, rc.exp.scales, rc.exp.mode);
  std::string csv = "scale,index,value,steady\n";
  for (const auto& seg : d.segments) {
    for (std::size_t k = 0; k < seg.length; ++k) {
      csv += std::to_string(seg.level);
      csv += ',';
      csv += std::to_string(k);
      csv += ',';
      csv += wavedet::format_double(d.values[seg.offset + k]);
      csv += ',';
      csv += k < seg.steady_len ? '1' : '0';
      csv += '\n';
    }
  }
  const auto path = out_path(rc, "dwt.csv");
  wavedet::atomic_write_file(path, csv);
  note(rc, "wrote " + path.string());
  return 0;
}

int run_profile(const RunConfig& rc, int level, std::size_t experiments,
                double snr_db) {
  const auto points =
      wavedet::mean_coefficient_profile(rc.exp, level, experiments, snr_db);
  const auto path = out_path(rc, "profile_d" + std::to_string(level) + ".csv");
  wavedet::atomic_write_file(path, wavedet::profile_csv(points));
  note(rc, "wrote " + path.string());
  if (rc.svg) {
    std::vector<wavedet::SvgSeries> series(2);
    series[0].label = "noise mean";
    series[1].label = "signal mean";
    for (std::size_t i = 0; i < points.size(); ++i) {
      series[0].points.push_back({static_cast<double>(i), points[i].mean_noise});
      series[1].points.push_back({static_cast<double>(i), points[i].mean_signal});
    }
    const auto svg_path = out_path(rc, "profile_d" + std::to_string(level) + ".svg");
    wavedet::atomic_write_file(
        svg_path, wavedet::render_line_chart(
                      "mean detail coefficients, level " + std::to_string(level),
                      "coefficient index", "mean value", series));
    note(rc, "wrote " + svg_path.string());
  }
  return 0;
}

int run_calibrate(const RunConfig& rc) {
  note(rc, "building matched linear detector over scales " +
               wavedet::scales_label(rc.exp.scales));
  const wavedet::LinearDetectorModel linear =
      wavedet::build_matched_linear_detector(rc.exp, rc.exp.scales);
  note(rc, "calibrating max detector thresholds (" +
               std::to_string(rc.exp.calibration_trials) + " noise trials)");
  const auto max_models = wavedet::detail::calibrate_max_models(
      rc.exp, rc.exp.scales.levels, nullptr);
  nlohmann::json doc;
  doc["linear"] = wavedet::to_json(linear);
  doc["max"] = nlohmann::json::array();
  for (const auto& m : max_models) doc["max"].push_back(wavedet::to_json(m));
  const auto path = out_path(rc, "models.json");
  wavedet::atomic_write_file(path, doc.dump(2) + "\n");
  note(rc, "wrote " + path.string());
  return 0;
}

int run_sweep(const RunConfig& rc) {
  std::vector<wavedet::DetectorVariant> variants;
  for (int level : rc.exp.scales.levels)
    variants.push_back({wavedet::DetectorVariant::Kind::max,
                        wavedet::ScaleSet(std::vector<int>{level})});
  for (int level : rc.exp.scales.levels)
    variants.push_back({wavedet::DetectorVariant::Kind::linear,
                        wavedet::ScaleSet(std::vector<int>{level})});
  if (rc.exp.scales.levels.size() > 1)
    variants.push_back({wavedet::DetectorVariant::Kind::linear, rc.exp.scales});
  note(rc, "sweeping " + std::to_string(variants.size()) + " detector variants over " +
               std::to_string(rc.exp.snr_grid.size()) + " SNR points");
  const auto curves = wavedet::sweep(rc.exp, variants);
  const auto path = out_path(rc, "sweep.csv");
  wavedet::atomic_write_file(path, wavedet::sweep_csv(curves));
  note(rc, "wrote " + path.string());
  if (rc.svg) {
    std::vector<wavedet::SvgSeries> series;
    for (const auto& c : curves) {
      wavedet::SvgSeries s;
      s.label = c.detector + " d" + wavedet::scales_label(c.scales);
      for (const auto& p : c.points) s.points.push_back({p.snr_db, p.pd});
      series.push_back(std::move(s));
    }
    const auto svg_path = out_path(rc, "sweep.svg");
    wavedet::atomic_write_file(
        svg_path, wavedet::render_line_chart("probability of detection",
                                             "SNR (dB)", "Pd", series));
    note(rc, "wrote " + svg_path.string());
  }
  return 0;
}

int run_bench(const RunConfig& rc, std::vector<std::size_t> sizes,
              std::vector<int> orders) {
  if (sizes.empty())
    for (std::size_t n = 1024; n <= (1u << 20); n *= 2) sizes.push_back(n);
  if (orders.empty()) orders = {9};
  const auto rows = wavedet::scaling_benchmark(sizes, orders);
  const auto path = out_path(rc, "bench.csv");
  wavedet::atomic_write_file(path, wavedet::bench_csv(rows));
  note(rc, "wrote " + path.string());
  for (int order : orders) {
    const std::size_t fl = wavedet::make_daubechies(order).length();
    if (sizes.size() >= 2)
      note(rc, "db" + std::to_string(order) + " fitted input-length exponent: " +
                   wavedet::format_double(wavedet::fitted_exponent(rows, fl)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelet-domain known-signal detection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, wavelet, mode_str, out_dir, input_path;
  std::vector<int> scales, orders;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0, trials = 0, calibration_trials = 0;
  double pfa = 0;
  unsigned workers = 0;
  bool svg = false;

  auto* opt_config = app.add_option("--config", config_path, "JSON config file");
  auto* opt_seed = app.add_option("--seed", seed, "master seed (64-bit)");
  auto* opt_pfa = app.add_option("--pfa", pfa, "target false-alarm probability");
  auto* opt_scales =
      app.add_option("--scales", scales, "decomposition levels")->delimiter(',');
  auto* opt_wavelet = app.add_option("--wavelet", wavelet, "wavelet name, e.g. db9");
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_svg = app.add_flag("--svg", svg, "also emit SVG charts");
  auto* opt_mode = app.add_option("--mode", mode_str,
                                  "boundary mode: zero-pad or periodic");
  auto* opt_workers =
      app.add_option("--workers", workers, "worker threads (0 = all cores)");
  auto* opt_trials =
      app.add_option("--trials", trials, "Monte Carlo trials per SNR point");
  auto* opt_calib = app.add_option("--calibration-trials", calibration_trials,
                                   "noise-only calibration trials");

  auto* cmd_filters = app.add_subcommand("filters", "print filter taps and checks");
  int order = 9;
  cmd_filters->add_option("--order", order, "Daubechies order (1..10)");

  auto* cmd_chirp = app.add_subcommand("chirp", "write the test chirp as CSV");
  std::size_t samples = 0;
  double f0 = 0, f1 = 0;
  auto* opt_samples = cmd_chirp->add_option("--samples", samples, "chirp length");
  auto* opt_f0 = cmd_chirp->add_option("--f0", f0, "start frequency (cycles/sample)");
  auto* opt_f1 = cmd_chirp->add_option("--f1", f1, "end frequency (cycles/sample)");

  auto* cmd_dwt = app.add_subcommand("dwt", "write detail coefficients as CSV");
  cmd_dwt->add_option("--input", input_path,
                      "signal CSV (index,value); default: the config chirp");

  auto* cmd_profile =
      app.add_subcommand("profile", "mean noise/signal coefficient profile");
  int profile_level = 4;
  std::size_t experiments = 500;
  double profile_snr = -5.0;
  cmd_profile->add_option("--level", profile_level, "decomposition level");
  cmd_profile->add_option("--experiments", experiments, "number of experiments");
  cmd_profile->add_option("--snr", profile_snr, "SNR in dB");

  auto* cmd_calibrate =
      app.add_subcommand("calibrate", "calibrate detectors, write models.json");
  auto* cmd_sweep = app.add_subcommand("sweep", "Pd curves over the SNR grid");
  auto* cmd_bench = app.add_subcommand("bench", "transform scaling benchmark");
  cmd_bench->add_option("--sizes", sizes, "input lengths")->delimiter(',');
  cmd_bench->add_option("--orders", orders, "Daubechies orders")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig rc;
    bool seed_from_config = false;
    if (opt_config->count() > 0) {
      std::ifstream in(config_path);
      if (!in) throw std::domain_error("cannot open config file " + config_path);
      nlohmann::json j;
      in >> j;
      apply_config_json(rc, j, seed_from_config);
    }
    if (opt_seed->count() > 0) {
      rc.exp.master_seed = seed;
    } else if (!seed_from_config) {
      if (const char* env = std::getenv("WAVEDET_SEED")) {
        char* end = nullptr;
        const std::uint64_t v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
          throw std::domain_error("WAVEDET_SEED is not a valid integer");
        rc.exp.master_seed = v;
      }
    }
    if (opt_pfa->count() > 0) rc.exp.pfa = pfa;
    if (opt_scales->count() > 0) rc.exp.scales = wavedet::ScaleSet(scales);
    if (opt_wavelet->count() > 0) rc.exp.wavelet = wavelet;
    if (opt_out->count() > 0) rc.out_dir = out_dir;
    if (opt_svg->count() > 0) rc.svg = svg;
    if (opt_mode->count() > 0)
      rc.exp.mode = wavedet::boundary_mode_from_string(mode_str);
    if (opt_workers->count() > 0) rc.exp.workers = workers;
    if (opt_trials->count() > 0) rc.exp.trials_per_point = trials;
    if (opt_calib->count() > 0) rc.exp.calibration_trials = calibration_trials;
    if (opt_samples->count() > 0) rc.exp.chirp.n_samples = samples;
    if (opt_f0->count() > 0) rc.exp.chirp.f0 = f0;
    if (opt_f1->count() > 0) rc.exp.chirp.f1 = f1;

    if (cmd_filters->parsed()) return run_filters(order);
    rc.exp.validate();
    if (cmd_chirp->parsed()) return run_chirp(rc);
    if (cmd_dwt->parsed()) return run_dwt(rc, input_path);
    if (cmd_profile->parsed())
      return run_profile(rc, profile_level, experiments, profile_snr);
    if (cmd_calibrate->parsed()) return run_calibrate(rc);
    if (cmd_sweep->parsed()) return run_sweep(rc);
    if (cmd_bench->parsed()) return run_bench(rc, sizes, orders);
    std::cerr << "no command given\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 3;
  }
}
