// specsense: spectrum-sensing toolkit CLI.
//
// Subcommands: generate, calibrate, sense, roc, fit, cdfdump.
// Exit codes: 2 usage/config, 3 I/O, 4 numeric failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specsense/capture.hpp"
#include "specsense/channel.hpp"
#include "specsense/detectors.hpp"
#include "specsense/errors.hpp"
#include "specsense/experiment.hpp"
#include "specsense/fitting.hpp"
#include "specsense/format.hpp"
#include "specsense/gof.hpp"
#include "specsense/signal.hpp"

namespace ss = specsense;
using nlohmann::json;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ss::IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ss::IoError("cannot write " + path);
  out << text;
  if (!out.flush()) throw ss::IoError("short write to " + path);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ss::InvalidConfigError("cannot parse number: " + item);
    }
  }
  if (out.empty()) throw ss::InvalidConfigError("empty numeric list");
  return out;
}

// "-20:5:0" (start:step:stop) or a comma-separated list.
std::vector<double> parse_snr_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_double_list(text);
  std::stringstream stream(text);
  std::string a, b, c;
  if (!std::getline(stream, a, ':') || !std::getline(stream, b, ':') ||
      !std::getline(stream, c)) {
    throw ss::InvalidConfigError("snr grid must be start:step:stop or a list");
  }
  double start, step, stop;
  try {
    start = std::stod(a);
    step = std::stod(b);
    stop = std::stod(c);
  } catch (const std::exception&) {
    throw ss::InvalidConfigError("cannot parse snr grid: " + text);
  }
  if (!(step > 0.0)) throw ss::InvalidConfigError("snr grid step must be > 0");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
  if (grid.empty()) throw ss::InvalidConfigError("empty snr grid");
  return grid;
}

// Samples CSV: header lines are skipped; the last comma field of each data
// row is the value. Accepts both "value" and "su,value" schemas.
std::vector<double> read_samples_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ss::IoError("cannot open " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.back() == '\r') {
      while (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
    }
    const auto comma = line.find_last_of(',');
    const std::string field =
        comma == std::string::npos ? line : line.substr(comma + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(field, &used);
      if (used != field.size()) continue;  // header
      out.push_back(v);
    } catch (const std::exception&) {
      continue;  // header row
    }
  }
  if (out.empty()) throw ss::IoError("no numeric samples in " + path);
  return out;
}

struct GenerateArgs {
  std::string mode;
  std::string out;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  std::size_t n = 4096;
  int rx = 4;
  double noise_dbm = 0.0;
  double sample_rate_hz = 2.4576e9;
  double tone_freq_hz = 1.0e5;
  double center_freq_hz = 1.8e9;
  std::string profile_path;
  std::string fading = "rayleigh";
  std::int64_t snapshot = 0;
};

ss::ChannelProfile load_profile(const std::string& path,
                                const std::string& fading,
                                std::uint64_t seed) {
  const ss::FadingModel model = [&] {
    if (fading == "static") return ss::FadingModel::Static;
    if (fading == "rayleigh" || fading == "rayleigh_block") {
      return ss::FadingModel::RayleighBlock;
    }
    throw ss::InvalidConfigError("unknown fading: " + fading);
  }();
  if (path.empty()) return ss::epa_profile(model, seed);
  auto profile = ss::profile_from_json(read_text_file(path), seed);
  profile.fading = model;
  return profile;
}

int cmd_generate(const GenerateArgs& args) {
  ss::SignalConfig sig;
  sig.tone_freq_hz = args.tone_freq_hz;
  sig.sample_rate_hz = args.sample_rate_hz;
  sig.num_samples = args.n;
  sig.noise_power_dbm = args.noise_dbm;
  sig.pu_power_dbm = args.noise_dbm + args.snr_db;
  sig.seed = args.seed;
  sig.validate();
  if (args.rx < 1) throw ss::InvalidConfigError("--rx must be >= 1");

  std::vector<ss::Waveform> channels;
  if (args.mode == "noise") {
    // Matches the experiment's fresh-H0 captures for trial = snapshot.
    for (int su = 0; su < args.rx; ++su) {
      channels.push_back(ss::generate_noise(
          sig,
          ss::make_tag(ss::StreamPurpose::ValidationNoise,
                       static_cast<std::uint32_t>(su)),
          static_cast<std::uint32_t>(args.snapshot)));
    }
  } else if (args.mode == "pu") {
    channels.push_back(ss::generate_pu_tone(sig));
  } else if (args.mode == "composite") {
    // Matches the experiment's H1 captures for trial = snapshot.
    const ss::ChannelProfile profile =
        load_profile(args.profile_path, args.fading, args.seed);
    const ss::Waveform tone = ss::generate_pu_tone(sig);
    ss::MultiRxOutput out =
        ss::apply_channel(tone, profile, args.rx, args.snapshot);
    std::vector<std::uint64_t> ids(static_cast<std::size_t>(args.rx));
    for (std::size_t su = 0; su < ids.size(); ++su) {
      ids[su] = (static_cast<std::uint64_t>(args.snapshot) << 32) | su;
    }
    ss::noise_floor_inject(out, sig.noise_power_dbm, args.seed, ids);
    channels = std::move(out.per_rx);
  } else {
    throw ss::InvalidConfigError("unknown --mode: " + args.mode);
  }

  const ss::IqCapture cap = ss::IqCapture::from_waveforms(
      channels, args.center_freq_hz, args.mode, args.seed);
  ss::write_capture(args.out, cap);
  std::fprintf(stderr, "wrote %s.iq (%d ch x %llu samples) and %s.json\n",
               args.out.c_str(), cap.meta.num_channels,
               static_cast<unsigned long long>(cap.meta.num_samples),
               args.out.c_str());
  return 0;
}

struct CalibrateArgs {
  std::string stat = "mme";
  std::string alphas = "0.05";
  int trials = 2000;
  std::size_t n = 4096;
  int smoothing_l = 8;
  int rx = 4;
  std::uint64_t seed = 0;
  double noise_dbm = 0.0;
  double sample_rate_hz = 2.4576e9;
  std::string out;
};

ss::ExperimentConfig make_experiment_config(std::size_t n, int rx,
                                            int smoothing_l, int trials,
                                            std::uint64_t seed,
                                            double noise_dbm,
                                            double sample_rate_hz) {
  ss::ExperimentConfig cfg;
  cfg.signal.num_samples = n;
  cfg.signal.sample_rate_hz = sample_rate_hz;
  cfg.signal.noise_power_dbm = noise_dbm;
  cfg.signal.pu_power_dbm = noise_dbm;
  cfg.signal.seed = seed;
  cfg.channel = ss::epa_profile(ss::FadingModel::RayleighBlock, seed);
  cfg.num_rx = rx;
  cfg.smoothing_L = smoothing_l;
  cfg.trials = trials;
  cfg.master_seed = seed;
  return cfg;
}

int cmd_calibrate(const CalibrateArgs& args) {
  ss::ExperimentConfig cfg =
      make_experiment_config(args.n, args.rx, args.smoothing_l, args.trials,
                             args.seed, args.noise_dbm, args.sample_rate_hz);
  cfg.statistic = ss::stat_kind_from_name(args.stat);
  const std::vector<double> alphas = parse_double_list(args.alphas);
  const ss::CalibrationResult cal = ss::run_null_calibration(cfg, alphas);
  write_text_file(args.out, ss::calibration_to_json(cal) + "\n");
  std::fprintf(stderr, "calibrated %s thresholds (%d trials x %d rx) -> %s\n",
               args.stat.c_str(), args.trials, args.rx, args.out.c_str());
  return 0;
}

struct SenseArgs {
  std::string in;
  std::string thresholds;
  std::string test = "ad";
  double alpha = 0.05;
  int segments = 16;
  std::string report;
  std::string samples_csv;
};

int cmd_sense(const SenseArgs& args) {
  const ss::IqCapture cap = ss::read_capture(args.in);
  const ss::CalibrationResult cal =
      ss::calibration_from_json(read_text_file(args.thresholds));
  const ss::GofTest test = ss::gof_test_from_name(args.test);

  if (args.segments < 1) throw ss::InvalidConfigError("--segments must be >= 1");
  if (cap.meta.num_samples %
          static_cast<std::uint64_t>(args.segments) != 0) {
    throw ss::InvalidConfigError("capture length is not divisible by --segments");
  }
  const auto seg_len =
      cap.meta.num_samples / static_cast<std::uint64_t>(args.segments);
  if (seg_len != static_cast<std::uint64_t>(cal.capture_samples)) {
    throw ss::InvalidConfigError(
        "thresholds were calibrated for n=" +
        std::to_string(cal.capture_samples) + " but segments have " +
        std::to_string(seg_len) + " samples");
  }
  const double threshold = ss::calibration_threshold(cal, args.alpha);

  const ss::NullCdf null_ref = ss::NullCdf::empirical(cal.null_samples);
  const ss::GofThresholdTable vs_null_table = ss::calibrate_critical_values(
      test, args.segments, null_ref, /*composite=*/false, 2000,
      std::span<const double>(&args.alpha, 1), cal.master_seed);

  double normality_threshold = 0.0;
  bool have_normality_threshold = false;
  if (test == ss::GofTest::AD) {
    for (const auto& [alpha, value] : ss::ad_critical_table()) {
      if (std::fabs(alpha - args.alpha) <= 1e-12) {
        normality_threshold = value;
        have_normality_threshold = true;
        break;
      }
    }
  }
  if (!have_normality_threshold && args.segments >= 3) {
    const ss::GofThresholdTable t = ss::calibrate_critical_values(
        test, args.segments, ss::NullCdf::normal(0.0, 1.0),
        /*composite=*/true, 2000, std::span<const double>(&args.alpha, 1),
        cal.master_seed);
    normality_threshold = t.critical(args.alpha);
    have_normality_threshold = true;
  }

  json report;
  report["format_version"] = 1;
  report["capture"] = {{"stem", args.in},
                       {"label", cap.meta.label},
                       {"num_channels", cap.meta.num_channels},
                       {"num_samples", cap.meta.num_samples},
                       {"seed", cap.meta.seed}};
  report["statistic"] = ss::stat_kind_name(cal.statistic);
  report["test"] = ss::gof_test_name(test);
  report["significance"] = args.alpha;
  report["segments"] = args.segments;
  report["segment_samples"] = seg_len;
  report["threshold"] = threshold;

  std::string samples_csv = "su,value\n";
  json per_su = json::array();
  for (int su = 0; su < cap.meta.num_channels; ++su) {
    const ss::Waveform full = cap.channel_as_waveform(su);
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(args.segments));
    for (int seg = 0; seg < args.segments; ++seg) {
      ss::Waveform w;
      w.sample_rate_hz = full.sample_rate_hz;
      w.label = full.label;
      const auto begin = full.samples.begin() +
                         static_cast<std::ptrdiff_t>(seg * static_cast<std::ptrdiff_t>(seg_len));
      w.samples.assign(begin, begin + static_cast<std::ptrdiff_t>(seg_len));
      const ss::EigSpectrum spectrum =
          ss::eigenvalues(ss::sample_covariance(w, cal.smoothing_L));
      stats.push_back(ss::compute_statistic(cal.statistic, spectrum).value);
    }

    std::size_t exceed = 0;
    for (double s : stats) exceed += s > threshold ? 1 : 0;

    const ss::GofResult vs_null =
        ss::run_gof(test, stats, null_ref, args.alpha, vs_null_table);

    json su_json;
    su_json["su_id"] = su;
    su_json["decision"] = vs_null.reject_null;
    su_json["exceed_fraction"] =
        static_cast<double>(exceed) / static_cast<double>(stats.size());
    json gofs = json::array();
    gofs.push_back({{"name", "vs_null_reference"},
                    {"test", ss::gof_test_name(test)},
                    {"statistic", vs_null.statistic},
                    {"threshold", vs_null.threshold},
                    {"significance", args.alpha},
                    {"reject_null", vs_null.reject_null}});
    if (have_normality_threshold && stats.size() >= 3) {
      double mean = 0.0;
      for (double s : stats) mean += s;
      mean /= static_cast<double>(stats.size());
      double ssq = 0.0;
      for (double s : stats) ssq += (s - mean) * (s - mean);
      const double sd = std::sqrt(ssq / static_cast<double>(stats.size() - 1));
      if (sd > 0.0) {
        const double stat =
            test == ss::GofTest::AD
                ? ss::ad_normality_statistic(stats)
                : ss::gof_statistic(test, ss::ecdf(stats),
                                    ss::NullCdf::normal(mean, sd));
        gofs.push_back({{"name", "normality"},
                        {"test", ss::gof_test_name(test)},
                        {"statistic", stat},
                        {"threshold", normality_threshold},
                        {"significance", args.alpha},
                        {"reject_null", stat > normality_threshold}});
      }
    }
    su_json["gof_results"] = std::move(gofs);
    const ss::HistogramKl kl = ss::kl_from_samples(stats, cal.null_samples);
    su_json["kl_to_null"] = kl.kl;
    su_json["kl_support_mismatch_bins"] = kl.support_mismatch_bins;
    su_json["statistic_samples"] = stats;
    per_su.push_back(std::move(su_json));

    for (double s : stats) {
      samples_csv += std::to_string(su);
      samples_csv += ',';
      samples_csv += ss::format_g9(s);
      samples_csv += '\n';
    }
  }
  report["per_su"] = std::move(per_su);
  write_text_file(args.report, report.dump(2) + "\n");
  if (!args.samples_csv.empty()) write_text_file(args.samples_csv, samples_csv);

  for (const auto& su : report["per_su"]) {
    std::fprintf(stderr, "su %d: %s\n", su["su_id"].get<int>(),
                 su["decision"].get<bool>() ? "PU present" : "PU absent");
  }
  return 0;
}

struct RocArgs {
  std::string snr = "-20:5:0";
  int trials = 500;
  double alpha = 0.05;
  std::size_t n = 4096;
  int smoothing_l = 8;
  int rx = 4;
  std::uint64_t seed = 0;
  double noise_dbm = 0.0;
  std::string stats = "all";
  std::string csv;
};

int cmd_roc(const RocArgs& args) {
  ss::ExperimentConfig cfg =
      make_experiment_config(args.n, args.rx, args.smoothing_l, args.trials,
                             args.seed, args.noise_dbm, 2.4576e9);
  cfg.significance = args.alpha;
  cfg.snr_grid_db = parse_snr_grid(args.snr);
  std::vector<ss::StatKind> kinds;
  if (args.stats == "all") {
    kinds.assign(ss::kAllStatKinds.begin(), ss::kAllStatKinds.end());
  } else {
    std::stringstream stream(args.stats);
    std::string item;
    while (std::getline(stream, item, ',')) {
      if (!item.empty()) kinds.push_back(ss::stat_kind_from_name(item));
    }
    if (kinds.empty()) throw ss::InvalidConfigError("no statistics requested");
  }
  const auto rows = ss::run_roc_sweep(cfg, kinds);
  write_text_file(args.csv, ss::roc_to_csv(rows));
  std::fprintf(stderr, "wrote %zu ROC rows -> %s\n", rows.size(),
               args.csv.c_str());
  return 0;
}

struct FitArgs {
  std::string in;
  std::string families = "all";
  std::string test = "ad";
  int trials = 2000;
  std::uint64_t seed = 0;
  std::string csv;
  std::string json_out;
};

int cmd_fit(const FitArgs& args) {
  const std::vector<double> samples = read_samples_csv(args.in);
  std::vector<ss::Family> families;
  if (args.families == "all") {
    families.assign(ss::kAllFamilies.begin(), ss::kAllFamilies.end());
  } else {
    std::stringstream stream(args.families);
    std::string item;
    while (std::getline(stream, item, ',')) {
      if (!item.empty()) families.push_back(ss::family_from_name(item));
    }
    if (families.empty()) throw ss::InvalidConfigError("no families requested");
  }
  const ss::GofTest test = ss::gof_test_from_name(args.test);
  std::vector<ss::FitResult> fits;
  for (ss::Family family : families) {
    ss::FitResult fit = ss::fit_mle(family, samples);
    fit.p_value = ss::gof_p_value(fit, samples, test, args.trials, args.seed);
    fits.push_back(std::move(fit));
  }
  if (!args.csv.empty()) write_text_file(args.csv, ss::fits_to_csv(fits));
  if (!args.json_out.empty()) {
    write_text_file(args.json_out, ss::fits_to_json(fits) + "\n");
  }
  const ss::FitResult& best = ss::select_best(fits);
  std::fprintf(stderr, "best fit: %s (aic %.6g)\n",
               ss::family_name(best.family).c_str(), best.aic);
  return 0;
}

struct CdfdumpArgs {
  std::string in;
  std::string null_spec = "fit:normal";
  std::string csv;
};

ss::NullCdf resolve_null(const std::string& spec,
                         std::span<const double> samples) {
  const auto colon = spec.find(':');
  const std::string head = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (head == "fit") {
    if (tail == "normal") {
      double mean = 0.0;
      for (double s : samples) mean += s;
      mean /= static_cast<double>(samples.size());
      double ssq = 0.0;
      for (double s : samples) ssq += (s - mean) * (s - mean);
      const double sd =
          std::sqrt(ssq / std::max<double>(1.0, static_cast<double>(samples.size() - 1)));
      if (!(sd > 0.0)) throw ss::NumericError("degenerate sample for fit:normal");
      return ss::NullCdf::normal(mean, sd);
    }
    return ss::fitted_cdf(ss::fit_mle(ss::family_from_name(tail), samples));
  }
  if (head == "ref") {
    const ss::CalibrationResult cal =
        ss::calibration_from_json(read_text_file(tail));
    return ss::NullCdf::empirical(cal.null_samples);
  }
  const std::vector<double> p = parse_double_list(tail);
  if (head == "normal" && p.size() == 2) return ss::NullCdf::normal(p[0], p[1]);
  if (head == "lognormal" && p.size() == 2) {
    return ss::NullCdf::lognormal(p[0], p[1]);
  }
  if (head == "chi_square" && p.size() == 1) return ss::NullCdf::chi_square(p[0]);
  if (head == "gamma" && p.size() == 2) return ss::NullCdf::gamma_dist(p[0], p[1]);
  if (head == "exponential" && p.size() == 1) {
    return ss::NullCdf::exponential(p[0]);
  }
  throw ss::InvalidConfigError("cannot parse --null spec: " + spec);
}

int cmd_cdfdump(const CdfdumpArgs& args) {
  std::vector<double> samples = read_samples_csv(args.in);
  std::sort(samples.begin(), samples.end());
  const ss::NullCdf f0 = resolve_null(args.null_spec, samples);
  std::string out = "y,f1,f0\n";
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += ss::format_g9(samples[i]);
    out += ',';
    out += ss::format_g9(static_cast<double>(i + 1) / n);
    out += ',';
    out += ss::format_g9(f0.cdf(samples[i]));
    out += '\n';
  }
  write_text_file(args.csv, out);
  std::fprintf(stderr, "wrote %zu CDF rows -> %s\n", samples.size(),
               args.csv.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric spectrum sensing toolkit"};
  app.require_subcommand(1);
  bool json_errors = false;
  app.add_flag("--json-errors", json_errors,
               "emit machine-readable errors on stderr");

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "write an IQ capture");
  generate->add_option("--mode", gen.mode, "noise|pu|composite")->required();
  generate->add_option("--out", gen.out, "output stem (.iq/.json)")->required();
  generate->add_option("--seed", gen.seed, "master seed");
  generate->add_option("--snr-db", gen.snr_db, "PU power over the noise floor");
  generate->add_option("--n", gen.n, "samples per channel");
  generate->add_option("--rx", gen.rx, "receiver count");
  generate->add_option("--noise-dbm", gen.noise_dbm, "noise floor (relative dBm)");
  generate->add_option("--fs", gen.sample_rate_hz, "sample rate, Hz");
  generate->add_option("--tone-hz", gen.tone_freq_hz, "PU tone baseband frequency");
  generate->add_option("--center-hz", gen.center_freq_hz, "metadata center frequency");
  generate->add_option("--profile", gen.profile_path, "channel profile JSON");
  generate->add_option("--fading", gen.fading, "rayleigh|static");
  generate->add_option("--snapshot", gen.snapshot, "channel/noise realization index");

  CalibrateArgs cal;
  CLI::App* calibrate = app.add_subcommand("calibrate", "null thresholds");
  calibrate->add_option("--stat", cal.stat, "mme|meam|megm|amgm")->required();
  calibrate->add_option("--alpha", cal.alphas, "significance list");
  calibrate->add_option("--trials", cal.trials, "calibration trials");
  calibrate->add_option("--n", cal.n, "capture/segment length");
  calibrate->add_option("--smoothing-l", cal.smoothing_l, "covariance dimension");
  calibrate->add_option("--rx", cal.rx, "receiver count");
  calibrate->add_option("--seed", cal.seed, "master seed");
  calibrate->add_option("--noise-dbm", cal.noise_dbm, "noise floor");
  calibrate->add_option("--fs", cal.sample_rate_hz, "sample rate, Hz");
  calibrate->add_option("--out", cal.out, "thresholds JSON path")->required();

  SenseArgs sense;
  CLI::App* sense_cmd = app.add_subcommand("sense", "per-SU decisions");
  sense_cmd->add_option("--in", sense.in, "capture stem")->required();
  sense_cmd->add_option("--thresholds", sense.thresholds, "calibrate output")
      ->required();
  sense_cmd->add_option("--test", sense.test, "ks|cm|ad");
  sense_cmd->add_option("--alpha", sense.alpha, "significance");
  sense_cmd->add_option("--segments", sense.segments, "segments per capture");
  sense_cmd->add_option("--report", sense.report, "report JSON path")->required();
  sense_cmd->add_option("--samples-csv", sense.samples_csv,
                        "statistic samples CSV path");

  RocArgs roc;
  CLI::App* roc_cmd = app.add_subcommand("roc", "Pfa/Pd sweep over SNR");
  roc_cmd->add_option("--snr", roc.snr, "start:step:stop or list, dB");
  roc_cmd->add_option("--trials", roc.trials, "trials per point");
  roc_cmd->add_option("--alpha", roc.alpha, "significance");
  roc_cmd->add_option("--n", roc.n, "capture length");
  roc_cmd->add_option("--smoothing-l", roc.smoothing_l, "covariance dimension");
  roc_cmd->add_option("--rx", roc.rx, "receiver count");
  roc_cmd->add_option("--seed", roc.seed, "master seed");
  roc_cmd->add_option("--noise-dbm", roc.noise_dbm, "noise floor");
  roc_cmd->add_option("--stats", roc.stats, "all or a statistic list");
  roc_cmd->add_option("--csv", roc.csv, "output CSV path")->required();

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "candidate distribution fits");
  fit_cmd->add_option("--in", fit.in, "statistic samples CSV")->required();
  fit_cmd->add_option("--families", fit.families, "all or family list");
  fit_cmd->add_option("--test", fit.test, "bootstrap GoF test: ks|cm|ad");
  fit_cmd->add_option("--trials", fit.trials, "bootstrap trials");
  fit_cmd->add_option("--seed", fit.seed, "bootstrap seed");
  fit_cmd->add_option("--csv", fit.csv, "output CSV path");
  fit_cmd->add_option("--json", fit.json_out, "output JSON path");

  CdfdumpArgs cdf;
  CLI::App* cdf_cmd = app.add_subcommand("cdfdump", "empirical vs reference CDF");
  cdf_cmd->add_option("--in", cdf.in, "statistic samples CSV")->required();
  cdf_cmd->add_option("--null", cdf.null_spec,
                      "fit:<family>|ref:<thresholds.json>|<family>:<params>");
  cdf_cmd->add_option("--csv", cdf.csv, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    if (json_errors) {
      json err = {{"error", {{"category", "usage"}, {"message", e.what()}}}};
      std::cerr << err.dump() << '\n';
    } else {
      app.exit(e);
    }
    return 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (calibrate->parsed()) return cmd_calibrate(cal);
    if (sense_cmd->parsed()) return cmd_sense(sense);
    if (roc_cmd->parsed()) return cmd_roc(roc);
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (cdf_cmd->parsed()) return cmd_cdfdump(cdf);
  } catch (const ss::Error& e) {
    if (json_errors) {
      const char* category =
          e.code() == ss::ErrorCode::InvalidConfig ? "usage"
          : e.code() == ss::ErrorCode::Io          ? "io"
                                                   : "numeric";
      json err = {{"error", {{"category", category}, {"message", e.what()}}}};
      std::cerr << err.dump() << '\n';
    } else {
      std::cerr << "specsense: " << e.what() << '\n';
    }
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "specsense: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
