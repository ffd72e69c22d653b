#include "specsense/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "specsense/errors.hpp"
#include "specsense/format.hpp"
#include "specsense/parallel.hpp"

namespace specsense {

namespace {

using nlohmann::json;

// dBm fields can be -inf (source disabled); JSON has no inf literal, so
// those travel as strings.
json dbm_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double lookup_alpha(const std::map<double, double>& table, double alpha,
                    const char* what) {
  for (const auto& [key, value] : table) {
    if (std::fabs(key - alpha) <= 1e-12 * std::max(1.0, std::fabs(alpha))) {
      return value;
    }
  }
  throw InvalidConfigError(std::string(what) +
                           ": no threshold at the requested significance");
}

struct NullStatistics {
  // stats[kind][su * trials + t]
  std::array<std::vector<double>, 4> stats;
};

// Noise-only captures per SU, all four statistics per capture. purpose
// separates calibration draws from validation draws.
NullStatistics collect_null_statistics(const ExperimentConfig& cfg,
                                       StreamPurpose purpose, int trials) {
  NullStatistics out;
  const auto n_rx = static_cast<std::size_t>(cfg.num_rx);
  const auto n_tr = static_cast<std::size_t>(trials);
  for (auto& v : out.stats) v.resize(n_rx * n_tr);
  SignalConfig noise_cfg = cfg.signal;
  noise_cfg.seed = cfg.master_seed;
  parallel_for(n_rx * n_tr, [&](std::size_t idx) {
    const auto su = static_cast<std::uint32_t>(idx / n_tr);
    const auto trial = static_cast<std::uint32_t>(idx % n_tr);
    const Waveform capture =
        generate_noise(noise_cfg, make_tag(purpose, su), trial);
    CovarianceMatrix c = sample_covariance(capture, cfg.smoothing_L);
    if (cfg.diagonal_loading > 0.0) {
      const double load = cfg.diagonal_loading * c.trace() / c.dim;
      for (int i = 0; i < c.dim; ++i) c.at(i, i) += load;
    }
    const auto gamma = all_statistics(eigenvalues(c));
    for (std::size_t k = 0; k < 4; ++k) out.stats[k][idx] = gamma[k];
  });
  return out;
}

std::size_t stat_index(StatKind kind) {
  for (std::size_t i = 0; i < kAllStatKinds.size(); ++i) {
    if (kAllStatKinds[i] == kind) return i;
  }
  throw InvalidConfigError("unknown statistic kind");
}

// One H1 capture bank: tone -> channel -> per-SU noise; all four
// statistics per (trial, su). Streams are keyed by (trial, su) only, so
// sweeping transmit power reuses the same noise and fading realizations.
struct H1Statistics {
  std::array<std::vector<double>, 4> stats;  // [kind][su * trials + t]
};

H1Statistics collect_h1_statistics(const ExperimentConfig& cfg, int trials) {
  H1Statistics out;
  const auto n_rx = static_cast<std::size_t>(cfg.num_rx);
  const auto n_tr = static_cast<std::size_t>(trials);
  for (auto& v : out.stats) v.resize(n_rx * n_tr);
  const Waveform tone = generate_pu_tone(cfg.signal);
  parallel_for(n_tr, [&](std::size_t t) {
    MultiRxOutput rx = apply_channel(tone, cfg.channel, cfg.num_rx,
                                     static_cast<std::int64_t>(t));
    std::vector<std::uint64_t> ids(n_rx);
    for (std::size_t su = 0; su < n_rx; ++su) {
      ids[su] = (static_cast<std::uint64_t>(t) << 32) | su;
    }
    noise_floor_inject(rx, cfg.signal.noise_power_dbm, cfg.master_seed, ids);
    for (std::size_t su = 0; su < n_rx; ++su) {
      CovarianceMatrix c = sample_covariance(rx.per_rx[su], cfg.smoothing_L);
      if (cfg.diagonal_loading > 0.0) {
        const double load = cfg.diagonal_loading * c.trace() / c.dim;
        for (int i = 0; i < c.dim; ++i) c.at(i, i) += load;
      }
      const auto gamma = all_statistics(eigenvalues(c));
      for (std::size_t k = 0; k < 4; ++k) {
        out.stats[k][su * n_tr + t] = gamma[k];
      }
    }
  });
  return out;
}

json gof_result_to_json(const NamedGofResult& g) {
  json item;
  item["name"] = g.name;
  item["test"] = gof_test_name(g.result.test);
  item["statistic"] = g.result.statistic;
  item["threshold"] = g.result.threshold;
  item["significance"] = g.result.significance;
  item["reject_null"] = g.result.reject_null;
  return item;
}

}  // namespace

void ExperimentConfig::validate(bool for_roc) const {
  signal.validate();
  if (num_rx < 1) throw InvalidConfigError("num_rx must be >= 1");
  if (smoothing_L < 2) throw InvalidConfigError("smoothing_L must be >= 2");
  if (signal.num_samples < 2 * static_cast<std::size_t>(smoothing_L)) {
    throw InvalidConfigError("capture too short for smoothing_L");
  }
  if (trials < 100) {
    throw InvalidConfigError("reported probabilities need trials >= 100");
  }
  if (!(significance > 0.0) || !(significance < 1.0)) {
    throw InvalidConfigError("significance must be in (0,1)");
  }
  if (diagonal_loading < 0.0) {
    throw InvalidConfigError("diagonal_loading must be >= 0");
  }
  if (for_roc && snr_grid_db.empty()) {
    throw InvalidConfigError("ROC sweep needs a nonempty snr grid");
  }
}

std::string ExperimentConfig::to_json() const {
  json doc;
  doc["signal"] = {{"tone_freq_hz", signal.tone_freq_hz},
                   {"sample_rate_hz", signal.sample_rate_hz},
                   {"num_samples", signal.num_samples},
                   {"pu_power_dbm", dbm_to_json(signal.pu_power_dbm)},
                   {"noise_power_dbm", dbm_to_json(signal.noise_power_dbm)},
                   {"seed", signal.seed}};
  doc["channel"] = json::parse(profile_to_json(channel));
  doc["channel"]["seed"] = channel.seed;
  doc["num_rx"] = num_rx;
  doc["smoothing_l"] = smoothing_L;
  doc["statistic"] = stat_kind_name(statistic);
  doc["gof_test"] = gof_test_name(gof_test);
  doc["significance"] = significance;
  doc["trials"] = trials;
  json grid = json::array();
  for (double v : snr_grid_db) grid.push_back(dbm_to_json(v));
  doc["snr_grid_db"] = std::move(grid);
  doc["master_seed"] = master_seed;
  doc["diagonal_loading"] = diagonal_loading;
  return doc.dump(2);
}

CalibrationResult run_null_calibration(const ExperimentConfig& cfg,
                                       std::span<const double> significances) {
  cfg.validate();
  if (significances.empty()) {
    throw InvalidConfigError("calibration needs at least one significance");
  }
  const NullStatistics null_stats =
      collect_null_statistics(cfg, StreamPurpose::CalibrationNoise, cfg.trials);

  CalibrationResult cal;
  cal.statistic = cfg.statistic;
  cal.capture_samples = static_cast<int>(cfg.signal.num_samples);
  cal.smoothing_L = cfg.smoothing_L;
  cal.num_rx = cfg.num_rx;
  cal.trials = cfg.trials;
  cal.master_seed = cfg.master_seed;
  cal.null_samples = null_stats.stats[stat_index(cfg.statistic)];
  std::sort(cal.null_samples.begin(), cal.null_samples.end());
  for (double alpha : significances) {
    cal.thresholds[alpha] = upper_quantile_threshold(cal.null_samples, alpha);
  }
  return cal;
}

CalibrationResult run_null_calibration(const ExperimentConfig& cfg) {
  const double alpha = cfg.significance;
  return run_null_calibration(cfg, std::span<const double>(&alpha, 1));
}

std::array<CalibrationResult, 4> run_null_calibration_all(
    const ExperimentConfig& cfg, std::span<const double> significances) {
  cfg.validate();
  if (significances.empty()) {
    throw InvalidConfigError("calibration needs at least one significance");
  }
  const NullStatistics null_stats =
      collect_null_statistics(cfg, StreamPurpose::CalibrationNoise, cfg.trials);
  std::array<CalibrationResult, 4> out;
  for (std::size_t k = 0; k < kAllStatKinds.size(); ++k) {
    CalibrationResult& cal = out[k];
    cal.statistic = kAllStatKinds[k];
    cal.capture_samples = static_cast<int>(cfg.signal.num_samples);
    cal.smoothing_L = cfg.smoothing_L;
    cal.num_rx = cfg.num_rx;
    cal.trials = cfg.trials;
    cal.master_seed = cfg.master_seed;
    cal.null_samples = null_stats.stats[k];
    std::sort(cal.null_samples.begin(), cal.null_samples.end());
    for (double alpha : significances) {
      cal.thresholds[alpha] = upper_quantile_threshold(cal.null_samples, alpha);
    }
  }
  return out;
}

std::array<double, 4> run_null_validation_all(
    const ExperimentConfig& cfg, std::span<const CalibrationResult> cals,
    int trials) {
  cfg.validate();
  if (cals.size() != 4) {
    throw InvalidConfigError("run_null_validation_all expects four calibrations");
  }
  ExperimentConfig val_cfg = cfg;
  val_cfg.trials = trials;
  const NullStatistics stats = collect_null_statistics(
      val_cfg, StreamPurpose::ValidationNoise, trials);
  std::array<double, 4> pfa{};
  for (std::size_t k = 0; k < kAllStatKinds.size(); ++k) {
    const CalibrationResult& cal = cals[k];
    if (cal.statistic != kAllStatKinds[k] ||
        cal.smoothing_L != cfg.smoothing_L ||
        cal.capture_samples != static_cast<int>(cfg.signal.num_samples)) {
      throw InvalidConfigError(
          "calibration does not match the experiment configuration");
    }
    const double threshold =
        lookup_alpha(cal.thresholds, cfg.significance, "validation");
    std::size_t exceed = 0;
    for (double s : stats.stats[k]) exceed += s > threshold ? 1 : 0;
    pfa[k] = static_cast<double>(exceed) / static_cast<double>(stats.stats[k].size());
  }
  return pfa;
}

double calibration_threshold(const CalibrationResult& cal, double alpha) {
  return lookup_alpha(cal.thresholds, alpha, "calibration");
}

double run_null_validation(const ExperimentConfig& cfg,
                           const CalibrationResult& cal, int trials) {
  cfg.validate();
  if (cal.statistic != cfg.statistic || cal.smoothing_L != cfg.smoothing_L ||
      cal.capture_samples != static_cast<int>(cfg.signal.num_samples)) {
    throw InvalidConfigError(
        "calibration does not match the experiment configuration");
  }
  const double threshold =
      lookup_alpha(cal.thresholds, cfg.significance, "validation");
  ExperimentConfig val_cfg = cfg;
  val_cfg.trials = trials;
  const NullStatistics stats = collect_null_statistics(
      val_cfg, StreamPurpose::ValidationNoise, trials);
  const auto& v = stats.stats[stat_index(cfg.statistic)];
  std::size_t exceed = 0;
  for (double s : v) exceed += s > threshold ? 1 : 0;
  return static_cast<double>(exceed) / static_cast<double>(v.size());
}

DetectionReport run_detection(const ExperimentConfig& cfg,
                              const CalibrationResult& cal) {
  const auto t_start = std::chrono::steady_clock::now();
  cfg.validate();
  if (cal.statistic != cfg.statistic || cal.smoothing_L != cfg.smoothing_L ||
      cal.num_rx != cfg.num_rx ||
      cal.capture_samples != static_cast<int>(cfg.signal.num_samples)) {
    throw InvalidConfigError(
        "calibration does not match the experiment configuration");
  }
  const double threshold =
      lookup_alpha(cal.thresholds, cfg.significance, "detection");

  const auto n_rx = static_cast<std::size_t>(cfg.num_rx);
  const auto n_tr = static_cast<std::size_t>(cfg.trials);
  const std::size_t kind = stat_index(cfg.statistic);

  const H1Statistics h1 = collect_h1_statistics(cfg, cfg.trials);

  // Fresh H0 pass with disjoint streams: the Eq. 4 side of the report.
  const NullStatistics h0 = collect_null_statistics(
      cfg, StreamPurpose::ValidationNoise, cfg.trials);

  DetectionReport report;
  report.config_echo = cfg;
  report.thresholds = cal.thresholds;

  std::size_t h1_exceed = 0;
  for (double s : h1.stats[kind]) h1_exceed += s > threshold ? 1 : 0;
  report.pd_hat =
      static_cast<double>(h1_exceed) / static_cast<double>(n_rx * n_tr);
  std::size_t h0_exceed = 0;
  for (double s : h0.stats[kind]) h0_exceed += s > threshold ? 1 : 0;
  report.pfa_hat =
      static_cast<double>(h0_exceed) / static_cast<double>(n_rx * n_tr);

  // GoF thresholds shared by every SU (same sample size / same null).
  const NullCdf null_ref = NullCdf::empirical(cal.null_samples);
  const GofThresholdTable vs_null_table = calibrate_critical_values(
      cfg.gof_test, static_cast<int>(n_tr), null_ref, /*composite=*/false,
      2000, std::span<const double>(&cfg.significance, 1), cfg.master_seed);

  // Composite-normality threshold: the critical-value table applies to the
  // AD test; other tests (or other significances) are calibrated.
  double normality_threshold = 0.0;
  bool have_table = false;
  if (cfg.gof_test == GofTest::AD) {
    for (const auto& [alpha, value] : ad_critical_table()) {
      if (std::fabs(alpha - cfg.significance) <= 1e-12) {
        normality_threshold = value;
        have_table = true;
        break;
      }
    }
  }
  if (!have_table) {
    const GofThresholdTable t = calibrate_critical_values(
        cfg.gof_test, static_cast<int>(n_tr), NullCdf::normal(0.0, 1.0),
        /*composite=*/true, 2000,
        std::span<const double>(&cfg.significance, 1), cfg.master_seed);
    normality_threshold = t.critical(cfg.significance);
  }

  report.per_su.resize(n_rx);
  for (std::size_t su = 0; su < n_rx; ++su) {
    SuReport& r = report.per_su[su];
    r.su_id = static_cast<int>(su);
    r.statistic_samples.assign(h1.stats[kind].begin() + su * n_tr,
                               h1.stats[kind].begin() + (su + 1) * n_tr);

    std::size_t exceed = 0;
    for (double s : r.statistic_samples) exceed += s > threshold ? 1 : 0;
    r.exceed_fraction =
        static_cast<double>(exceed) / static_cast<double>(n_tr);

    const GofResult vs_null =
        run_gof(cfg.gof_test, r.statistic_samples, null_ref, cfg.significance,
                vs_null_table);
    r.gof_results.push_back({"vs_null_reference", vs_null});

    double mean = 0.0;
    for (double s : r.statistic_samples) mean += s;
    mean /= static_cast<double>(n_tr);
    double ss = 0.0;
    for (double s : r.statistic_samples) ss += (s - mean) * (s - mean);
    const double sd =
        std::sqrt(ss / std::max(1.0, static_cast<double>(n_tr - 1)));
    if (sd > 0.0) {
      // AD runs on the Stephens-modified scale the critical-value table
      // expects; KS/CM use raw statistics with matching MC thresholds.
      const double stat =
          cfg.gof_test == GofTest::AD
              ? ad_normality_statistic(r.statistic_samples)
              : gof_statistic(cfg.gof_test, ecdf(r.statistic_samples),
                              NullCdf::normal(mean, sd));
      const GofResult normality{cfg.gof_test, stat, normality_threshold,
                                cfg.significance,
                                stat > normality_threshold};
      r.gof_results.push_back({"normality", normality});
    }

    r.decision = vs_null.reject_null;
    const HistogramKl kl = kl_from_samples(r.statistic_samples, cal.null_samples);
    r.kl_to_null = kl.kl;
    r.kl_support_mismatch_bins = kl.support_mismatch_bins;
  }

  report.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

std::vector<RocRow> run_roc_sweep(const ExperimentConfig& cfg,
                                  std::span<const StatKind> statistics) {
  cfg.validate(/*for_roc=*/true);
  if (statistics.empty()) throw InvalidConfigError("no statistics requested");

  // Calibrate every requested statistic from one set of null captures.
  const NullStatistics cal_stats =
      collect_null_statistics(cfg, StreamPurpose::CalibrationNoise, cfg.trials);
  std::array<double, 4> thresholds{};
  for (StatKind kind : statistics) {
    const std::size_t k = stat_index(kind);
    std::vector<double> sorted = cal_stats.stats[k];
    std::sort(sorted.begin(), sorted.end());
    thresholds[k] = upper_quantile_threshold(sorted, cfg.significance);
  }

  // Fresh H0 pass for the reported false-alarm rates.
  const NullStatistics h0 = collect_null_statistics(
      cfg, StreamPurpose::ValidationNoise, cfg.trials);
  std::array<double, 4> pfa{};
  for (StatKind kind : statistics) {
    const std::size_t k = stat_index(kind);
    std::size_t exceed = 0;
    for (double s : h0.stats[k]) exceed += s > thresholds[k] ? 1 : 0;
    pfa[k] = static_cast<double>(exceed) / static_cast<double>(h0.stats[k].size());
  }

  std::vector<double> grid(cfg.snr_grid_db.begin(), cfg.snr_grid_db.end());
  std::sort(grid.begin(), grid.end());

  std::vector<RocRow> rows;
  for (double snr : grid) {
    ExperimentConfig point = cfg;
    point.signal.pu_power_dbm = cfg.signal.noise_power_dbm + snr;
    const H1Statistics h1 = collect_h1_statistics(point, cfg.trials);
    for (StatKind kind : statistics) {
      const std::size_t k = stat_index(kind);
      std::size_t exceed = 0;
      for (double s : h1.stats[k]) exceed += s > thresholds[k] ? 1 : 0;
      const double pd =
          static_cast<double>(exceed) / static_cast<double>(h1.stats[k].size());
      rows.push_back({snr, kind, pfa[k], pd});
    }
  }
  return rows;
}

std::vector<RocRow> run_roc_sweep(const ExperimentConfig& cfg) {
  return run_roc_sweep(cfg, kAllStatKinds);
}

std::string roc_to_csv(std::span<const RocRow> rows) {
  std::string out = "snr_db,statistic,pfa,pd\n";
  for (const auto& row : rows) {
    out += format_g9(row.snr_db);
    out += ',';
    out += stat_kind_name(row.statistic);
    out += ',';
    out += format_g9(row.pfa);
    out += ',';
    out += format_g9(row.pd);
    out += '\n';
  }
  return out;
}

std::string DetectionReport::to_json() const {
  json doc;
  doc["format_version"] = 1;
  doc["config"] = json::parse(config_echo.to_json());
  json thr = json::object();
  for (const auto& [alpha, value] : thresholds) {
    thr[format_g9(alpha)] = value;
  }
  doc["thresholds"] = std::move(thr);
  doc["pfa_hat"] = pfa_hat;
  doc["pd_hat"] = pd_hat;
  json sus = json::array();
  for (const auto& su : per_su) {
    json s;
    s["su_id"] = su.su_id;
    s["decision"] = su.decision;
    s["exceed_fraction"] = su.exceed_fraction;
    s["kl_to_null"] = su.kl_to_null;
    s["kl_support_mismatch_bins"] = su.kl_support_mismatch_bins;
    json gofs = json::array();
    for (const auto& g : su.gof_results) gofs.push_back(gof_result_to_json(g));
    s["gof_results"] = std::move(gofs);
    s["statistic_samples"] = su.statistic_samples;
    sus.push_back(std::move(s));
  }
  doc["per_su"] = std::move(sus);
  return doc.dump(2);
}

std::string calibration_to_json(const CalibrationResult& cal) {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = "eigen_thresholds";
  doc["statistic"] = stat_kind_name(cal.statistic);
  doc["n"] = cal.capture_samples;
  doc["smoothing_l"] = cal.smoothing_L;
  doc["num_rx"] = cal.num_rx;
  doc["trials"] = cal.trials;
  doc["master_seed"] = cal.master_seed;
  json thr = json::object();
  for (const auto& [alpha, value] : cal.thresholds) {
    thr[format_g9(alpha)] = value;
  }
  doc["alphas"] = std::move(thr);
  doc["null_samples"] = cal.null_samples;
  return doc.dump(2);
}

CalibrationResult calibration_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidConfigError(std::string("calibration JSON: ") + e.what());
  }
  if (doc.value("format_version", 0) != 1 ||
      doc.value("kind", "") != "eigen_thresholds") {
    throw InvalidConfigError("not an eigen-thresholds calibration file");
  }
  CalibrationResult cal;
  cal.statistic = stat_kind_from_name(doc.at("statistic").get<std::string>());
  cal.capture_samples = doc.at("n").get<int>();
  cal.smoothing_L = doc.at("smoothing_l").get<int>();
  cal.num_rx = doc.at("num_rx").get<int>();
  cal.trials = doc.at("trials").get<int>();
  cal.master_seed = doc.at("master_seed").get<std::uint64_t>();
  for (const auto& [key, value] : doc.at("alphas").items()) {
    cal.thresholds[std::stod(key)] = value.get<double>();
  }
  cal.null_samples = doc.at("null_samples").get<std::vector<double>>();
  if (!std::is_sorted(cal.null_samples.begin(), cal.null_samples.end())) {
    std::sort(cal.null_samples.begin(), cal.null_samples.end());
  }
  return cal;
}

}  // namespace specsense
