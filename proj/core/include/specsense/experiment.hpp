#ifndef SPECSENSE_EXPERIMENT_HPP_
#define SPECSENSE_EXPERIMENT_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "specsense/channel.hpp"
#include "specsense/detectors.hpp"
#include "specsense/gof.hpp"
#include "specsense/signal.hpp"

namespace specsense {

struct ExperimentConfig {
  SignalConfig signal;                 // num_samples is the capture length N
  ChannelProfile channel = epa_profile();
  int num_rx = 4;
  int smoothing_L = 8;
  StatKind statistic = StatKind::MME;
  GofTest gof_test = GofTest::AD;
  double significance = 0.05;
  int trials = 1000;
  std::vector<double> snr_grid_db;
  std::uint64_t master_seed = 0;
  // Optional diagonal loading eps*trace/L applied before eigenvalues;
  // 0 keeps the null distribution unbiased.
  double diagonal_loading = 0.0;

  void validate(bool for_roc = false) const;
  std::string to_json() const;
};

// Empirical null of the eigenvalue statistic: `trials` noise-only captures
// per SU, one statistic per capture, pooled across SUs (the per-SU noise
// is i.i.d.). Thresholds are conservative upper quantiles of the pool.
struct CalibrationResult {
  StatKind statistic;
  int capture_samples = 0;
  int smoothing_L = 0;
  int num_rx = 0;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<double> null_samples;      // sorted ascending, size trials*num_rx
  std::map<double, double> thresholds;   // alpha -> statistic threshold
};

CalibrationResult run_null_calibration(const ExperimentConfig& cfg,
                                       std::span<const double> significances);
CalibrationResult run_null_calibration(const ExperimentConfig& cfg);

// All four statistics calibrated from one set of null captures (they are
// different functionals of the same eigenvalue spectra). Entry k matches
// kAllStatKinds[k]; each entry equals the single-statistic calibration.
std::array<CalibrationResult, 4> run_null_calibration_all(
    const ExperimentConfig& cfg, std::span<const double> significances);

// Fresh noise-only captures (streams disjoint from calibration) scored
// against the calibrated threshold: the split-sample false-alarm estimate.
double run_null_validation(const ExperimentConfig& cfg,
                           const CalibrationResult& cal, int trials);
std::array<double, 4> run_null_validation_all(
    const ExperimentConfig& cfg, std::span<const CalibrationResult> cals,
    int trials);

// Threshold lookup tolerant of significance round-tripping through text.
double calibration_threshold(const CalibrationResult& cal, double alpha);

struct NamedGofResult {
  std::string name;  // "vs_null_reference" or "normality"
  GofResult result;
};

struct SuReport {
  int su_id = 0;
  std::vector<double> statistic_samples;  // one per trial, H1 captures
  std::vector<NamedGofResult> gof_results;
  bool decision = false;  // PU present, from the vs-null-reference test
  double kl_to_null = 0.0;
  int kl_support_mismatch_bins = 0;
  double exceed_fraction = 0.0;  // per-capture threshold exceedances
};

struct DetectionReport {
  std::vector<SuReport> per_su;
  double pfa_hat = 0.0;
  double pd_hat = 0.0;
  std::map<double, double> thresholds;
  ExperimentConfig config_echo;
  double runtime_s = 0.0;  // informational; excluded from the JSON form

  // Deterministic bytes for a given config and seed, any thread count.
  std::string to_json() const;
};

DetectionReport run_detection(const ExperimentConfig& cfg,
                              const CalibrationResult& cal);

struct RocRow {
  double snr_db;
  StatKind statistic;
  double pfa;
  double pd;
};

// Calibrates once (all four statistics share the null captures), then runs
// detection per SNR point. Noise and channel streams are shared across SNR
// points, so the sweep sees a common set of realizations.
std::vector<RocRow> run_roc_sweep(const ExperimentConfig& cfg,
                                  std::span<const StatKind> statistics);
std::vector<RocRow> run_roc_sweep(const ExperimentConfig& cfg);

// CSV rows: snr_db,statistic,pfa,pd sorted by SNR then statistic order.
std::string roc_to_csv(std::span<const RocRow> rows);

std::string calibration_to_json(const CalibrationResult& cal);
CalibrationResult calibration_from_json(const std::string& text);

}  // namespace specsense

#endif  // SPECSENSE_EXPERIMENT_HPP_
