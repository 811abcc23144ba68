#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twodos/density_evolution.hpp"
#include "twodos/ldpc.hpp"

namespace twodos {

// Per-point early-stop rule: a point finishes when it has collected
// min_bit_errors (checked at fixed frame-chunk boundaries, so the outcome
// does not depend on the worker count) or has run max_frames.
struct StopRule {
  long min_bit_errors = 100;
  long max_frames = 10'000;
  int frame_chunk = 64;
};

struct BerRecord {
  double snr_db = 0.0;
  double sigma2 = 0.0;
  int iters_cap = 0;
  long frames_run = 0;
  long bit_errors = 0;
  long bits_counted = 0;
  double ber = 0.0;
  long frame_errors = 0;
  double fer = 0.0;
  double seconds = 0.0;
  bool early_stop = false;

  bool operator==(const BerRecord&) const = default;
};

struct ExperimentConfig {
  std::string mode = "ber";  // ber | detect | threshold | gen-code

  // Code source for coded runs: load an alist, or generate from params.
  std::optional<CodeParams> code;
  std::string alist_path;

  // Page dimensions; 0 means the most-square factorization of n. Detect
  // mode requires them explicitly.
  int rows = 0;
  int cols = 0;

  // Exactly one of these drives a sweep. SNR points are converted through
  // the rate-bearing SNR definition (code rate for coded runs, 1 for
  // uncoded); sigma2 points are used as given.
  std::vector<double> snr_db_list;
  std::vector<double> sigma2_list;

  int decoder_iters = 5;
  double llr_clamp = 30.0;
  StopRule stop;
  std::uint64_t master_seed = 1;
  int threads = 0;
  bool trace = false;

  std::string table_path;  // empty = nominal levels
  std::string output_path;
  std::string format = "csv";  // csv | json

  // Threshold mode.
  std::vector<CodeDegrees> de_codes;
  double de_bracket_lo = 0.001;
  double de_bracket_hi = 0.1;
  double de_tolerance = 2e-4;
  DeParams de;

  void validate() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);

// Per-iteration trace of the first frame of each sweep point, collected
// when config.trace is set.
struct TraceRecord {
  std::size_t point = 0;
  int iteration = 0;
  int syndrome_weight = 0;
  long bit_errors = 0;  // against the transmitted bits
  std::vector<long> posterior_hist;
};

// Monte Carlo BER sweeps. Deterministic in (config, master_seed) for any
// thread count.
std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& config,
                                     std::vector<TraceRecord>* traces = nullptr);
std::vector<BerRecord> run_detect_sweep(const ExperimentConfig& config,
                                        std::vector<TraceRecord>* traces = nullptr);

std::string trace_records_to_jsonl(const std::vector<TraceRecord>& traces);

struct ThresholdReportEntry {
  CodeDegrees code;
  bool ok = false;
  std::string error;
  ThresholdResult result;
  double snr_db_rate1 = 0.0;  // SNR of sigma2_star with the rate left out
};

struct ThresholdReport {
  ExperimentConfig config;
  std::vector<ThresholdReportEntry> entries;
};

ThresholdReport run_threshold(const ExperimentConfig& config);
std::string threshold_report_to_json(const ThresholdReport& report);

// Generates the parity-check matrix and writes the alist plus a JSON
// metadata sidecar (degrees, seed, rank, true rate).
ParityCheckMatrix write_code_files(const CodeParams& params,
                                   const std::string& alist_path,
                                   const std::string& meta_path);

// CSV columns, fixed: snr_db, sigma2, iters, frames, bit_errors, bits, ber,
// fer, seconds, early_stop.
void write_records_csv(std::ostream& out,
                       const std::vector<BerRecord>& records);
std::string records_to_json(const std::vector<BerRecord>& records,
                            const ExperimentConfig* config_echo);
std::vector<BerRecord> records_from_json(const std::string& text);

// Writes records as CSV or JSON. Relative paths are placed under
// $TWODOS_OUTPUT_DIR when it is set; CSV output gets the effective config as
// a .meta.json sidecar, JSON output embeds it.
void emit_results(const std::vector<BerRecord>& records,
                  const std::string& path, const std::string& format,
                  const ExperimentConfig& config);

std::string resolve_output_path(const std::string& path);

// Table from the given file, or the nominal levels when path is empty.
SignalLevelTable load_table(const std::string& path);

}  // namespace twodos
