// Command-line front end: code generation, BER sweeps, uncoded detection
// sweeps, density-evolution thresholds, and SNR conversions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twodos/alist.hpp"
#include "twodos/experiment.hpp"

namespace {

using twodos::CodeDegrees;
using twodos::ExperimentConfig;

ExperimentConfig base_config(const std::string& config_path,
                             const std::string& mode) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw std::runtime_error("cannot read config " + config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    config = twodos::config_from_json(buf.str());
  }
  config.mode = mode;
  return config;
}

CodeDegrees parse_code_degrees(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("--code expects \"dv,dc\" (dc may be inf)");
  }
  CodeDegrees code;
  code.dv = std::stoi(text.substr(0, comma));
  const std::string dc = text.substr(comma + 1);
  code.dc = (dc == "inf" || dc == "INF") ? twodos::kUncodedDc : std::stoi(dc);
  return code;
}

void expand_range(const std::vector<double>& range, std::vector<double>& list) {
  if (range.empty()) return;
  if (range.size() != 3 || range[2] <= 0.0) {
    throw CLI::ValidationError("--snr-range expects LO HI STEP with STEP > 0");
  }
  for (double v = range[0]; v <= range[1] + 1e-12; v += range[2]) {
    list.push_back(v);
  }
}

void write_sweep_outputs(const std::vector<twodos::BerRecord>& records,
                         const std::vector<twodos::TraceRecord>& traces,
                         const ExperimentConfig& config) {
  if (config.output_path.empty()) {
    twodos::write_records_csv(std::cout, records);
  } else {
    twodos::emit_results(records, config.output_path, config.format, config);
    std::fprintf(stderr, "wrote %zu records to %s\n", records.size(),
                 twodos::resolve_output_path(config.output_path).c_str());
  }
  if (config.trace && !traces.empty()) {
    const std::string path = twodos::resolve_output_path(
        (config.output_path.empty() ? std::string("sweep") : config.output_path) +
        ".trace.jsonl");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << twodos::trace_records_to_jsonl(traces);
    std::fprintf(stderr, "wrote trace to %s\n", path.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TWODOS joint equalization and decoding toolkit"};
  app.require_subcommand(1);

  // Options shared by several subcommands.
  std::string config_path, table_path, out_path, format = "csv";
  std::string alist_path;
  int dv = 3, dc = 30, n = 10000;
  std::uint64_t code_seed = 1, master_seed = 1;
  int rows = 0, cols = 0, iters = 5, threads = 0;
  long min_errors = 100, max_frames = 10000;
  std::vector<double> snr_list, snr_range, sigma2_list;
  bool trace = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file; flags override");
    cmd->add_option("--table", table_path, "signal level table file");
    cmd->add_option("--out", out_path, "output path (stdout if omitted)");
    cmd->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    cmd->add_option("--seed", master_seed, "master seed");
  };
  auto add_sweep = [&](CLI::App* cmd) {
    cmd->add_option("--snr", snr_list, "SNR points in dB");
    cmd->add_option("--snr-range", snr_range,
                    "SNR grid: LO HI STEP (dB)")->expected(3);
    cmd->add_option("--sigma2", sigma2_list, "noise variance points");
    cmd->add_option("--iters", iters, "decoder iterations");
    cmd->add_option("--min-errors", min_errors,
                    "stop a point after this many bit errors");
    cmd->add_option("--max-frames", max_frames, "frame cap per point");
    cmd->add_flag("--trace", trace, "emit per-iteration trace records");
  };

  // gen-code
  CLI::App* gen = app.add_subcommand("gen-code",
                                     "generate a regular parity-check matrix");
  gen->add_option("--dv", dv, "column weight")->required();
  gen->add_option("--dc", dc, "row weight")->required();
  gen->add_option("--n", n, "block length")->required();
  gen->add_option("--code-seed", code_seed, "construction seed");
  gen->add_option("--out", out_path, "alist output path")->required();
  std::string meta_path;
  gen->add_option("--meta", meta_path, "metadata JSON path (default <out>.json)");

  // ber
  CLI::App* ber = app.add_subcommand("ber", "coded BER sweep");
  ber->add_option("--alist", alist_path, "parity-check matrix to load");
  ber->add_option("--dv", dv, "column weight (generated code)");
  ber->add_option("--dc", dc, "row weight");
  ber->add_option("--n", n, "block length");
  ber->add_option("--code-seed", code_seed, "construction seed");
  ber->add_option("--rows", rows, "page rows (default: near-square)");
  ber->add_option("--cols", cols, "page cols");
  add_sweep(ber);
  add_common(ber);

  // detect
  CLI::App* det = app.add_subcommand("detect", "uncoded detection sweep");
  det->add_option("--rows", rows, "page rows")->default_val(100);
  det->add_option("--cols", cols, "page cols")->default_val(100);
  add_sweep(det);
  add_common(det);

  // threshold
  CLI::App* thr = app.add_subcommand(
      "threshold", "density-evolution noise tolerance thresholds");
  std::vector<std::string> code_specs;
  double lo = 0.001, hi = 0.1, tol = 2e-4;
  thr->add_option("--code", code_specs,
                  "code degrees dv,dc (dc=inf for uncoded); repeatable")
      ->required();
  thr->add_option("--lo", lo, "bracket low end (must converge)");
  thr->add_option("--hi", hi, "bracket high end (must fail)");
  thr->add_option("--tol", tol, "bracket width tolerance");
  int mc_page = 256, de_iters = 200, mc_chunks = 32;
  long mc_samples = 1000000;
  double target_pe = 1e-6;
  std::uint64_t mc_seed = 1;
  thr->add_option("--mc-page", mc_page, "Monte Carlo page side length");
  thr->add_option("--mc-samples", mc_samples, "minimum histogram samples");
  thr->add_option("--mc-seed", mc_seed, "Monte Carlo seed");
  thr->add_option("--mc-chunks", mc_chunks, "fixed Monte Carlo chunk count");
  thr->add_option("--de-max-iters", de_iters, "evolution iteration cap");
  thr->add_option("--target-pe", target_pe, "convergence target");
  add_common(thr);

  // snr
  CLI::App* snr = app.add_subcommand("snr", "convert sigma2 <-> SNR dB");
  double snr_sigma2 = 0.0, snr_db_in = 0.0, rate = 1.0;
  CLI::Option* opt_s2 = snr->add_option("--sigma2", snr_sigma2,
                                        "noise variance to convert");
  CLI::Option* opt_db = snr->add_option("--db", snr_db_in, "SNR dB to convert");
  snr->add_option("--rate", rate, "code rate in the SNR definition");
  snr->add_option("--table", table_path, "signal level table file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      ExperimentConfig config = base_config(config_path, "gen-code");
      config.code = twodos::CodeParams{dv, dc, n, code_seed};
      config.validate();
      const std::string resolved = twodos::resolve_output_path(out_path);
      const std::string meta =
          meta_path.empty() ? resolved + ".json"
                            : twodos::resolve_output_path(meta_path);
      twodos::write_code_files(*config.code, resolved, meta);
      std::fprintf(stderr, "wrote %s and %s\n", resolved.c_str(), meta.c_str());
      return 0;
    }

    if (ber->parsed() || det->parsed()) {
      ExperimentConfig config =
          base_config(config_path, ber->parsed() ? "ber" : "detect");
      CLI::App* cmd = ber->parsed() ? ber : det;
      auto given = [&](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
      };
      if (given("--alist")) config.alist_path = alist_path;
      if (given("--dv") || given("--dc") || given("--n") ||
          given("--code-seed") ||
          (ber->parsed() && config.alist_path.empty() && !config.code)) {
        config.code = twodos::CodeParams{dv, dc, n, code_seed};
      }
      if (given("--rows")) config.rows = rows;
      if (given("--cols")) config.cols = cols;
      if (det->parsed()) {
        if (config.rows == 0) config.rows = rows;
        if (config.cols == 0) config.cols = cols;
      }
      if (!snr_list.empty() || !snr_range.empty()) {
        config.snr_db_list = snr_list;
        expand_range(snr_range, config.snr_db_list);
        config.sigma2_list.clear();
      }
      if (!sigma2_list.empty()) {
        config.sigma2_list = sigma2_list;
        config.snr_db_list.clear();
      }
      if (given("--iters")) config.decoder_iters = iters;
      if (given("--min-errors")) config.stop.min_bit_errors = min_errors;
      if (given("--max-frames")) config.stop.max_frames = max_frames;
      if (given("--seed")) config.master_seed = master_seed;
      if (given("--threads")) config.threads = threads;
      if (given("--trace")) config.trace = trace;
      if (given("--table")) config.table_path = table_path;
      if (given("--out")) config.output_path = out_path;
      if (given("--format")) config.format = format;
      config.validate();

      std::vector<twodos::TraceRecord> traces;
      const std::vector<twodos::BerRecord> records =
          ber->parsed() ? twodos::run_ber_sweep(config, &traces)
                        : twodos::run_detect_sweep(config, &traces);
      write_sweep_outputs(records, traces, config);
      return 0;
    }

    if (thr->parsed()) {
      ExperimentConfig config = base_config(config_path, "threshold");
      config.de_codes.clear();
      for (const std::string& spec : code_specs) {
        config.de_codes.push_back(parse_code_degrees(spec));
      }
      if (thr->count("--lo")) config.de_bracket_lo = lo;
      if (thr->count("--hi")) config.de_bracket_hi = hi;
      if (thr->count("--tol")) config.de_tolerance = tol;
      if (thr->count("--mc-page")) {
        config.de.mc.page_rows = mc_page;
        config.de.mc.page_cols = mc_page;
      }
      if (thr->count("--mc-samples")) config.de.mc.min_samples = mc_samples;
      if (thr->count("--mc-seed")) config.de.mc.seed = mc_seed;
      if (thr->count("--mc-chunks")) config.de.mc.chunks = mc_chunks;
      if (thr->count("--de-max-iters")) config.de.max_iters = de_iters;
      if (thr->count("--target-pe")) config.de.target_pe = target_pe;
      if (thr->count("--threads")) config.de.mc.threads = threads;
      if (thr->count("--table")) config.table_path = table_path;
      if (thr->count("--out")) config.output_path = out_path;
      config.validate();

      const twodos::ThresholdReport report = twodos::run_threshold(config);
      const std::string text = twodos::threshold_report_to_json(report);
      if (config.output_path.empty()) {
        std::cout << text << '\n';
      } else {
        const std::string resolved =
            twodos::resolve_output_path(config.output_path);
        std::ofstream out(resolved);
        if (!out) throw std::runtime_error("cannot write " + resolved);
        out << text << '\n';
        std::fprintf(stderr, "wrote %s\n", resolved.c_str());
      }
      bool all_ok = true;
      for (const auto& entry : report.entries) {
        if (!entry.ok) {
          std::fprintf(stderr, "threshold (%d,%s) failed: %s\n", entry.code.dv,
                       entry.code.uncoded()
                           ? "inf"
                           : std::to_string(entry.code.dc).c_str(),
                       entry.error.c_str());
          all_ok = false;
        }
      }
      return all_ok ? 0 : 1;
    }

    if (snr->parsed()) {
      const twodos::SignalLevelTable table = twodos::load_table(table_path);
      if ((*opt_s2 && *opt_db) || (!*opt_s2 && !*opt_db)) {
        std::fprintf(stderr, "snr: give exactly one of --sigma2 and --db\n");
        return 2;
      }
      if (*opt_s2) {
        std::printf("sigma2=%.10g rate=%.10g snr_db=%.6f\n", snr_sigma2, rate,
                    twodos::snr_db(snr_sigma2, rate, table));
      } else {
        std::printf("snr_db=%.6f rate=%.10g sigma2=%.10g\n", snr_db_in, rate,
                    twodos::sigma2_from_snr_db(snr_db_in, rate, table));
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
