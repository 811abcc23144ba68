#include "twodos/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "twodos/alist.hpp"
#include "twodos/decoder.hpp"
#include "twodos/full_graph.hpp"
#include "twodos/page_mapping.hpp"
#include "twodos/parallel.hpp"

namespace twodos {

using nlohmann::json;

void ExperimentConfig::validate() const {
  if (mode != "ber" && mode != "detect" && mode != "threshold" &&
      mode != "gen-code") {
    throw std::invalid_argument("config: unknown mode '" + mode + "'");
  }
  if (mode == "ber" || mode == "detect") {
    const bool has_snr = !snr_db_list.empty();
    const bool has_sigma2 = !sigma2_list.empty();
    if (has_snr == has_sigma2) {
      throw std::invalid_argument(
          "config: exactly one of the SNR list and the sigma2 list must be "
          "given");
    }
    for (double s2 : sigma2_list) {
      if (!(s2 > 0.0)) {
        throw std::invalid_argument("config: sigma2 points must be positive");
      }
    }
    if (decoder_iters < 1) {
      throw std::invalid_argument("config: decoder_iters must be >= 1");
    }
    if (stop.max_frames < 1 || stop.min_bit_errors < 1 ||
        stop.frame_chunk < 1) {
      throw std::invalid_argument("config: bad stop rule");
    }
  }
  if (mode == "ber" || mode == "gen-code") {
    if (!code.has_value() && alist_path.empty()) {
      throw std::invalid_argument(
          "config: coded runs need code parameters or an alist path");
    }
    if (code.has_value()) code->validate();
  }
  if (mode == "detect") {
    if (rows < 1 || cols < 1) {
      throw std::invalid_argument(
          "config: detect mode needs explicit page dimensions");
    }
  }
  if (mode == "threshold") {
    if (de_codes.empty()) {
      throw std::invalid_argument("config: threshold mode needs codes");
    }
    if (!(de_bracket_lo > 0.0) || !(de_bracket_hi > de_bracket_lo)) {
      throw std::invalid_argument("config: bad threshold bracket");
    }
    de.validate();
  }
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("config: format must be csv or json");
  }
}

// ---------------------------------------------------------------------------
// JSON serialization.

namespace {

json stop_to_json(const StopRule& s) {
  return json{{"min_bit_errors", s.min_bit_errors},
              {"max_frames", s.max_frames},
              {"frame_chunk", s.frame_chunk}};
}

json de_to_json(const DeParams& p) {
  return json{{"grid", {{"l_max", p.grid.l_max}, {"bins", p.grid.bins}}},
              {"target_pe", p.target_pe},
              {"max_iters", p.max_iters},
              {"stagnation_window", p.stagnation_window},
              {"stagnation_rel_change", p.stagnation_rel_change},
              {"stagnation_pe_floor", p.stagnation_pe_floor},
              {"mc",
               {{"page_rows", p.mc.page_rows},
                {"page_cols", p.mc.page_cols},
                {"min_samples", p.mc.min_samples},
                {"max_pages", p.mc.max_pages},
                {"chunks", p.mc.chunks},
                {"threads", p.mc.threads},
                {"seed", p.mc.seed}}}};
}

json code_degrees_to_json(const CodeDegrees& c) {
  json j{{"dv", c.dv}};
  if (c.uncoded()) {
    j["dc"] = "inf";
  } else {
    j["dc"] = c.dc;
  }
  return j;
}

CodeDegrees code_degrees_from_json(const json& j) {
  CodeDegrees c;
  c.dv = j.at("dv").get<int>();
  if (j.at("dc").is_string()) {
    const std::string s = j.at("dc").get<std::string>();
    if (s != "inf") throw std::invalid_argument("config: bad dc value " + s);
    c.dc = kUncodedDc;
  } else {
    c.dc = j.at("dc").get<int>();
  }
  return c;
}

json config_to_json_obj(const ExperimentConfig& c) {
  json j;
  j["mode"] = c.mode;
  if (c.code.has_value()) {
    j["code"] = {{"dv", c.code->dv},
                 {"dc", c.code->dc},
                 {"n", c.code->n},
                 {"seed", c.code->seed}};
  }
  if (!c.alist_path.empty()) j["alist"] = c.alist_path;
  if (c.rows > 0) j["rows"] = c.rows;
  if (c.cols > 0) j["cols"] = c.cols;
  if (!c.snr_db_list.empty()) j["snr_db"] = c.snr_db_list;
  if (!c.sigma2_list.empty()) j["sigma2"] = c.sigma2_list;
  j["decoder_iters"] = c.decoder_iters;
  j["llr_clamp"] = c.llr_clamp;
  j["stop"] = stop_to_json(c.stop);
  j["master_seed"] = c.master_seed;
  j["threads"] = c.threads;
  j["trace"] = c.trace;
  if (!c.table_path.empty()) j["table"] = c.table_path;
  if (!c.output_path.empty()) j["out"] = c.output_path;
  j["format"] = c.format;
  if (c.mode == "threshold") {
    json codes = json::array();
    for (const auto& code : c.de_codes) codes.push_back(code_degrees_to_json(code));
    j["codes"] = codes;
    j["bracket_lo"] = c.de_bracket_lo;
    j["bracket_hi"] = c.de_bracket_hi;
    j["bracket_tolerance"] = c.de_tolerance;
    j["de"] = de_to_json(c.de);
  }
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_to_json_obj(config).dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig c;
  c.mode = j.value("mode", c.mode);
  if (j.contains("code")) {
    CodeParams p;
    p.dv = j["code"].value("dv", p.dv);
    p.dc = j["code"].value("dc", p.dc);
    p.n = j["code"].value("n", p.n);
    p.seed = j["code"].value("seed", p.seed);
    c.code = p;
  }
  c.alist_path = j.value("alist", c.alist_path);
  c.rows = j.value("rows", c.rows);
  c.cols = j.value("cols", c.cols);
  if (j.contains("snr_db")) {
    c.snr_db_list = j["snr_db"].get<std::vector<double>>();
  }
  if (j.contains("sigma2")) {
    c.sigma2_list = j["sigma2"].get<std::vector<double>>();
  }
  c.decoder_iters = j.value("decoder_iters", c.decoder_iters);
  c.llr_clamp = j.value("llr_clamp", c.llr_clamp);
  if (j.contains("stop")) {
    c.stop.min_bit_errors = j["stop"].value("min_bit_errors",
                                            c.stop.min_bit_errors);
    c.stop.max_frames = j["stop"].value("max_frames", c.stop.max_frames);
    c.stop.frame_chunk = j["stop"].value("frame_chunk", c.stop.frame_chunk);
  }
  c.master_seed = j.value("master_seed", c.master_seed);
  c.threads = j.value("threads", c.threads);
  c.trace = j.value("trace", c.trace);
  c.table_path = j.value("table", c.table_path);
  c.output_path = j.value("out", c.output_path);
  c.format = j.value("format", c.format);
  if (j.contains("codes")) {
    for (const auto& code : j["codes"]) {
      c.de_codes.push_back(code_degrees_from_json(code));
    }
  }
  c.de_bracket_lo = j.value("bracket_lo", c.de_bracket_lo);
  c.de_bracket_hi = j.value("bracket_hi", c.de_bracket_hi);
  c.de_tolerance = j.value("bracket_tolerance", c.de_tolerance);
  if (j.contains("de")) {
    const json& d = j["de"];
    if (d.contains("grid")) {
      c.de.grid.l_max = d["grid"].value("l_max", c.de.grid.l_max);
      c.de.grid.bins = d["grid"].value("bins", c.de.grid.bins);
    }
    c.de.target_pe = d.value("target_pe", c.de.target_pe);
    c.de.max_iters = d.value("max_iters", c.de.max_iters);
    c.de.stagnation_window =
        d.value("stagnation_window", c.de.stagnation_window);
    c.de.stagnation_rel_change =
        d.value("stagnation_rel_change", c.de.stagnation_rel_change);
    c.de.stagnation_pe_floor =
        d.value("stagnation_pe_floor", c.de.stagnation_pe_floor);
    if (d.contains("mc")) {
      const json& m = d["mc"];
      c.de.mc.page_rows = m.value("page_rows", c.de.mc.page_rows);
      c.de.mc.page_cols = m.value("page_cols", c.de.mc.page_cols);
      c.de.mc.min_samples = m.value("min_samples", c.de.mc.min_samples);
      c.de.mc.max_pages = m.value("max_pages", c.de.mc.max_pages);
      c.de.mc.chunks = m.value("chunks", c.de.mc.chunks);
      c.de.mc.threads = m.value("threads", c.de.mc.threads);
      c.de.mc.seed = m.value("seed", c.de.mc.seed);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Sweep machinery.

SignalLevelTable load_table(const std::string& path) {
  if (path.empty()) return SignalLevelTable::nominal();
  return SignalLevelTable::from_file(path);
}

namespace {

struct FrameOutcome {
  long bit_errors = 0;
  bool frame_error = false;
};

struct PointCounters {
  long frames = 0;
  long bit_errors = 0;
  long frame_errors = 0;
  bool early_stop = false;
};

// Frames are evaluated in fixed-size chunks and accumulated in frame order;
// the early-stop decision looks only at whole chunks, so worker count does
// not change any outcome.
PointCounters run_point(const StopRule& stop, int threads,
                        const std::function<FrameOutcome(long)>& frame_fn) {
  PointCounters counters;
  std::vector<FrameOutcome> chunk(static_cast<std::size_t>(stop.frame_chunk));
  for (long start = 0; start < stop.max_frames;
       start += stop.frame_chunk) {
    const long end = std::min<long>(stop.max_frames,
                                    start + stop.frame_chunk);
    const int count = static_cast<int>(end - start);
    parallel_for_chunks(count, threads, [&](int t) {
      chunk[static_cast<std::size_t>(t)] = frame_fn(start + t);
    });
    for (int t = 0; t < count; ++t) {
      counters.bit_errors += chunk[t].bit_errors;
      counters.frame_errors += chunk[t].frame_error ? 1 : 0;
    }
    counters.frames = end;
    if (counters.bit_errors >= stop.min_bit_errors && end < stop.max_frames) {
      counters.early_stop = true;
      break;
    }
  }
  return counters;
}

ParityCheckMatrix obtain_code(const ExperimentConfig& config) {
  if (!config.alist_path.empty()) return read_alist(config.alist_path);
  return generate_regular(*config.code);
}

PageDims sweep_dims(const ExperimentConfig& config, int n) {
  if (config.rows > 0 && config.cols > 0) {
    return PageDims{config.rows, config.cols};
  }
  const auto [r, c] = PageMapping::near_square_dims(n);
  return PageDims{r, c};
}

struct SweepPoint {
  double snr_db = 0.0;
  double sigma2 = 0.0;
};

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config,
                                     double rate,
                                     const SignalLevelTable& table) {
  std::vector<SweepPoint> points;
  if (!config.snr_db_list.empty()) {
    for (double snr : config.snr_db_list) {
      points.push_back({snr, sigma2_from_snr_db(snr, rate, table)});
    }
  } else {
    for (double s2 : config.sigma2_list) {
      points.push_back({snr_db(s2, rate, table), s2});
    }
  }
  return points;
}

}  // namespace

namespace {

// Traces are harvested from frame 0 of each point; only that frame writes.
void harvest_trace(const DecodeResult& res, std::size_t point,
                   const std::vector<std::uint8_t>& truth,
                   const std::vector<int>& truth_to_var,
                   std::vector<TraceRecord>* traces) {
  for (const IterationTrace& it : res.trace) {
    TraceRecord rec;
    rec.point = point;
    rec.iteration = it.iteration;
    rec.syndrome_weight = it.syndrome_weight;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      const int v = truth_to_var.empty() ? static_cast<int>(i)
                                         : truth_to_var[i];
      if (it.decisions[static_cast<std::size_t>(v)] != truth[i]) {
        ++rec.bit_errors;
      }
    }
    rec.posterior_hist = it.posterior_hist;
    traces->push_back(std::move(rec));
  }
}

}  // namespace

std::string trace_records_to_jsonl(const std::vector<TraceRecord>& traces) {
  std::string out;
  for (const TraceRecord& t : traces) {
    json j{{"point", t.point},
           {"iteration", t.iteration},
           {"syndrome_weight", t.syndrome_weight},
           {"bit_errors", t.bit_errors},
           {"posterior_hist", t.posterior_hist}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<BerRecord> run_ber_sweep(const ExperimentConfig& config,
                                     std::vector<TraceRecord>* traces) {
  config.validate();
  if (config.mode != "ber") {
    throw std::invalid_argument("run_ber_sweep: config mode must be ber");
  }
  const SignalLevelTable table = load_table(config.table_path);
  const ParityCheckMatrix H = obtain_code(config);
  const Encoder encoder = make_encoder(H);
  if (!config.snr_db_list.empty() && encoder.k() == 0) {
    throw std::invalid_argument(
        "run_ber_sweep: a rate-zero code cannot drive an SNR-defined sweep; "
        "give sigma2 points instead");
  }
  const PageDims dims = sweep_dims(config, H.n());
  const PageMapping mapping =
      PageMapping::row_major(H.n(), dims.rows, dims.cols);
  const FullGraph graph = build_graph(H, mapping);
  const double rate = encoder.true_rate();

  const int n = H.n();
  std::vector<int> truth_to_var(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Cell cell = mapping.cell_of(i);
    truth_to_var[static_cast<std::size_t>(i)] =
        cell.row * dims.cols + cell.col;
  }
  std::vector<BerRecord> records;
  const auto points = sweep_points(config, rate, table);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double sigma2 = points[p].sigma2;
    DecoderParams dparams;
    dparams.max_iters = config.decoder_iters;
    dparams.llr_clamp = config.llr_clamp;
    dparams.sigma2 = sigma2;
    dparams.table = &table;

    const auto t0 = std::chrono::steady_clock::now();
    const PointCounters counters = run_point(
        config.stop, config.threads, [&](long frame) -> FrameOutcome {
          Rng msg_rng(seed_mix({config.master_seed,
                                static_cast<std::uint64_t>(p),
                                static_cast<std::uint64_t>(frame),
                                kSeedRoleMessage}));
          std::vector<std::uint8_t> message(
              static_cast<std::size_t>(encoder.k()));
          for (auto& b : message) b = static_cast<std::uint8_t>(msg_rng.bit());
          const std::vector<std::uint8_t> codeword = encoder.encode(message);

          BitPage page(dims.rows, dims.cols);
          for (int i = 0; i < n; ++i) {
            page.set(mapping.cell_of(i), codeword[static_cast<std::size_t>(i)]);
          }
          const ReadbackPage rb = readback(
              page, table,
              NoiseModel(sigma2,
                         seed_mix({config.master_seed,
                                   static_cast<std::uint64_t>(p),
                                   static_cast<std::uint64_t>(frame),
                                   kSeedRoleNoise})));
          DecoderParams frame_params = dparams;
          frame_params.trace = config.trace && traces && frame == 0;
          const DecodeResult res = decode(rb, graph, frame_params);

          if (frame_params.trace) {
            harvest_trace(res, p, codeword, truth_to_var, traces);
          }
          FrameOutcome out;
          for (int i = 0; i < n; ++i) {
            const int v = truth_to_var[static_cast<std::size_t>(i)];
            if (res.decisions[static_cast<std::size_t>(v)] !=
                codeword[static_cast<std::size_t>(i)]) {
              ++out.bit_errors;
            }
          }
          out.frame_error = out.bit_errors > 0;
          return out;
        });
    const auto t1 = std::chrono::steady_clock::now();

    BerRecord rec;
    rec.snr_db = points[p].snr_db;
    rec.sigma2 = sigma2;
    rec.iters_cap = config.decoder_iters;
    rec.frames_run = counters.frames;
    rec.bit_errors = counters.bit_errors;
    rec.bits_counted = counters.frames * static_cast<long>(n);
    rec.ber = rec.bits_counted > 0
                  ? static_cast<double>(rec.bit_errors) / rec.bits_counted
                  : 0.0;
    rec.frame_errors = counters.frame_errors;
    rec.fer = counters.frames > 0 ? static_cast<double>(counters.frame_errors) /
                                        counters.frames
                                  : 0.0;
    rec.seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.early_stop = counters.early_stop;
    records.push_back(rec);
  }
  return records;
}

std::vector<BerRecord> run_detect_sweep(const ExperimentConfig& config,
                                        std::vector<TraceRecord>* traces) {
  config.validate();
  if (config.mode != "detect") {
    throw std::invalid_argument("run_detect_sweep: config mode must be detect");
  }
  const SignalLevelTable table = load_table(config.table_path);
  const PageDims dims{config.rows, config.cols};
  const FullGraph graph = build_channel_graph(dims.rows, dims.cols);
  const long n = dims.cells();

  std::vector<BerRecord> records;
  const auto points = sweep_points(config, 1.0, table);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double sigma2 = points[p].sigma2;
    DecoderParams dparams;
    dparams.max_iters = config.decoder_iters;
    dparams.llr_clamp = config.llr_clamp;
    dparams.sigma2 = sigma2;
    dparams.table = &table;

    const auto t0 = std::chrono::steady_clock::now();
    const PointCounters counters = run_point(
        config.stop, config.threads, [&](long frame) -> FrameOutcome {
          Rng page_rng(seed_mix({config.master_seed,
                                 static_cast<std::uint64_t>(p),
                                 static_cast<std::uint64_t>(frame),
                                 kSeedRolePage}));
          const BitPage page =
              BitPage::random(dims.rows, dims.cols, page_rng);
          const ReadbackPage rb = readback(
              page, table,
              NoiseModel(sigma2,
                         seed_mix({config.master_seed,
                                   static_cast<std::uint64_t>(p),
                                   static_cast<std::uint64_t>(frame),
                                   kSeedRoleNoise})));
          DecoderParams frame_params = dparams;
          frame_params.trace = config.trace && traces && frame == 0;
          const DecodeResult res = detect_uncoded(rb, graph, frame_params);

          if (frame_params.trace) {
            harvest_trace(res, p, page.bits(), {}, traces);
          }
          FrameOutcome out;
          for (long i = 0; i < n; ++i) {
            if (res.decisions[static_cast<std::size_t>(i)] !=
                page.bits()[static_cast<std::size_t>(i)]) {
              ++out.bit_errors;
            }
          }
          out.frame_error = out.bit_errors > 0;
          return out;
        });
    const auto t1 = std::chrono::steady_clock::now();

    BerRecord rec;
    rec.snr_db = points[p].snr_db;
    rec.sigma2 = sigma2;
    rec.iters_cap = config.decoder_iters;
    rec.frames_run = counters.frames;
    rec.bit_errors = counters.bit_errors;
    rec.bits_counted = counters.frames * n;
    rec.ber = rec.bits_counted > 0
                  ? static_cast<double>(rec.bit_errors) / rec.bits_counted
                  : 0.0;
    rec.frame_errors = counters.frame_errors;
    rec.fer = counters.frames > 0 ? static_cast<double>(counters.frame_errors) /
                                        counters.frames
                                  : 0.0;
    rec.seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.early_stop = counters.early_stop;
    records.push_back(rec);
  }
  return records;
}

// ---------------------------------------------------------------------------
// Threshold mode.

ThresholdReport run_threshold(const ExperimentConfig& config) {
  config.validate();
  if (config.mode != "threshold") {
    throw std::invalid_argument("run_threshold: config mode must be threshold");
  }
  const SignalLevelTable table = load_table(config.table_path);
  ThresholdReport report;
  report.config = config;
  for (const CodeDegrees& code : config.de_codes) {
    ThresholdReportEntry entry;
    entry.code = code;
    try {
      entry.result =
          find_threshold(code, config.de_bracket_lo, config.de_bracket_hi,
                         config.de_tolerance, config.de, table);
      entry.snr_db_rate1 = snr_db(entry.result.sigma2_star, 1.0, table);
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

std::string threshold_report_to_json(const ThresholdReport& report) {
  json j;
  j["config"] = config_to_json_obj(report.config);
  json entries = json::array();
  for (const auto& entry : report.entries) {
    json e;
    e["code"] = code_degrees_to_json(entry.code);
    e["ok"] = entry.ok;
    if (!entry.ok) {
      e["error"] = entry.error;
    } else {
      e["sigma2_star"] = entry.result.sigma2_star;
      e["bracket"] = {entry.result.bracket_lo, entry.result.bracket_hi};
      e["snr_db_rate1"] = entry.snr_db_rate1;
      json probes = json::array();
      for (const auto& probe : entry.result.probes) {
        probes.push_back({{"sigma2", probe.sigma2},
                          {"converged", probe.converged},
                          {"iterations", probe.iterations},
                          {"final_pe", probe.final_pe},
                          {"pe_trajectory", probe.pe_trajectory}});
      }
      e["probes"] = probes;
    }
    entries.push_back(std::move(e));
  }
  j["thresholds"] = entries;
  return j.dump(2);
}

ParityCheckMatrix write_code_files(const CodeParams& params,
                                   const std::string& alist_path,
                                   const std::string& meta_path) {
  const ParityCheckMatrix H = generate_regular(params);
  write_alist(H, alist_path);
  if (!meta_path.empty()) {
    const Encoder encoder = make_encoder(H);
    json meta{{"dv", params.dv},
              {"dc", params.dc},
              {"n", params.n},
              {"m", H.m()},
              {"seed", params.seed},
              {"rank", encoder.rank()},
              {"k", encoder.k()},
              {"true_rate", encoder.true_rate()},
              {"design_rate", params.design_rate()}};
    std::ofstream out(meta_path);
    if (!out) throw std::runtime_error("cannot write " + meta_path);
    out << meta.dump(2) << '\n';
  }
  return H;
}

// ---------------------------------------------------------------------------
// Result emission.

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json record_to_json(const BerRecord& r) {
  return json{{"snr_db", r.snr_db},
              {"sigma2", r.sigma2},
              {"iters", r.iters_cap},
              {"frames", r.frames_run},
              {"bit_errors", r.bit_errors},
              {"bits", r.bits_counted},
              {"ber", r.ber},
              {"frame_errors", r.frame_errors},
              {"fer", r.fer},
              {"seconds", r.seconds},
              {"early_stop", r.early_stop}};
}

BerRecord record_from_json(const json& j) {
  BerRecord r;
  r.snr_db = j.at("snr_db").get<double>();
  r.sigma2 = j.at("sigma2").get<double>();
  r.iters_cap = j.at("iters").get<int>();
  r.frames_run = j.at("frames").get<long>();
  r.bit_errors = j.at("bit_errors").get<long>();
  r.bits_counted = j.at("bits").get<long>();
  r.ber = j.at("ber").get<double>();
  r.frame_errors = j.at("frame_errors").get<long>();
  r.fer = j.at("fer").get<double>();
  r.seconds = j.at("seconds").get<double>();
  r.early_stop = j.at("early_stop").get<bool>();
  return r;
}

}  // namespace

void write_records_csv(std::ostream& out,
                       const std::vector<BerRecord>& records) {
  out << "snr_db,sigma2,iters,frames,bit_errors,bits,ber,fer,seconds,"
         "early_stop\n";
  for (const BerRecord& r : records) {
    out << format_double(r.snr_db) << ',' << format_double(r.sigma2) << ','
        << r.iters_cap << ',' << r.frames_run << ',' << r.bit_errors << ','
        << r.bits_counted << ',' << format_double(r.ber) << ','
        << format_double(r.fer) << ',' << format_double(r.seconds) << ','
        << (r.early_stop ? 1 : 0) << '\n';
  }
}

std::string records_to_json(const std::vector<BerRecord>& records,
                            const ExperimentConfig* config_echo) {
  json arr = json::array();
  for (const BerRecord& r : records) arr.push_back(record_to_json(r));
  if (!config_echo) return arr.dump(2);
  json j;
  j["config"] = config_to_json_obj(*config_echo);
  j["records"] = std::move(arr);
  return j.dump(2);
}

std::vector<BerRecord> records_from_json(const std::string& text) {
  const json j = json::parse(text);
  const json& arr = j.is_array() ? j : j.at("records");
  std::vector<BerRecord> records;
  for (const auto& item : arr) records.push_back(record_from_json(item));
  return records;
}

std::string resolve_output_path(const std::string& path) {
  namespace fs = std::filesystem;
  const char* base = std::getenv("TWODOS_OUTPUT_DIR");
  if (!base || *base == '\0' || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).string();
}

void emit_results(const std::vector<BerRecord>& records,
                  const std::string& path, const std::string& format,
                  const ExperimentConfig& config) {
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("emit_results: format must be csv or json");
  }
  const std::string resolved = resolve_output_path(path);
  std::ofstream out(resolved);
  if (!out) throw std::runtime_error("cannot write " + resolved);
  if (format == "csv") {
    write_records_csv(out, records);
    // The effective config rides along as a sidecar so CSV stays plain.
    std::ofstream meta(resolved + ".meta.json");
    if (!meta) throw std::runtime_error("cannot write " + resolved +
                                        ".meta.json");
    meta << config_to_json(config) << '\n';
  } else {
    out << records_to_json(records, &config) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + resolved);
}

}  // namespace twodos
