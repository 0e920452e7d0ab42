#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vcd/config.hpp"
#include "vcd/error.hpp"
#include "vcd/media_io.hpp"
#include "vcd/metrics.hpp"
#include "vcd/plot.hpp"
#include "vcd/report.hpp"
#include "vcd/reward_opt.hpp"

namespace vcd::cli {

namespace fs = std::filesystem;

namespace {

// Command-scoped mirror of MetricConfig plus I/O settings. Optionals stay
// empty unless the flag was given, so a config file can supply them.
struct RunConfig {
  std::vector<std::string> videos;
  std::string cond;
  std::string config_file;
  std::optional<std::string> encoder;
  std::optional<std::string> weights;
  std::optional<std::string> taps;
  std::optional<std::string> mode;
  std::optional<int> projections;
  std::optional<std::uint64_t> seed;
  std::optional<int> order;
  std::optional<double> alpha;
  bool no_temporal_weight = false;
  std::optional<int> sample_frames;
  std::string format = "both";
  bool plot = false;
  std::string out;

  // optimize-demo
  int frames = 3;
  int budget = 500;
  std::vector<int> init_shift = {2, 2};
  int size = 16;

  // inspect-spectrum
  std::string frame;
};

void add_metric_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--config", rc.config_file, "key=value configuration file (flags override it)");
  cmd->add_option("--encoder", rc.encoder, "encoder kind")->check(CLI::IsMember({"identity", "random", "vgg"}));
  cmd->add_option("--weights", rc.weights, "VCDW weight file for --encoder vgg");
  cmd->add_option("--taps", rc.taps, "comma-separated tap list");
  cmd->add_option("--mode", rc.mode, "coefficient pooling")->check(CLI::IsMember({"scalar", "cvec"}));
  cmd->add_option("--projections", rc.projections, "sliced WD projection count")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", rc.seed, "seed for projections, frame sampling and random encoder");
  cmd->add_option("--order", rc.order, "Wasserstein order")->check(CLI::IsMember({1, 2}));
  cmd->add_option("--alpha", rc.alpha, "phase term weight")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-temporal-weight", rc.no_temporal_weight, "disable the (N-i+1)/N frame weight");
  cmd->add_option("--sample-frames", rc.sample_frames, "score a seeded sample of K frames")
      ->check(CLI::PositiveNumber);
}

void add_output_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--format", rc.format, "report format")->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_flag("--plot", rc.plot, "write an SVG plot next to the reports");
  cmd->add_option("--out", rc.out, "output directory")->required();
}

MetricConfig build_metric_config(const RunConfig& rc) {
  MetricConfig cfg;
  if (!rc.config_file.empty()) cfg = load_config_file(rc.config_file, cfg);
  if (rc.encoder) cfg.encoder.kind = parse_encoder_kind(*rc.encoder);
  if (rc.weights) cfg.encoder.weights_path = *rc.weights;
  if (rc.taps) {
    cfg.encoder.taps.clear();
    std::stringstream ss(*rc.taps);
    std::string t;
    while (std::getline(ss, t, ',')) {
      if (!t.empty()) cfg.encoder.taps.push_back(t);
    }
  }
  if (rc.mode) cfg.mode = parse_distribution_mode(*rc.mode);
  if (rc.projections) cfg.swd.num_projections = *rc.projections;
  if (rc.seed) {
    cfg.swd.seed = *rc.seed;
    cfg.sample_seed = *rc.seed;
    cfg.encoder.seed = *rc.seed;
  }
  if (rc.order) cfg.swd.order = *rc.order;
  if (rc.alpha) cfg.alpha = *rc.alpha;
  if (rc.no_temporal_weight) cfg.use_temporal_weight = false;
  if (rc.sample_frames) cfg.frame_sample_count = *rc.sample_frames;
  if (cfg.encoder.kind == EncoderKind::random_conv && !cfg.encoder.seed) cfg.encoder.seed = cfg.swd.seed;
  validate(cfg);
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  return dir;
}

void write_report(const fs::path& dir, const std::string& stem, const VcdReport& report, const RunConfig& rc) {
  if (rc.format == "json" || rc.format == "both") write_text(dir / (stem + ".json"), report_to_json(report));
  if (rc.format == "csv" || rc.format == "both") write_text(dir / (stem + ".csv"), report_to_csv(report));
}

PlotSeries series_of(const VcdReport& report, std::string label) {
  PlotSeries s{std::move(label), {}};
  for (const auto& f : report.frames) s.points.emplace_back(f.index, f.total);
  return s;
}

Video load_video_arg(const std::string& source) { return load_video(resolve_manifest(source)); }

std::optional<Frame> load_cond(const RunConfig& rc) {
  if (rc.cond.empty()) return std::nullopt;
  return load_frame(rc.cond);
}

void print_summary(std::ostream& out, const std::string& label, const VcdReport& r) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s: frames=%zu sum=%.10g mean=%.10g\n", label.c_str(), r.frames.size(), r.sum,
                r.mean);
  out << buf;
}

int run_score(const RunConfig& rc, std::ostream& out) {
  const auto cfg = build_metric_config(rc);
  const auto video = load_video_arg(rc.videos.at(0));
  const auto cond = load_cond(rc);
  const Scorer scorer(cfg);
  const auto report = scorer.score_video(video, Variant::vcd, cond ? &*cond : nullptr);
  const auto dir = prepare_out_dir(rc.out);
  write_report(dir, "report", report, rc);
  if (rc.plot) {
    write_text(dir / "report.svg",
               render_line_chart_svg("VCD per frame", "frame index i", "total", {series_of(report, "vcd")}));
  }
  print_summary(out, "vcd", report);
  return 0;
}

int run_compare(const RunConfig& rc, std::ostream& out) {
  if (rc.videos.size() != 2) throw ConfigError("compare needs exactly two --video arguments");
  const auto cfg = build_metric_config(rc);
  const auto video_a = load_video_arg(rc.videos[0]);
  const auto video_b = load_video_arg(rc.videos[1]);
  std::optional<Frame> cond = load_cond(rc);
  if (!cond) cond = video_a.cond();
  const Scorer scorer(cfg);
  const auto ra = scorer.score_video(video_a, Variant::vcd, &*cond);
  const auto rb = scorer.score_video(video_b, Variant::vcd, &*cond);
  const auto dir = prepare_out_dir(rc.out);
  write_report(dir, "report_a", ra, rc);
  write_report(dir, "report_b", rb, rc);
  nlohmann::ordered_json summary;
  summary["a"] = {{"source", rc.videos[0]}, {"sum", ra.sum}, {"mean", ra.mean}};
  summary["b"] = {{"source", rc.videos[1]}, {"sum", rb.sum}, {"mean", rb.mean}};
  summary["delta_mean"] = rb.mean - ra.mean;
  summary["lower"] = ra.mean <= rb.mean ? "a" : "b";
  write_text(dir / "compare.json", summary.dump(2) + "\n");
  if (rc.plot) {
    write_text(dir / "compare.svg", render_line_chart_svg("VCD per frame", "frame index i", "total",
                                                          {series_of(ra, "a"), series_of(rb, "b")}));
  }
  print_summary(out, "a", ra);
  print_summary(out, "b", rb);
  return 0;
}

int run_ablate(const RunConfig& rc, std::ostream& out) {
  const auto cfg = build_metric_config(rc);
  const auto video = load_video_arg(rc.videos.at(0));
  const auto cond = load_cond(rc);
  const Scorer scorer(cfg);
  const auto dir = prepare_out_dir(rc.out);
  std::vector<PlotSeries> series;
  std::string summary = "variant,sum,mean\n";
  for (Variant v : kAllVariants) {
    const auto report = scorer.score_video(video, v, cond ? &*cond : nullptr);
    write_report(dir, to_string(v), report, rc);
    series.push_back(series_of(report, to_string(v)));
    char line[160];
    std::snprintf(line, sizeof line, "%s,%.17g,%.17g\n", to_string(v).c_str(), report.sum, report.mean);
    summary += line;
    print_summary(out, to_string(v), report);
  }
  write_text(dir / "summary.csv", summary);
  if (rc.plot) {
    write_text(dir / "ablate.svg", render_line_chart_svg("Variant ablation", "frame index i", "total", series));
  }
  return 0;
}

int run_optimize(const RunConfig& rc, std::ostream& out) {
  const auto cfg = build_metric_config(rc);
  if (rc.init_shift.size() != 2) throw ConfigError("--init-shift takes two integers");
  const Frame cond = rc.cond.empty() ? make_textured_frame(rc.size, rc.size, 3, cfg.swd.seed) : load_frame(rc.cond);
  const auto init = ParamVideo::uniform_shift(rc.frames, rc.init_shift[0], rc.init_shift[1]);
  const auto trace = optimize(cond, init, rc.budget, cfg.swd.seed, cfg);
  const auto dir = prepare_out_dir(rc.out);
  write_text(dir / "trace.json", trace_to_json(trace));
  if (rc.plot) {
    PlotSeries all{"evaluated", {}};
    PlotSeries accepted{"accepted", {}};
    for (const auto& s : trace.steps) {
      all.points.emplace_back(s.evaluation, s.objective);
      if (s.accepted) accepted.points.emplace_back(s.evaluation, s.objective);
    }
    write_text(dir / "trace.svg",
               render_line_chart_svg("Objective (mean VCD)", "evaluation", "objective", {all, accepted}));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "optimize: evaluations=%d initial=%.10g best=%.10g ratio=%.6g\n",
                trace.evaluations(), trace.initial_objective, trace.best_objective,
                trace.initial_objective > 0 ? trace.best_objective / trace.initial_objective : 0.0);
  out << buf;
  return 0;
}

int run_inspect(const RunConfig& rc, std::ostream& out) {
  const auto cfg = build_metric_config(rc);
  const std::string path = !rc.frame.empty() ? rc.frame : rc.cond;
  if (path.empty()) throw ConfigError("inspect-spectrum needs --frame (or --cond)");
  const Frame frame = load_frame(path);
  const Encoder encoder = Encoder::build(cfg.encoder);
  const auto dir = prepare_out_dir(rc.out);
  for (const auto& map : encoder.encode(frame)) {
    const auto spectrum = dft2(map);
    const auto amp = amplitude_points(spectrum, cfg.mode);
    const auto phase = phase_points(spectrum, cfg.mode, cfg.eps_rel);
    const std::string stem = "spectrum_" + map.tap;
    if (rc.format == "json" || rc.format == "both") {
      nlohmann::ordered_json j;
      j["tap"] = map.tap;
      j["channels"] = map.channels;
      j["height"] = map.height;
      j["width"] = map.width;
      j["mode"] = to_string(cfg.mode);
      for (const auto* cloud : {&amp, &phase}) {
        nlohmann::ordered_json pts = nlohmann::ordered_json::array();
        for (std::size_t k = 0; k < cloud->count(); ++k) {
          pts.push_back(std::vector<double>(cloud->point(k), cloud->point(k) + cloud->dim));
        }
        j[to_string(cloud->kind)] = {{"dim", cloud->dim}, {"points", std::move(pts)}};
      }
      write_text(dir / (stem + ".json"), j.dump() + "\n");
    }
    if (rc.format == "csv" || rc.format == "both") {
      std::string csv = "kind,point";
      for (int d = 0; d < amp.dim; ++d) csv += ",d" + std::to_string(d);
      csv += "\n";
      char num[40];
      for (const auto* cloud : {&amp, &phase}) {
        for (std::size_t k = 0; k < cloud->count(); ++k) {
          csv += to_string(cloud->kind) + "," + std::to_string(k);
          for (int d = 0; d < cloud->dim; ++d) {
            std::snprintf(num, sizeof num, ",%.17g", cloud->point(k)[d]);
            csv += num;
          }
          csv += "\n";
        }
      }
      write_text(dir / (stem + ".csv"), csv);
    }
    out << map.tap << ": " << map.channels << "x" << map.height << "x" << map.width << " -> " << amp.count()
        << " points of dim " << amp.dim << "\n";
  }
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Video consistency distance: frequency-domain sliced-Wasserstein scoring of videos", "vcd"};
  app.require_subcommand(1);
  RunConfig rc;

  auto* score = app.add_subcommand("score", "score one video against its conditioning image");
  score->add_option("--video", rc.videos, "frame directory or manifest file")->required()->expected(1);
  score->add_option("--cond", rc.cond, "conditioning image (defaults to frame 1)");
  add_metric_flags(score, rc);
  add_output_flags(score, rc);

  auto* compare = app.add_subcommand("compare", "score two videos against a shared conditioning image");
  compare->add_option("--video", rc.videos, "frame directory or manifest (give twice)")->required()->expected(2);
  compare->add_option("--cond", rc.cond, "shared conditioning image (defaults to frame 1 of the first video)");
  add_metric_flags(compare, rc);
  add_output_flags(compare, rc);

  auto* ablate = app.add_subcommand("ablate", "score all variants: vcd, amp_only, phase_only, vcd_l2, vcd_feat");
  ablate->add_option("--video", rc.videos, "frame directory or manifest file")->required()->expected(1);
  ablate->add_option("--cond", rc.cond, "conditioning image (defaults to frame 1)");
  add_metric_flags(ablate, rc);
  add_output_flags(ablate, rc);

  auto* opt = app.add_subcommand("optimize-demo", "minimise VCD over a toy parametric video");
  opt->add_option("--cond", rc.cond, "conditioning image (default: synthetic 16x16 texture)");
  opt->add_option("--frames", rc.frames, "frame count N")->check(CLI::Range(2, 1000));
  opt->add_option("--budget", rc.budget, "objective evaluations")->check(CLI::PositiveNumber);
  opt->add_option("--init-shift", rc.init_shift, "initial dx dy for every frame")->expected(2);
  opt->add_option("--size", rc.size, "side of the synthetic conditioning image")->check(CLI::Range(2, 512));
  add_metric_flags(opt, rc);
  add_output_flags(opt, rc);

  auto* inspect = app.add_subcommand("inspect-spectrum", "dump amplitude/phase point clouds of one frame");
  inspect->add_option("--frame", rc.frame, "image to inspect");
  inspect->add_option("--cond", rc.cond, "alias for --frame");
  add_metric_flags(inspect, rc);
  add_output_flags(inspect, rc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (score->parsed()) return run_score(rc, out);
    if (compare->parsed()) return run_compare(rc, out);
    if (ablate->parsed()) return run_ablate(rc, out);
    if (opt->parsed()) return run_optimize(rc, out);
    if (inspect->parsed()) return run_inspect(rc, out);
  } catch (const Error& e) {
    err << "error (" << e.kind() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace vcd::cli
