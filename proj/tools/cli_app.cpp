#include "cli_app.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tdabm/tdabm.hpp"

namespace tdabm::cli {

namespace {

namespace fs = std::filesystem;

struct InputOptions {
  std::string input;
  std::string delimiter = ",";
  std::string na_policy = "error";
  std::vector<std::string> axes;
  std::string outcome;
  std::string normalize = "none";
};

struct CoverOptions {
  double epsilon = 0.0;
  std::string strategy = "lowest-index";
  std::uint64_t seed = 0;
  std::string search = "auto";
  std::size_t min_strength = 1;
};

struct ColorOptions {
  std::string color_by;
  std::string agg = "mean";
};

struct RenderOptions {
  bool labels = true;
  bool legend = false;
  std::vector<double> size_range{7.0, 20.0};
  int n_colors = 100;
  int width = 512;
  int height = 512;
  std::string palette = "viridis";
  std::uint64_t layout_seed = kDefaultLayoutSeed;
  int iterations = kDefaultLayoutIterations;

  RenderSpec spec() const {
    RenderSpec s;
    s.show_labels = labels;
    s.show_legend = legend;
    s.n_colors = n_colors;
    s.width_px = width;
    s.height_px = height;
    s.palette = parse_palette(palette);
    s.size = {size_range.at(0), size_range.at(1)};
    s.validate();
    return s;
  }
};

struct OutputOptions {
  std::string svg, json, dot, graphml, p2b;
};

// Everything produced by one pass of the pipeline.
struct Result {
  Cover<double> cover;
  MapperGraphd graph;
  GraphMeta meta;
};

char parse_delimiter(const std::string& d) {
  if (d == "\\t" || d == "tab") return '\t';
  if (d.size() != 1) throw std::invalid_argument("delimiter must be a single character");
  return d[0];
}

NeighborSearch parse_search(const std::string& s) {
  if (s == "auto") return NeighborSearch::Auto;
  if (s == "brute-force") return NeighborSearch::BruteForce;
  if (s == "grid") return NeighborSearch::Grid;
  throw std::invalid_argument("unknown search '" + s + "'");
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void add_input_options(CLI::App& app, InputOptions& o) {
  app.add_option("--input", o.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  app.add_option("--axes", o.axes, "Comma-separated axis column names (default: every column but the outcome)")
      ->delimiter(',');
  app.add_option("--delimiter", o.delimiter, "Field delimiter (single character or 'tab')")
      ->capture_default_str();
  app.add_option("--na-policy", o.na_policy, "What to do with non-numeric cells")
      ->check(CLI::IsMember({"error", "drop-row"}))
      ->capture_default_str();
  app.add_option("--normalize", o.normalize, "Column scaling before covering")
      ->check(CLI::IsMember({"none", "min-max", "z-score"}))
      ->capture_default_str();
}

void add_cover_options(CLI::App& app, CoverOptions& o) {
  app.add_option("--strategy", o.strategy, "Landmark selection")
      ->check(CLI::IsMember({"lowest-index", "random"}))
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for --strategy random")->capture_default_str();
  app.add_option("--search", o.search, "Ball membership search")
      ->check(CLI::IsMember({"auto", "brute-force", "grid"}))
      ->capture_default_str();
  app.add_option("--edge-min-strength", o.min_strength, "Drop edges with smaller intersections")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_color_options(CLI::App& app, ColorOptions& o) {
  app.add_option("--color-by", o.color_by, "Column to aggregate per ball (default: the outcome)");
  app.add_option("--agg", o.agg, "Per-ball aggregator")
      ->check(CLI::IsMember({"mean", "sd", "min", "max", "median", "count"}))
      ->capture_default_str();
}

void add_render_options(CLI::App& app, RenderOptions& o) {
  app.add_flag("--labels,!--no-labels", o.labels, "Draw ball ids on the vertices");
  app.add_flag("--legend,!--no-legend", o.legend, "Add a list of balls beside the plot");
  app.add_option("--size-range", o.size_range, "Smallest and largest ball size, 'min,max'")
      ->delimiter(',')
      ->expected(2);
  app.add_option("--n-colors", o.n_colors, "Colour bar bins")->check(CLI::Range(2, 100000))->capture_default_str();
  app.add_option("--width", o.width, "Image width in px")->check(CLI::Range(64, 100000))->capture_default_str();
  app.add_option("--height", o.height, "Image height in px")->check(CLI::Range(64, 100000))->capture_default_str();
  app.add_option("--palette", o.palette, "Colour ramp")
      ->check(CLI::IsMember({"viridis", "grayscale", "blue-red", "rainbow"}))
      ->capture_default_str();
  app.add_option("--layout-seed", o.layout_seed, "Seed for the spring layout")->capture_default_str();
  app.add_option("--layout-iterations", o.iterations, "Spring layout iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_output_options(CLI::App& app, OutputOptions& o) {
  app.add_option("--out-svg", o.svg, "Write the plot as SVG");
  app.add_option("--out-json", o.json, "Write the graph document as JSON");
  app.add_option("--out-dot", o.dot, "Write the graph as Graphviz DOT");
  app.add_option("--out-graphml", o.graphml, "Write the graph as GraphML");
  app.add_option("--out-p2b", o.p2b, "Write the points-to-balls table as CSV");
}

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::string env_name(const std::string& option) {
  std::string env = "TDABM_";
  for (char c : option) env.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return env;
}

// Every option can also come from TDABM_<NAME>, e.g. TDABM_EPSILON.
void bind_environment(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    opt->envname(env_name(name));
  }
}

// Key-value config file: `name = value` per line, '#' comments, names as the
// long flags without dashes. Returns `--name=value` arguments for every key
// the subcommand knows that neither the command line nor the environment
// already sets.
std::vector<std::string> config_arguments(const CLI::App& sub, const std::string& path,
                                          const std::vector<std::string>& given, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(path + ":" + std::to_string(line_no) + ": expected name = value");
    const std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) {
      err << "warning: config key '" << key << "' does not apply to '" << sub.get_name() << "'\n";
      continue;
    }
    bool set = std::getenv(env_name(opt->get_single_name()).c_str()) != nullptr;
    for (const std::string& arg : given) {
      for (const std::string& name : opt->get_lnames()) {
        if (arg == "--" + name || arg == "--no-" + name || arg.starts_with("--" + name + "=")) set = true;
      }
    }
    if (!set) extra.push_back("--" + key + "=" + value);
  }
  return extra;
}

Eigen::VectorXd coloring_values(const LoadedData& data, const std::string& column) {
  if (column == data.outcome.name && data.outcome.size() > 0) return data.outcome.values;
  const auto& names = data.points.column_names;
  const auto it = std::find(names.begin(), names.end(), column);
  if (it != names.end()) return data.points.values.col(it - names.begin());
  const auto ex = data.extra.find(column);
  if (ex == data.extra.end()) throw DataError("unknown coloring column '" + column + "'");
  return ex->second;
}

std::vector<std::string> extra_columns_for(const std::string& color_by, const std::vector<std::string>& axes,
                                           const std::string& outcome) {
  if (color_by.empty() || color_by == outcome) return {};
  if (std::find(axes.begin(), axes.end(), color_by) != axes.end()) return {};
  return {color_by};
}

void default_axes(InputOptions& in) {
  if (!in.axes.empty()) return;
  for (const std::string& name : read_csv(in.input, parse_delimiter(in.delimiter)).header) {
    if (name != in.outcome) in.axes.push_back(name);
  }
}

LoadedData load(const InputOptions& in, const std::vector<std::string>& axes, const std::string& outcome,
                const std::string& color_by) {
  CsvOptions csv;
  csv.delimiter = parse_delimiter(in.delimiter);
  csv.na_policy = parse_na_policy(in.na_policy);
  return load_table(in.input, axes, outcome, csv, extra_columns_for(color_by, axes, outcome));
}

Result run_pipeline(const LoadedData& data, const InputOptions& in, const CoverOptions& co,
                    const ColorOptions& color, double epsilon) {
  const PointCloudd cloud = normalize(data.points, parse_normalization(in.normalize));
  CoverConfig<double> cfg;
  cfg.epsilon = epsilon;
  cfg.strategy = parse_strategy(co.strategy);
  cfg.seed = co.seed;
  cfg.search = parse_search(co.search);

  Result r;
  r.cover = build_cover(cloud, cfg);
  r.graph = build_graph(r.cover, co.min_strength);
  const std::string column = color.color_by.empty() ? in.outcome : color.color_by;
  const AggregateKind agg = parse_aggregate(color.agg);
  r.graph = color_graph(r.graph, r.cover, coloring_values(data, column), agg);
  r.meta.axes = in.axes;
  r.meta.outcome = in.outcome;
  r.meta.color_by = column;
  r.meta.aggregator = agg;
  r.meta.normalization = in.normalize;
  r.meta.na_policy = in.na_policy;
  return r;
}

void print_summary(std::ostream& out, const Result& r) {
  const auto s = graph_summary(r.graph);
  out << "epsilon: " << format_number(r.cover.config.epsilon) << "\n";
  out << "balls: " << s.balls << "\n";
  out << "edges: " << s.edges << "\n";
  out << "cardinality: min " << s.min_cardinality << ", max " << s.max_cardinality << ", mean "
      << short_number(s.mean_cardinality) << "\n";
  if (s.color_range) {
    out << "color (" << (r.meta.aggregator ? to_string(*r.meta.aggregator) : "value") << " of "
        << r.meta.color_by << "): " << short_number(s.color_range->first) << " .. "
        << short_number(s.color_range->second) << "\n";
  }
}

void write_outputs(const Result& r, const RenderOptions& ro, const OutputOptions& oo) {
  if (!oo.svg.empty()) {
    const RenderSpec spec = ro.spec();
    const auto layout = spring_layout(r.graph, ro.layout_seed, ro.iterations);
    write_file_atomic(oo.svg, render_svg(r.graph, layout, spec));
  }
  if (!oo.json.empty()) write_file_atomic(oo.json, to_json(r.cover, r.graph, r.meta));
  if (!oo.dot.empty()) write_file_atomic(oo.dot, to_dot(r.graph));
  if (!oo.graphml.empty()) write_file_atomic(oo.graphml, to_graphml(r.graph));
  if (!oo.p2b.empty()) write_file_atomic(oo.p2b, to_csv_points_to_balls(points_to_balls(r.cover)));
}

void check_size_range(const RenderOptions& ro) {
  if (ro.size_range.size() != 2) throw std::invalid_argument("--size-range takes two values 'min,max'");
  ro.spec();
}

int cmd_build(const InputOptions& in, const CoverOptions& co, const ColorOptions& color,
              const RenderOptions& ro, const OutputOptions& oo, std::ostream& out) {
  check_size_range(ro);
  const LoadedData data = load(in, in.axes, in.outcome, color.color_by);
  const Result r = run_pipeline(data, in, co, color, co.epsilon);
  write_outputs(r, ro, oo);
  print_summary(out, r);
  return kExitOk;
}

int cmd_recolor(const std::string& graph_path, InputOptions in, const ColorOptions& color_in,
                const RenderOptions& ro, const OutputOptions& oo, std::ostream& out) {
  check_size_range(ro);
  std::ifstream gin(graph_path, std::ios::binary);
  if (!gin) throw DataError("cannot open graph document '" + graph_path + "'");
  std::stringstream buf;
  buf << gin.rdbuf();
  GraphDocument doc = from_json(buf.str());

  if (in.axes.empty()) in.axes = doc.meta.axes;
  if (in.outcome.empty()) in.outcome = doc.meta.outcome;
  if (in.normalize.empty()) in.normalize = doc.meta.normalization;
  if (in.na_policy.empty()) in.na_policy = doc.meta.na_policy;
  ColorOptions color = color_in;
  if (color.color_by.empty()) color.color_by = in.outcome;
  if (color.color_by.empty()) throw std::invalid_argument("--color-by is required: the graph names no outcome");
  if (in.axes.empty()) throw std::invalid_argument("--axes is required: the graph records no axes");

  // The outcome column only matters for coloring here; load it only if asked for.
  const std::string outcome = color.color_by == in.outcome ? in.outcome : std::string{};
  const LoadedData data = load(in, in.axes, outcome, color.color_by);
  if (data.points.size() != doc.cover.n_points) {
    throw DataError("graph covers " + std::to_string(doc.cover.n_points) + " points but the table has " +
                    std::to_string(data.points.size()) + " rows");
  }
  const PointCloudd cloud = normalize(data.points, parse_normalization(in.normalize));
  if (const std::string problem = validate_cover(cloud, doc.cover); !problem.empty()) {
    throw DataError("graph does not match the table: " + problem);
  }

  const AggregateKind agg = parse_aggregate(color.agg);
  Result r{std::move(doc.cover), {}, doc.meta};
  r.graph = color_graph(std::move(doc.graph), r.cover, coloring_values(data, color.color_by), agg);
  r.meta.color_by = color.color_by;
  r.meta.aggregator = agg;
  write_outputs(r, ro, oo);
  print_summary(out, r);
  return kExitOk;
}

int cmd_sweep(const InputOptions& in, const CoverOptions& co, const ColorOptions& color,
              const RenderOptions& ro, std::vector<double> radii, const std::string& out_dir,
              std::string summary_path, std::ostream& out, std::ostream& err) {
  check_size_range(ro);
  std::vector<double> unique;
  for (double r : radii) {
    if (std::find(unique.begin(), unique.end(), r) != unique.end()) {
      err << "warning: duplicate radius " << format_number(r) << " ignored\n";
      continue;
    }
    unique.push_back(r);
  }
  fs::create_directories(out_dir);
  if (summary_path.empty()) summary_path = (fs::path(out_dir) / "sweep_summary.csv").string();

  const LoadedData data = load(in, in.axes, in.outcome, color.color_by);
  std::vector<std::future<Result>> jobs;
  for (double eps : unique) {
    jobs.push_back(std::async(std::launch::async, [&, eps] { return run_pipeline(data, in, co, color, eps); }));
  }
  std::vector<Result> results;
  for (auto& j : jobs) results.push_back(j.get());

  std::string summary = "epsilon,balls,edges\n";
  for (const Result& r : results) {
    const std::string stem = "eps_" + format_number(r.cover.config.epsilon);
    OutputOptions oo;
    oo.json = (fs::path(out_dir) / (stem + ".json")).string();
    oo.svg = (fs::path(out_dir) / (stem + ".svg")).string();
    write_outputs(r, ro, oo);
    summary += format_number(r.cover.config.epsilon) + "," + std::to_string(r.graph.vertices.size()) + "," +
               std::to_string(r.graph.edges.size()) + "\n";
  }
  write_file_atomic(summary_path, summary);
  out << summary;
  return kExitOk;
}

int cmd_fixture(std::size_t n, std::size_t k, std::uint64_t seed, const std::string& formula,
                const std::string& path, std::ostream& out) {
  if (n < 1 || k < 1) throw std::invalid_argument("--n and --k must be at least 1");
  // Column-major draw order: all of X1, then X2, and so on.
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = detail::unit_draw(rng);
  }
  std::string text;
  for (std::size_t j = 0; j < k; ++j) text += (j ? ",X" : "X") + std::to_string(j + 1);
  if (formula == "sum") text += ",Y";
  text += "\n";
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double y = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j) text += ",";
      text += format_number(x(i, j));
      y += x(i, j);
    }
    if (formula == "sum") text += "," + format_number(y);
    text += "\n";
  }
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ball mapper graphs for point clouds", "tdabm"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "Key-value config file (flags and TDABM_* env take precedence)")
      ->envname("TDABM_CONFIG");

  InputOptions in;
  CoverOptions co;
  ColorOptions color;
  RenderOptions ro;
  OutputOptions oo;

  auto* build = app.add_subcommand("build", "Cover the data, build the graph, write outputs");
  add_input_options(*build, in);
  build->add_option("--outcome", in.outcome, "Outcome column used for coloring")->required();
  build->add_option("--epsilon", co.epsilon, "Ball radius")->required()->check(CLI::PositiveNumber);
  add_cover_options(*build, co);
  add_color_options(*build, color);
  add_render_options(*build, ro);
  add_output_options(*build, oo);

  InputOptions rin;
  rin.na_policy.clear();
  rin.normalize.clear();
  ColorOptions rcolor;
  RenderOptions rro;
  OutputOptions roo;
  std::string graph_path;
  auto* recolor = app.add_subcommand("recolor", "Recolor an existing graph document from its source table");
  recolor->add_option("--graph", graph_path, "Graph JSON written by build")->required()->check(CLI::ExistingFile);
  add_input_options(*recolor, rin);
  recolor->add_option("--outcome", rin.outcome, "Outcome column (default: from the graph)");
  add_color_options(*recolor, rcolor);
  add_render_options(*recolor, rro);
  add_output_options(*recolor, roo);

  InputOptions sin;
  CoverOptions sco;
  ColorOptions scolor;
  RenderOptions sro;
  std::vector<double> radii;
  std::string out_dir, summary_path;
  auto* sweep = app.add_subcommand("sweep", "Build one graph per radius");
  add_input_options(*sweep, sin);
  sweep->add_option("--outcome", sin.outcome, "Outcome column used for coloring")->required();
  sweep->add_option("--radii", radii, "Comma-separated radii")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out-dir", out_dir, "Directory for per-radius JSON and SVG")->required();
  sweep->add_option("--out-summary", summary_path, "Summary CSV (default: <out-dir>/sweep_summary.csv)");
  add_cover_options(*sweep, sco);
  add_color_options(*sweep, scolor);
  add_render_options(*sweep, sro);

  std::size_t n = 500, k = 2;
  std::uint64_t fseed = 123;
  std::string formula = "sum", fixture_out;
  auto* fixture = app.add_subcommand("fixture", "Write a synthetic uniform dataset");
  fixture->add_option("--n", n, "Rows")->capture_default_str()->check(CLI::PositiveNumber);
  fixture->add_option("--k", k, "Axis columns")->capture_default_str()->check(CLI::PositiveNumber);
  fixture->add_option("--seed", fseed, "Random seed")->capture_default_str();
  fixture->add_option("--formula", formula, "Outcome: sum of the axes, or none")
      ->check(CLI::IsMember({"sum", "none"}))
      ->capture_default_str();
  fixture->add_option("--out", fixture_out, "Output CSV (default: standard output)");

  for (CLI::App* sub : {build, recolor, sweep, fixture}) bind_environment(*sub);

  try {
    std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);
    std::string cfg_file = std::getenv("TDABM_CONFIG") ? std::getenv("TDABM_CONFIG") : "";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) cfg_file = args[i + 1];
      if (args[i].starts_with("--config=")) cfg_file = args[i].substr(9);
    }
    if (!cfg_file.empty()) {
      for (CLI::App* sub : {build, recolor, sweep, fixture}) {
        if (std::find(args.begin(), args.end(), sub->get_name()) == args.end()) continue;
        for (auto& a : config_arguments(*sub, cfg_file, args, err)) args.push_back(std::move(a));
        break;
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (build->parsed()) {
      if (!(co.epsilon > 0)) throw CLI::ValidationError("--epsilon", "must be positive");
      default_axes(in);
      return cmd_build(in, co, color, ro, oo, out);
    }
    if (recolor->parsed()) return cmd_recolor(graph_path, rin, rcolor, rro, roo, out);
    if (sweep->parsed()) {
      default_axes(sin);
      return cmd_sweep(sin, sco, scolor, sro, radii, out_dir, summary_path, out, err);
    }
    if (fixture->parsed()) return cmd_fixture(n, k, fseed, formula, fixture_out, out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace tdabm::cli
