#include "pamod/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pamod/errors.hpp"
#include "pamod/generator.hpp"
#include "pamod/harness.hpp"
#include "pamod/io.hpp"
#include "pamod/martingale.hpp"
#include "pamod/measure.hpp"
#include "pamod/modularity.hpp"
#include "pamod/stats.hpp"

namespace pamod {

namespace {

using nlohmann::json;

std::uint64_t parse_count(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

vertex_t parse_vertex(std::string_view text) {
  const std::uint64_t v = parse_count(text, "vertex id");
  if (v > std::numeric_limits<vertex_t>::max()) {
    throw std::invalid_argument("vertex id '" + std::string(text) + "' out of range");
  }
  return static_cast<vertex_t>(v);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

PAGraph load_graph(const std::string& path) { return load_edge_list(path); }

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::uint64_t n = 0;
  std::uint64_t h = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err, bool verbose) {
  if (a.n == 0 || a.n > std::numeric_limits<vertex_t>::max()) {
    throw std::invalid_argument("--n must be in [1, 2^32)");
  }
  if (a.h == 0 || a.h > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("--h must be in [1, 2^32)");
  }
  if (a.n * a.h >= (std::uint64_t{1} << 32)) throw std::invalid_argument("hn must be below 2^32");
  const PAGraph g =
      generate_graph(static_cast<vertex_t>(a.n), static_cast<std::uint32_t>(a.h), a.seed);
  save_edge_list(a.out, g);
  std::uint64_t loops = 0;
  for (const Edge& e : g.graph.edges()) loops += e.is_loop();
  out << dump({{"n", g.n()}, {"h", g.h}, {"seed", g.seed}, {"edges", g.graph.num_edges()},
               {"loops", loops}, {"out", a.out}});
  if (verbose) err << "wrote G_n^h with n=" << g.n() << " h=" << g.h << " to " << a.out << "\n";
  return exit_ok;
}

struct GHatArgs {
  std::uint64_t M = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string method = "skip";
  std::uint32_t trials = 0;
  bool fit = false;
};

int cmd_ghat(const GHatArgs& a, std::ostream& out, std::ostream& err, bool verbose) {
  if (a.fit) {
    if (a.trials < 2) throw std::invalid_argument("--fit needs --trials >= 2");
    const std::uint64_t Ms[] = {100, 1000, 10000};
    json fits = json::array();
    for (const auto& f : fit_ghat_gaps(Ms, a.trials, a.seed)) {
      fits.push_back({{"family", f.family}, {"quantity", f.quantity}, {"C", f.C},
                      {"ratios", f.ratios}});
    }
    out << dump({{"M", Ms}, {"trials", a.trials}, {"seed", a.seed}, {"fits", fits}});
    return exit_ok;
  }
  if (a.M == 0) throw std::invalid_argument("--M is required");
  if (a.trials > 0) {
    if (!a.out.empty()) throw std::invalid_argument("--out cannot be combined with --trials");
    const GHatReport report = run_ghat_comparison(a.M, a.trials, a.seed);
    out << dump(report.to_json());
    if (verbose) {
      for (const auto& f : report.families) {
        for (const auto& e : f.estimates) {
          err << f.name << " " << e.quantity << ": mean " << e.mean << " closed form "
              << e.closed_form << " (" << e.z_closed << " SE)\n";
        }
      }
    }
    return exit_ok;
  }
  if (a.out.empty()) throw std::invalid_argument("ghat needs --out or --trials");
  GHatMethod method;
  if (a.method == "skip") {
    method = GHatMethod::skip;
  } else if (a.method == "naive") {
    method = GHatMethod::naive;
  } else {
    throw std::invalid_argument("--method must be skip or naive");
  }
  const GHatGraph g = generate_ghat(a.M, a.seed, method);
  std::ostringstream buffer;
  write_ghat(buffer, g, a.seed);
  write_file_atomic(a.out, buffer.str());
  std::uint64_t loops = 0;
  for (const Edge& e : g.edges) loops += e.is_loop();
  out << dump({{"M", g.M}, {"seed", a.seed}, {"method", a.method}, {"edges", g.edges.size()},
               {"loops", loops}, {"out", a.out}});
  return exit_ok;
}

struct StatsArgs {
  std::string graph;
  std::string subset;
  std::string expansion;
  std::uint64_t seed = 0;
};

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err, bool verbose) {
  const PAGraph g = load_graph(a.graph);
  const VertexSubset s = parse_subset_spec(a.subset, g.n(), g.h);
  const SubsetCounts counts = subset_counts(g.graph, s);
  json j = {{"n", g.n()},
            {"h", g.h},
            {"subset_size", s.size()},
            {"vol", counts.volume},
            {"e_within", counts.within},
            {"e_between", counts.between},
            {"mu", mu(s)}};
  if (!a.expansion.empty()) {
    ExpansionOptions opts;
    opts.seed = a.seed;
    if (a.expansion == "exact") {
      opts.mode = ExpansionMode::exact;
    } else if (a.expansion == "heuristic") {
      opts.mode = ExpansionMode::heuristic;
    } else {
      throw std::invalid_argument("--expansion must be exact or heuristic");
    }
    const ExpansionResult r = edge_expansion(g.graph, opts);
    j["expansion"] = {{"delta", r.value},
                      {"exact", r.exact},
                      {"witness", r.witness},
                      {"modularity_bound", expansion_modularity_bound(r.value, g.h)}};
  }
  out << dump(j);
  if (verbose) {
    err << "|S|=" << s.size() << " vol=" << counts.volume << " e(S)=" << counts.within
        << " e(S,V\\S)=" << counts.between << "\n";
  }
  return exit_ok;
}

struct TrajectoryArgs {
  std::string graph;
  std::string subset;
  std::string out;
};

int cmd_trajectory(const TrajectoryArgs& a, std::ostream& out, std::ostream& err, bool verbose) {
  const PAGraph g = load_graph(a.graph);
  const VertexSubset s = parse_subset_spec(a.subset, g.n(), g.h);
  // The edge list keeps no tree, so the tree is regenerated from the seed and
  // must merge back to exactly the loaded graph.
  const MiniTree tree = generate_tree(g.mini_count(), g.seed);
  if (!(merge(tree, g.h).graph == g.graph)) {
    throw std::invalid_argument("graph in " + a.graph +
                                " is not the output of its header seed; cannot replay the tree");
  }
  const MeasureTable table(g.mini_count());
  const Trajectory traj = replay(tree, s, table);
  const BoundedDifferenceReport diffs = check_bounded_differences(traj, table);
  std::ostringstream buffer;
  write_trajectory_csv(buffer, traj);
  write_file_atomic(a.out, buffer.str());
  out << dump({{"steps", traj.size()},
               {"final_Z", traj.Z.back()},
               {"final_X", traj.X.back()},
               {"final_Zhat", traj.Zhat.back()},
               {"final_Xhat", traj.Xhat.back()},
               {"max_zhat_step_ratio", diffs.max_zhat_step},
               {"max_xhat_excess", diffs.max_xhat_excess},
               {"bounded_differences_ok", diffs.ok()},
               {"out", a.out}});
  if (verbose) err << "replayed " << traj.size() << " steps into " << a.out << "\n";
  return exit_ok;
}

struct ConcentrationArgs {
  std::string config;
  std::string out;
  std::string csv;
};

int cmd_concentration(const ConcentrationArgs& a, std::ostream& out, std::ostream& err,
                      bool verbose) {
  std::ifstream in(a.config);
  if (!in) throw io_error("cannot open config " + a.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + a.config + " is not valid JSON: " + e.what());
  }
  const ExperimentConfig config = ExperimentConfig::from_json(j);
  const ConcentrationReport report = run_concentration(config);
  if (!a.out.empty()) write_file_atomic(a.out, dump(report.to_json(true)));
  if (!a.csv.empty()) {
    std::ostringstream buffer;
    report.write_csv(buffer);
    write_file_atomic(a.csv, buffer.str());
  }
  out << dump(report.to_json(false));
  if (verbose) {
    for (Inequality which : all_inequalities) {
      const auto& s = report.of(which);
      err << inequality_name(which) << ": " << s.violations << "/" << s.observations
          << " violations, max normalized deviation " << s.max << "\n";
    }
  }
  return exit_ok;
}

struct ModularityArgs {
  std::string graph;
  bool exact = false;
  bool greedy = false;
  bool dinh_thai = false;
  std::string dinh_thai_mode = "exact";
  std::uint32_t restarts = 32;
  std::uint64_t seed = 0;
  double epsilon = 0.1;
  std::string partition_out;
};

int cmd_modularity(ModularityArgs a, std::ostream& out, std::ostream& err, bool verbose) {
  if (!a.exact && !a.greedy && !a.dinh_thai) a.greedy = true;
  DinhThaiOptions dt;
  if (a.dinh_thai_mode == "exact") {
    dt.mode = DinhThaiMode::exact;
  } else if (a.dinh_thai_mode == "search") {
    dt.mode = DinhThaiMode::search;
  } else {
    throw std::invalid_argument("--dinh-thai-mode must be exact or search");
  }
  dt.restarts = a.restarts;
  dt.seed = a.seed;
  BoundParams{1, a.epsilon}.validate();
  if (!a.partition_out.empty() && !a.exact && !a.greedy) {
    throw std::invalid_argument("--partition-out needs --exact or --greedy");
  }

  const PAGraph g = load_graph(a.graph);
  json j = {{"n", g.n()}, {"h", g.h}, {"edges", g.graph.num_edges()}};
  json bounds = {{"theoretical_upper_bound", theoretical_upper_bound(g.h, a.epsilon)},
                 {"epsilon", a.epsilon}};
  std::optional<ModularityResult> best;
  if (a.exact) {
    ModularityResult r = modularity_exact(g.graph);
    j["exact"] = {{"score", r.score}, {"communities", r.partition.community_count()}};
    best = std::move(r);
  }
  if (a.greedy) {
    ModularityResult r = modularity_greedy(g.graph);
    j["greedy"] = {{"score", r.score}, {"communities", r.partition.community_count()}};
    if (!best || r.score > best->score) best = std::move(r);
  }
  if (a.dinh_thai) {
    const DinhThaiResult r = dinh_thai_bound(g.graph, dt);
    j["dinh_thai"] = {{"bound", r.bound},
                      {"inner_max", r.inner_max},
                      {"certified", r.certified},
                      {"mode", a.dinh_thai_mode},
                      {"witness", r.witness}};
    bounds["dinh_thai"] = r.bound;
  }
  j["bound_values"] = bounds;
  j["score"] = best ? json(best->score) : json(nullptr);
  if (best && !a.partition_out.empty()) {
    std::ostringstream buffer;
    const auto labels = best->partition.labels();
    write_partition(buffer, {labels.begin(), labels.end()});
    write_file_atomic(a.partition_out, buffer.str());
    j["partition_path"] = a.partition_out;
  } else {
    j["partition_path"] = nullptr;
  }
  out << dump(j);
  if (verbose && best) err << "best modularity found: " << best->score << "\n";
  return exit_ok;
}

struct BoundsArgs {
  std::uint64_t h = 0;
  double epsilon = 0.1;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err, bool verbose) {
  if (a.h == 0 || a.h > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("--h must be in [1, 2^32)");
  }
  const auto h = static_cast<std::uint32_t>(a.h);
  BoundParams{h, a.epsilon}.validate();
  const double x = h;
  const double f_scaled = f_bound(x) / std::sqrt(x);
  out << dump({{"h", h},
               {"epsilon", a.epsilon},
               {"g_vol", g_vol(x)},
               {"g_edges", g_edges(x)},
               {"g_between", g_between(x)},
               {"f_over_sqrt_h", f_scaled},
               {"f_with_epsilon", (1.0 + a.epsilon) * f_scaled},
               {"corollary", corollary_bound(x)},
               {"b_epsilon", b_epsilon(a.epsilon)},
               {"theoretical_upper_bound", theoretical_upper_bound(h, a.epsilon)}});
  if (verbose) err << "f(h)/sqrt(h) = " << f_scaled << (f_scaled < 1 ? " (< 1)" : " (>= 1)") << "\n";
  return exit_ok;
}

}  // namespace

VertexSubset parse_subset_spec(std::string_view spec, vertex_t n, std::uint32_t h) {
  if (spec == "all") return VertexSubset::all(n, h);
  if (spec == "none") return VertexSubset::none(n, h);
  if (spec.starts_with("prefix:")) {
    return VertexSubset::prefix(n, h, parse_vertex(spec.substr(7)));
  }
  std::vector<vertex_t> ids;
  if (spec.starts_with("ids:")) {
    std::string_view rest = spec.substr(4);
    if (rest.empty()) return VertexSubset::none(n, h);
    while (true) {
      const auto comma = rest.find(',');
      ids.push_back(parse_vertex(trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    return VertexSubset::from_ids(n, h, ids);
  }
  if (spec.starts_with("@")) {
    const std::string path(spec.substr(1));
    std::ifstream in(path);
    if (!in) throw io_error("cannot open subset file " + path);
    std::string line;
    while (std::getline(in, line)) {
      std::string_view body = line;
      if (const auto hash = body.find('#'); hash != std::string_view::npos) {
        body = body.substr(0, hash);
      }
      body = trim(body);
      if (!body.empty()) ids.push_back(parse_vertex(body));
    }
    return VertexSubset::from_ids(n, h, ids);
  }
  throw std::invalid_argument("subset spec must be all, none, prefix:k, ids:a,b,... or @file (got '" +
                              std::string(spec) + "')");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Preferential attachment multigraphs, measure mu and modularity bounds"};
  app.name("pamod");
  // --h is the edges-per-vertex flag, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1, 1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Human-readable summary on stderr");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample G_n^h and write its edge list");
  generate->add_option("--n", gen.n, "Number of vertices")->required();
  generate->add_option("--h", gen.h, "Edges per vertex")->required();
  generate->add_option("--seed", gen.seed, "RNG seed")->required();
  generate->add_option("--out", gen.out, "Edge-list output path")->required();

  GHatArgs gh;
  auto* ghat = app.add_subcommand("ghat", "Sample the independent-edge graph G^ or compare it with closed forms");
  ghat->add_option("--M", gh.M, "Number of vertices of G^");
  ghat->add_option("--seed", gh.seed, "RNG seed")->required();
  ghat->add_option("--out", gh.out, "Write one sample as an edge list");
  ghat->add_option("--method", gh.method, "skip or naive");
  ghat->add_option("--trials", gh.trials, "Run the closed-form comparison over this many samples");
  ghat->add_flag("--fit", gh.fit, "Fit the gap constant over M in {10^2, 10^3, 10^4}");

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "vol, e(S) and e(S, V\\S) of a subset");
  stats->add_option("--graph", st.graph, "Edge-list file")->required();
  stats->add_option("--subset", st.subset, "all | none | prefix:k | ids:a,b | @file")->required();
  stats->add_option("--expansion", st.expansion, "Also compute edge expansion: exact or heuristic");
  stats->add_option("--seed", st.seed, "Seed for heuristic expansion");

  TrajectoryArgs tr;
  auto* trajectory = app.add_subcommand("trajectory", "Write the martingale trajectory CSV");
  trajectory->add_option("--graph", tr.graph, "Edge-list file")->required();
  trajectory->add_option("--subset", tr.subset, "Subset spec")->required();
  trajectory->add_option("--out", tr.out, "CSV output path")->required();

  ConcentrationArgs co;
  auto* concentration = app.add_subcommand("concentration", "Run the concentration experiment");
  concentration->add_option("--config", co.config, "Experiment config JSON")->required();
  concentration->add_option("--out", co.out, "Full JSON report with every observation");
  concentration->add_option("--csv", co.csv, "Per-observation CSV");

  ModularityArgs mo;
  auto* modularity = app.add_subcommand("modularity", "Modularity scores and upper bounds");
  modularity->add_option("--graph", mo.graph, "Edge-list file")->required();
  modularity->add_flag("--exact", mo.exact, "Exhaustive maximum (n <= 12)");
  modularity->add_flag("--greedy", mo.greedy, "Greedy agglomeration");
  modularity->add_flag("--dinh-thai", mo.dinh_thai, "Bipartition-based upper bound");
  modularity->add_option("--dinh-thai-mode", mo.dinh_thai_mode, "exact or search");
  modularity->add_option("--restarts", mo.restarts, "Restarts for search mode");
  modularity->add_option("--seed", mo.seed, "Seed for search mode");
  modularity->add_option("--epsilon", mo.epsilon, "epsilon for the theoretical bound");
  modularity->add_option("--partition-out", mo.partition_out, "Write the best partition here");

  BoundsArgs bo;
  auto* bounds = app.add_subcommand("bounds", "Bound functions at h");
  bounds->add_option("--h", bo.h, "Edges per vertex")->required();
  bounds->add_option("--epsilon", bo.epsilon, "epsilon");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return exit_validation;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out, err, verbose);
    if (ghat->parsed()) return cmd_ghat(gh, out, err, verbose);
    if (stats->parsed()) return cmd_stats(st, out, err, verbose);
    if (trajectory->parsed()) return cmd_trajectory(tr, out, err, verbose);
    if (concentration->parsed()) return cmd_concentration(co, out, err, verbose);
    if (modularity->parsed()) return cmd_modularity(mo, out, err, verbose);
    if (bounds->parsed()) return cmd_bounds(bo, out, err, verbose);
  } catch (const capacity_error& e) {
    err << "capacity error: " << e.what() << "\n";
    return exit_capacity;
  } catch (const io_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return exit_validation;
  }
  return exit_validation;
}

}  // namespace pamod
