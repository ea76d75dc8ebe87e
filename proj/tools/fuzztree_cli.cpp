#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzztree/analysis.hpp"
#include "fuzztree/benchgen.hpp"
#include "fuzztree/engines.hpp"
#include "fuzztree/fault_tree.hpp"
#include "fuzztree/io.hpp"

namespace ft = fuzztree;

namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path == "-") {
    std::cout << content;
  } else {
    ft::write_text_file(out_path, content);
  }
}

ft::EngineChoice pick_engine(const std::string& name, const ft::FaultTree& t) {
  if (name == "auto") {
    return ft::is_tree_structured(t) ? ft::EngineChoice::BottomUp : ft::EngineChoice::Bdd;
  }
  const auto choice = ft::engine_from_string(name);
  if (!choice) throw ft::Error("unknown engine '" + name + "'");
  return *choice;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& input, const std::string& engine_name, int cuts,
                const std::string& out_path, int jobs, bool modular,
                std::size_t node_budget) {
  const ft::ParsedModel model = ft::load_ft(input);
  const ft::EngineChoice engine = pick_engine(engine_name, model.tree);

  ft::LiftOptions opts;
  opts.jobs = jobs;
  opts.engine.modularize = modular;
  if (node_budget > 0) opts.engine.node_budget = node_budget;

  const ft::AnalysisResult result =
      ft::fuzzy_unreliability(model.tree, model.fuzzy(cuts), engine, opts);
  if (result.clamped_endpoints > 0) {
    std::cerr << "note: " << result.clamped_endpoints
              << " endpoint(s) clamped back into [0, 1]\n";
  }
  emit(out_path, ft::result_to_json(result));
  if (out_path != "-") {
    if (result.apex_degenerate()) {
      std::cout << "unreliability " << fmt17(result.crisp_value());
    } else {
      std::cout << "unreliability in [" << fmt17(result.lower.back()) << ", "
                << fmt17(result.upper.back()) << "] at alpha=1";
    }
    std::cout << "  (engine " << ft::to_string(result.engine) << ", " << result.n_cuts
              << " cuts, " << fmt17(result.wall_total_s * 1e3) << " ms)\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// oracle: size-capped reference paths (brute force + discrete sup-min)
// ---------------------------------------------------------------------------

int cmd_oracle(const std::string& input, int cuts, const std::string& out_path) {
  const ft::ParsedModel model = ft::load_ft(input);
  const double crisp = ft::unreliability_bruteforce(model.tree, model.probs);

  std::string out = "{\n  \"crisp_bruteforce\": " + fmt17(crisp);
  if (model.has_fuzzy()) {
    // Sample every fuzzy probability at its stored cut endpoints and run the
    // exact sup-min enumeration over the resulting finite supports.
    const ft::FuzzyProbVector fp = model.fuzzy(cuts);
    std::vector<ft::DiscreteFuzzy> discrete;
    discrete.reserve(fp.size());
    for (const ft::AlphaFuzzy& f : fp.entries()) {
      std::map<double, double> support;
      for (int k = 0; k < f.n_cuts(); ++k) {
        support[f.lo(k)] = ft::membership_at(f, f.lo(k));
        support[f.hi(k)] = ft::membership_at(f, f.hi(k));
      }
      discrete.push_back(ft::DiscreteFuzzy::from_support(std::move(support)));
    }
    const ft::DiscreteFuzzy lifted = ft::fuzzy_unreliability_discrete(model.tree, discrete);

    std::string alpha = "[", lower = "[", upper = "[";
    for (int k = 0; k < cuts; ++k) {
      const double level = static_cast<double>(k + 1) / static_cast<double>(cuts);
      double lo = 1.0, hi = 0.0;
      for (const auto& [value, degree] : lifted.support()) {
        if (degree >= level) {
          lo = std::min(lo, value);
          hi = std::max(hi, value);
        }
      }
      if (k) {
        alpha += ", ";
        lower += ", ";
        upper += ", ";
      }
      alpha += fmt17(level);
      lower += fmt17(lo);
      upper += fmt17(hi);
    }
    out += ",\n  \"fuzzy\": {\n    \"alpha\": " + alpha + "],\n    \"lower\": " + lower +
           "],\n    \"upper\": " + upper + "],\n    \"support_size\": " +
           std::to_string(lifted.size()) + "\n  }";
  }
  out += "\n}\n";
  emit(out_path, out);
  return 0;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

int cmd_gen(std::uint64_t seed, std::size_t size, bool dag, double sharing, double bias,
            const std::string& fuzz, double spread, const std::string& out_path) {
  ft::GenConfig cfg;
  cfg.seed = seed;
  cfg.target_size = size;
  cfg.dag = dag;
  cfg.dag_sharing = sharing;
  cfg.combine_bias = bias;
  cfg.fuzz_spread = spread;
  if (!fuzz.empty()) {
    const auto shape = ft::fuzz_shape_from_string(fuzz);
    if (!shape) throw ft::Error("unknown fuzzification shape '" + fuzz + "'");
    cfg.fuzz_shape = *shape;
  }

  const ft::WeightedTree wt = ft::generate(cfg);
  std::vector<std::optional<ft::ShapeSpec>> annotations;
  if (!fuzz.empty()) {
    const auto shapes =
        ft::fuzzify_shapes(wt.probs, cfg.fuzz_shape, cfg.fuzz_spread, seed ^ 0x5bf03635);
    annotations.assign(shapes.begin(), shapes.end());
  }
  emit(out_path, ft::serialize_ft(wt.tree, wt.probs, annotations));
  return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchSample {
  std::size_t nodes;
  double seconds;
};

std::string bench_csv(const std::map<std::size_t, std::vector<BenchSample>>& groups) {
  std::string csv = "group,nodes_mean,time_mean_s,time_std_s\n";
  for (const auto& [group, samples] : groups) {
    double nodes = 0.0, mean = 0.0;
    for (const BenchSample& s : samples) {
      nodes += static_cast<double>(s.nodes);
      mean += s.seconds;
    }
    nodes /= static_cast<double>(samples.size());
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (const BenchSample& s : samples) var += (s.seconds - mean) * (s.seconds - mean);
    const double stddev =
        samples.size() > 1 ? std::sqrt(var / static_cast<double>(samples.size() - 1)) : 0.0;
    csv += std::to_string(group) + "," + fmt17(nodes) + "," + fmt17(mean) + "," + fmt17(stddev) +
           "\n";
  }
  return csv;
}

int cmd_bench(const std::string& mode, std::vector<std::size_t> sizes, int count_per_size,
              int cuts, std::uint64_t seed, int jobs, const std::string& shape_name,
              double spread, const std::string& out_path) {
  const auto shape = ft::fuzz_shape_from_string(shape_name);
  if (!shape) throw ft::Error("unknown fuzzification shape '" + shape_name + "'");
  constexpr std::size_t kGroupWidth = 80;  // trees belong to group ceil(|V|/80)

  std::map<std::size_t, std::vector<BenchSample>> groups;
  std::vector<std::pair<std::size_t, std::uint64_t>> runs;  // (target size, seed)
  if (sizes.empty()) {
    if (mode == "tree") {
      // one tree of size >= k for every k up to 1000
      for (std::size_t k = 1; k <= 1000; ++k) runs.emplace_back(k, seed + k);
    } else {
      // 125 instances around the 239-node published average
      for (std::size_t i = 0; i < 125; ++i) {
        runs.emplace_back(150 + (i % 25) * 6, seed + i);
      }
    }
  } else {
    for (std::size_t s : sizes) {
      for (int r = 0; r < count_per_size; ++r) {
        runs.emplace_back(s, seed + static_cast<std::uint64_t>(r) * 7919 + s);
      }
    }
  }

  for (const auto& [target, run_seed] : runs) {
    ft::GenConfig cfg;
    cfg.seed = run_seed;
    cfg.target_size = target;
    cfg.dag = mode == "dag";
    cfg.dag_sharing = cfg.dag ? 0.25 : 0.0;
    cfg.fuzz_shape = *shape;
    cfg.fuzz_spread = spread;
    const ft::WeightedTree wt = ft::generate(cfg);
    const ft::FuzzyProbVector fp =
        ft::fuzzify(wt.probs, cfg.fuzz_shape, cfg.fuzz_spread, cuts, run_seed ^ 0x5bf03635);

    double elapsed;
    if (mode == "tree") {
      const double t0 = now_s();
      const ft::AlphaFuzzy cutsv = ft::bottom_up_fuzzy(wt.tree, fp.entries());
      elapsed = now_s() - t0;
      (void)cutsv;
    } else {
      ft::LiftOptions opts;
      opts.jobs = jobs;
      const double t0 = now_s();
      const ft::AnalysisResult r =
          ft::fuzzy_unreliability(wt.tree, fp, ft::EngineChoice::Bdd, opts);
      elapsed = now_s() - t0;
      (void)r;
    }
    const std::size_t group = (wt.tree.node_count() + kGroupWidth - 1) / kGroupWidth;
    groups[group].push_back(BenchSample{wt.tree.node_count(), elapsed});
  }
  emit(out_path, bench_csv(groups));
  return 0;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

int cmd_curve(const std::string& input, const std::string& interp_name,
              const std::string& out_path) {
  const ft::AnalysisResult result = ft::result_from_json(ft::read_text_file(input));
  ft::CurveInterp interp;
  if (interp_name == "step") {
    interp = ft::CurveInterp::Step;
  } else if (interp_name == "linear") {
    interp = ft::CurveInterp::Linear;
  } else {
    throw ft::Error("unknown interpolation '" + interp_name + "' (use step or linear)");
  }
  emit(out_path, ft::curve_csv(result.cuts(), interp));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy fault tree analysis in the alpha-cut representation"};
  app.require_subcommand(1);

  // analyze
  std::string in_file, out_path = "-", engine_name = "auto";
  int cuts = 10, jobs = 0;
  bool modular = false;
  std::size_t node_budget = 0;
  auto* analyze = app.add_subcommand("analyze", "Compute the fuzzy unreliability of a fault tree");
  analyze->add_option("ft", in_file, "fault tree file")->required();
  analyze->add_option("--engine", engine_name, "bottomup|bdd|bruteforce|auto")
      ->default_val("auto");
  analyze->add_option("--cuts", cuts, "number of alpha-cuts")->default_val(10);
  analyze->add_option("--out", out_path, "result file ('-' = stdout)")->default_val("-");
  analyze->add_option("--jobs", jobs, "worker cap for the endpoint fan-out (0 = all cores)")
      ->envname("FUZZTREE_JOBS")
      ->default_val(0);
  analyze->add_flag("--modular", modular, "solve independent subtrees separately (BDD engine)");
  analyze->add_option("--budget", node_budget, "abort BDD builds beyond this many nodes");

  // oracle
  std::string o_in, o_out = "-";
  int o_cuts = 10;
  auto* oracle = app.add_subcommand(
      "oracle", "Size-capped reference results (brute force and discrete sup-min)");
  oracle->add_option("ft", o_in, "fault tree file")->required();
  oracle->add_option("--cuts", o_cuts, "number of alpha-cuts")->default_val(10);
  oracle->add_option("--out", o_out, "output file ('-' = stdout)")->default_val("-");

  // gen
  std::uint64_t g_seed = 0;
  std::size_t g_size = 100;
  bool g_dag = false;
  double g_sharing = 0.25, g_bias = 0.5, g_spread = 0.2;
  std::string g_fuzz, g_out = "-";
  auto* gen = app.add_subcommand("gen", "Generate a synthetic fault tree");
  gen->add_option("--seed", g_seed, "RNG seed")->default_val(0);
  gen->add_option("--size", g_size, "minimum node count")->default_val(100);
  gen->add_flag("--dag", g_dag, "allow shared subtrees (DAG-structured output)");
  gen->add_option("--sharing", g_sharing, "fraction of substitutions rewired to existing subtrees")
      ->default_val(0.25);
  gen->add_option("--bias", g_bias, "probability of horizontal over vertical combination")
      ->default_val(0.5);
  gen->add_option("--fuzz", g_fuzz, "triangular|trapezoidal|trunc-gaussian|mixed");
  gen->add_option("--spread", g_spread, "relative half-width of the fuzzification")
      ->default_val(0.2);
  gen->add_option("--out", g_out, "output file ('-' = stdout)")->default_val("-");

  // bench
  std::string b_mode = "tree", b_shape = "triangular", b_out = "-";
  std::vector<std::size_t> b_sizes;
  int b_count = 3, b_cuts = 10, b_jobs = 0;
  std::uint64_t b_seed = 1;
  double b_spread = 0.2;
  auto* bench = app.add_subcommand("bench", "Runtime benchmark over generated fault trees");
  bench->add_option("--mode", b_mode, "tree|dag")->default_val("tree");
  bench->add_option("--sizes", b_sizes, "explicit target sizes (default: paper-style sweep)")
      ->delimiter(',');
  bench->add_option("--count-per-size", b_count, "instances per explicit size")->default_val(3);
  bench->add_option("--cuts", b_cuts, "number of alpha-cuts")->default_val(10);
  bench->add_option("--seed", b_seed, "RNG seed")->default_val(1);
  bench->add_option("--jobs", b_jobs, "worker cap (0 = all cores)")
      ->envname("FUZZTREE_JOBS")
      ->default_val(0);
  bench->add_option("--shape", b_shape, "fuzzification shape")->default_val("triangular");
  bench->add_option("--spread", b_spread, "fuzzification spread")->default_val(0.2);
  bench->add_option("--out", b_out, "CSV output ('-' = stdout)")->default_val("-");

  // curve
  std::string c_in, c_interp = "step", c_out = "-";
  auto* curve = app.add_subcommand("curve", "Emit the membership curve of a result as CSV");
  curve->add_option("result", c_in, "result file from analyze")->required();
  curve->add_option("--interpolate", c_interp, "step|linear")->default_val("step");
  curve->add_option("--out", c_out, "CSV output ('-' = stdout)")->default_val("-");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) {
      return cmd_analyze(in_file, engine_name, cuts, out_path, jobs, modular, node_budget);
    }
    if (app.got_subcommand(oracle)) return cmd_oracle(o_in, o_cuts, o_out);
    if (app.got_subcommand(gen)) {
      return cmd_gen(g_seed, g_size, g_dag, g_sharing, g_bias, g_fuzz, g_spread, g_out);
    }
    if (app.got_subcommand(bench)) {
      return cmd_bench(b_mode, b_sizes, b_count, b_cuts, b_seed, b_jobs, b_shape, b_spread, b_out);
    }
    if (app.got_subcommand(curve)) return cmd_curve(c_in, c_interp, c_out);
  } catch (const ft::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
