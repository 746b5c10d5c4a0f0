// ordtest: ordered multiple-testing procedures, asymptotic power analysis,
// and the Monte Carlo harness behind the fig1/fig2/fig3 tables.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ordtest/asymptotic.hpp"
#include "ordtest/errors.hpp"
#include "ordtest/io.hpp"
#include "ordtest/procedures.hpp"
#include "ordtest/simulation.hpp"
#include "ordtest/vct_model.hpp"

namespace fs = std::filesystem;
using namespace ordtest;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;

/// Relative output paths are placed under $ORDTEST_OUTPUT_DIR when set.
fs::path resolve_output(const std::string& out) {
  fs::path path(out);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("ORDTEST_OUTPUT_DIR")) {
      path = fs::path(dir) / path;
    }
  }
  return path;
}

void write_file(const fs::path& path,
                const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  body(os);
  os.flush();
  if (!os) throw IoError("error writing '" + path.string() + "'");
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

AccumulationFn make_accumulation(const std::string& name, double c) {
  if (name == "forwardstop") return AccumulationFn::forward_stop();
  if (name == "seqstep") return AccumulationFn::seq_step(c);
  if (name == "hingeexp") return AccumulationFn::hinge_exp(c);
  throw std::invalid_argument("unknown accumulation function '" + name +
                              "' (forwardstop, seqstep, hingeexp)");
}

// ---- reject ----

struct RejectArgs {
  std::string method;
  double q = 0.0;
  double s = 0.0;
  double lambda = 0.0;
  bool s_set = false, lambda_set = false;
  std::string accumulation = "forwardstop";
  double c = 2.0;
  std::string input;
  std::string output;
  std::string format = "csv";
};

ProcedureSpec spec_from_args(const RejectArgs& args) {
  const ProcedureKind kind = procedure_kind_from_name(args.method);
  switch (kind) {
    case ProcedureKind::BH:
      return ProcedureSpec::bh(args.q);
    case ProcedureKind::StoreyBH:
      if (!args.lambda_set) throw std::invalid_argument("storey_bh needs --lambda");
      return ProcedureSpec::storey_bh(args.q, args.lambda);
    case ProcedureKind::SelectiveSeqStep:
      if (!args.s_set) throw std::invalid_argument("selective_seqstep needs --s");
      return ProcedureSpec::selective_seqstep(args.q, args.s);
    case ProcedureKind::AdaptiveSeqStep:
      if (!args.s_set || !args.lambda_set) {
        throw std::invalid_argument("adaptive_seqstep needs --s and --lambda");
      }
      return ProcedureSpec::adaptive_seqstep(args.q, args.s, args.lambda);
    case ProcedureKind::AccumulationTest:
      return ProcedureSpec::accumulation_test(
          args.q, make_accumulation(args.accumulation, args.c));
  }
  throw std::invalid_argument("unknown method");
}

void run_reject(const RejectArgs& args) {
  const ProcedureSpec spec = spec_from_args(args);
  const PValueSequence pvals = parse_pvalue_file(args.input);
  const RejectionOutcome outcome = run_procedure(pvals, spec);

  const auto write_table = [&](std::ostream& os) {
    if (args.format == "json") {
      write_rejection_json(os, pvals, outcome);
    } else {
      write_rejection_csv(os, pvals, outcome);
    }
  };
  const std::string summary = "k_hat=" + std::to_string(outcome.k_hat) +
                              " rejections=" +
                              std::to_string(outcome.num_rejected());
  if (args.output.empty()) {
    write_table(std::cout);
    std::cerr << summary << '\n';
  } else {
    const fs::path path = resolve_output(args.output);
    write_file(path, write_table);
    std::cout << summary << '\n';
    std::cout << "wrote " << path.string() << '\n';
  }
}

// ---- power ----

struct PowerArgs {
  std::string method;
  double q = 0.0;
  double s = 0.0;
  double lambda = 0.5;
  bool s_set = false;
  double nu = 0.0;
  bool nu_set = false;
  std::string accumulation;
  double c = 2.0;
  double gamma = 0.0, b = 0.0, mu = 0.0;
  bool b_set = false;
  std::string sweep;
  std::size_t sweep_points = 100;
  std::string output;
};

void power_header(std::ostream& os) {
  os << "# schema=ordtest.power.v1\n";
  os << "method,q,s,lambda,nu,gamma,b,mu,chi,t_star,asym_power\n";
}

void power_row(std::ostream& os, const PowerArgs& args, double b,
               const AsymptoticResult& result) {
  const bool at = args.method == "at";
  os << args.method << ',' << format_double(args.q) << ','
     << (at ? "" : format_double(result.method.s)) << ','
     << (args.method == "as" ? format_double(args.lambda) : "") << ','
     << (at ? format_double(result.method.nu) : "") << ','
     << format_double(args.gamma) << ',' << format_double(b) << ','
     << format_double(args.mu) << ',' << format_double(result.chi) << ','
     << format_double(result.t_star) << ',' << format_double(result.power)
     << '\n';
}

void run_power(const PowerArgs& args) {
  const double top = b_max(args.gamma);
  if (args.b_set && args.b > top) {
    throw std::invalid_argument(
        "b = " + format_double(args.b) + " exceeds b_max(gamma=" +
        format_double(args.gamma) + ") = " + format_double(top));
  }
  if (!args.b_set && args.sweep.empty()) {
    throw std::invalid_argument("power needs --b or --sweep b");
  }
  if (!args.sweep.empty() && args.sweep != "b") {
    throw std::invalid_argument("only --sweep b is supported");
  }

  double nu = args.nu;
  if (args.method == "at" && !args.nu_set) {
    if (args.accumulation.empty()) {
      throw std::invalid_argument("power --method at needs --nu or --accumulation");
    }
    nu = nu_of_h(make_accumulation(args.accumulation, args.c),
                 AlternativeCdf(args.mu));
  }

  const auto evaluate = [&](double b) {
    const VctParams params{args.gamma, b, args.mu, 1};
    if (args.method == "as") {
      const double s = args.s_set ? args.s : args.q;
      return power_as(s, args.lambda, args.q, params);
    }
    if (args.method == "ss") {
      const double s = args.s_set ? args.s : args.q;
      return power_ss(s, args.q, params);
    }
    if (args.method == "at") return power_at(nu, args.q, params);
    throw std::invalid_argument("unknown method '" + args.method +
                                "' (as, ss, at)");
  };

  const auto write_table = [&](std::ostream& os) {
    power_header(os);
    if (args.sweep.empty()) {
      power_row(os, args, args.b, evaluate(args.b));
    } else {
      const double lo = 0.01;
      for (std::size_t i = 1; i <= args.sweep_points; ++i) {
        const double b =
            lo * std::pow(top / lo, static_cast<double>(i) /
                                        static_cast<double>(args.sweep_points));
        power_row(os, args, b, evaluate(b));
      }
    }
  };
  if (args.output.empty()) {
    write_table(std::cout);
  } else {
    const fs::path path = resolve_output(args.output);
    write_file(path, write_table);
    std::cout << "wrote " << path.string() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordered multiple-testing procedures with finite-sample FDR "
               "control, plus asymptotic power analysis and a simulation "
               "harness"};
  app.require_subcommand(1);

  // reject
  RejectArgs reject;
  CLI::App* reject_cmd =
      app.add_subcommand("reject", "Run a procedure on an ordered p-value file");
  reject_cmd->add_option("--method", reject.method, "bh|sbh|ss|as|at")->required();
  reject_cmd->add_option("--q", reject.q, "target FDR level")->required();
  reject_cmd->add_option("--s", reject.s, "rejection threshold (ss/as)")
      ->each([&reject](const std::string&) { reject.s_set = true; });
  reject_cmd->add_option("--lambda", reject.lambda, "null-count threshold (as/sbh)")
      ->each([&reject](const std::string&) { reject.lambda_set = true; });
  reject_cmd->add_option("--accumulation", reject.accumulation,
                         "forwardstop|seqstep|hingeexp (at)");
  reject_cmd->add_option("--C", reject.c, "seqstep/hingeexp parameter");
  reject_cmd->add_option("--in", reject.input, "p-value file")->required();
  reject_cmd->add_option("--out", reject.output, "output table (default stdout)");
  reject_cmd->add_option("--format", reject.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  // power
  PowerArgs power;
  CLI::App* power_cmd =
      app.add_subcommand("power", "Asymptotic power under the generative model");
  power_cmd->add_option("--method", power.method, "as|ss|at")->required();
  power_cmd->add_option("--q", power.q, "target FDR level")->required();
  power_cmd->add_option("--s", power.s, "rejection threshold (default q)")
      ->each([&power](const std::string&) { power.s_set = true; });
  power_cmd->add_option("--lambda", power.lambda, "null-count threshold (default 0.5)");
  power_cmd->add_option("--nu", power.nu, "E_{F1} h for --method at")
      ->each([&power](const std::string&) { power.nu_set = true; });
  power_cmd->add_option("--accumulation", power.accumulation,
                        "compute nu from this h (at)");
  power_cmd->add_option("--C", power.c, "seqstep/hingeexp parameter");
  power_cmd->add_option("--gamma", power.gamma, "signal density")->required();
  power_cmd->add_option("--b", power.b, "ordering quality")
      ->each([&power](const std::string&) { power.b_set = true; });
  power_cmd->add_option("--mu", power.mu, "signal strength")->required();
  power_cmd->add_option("--sweep", power.sweep, "sweep axis (only 'b')");
  power_cmd->add_option("--sweep-points", power.sweep_points, "grid size (default 100)");
  power_cmd->add_option("--out", power.output, "output table (default stdout)");

  // simulate
  std::string sim_config;
  std::size_t sim_reps = 0;
  std::uint64_t sim_seed = 0;
  bool sim_reps_set = false, sim_seed_set = false;
  std::string sim_out;
  unsigned sim_threads = 0;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo experiment from a JSON config");
  simulate_cmd->add_option("--config", sim_config, "experiment JSON")->required();
  simulate_cmd->add_option("--reps", sim_reps, "override n_reps")
      ->each([&sim_reps_set](const std::string&) { sim_reps_set = true; });
  simulate_cmd->add_option("--seed", sim_seed, "override base_seed")
      ->each([&sim_seed_set](const std::string&) { sim_seed_set = true; });
  simulate_cmd->add_option("--out", sim_out, "override output path");
  simulate_cmd->add_option("--threads", sim_threads,
                           "worker threads (0 = all cores)");

  // figure
  int fig_which = 0;
  std::size_t fig_n = 0, fig_reps = 0, fig_points = 0;
  std::uint64_t fig_seed = 0;
  bool fig_n_set = false, fig_reps_set = false, fig_points_set = false,
       fig_seed_set = false;
  std::string fig_out;
  unsigned fig_threads = 0;
  CLI::App* figure_cmd =
      app.add_subcommand("figure", "Emit the fig1/fig2/fig3 tables");
  figure_cmd->add_option("--which", fig_which, "1, 2 or 3")->required();
  figure_cmd->add_option("--n", fig_n, "sequence length override (fig 1)")
      ->each([&fig_n_set](const std::string&) { fig_n_set = true; });
  figure_cmd->add_option("--reps", fig_reps, "replicate override (fig 3)")
      ->each([&fig_reps_set](const std::string&) { fig_reps_set = true; });
  figure_cmd->add_option("--points", fig_points, "b-grid size override (fig 2)")
      ->each([&fig_points_set](const std::string&) { fig_points_set = true; });
  figure_cmd->add_option("--seed", fig_seed, "seed override (figs 1, 3)")
      ->each([&fig_seed_set](const std::string&) { fig_seed_set = true; });
  figure_cmd->add_option("--out", fig_out, "output path (default fig<which>.csv)");
  figure_cmd->add_option("--threads", fig_threads,
                         "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*reject_cmd) {
    return guarded([&] { run_reject(reject); });
  }
  if (*power_cmd) {
    return guarded([&] { run_power(power); });
  }
  if (*simulate_cmd) {
    return guarded([&] {
      ExperimentConfig config = load_experiment_config(sim_config);
      if (sim_reps_set) config.n_reps = sim_reps;
      if (sim_seed_set) config.base_seed = sim_seed;
      if (!sim_out.empty()) config.output = sim_out;
      const std::vector<SummaryRow> rows = run_experiment(config, sim_threads);
      if (config.output.empty()) {
        write_summary_csv(std::cout, rows);
      } else {
        const fs::path path = resolve_output(config.output);
        write_file(path, [&](std::ostream& os) { write_summary_csv(os, rows); });
        std::cout << "wrote " << path.string() << " (" << rows.size()
                  << " rows)\n";
      }
    });
  }
  if (*figure_cmd) {
    return guarded([&] {
      const std::string default_out = "fig" + std::to_string(fig_which) + ".csv";
      const fs::path path = resolve_output(fig_out.empty() ? default_out : fig_out);
      std::size_t rows = 0;
      if (fig_which == 1) {
        Fig1Config cfg;
        if (fig_n_set) cfg.n = fig_n;
        if (fig_seed_set) cfg.seed = fig_seed;
        const PathVsLimitTable table = fig1_experiment(cfg);
        write_file(path, [&](std::ostream& os) { write_fig1_csv(os, table); });
        rows = table.points.size();
      } else if (fig_which == 2) {
        Fig2Config cfg;
        if (fig_points_set) cfg.b_points = fig_points;
        const auto table = fig2_experiment(cfg);
        write_file(path, [&](std::ostream& os) { write_fig2_csv(os, table); });
        rows = table.size();
      } else if (fig_which == 3) {
        Fig3Config cfg;
        if (fig_reps_set) cfg.reps = fig_reps;
        if (fig_seed_set) cfg.base_seed = fig_seed;
        const auto table = fig3_experiment(cfg, fig_threads);
        write_file(path, [&](std::ostream& os) { write_fig3_csv(os, table); });
        rows = table.size();
      } else {
        throw std::invalid_argument("unknown figure id " +
                                    std::to_string(fig_which) + " (1, 2 or 3)");
      }
      std::cout << "wrote " << path.string() << " (" << rows << " rows)\n";
    });
  }
  return kExitUsage;
}
