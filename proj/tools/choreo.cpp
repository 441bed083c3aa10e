// choreo: census, solve, verify, plot and sweep for simple choreographies.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "choreo/cli_io.hpp"

namespace cli = choreo::cli;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find, classify and verify simple choreographies of the planar equal-mass N-body problem"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  int n = 0;
  bool list = false, hn_only = false;
  auto* census = app.add_subcommand("census", "Count and list sign-vector classes");
  census->add_option("--n", n, "Number of bodies")->required()->check(CLI::Range(3, choreo::kMaxEnumerationBodies));
  census->add_flag("--list", list, "List every class with its members");
  census->add_flag("--hn-only", hn_only, "List only H_N-admissible classes");

  std::string omega_text, out_path, in_path;
  bool hn = false, csv = false;
  int m = choreo::kDefaultSamplesPerUnit, seeds = 3, refine_m = 0;
  double alpha = 1.0;
  std::uint64_t seed_rng = 0;
  auto* solve = app.add_subcommand("solve", "Minimize the action in one sign-vector class");
  solve->add_option("--n", n, "Number of bodies")->required()->check(CLI::Range(3, 62));
  solve->add_option("--omega", omega_text, "Sign vector s1,...,s(N-1)")->required();
  solve->add_flag("--hn", hn, "Impose the H_N symmetry");
  solve->add_option("--m", m, "Samples per unit time (even)")->check(CLI::PositiveNumber);
  solve->add_option("--alpha", alpha, "Potential exponent")->check(CLI::PositiveNumber);
  solve->add_option("--seeds", seeds, "Number of multistart seeds")->check(CLI::PositiveNumber);
  solve->add_option("--seed-rng", seed_rng, "Random seed for seed jitter");
  solve->add_option("--refine", refine_m, "Refine the best run to this many samples per unit");
  solve->add_option("--out", out_path, "Result JSON path (default: standard output)");
  solve->add_flag("--csv", csv, "Also write a t,body,x,y trajectory next to --out");

  int m_check = 0;
  auto* verify = app.add_subcommand("verify", "Re-verify a result file");
  verify->add_option("--in", in_path, "Result JSON")->required();
  verify->add_option("--m-check", m_check, "Refine to this resolution and compare crossing structure");

  std::string svg_path;
  auto* plot = app.add_subcommand("plot", "Render a result file as SVG");
  plot->add_option("--in", in_path, "Result JSON")->required();
  plot->add_option("--out", svg_path, "SVG path")->required();

  std::string out_dir = ".";
  auto* sweep = app.add_subcommand("sweep", "Solve one representative of every class");
  sweep->add_option("--n", n, "Number of bodies")->required()->check(CLI::Range(3, cli::kSweepMaxBodies));
  sweep->add_flag("--hn-only", hn_only, "Only H_N-admissible classes, solved in H_N mode");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--m", m, "Samples per unit time (even)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kSuccess : cli::kUsage;
  }

  try {
    if (*census) {
      std::cout << cli::dump_json(cli::census_json(n, list, hn_only));
      return cli::kSuccess;
    }

    if (*solve) {
      if (csv && out_path.empty()) throw std::invalid_argument("--csv requires --out");
      cli::SolveRequest request{choreo::SolveConfig{.omega = choreo::SignVector::parse(n, omega_text)}};
      request.config.symmetry_mode = hn ? choreo::SymmetryMode::HN : choreo::SymmetryMode::DN;
      request.config.samples_per_unit = m;
      request.config.alpha = alpha;
      request.config.seed_count = seeds;
      request.config.random_seed = seed_rng;
      if (refine_m > 0) request.refine_to = refine_m;
      request.threads = cli::threads_from_env();
      request.config.validate();
      const cli::SolveOutcome outcome = cli::run_solve(request);
      const std::string text = cli::dump_json(outcome.document);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        write_text(out_path, text);
        if (csv) {
          const auto path = choreo::path_from_json(outcome.document.at("path"));
          write_text(std::filesystem::path(out_path).replace_extension(".csv").string(), cli::trajectory_csv(path));
        }
      }
      if (outcome.exit_code != cli::kSuccess) {
        std::cerr << "solve failed: " << outcome.document.at("failure_reason").get<std::string>() << "\n";
      }
      return outcome.exit_code;
    }

    if (*verify) {
      const json doc = read_json(in_path);
      std::optional<int> check;
      if (m_check > 0) check = m_check;
      const cli::SolveOutcome outcome = cli::run_verify(doc, check);
      std::cout << cli::dump_json(outcome.document);
      return outcome.exit_code;
    }

    if (*plot) {
      write_text(svg_path, cli::emit_plot(read_json(in_path)));
      return cli::kSuccess;
    }

    if (*sweep) {
      cli::SweepRequest request{choreo::SolveConfig{.omega = choreo::SignVector::from_mask(n, 0)}};
      request.base.samples_per_unit = m;
      request.hn_only = hn_only;
      request.out_dir = out_dir;
      request.threads = cli::threads_from_env();
      const cli::SolveOutcome outcome = cli::run_sweep(request);
      std::cout << cli::dump_json(outcome.document);
      return outcome.exit_code;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kFailure;
  }
  return cli::kUsage;
}
