#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "igabem/checks.hpp"
#include "igabem/errors.hpp"
#include "igabem/experiment.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

void print_level(const igabem::LevelResult& r) {
  std::fprintf(stderr, "level %d: ndof %d (%d x %d) err_l2 %.4e", r.level, r.ndof, r.ndof1, r.ndof2, r.err_l2);
  if (r.err_inf) std::fprintf(stderr, " err_inf %.4e", *r.err_inf);
  if (r.eoc) std::fprintf(stderr, " eoc %.3f", *r.eoc);
  if (r.cond) std::fprintf(stderr, " cond %.3e", *r.cond);
  if (r.min_eig) std::fprintf(stderr, " min Re(eig) %.3e min eig sym %.3e", *r.min_eig, *r.min_sym_eig);
  std::fprintf(stderr, " [%.0f ms + %.0f ms; entries %ld singular, %ld near, %ld regular]\n", r.assembly_ms,
               r.solve_ms, r.counters.singular, r.counters.near_singular, r.counters.regular);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeometric collocation BEM for exterior Laplace problems"};
  app.require_subcommand(1);
  int threads = 0;
  std::uint64_t seed = 20220322;
  app.add_option("--threads", threads, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "Seed for sampling-based checks");

  auto* run = app.add_subcommand("run", "Run a refinement study from an experiment config");
  std::string config_path, out_path;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "CSV output path (overrides the config; '-' for stdout)");

  auto* check = app.add_subcommand("check", "Run an oracle self-check suite");
  std::string suite;
  check->add_option("suite", suite, "moments | qi | product | geometry")
      ->required()
      ->check(CLI::IsMember(igabem::check_suites()));

  CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (*run) {
      auto config = igabem::load_experiment(config_path);
      const bool to_stdout = out_path == "-";
      if (!out_path.empty()) config.output = to_stdout ? "" : out_path;
      const auto rows = igabem::run_experiment(config, print_level);
      if (to_stdout || config.output.empty()) igabem::write_csv(std::cout, rows);
      return 0;
    }
    bool ok = true;
    for (const auto& r : igabem::run_check(suite, seed)) {
      std::printf("%-48s max dev %.3e (tol %.0e) %s\n", r.name.c_str(), r.deviation, r.tolerance,
                  r.pass() ? "PASS" : "FAIL");
      ok = ok && r.pass();
    }
    return ok ? 0 : 1;
  } catch (const igabem::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
