#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dnizk/experiment.hpp"

using dnizk::experiment::Spec;
using dnizk::experiment::SpecError;

namespace {

struct Output {
  std::string path;
  std::string format;
};

void add_common(CLI::App* cmd, Spec& spec, Output& out) {
  cmd->add_option("--protocol", spec.protocol, "coloring | triangle | universal");
  cmd->add_option("--graph", spec.graph,
                  "k2, k222, planted, clique, cycle, star, bipartite, "
                  "with-triangle, or file:<path>");
  cmd->add_option("--colors", spec.colors, "palette size c");
  cmd->add_option("--soundness", spec.soundness,
                  "target soundness; narrows the prime window");
  cmd->add_option("--equality-t", spec.equality_t, "compared code coordinates");
  cmd->add_option("--trials", spec.trials, "sampled runs");
  cmd->add_option("--seed", spec.seed, "root seed; every draw derives from it");
  cmd->add_flag("--exact", spec.exact, "enumerate every challenge point");
  cmd->add_option("--id-mode", spec.id_mode, "ids | idfree");
  cmd->add_flag("--private-randomness", spec.private_randomness,
                "per-node challenges, two rounds");
  cmd->add_flag("--improved", spec.improved, "larger prime window, soundness < 1/n");
  cmd->add_option("--q", spec.q_override, "prime modulus override");
  cmd->add_option("--strategy", spec.strategy,
                  "honest, wrong-witness, zero-forcing, inconsistent-matrix, "
                  "missing-edge");
  cmd->add_option("--out", out.path, "write the report here instead of stdout");
  cmd->add_option("--format", out.format, "json | csv | text");
}

void check_format(const std::string& requested, const std::string& native) {
  if (!requested.empty() && requested != native)
    throw SpecError("this command emits " + native);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"protocol runner: certificates, local verification, shared randomness"};
  app.require_subcommand(1);

  Spec rspec, zspec, sspec, gspec;
  Output rout, zout, sout, gout;

  CLI::App* run = app.add_subcommand("run", "execute a protocol, report acceptance");
  add_common(run, rspec, rout);
  run->add_option("--n", rspec.n, "node count for generators");
  run->add_option("--alpha", rspec.alpha, "identifier split width");

  CLI::App* zk = app.add_subcommand("zk-test", "compare real and simulated views");
  add_common(zk, zspec, zout);
  zk->add_option("--n", zspec.n, "node count for generators");
  zk->add_option("--alpha", zspec.alpha, "identifier split width");

  CLI::App* sweep = app.add_subcommand("sweep", "grid of parameter cells, one CSV row each");
  add_common(sweep, sspec, sout);
  sweep->add_option("--n", sspec.n_list, "node counts")->delimiter(',');
  sweep->add_option("--alpha", sspec.alpha_list, "split widths")->delimiter(',');
  sweep->add_option("--colors-list", sspec.colors_list, "palette sizes")->delimiter(',');
  sweep->add_option("--soundness-list", sspec.soundness_list, "soundness targets")
      ->delimiter(',');

  CLI::App* gen = app.add_subcommand("gen-graph", "emit a graph file");
  add_common(gen, gspec, gout);
  gen->add_option("--n", gspec.n, "node count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string text;
    Output out;
    if (run->parsed()) {
      rspec.command = "run";
      check_format(rout.format, "json");
      text = dnizk::experiment::cmd_run(rspec);
      out = rout;
    } else if (zk->parsed()) {
      zspec.command = "zk-test";
      check_format(zout.format, "json");
      text = dnizk::experiment::cmd_zk_test(zspec);
      out = zout;
    } else if (sweep->parsed()) {
      sspec.command = "sweep";
      check_format(sout.format, "csv");
      text = dnizk::experiment::cmd_sweep(sspec);
      out = sout;
    } else {
      gspec.command = "gen-graph";
      check_format(gout.format, "text");
      text = dnizk::experiment::cmd_gen_graph(gspec);
      out = gout;
    }
    if (out.path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out.path, std::ios::binary);
      if (!f) throw SpecError("cannot write " + out.path);
      f << text;
    }
    return 0;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
