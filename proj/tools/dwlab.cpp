// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
//
// dwlab: scans and experiments for damped/absorbing mode operators on model
// surfaces of revolution.
//
//   dwlab run <preset> [--config file] [--out dir] [--threads k]
//   dwlab report <dir>
//   dwlab dump-geometry [--config file] [--samples n] [--out file]
//   dwlab dump-operator [--config file] --h <h> --n <mode> [--kind k] [--re-z/--im-z] [--out file]
//
// Exit code is nonzero iff any preset assertion fails. DWLAB_THREADS caps the
// worker count when --threads is not given.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dwlab/csv.hpp"
#include "dwlab/errors.hpp"
#include "dwlab/presets.hpp"
#include "dwlab/report.hpp"
#include "dwlab/resolvent.hpp"

namespace {

dwlab::ExperimentConfig load_config(const std::string& presetForDefaults,
                                    const std::string& configPath, const std::string& outDir,
                                    int threads) {
  dwlab::ExperimentConfig cfg = presetForDefaults.empty()
                                    ? dwlab::ExperimentConfig{}
                                    : dwlab::default_config_for(presetForDefaults);
  if (!configPath.empty()) {
    std::ifstream in(configPath);
    if (!in) throw dwlab::Error("invalid-config", "cannot read '" + configPath + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    cfg = dwlab::ExperimentConfig::fromJsonText(buf.str());
  }
  if (!outDir.empty()) cfg.outputDir = outDir;
  if (threads > 0) cfg.threads = threads;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for damped-wave resolvent scaling"};
  app.set_help_flag("--help", "print help");  // keep --h free for the operator dump
  app.require_subcommand(1);

  std::string preset, configPath, outDir, dumpPath, kindName = "damped";
  int threads = 0, samples = 512, mode = 0;
  double hval = 0.0625, reZ = 0.0, imZ = 0.0;

  CLI::App* run = app.add_subcommand("run", "run a scaling-law preset pipeline");
  run->add_option("preset", preset, "one of: gcc normhyp degenerate-m transfer cutoff-gain pressure strip decay")
      ->required();
  run->add_option("--config", configPath, "JSON experiment configuration");
  run->add_option("--out", outDir, "output directory (overrides config)");
  run->add_option("--threads", threads, "worker threads (0: DWLAB_THREADS or hardware)");

  std::string reportDir;
  CLI::App* report = app.add_subcommand("report", "summarize manifests in a directory");
  report->add_option("dir", reportDir, "directory holding manifest_*.json")->required();

  CLI::App* dumpGeo = app.add_subcommand("dump-geometry", "sample (x, A, A', a, chi, B1, phi)");
  dumpGeo->add_option("--config", configPath, "JSON experiment configuration");
  dumpGeo->add_option("--samples", samples, "number of x samples");
  dumpGeo->add_option("--out", dumpPath, "output CSV (default stdout)");

  CLI::App* dumpOp = app.add_subcommand("dump-operator", "triplet dump of a mode operator");
  dumpOp->add_option("--config", configPath, "JSON experiment configuration");
  dumpOp->add_option("--h", hval, "semiclassical parameter");
  dumpOp->add_option("--n", mode, "angular mode");
  dumpOp->add_option("--kind", kindName, "damped | absorbing | modified");
  dumpOp->add_option("--re-z", reZ, "Re z (modified kind)");
  dumpOp->add_option("--im-z", imZ, "Im z (modified kind)");
  dumpOp->add_option("--out", dumpPath, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const dwlab::ExperimentConfig cfg = load_config(preset, configPath, outDir, threads);
      const dwlab::RunManifest manifest = dwlab::run_preset(preset, cfg);
      std::cout << dwlab::emit_report({manifest});
      return manifest.allPass() ? 0 : 1;
    }

    if (report->parsed()) {
      const auto manifests = dwlab::load_manifests(reportDir);
      std::cout << dwlab::emit_report(manifests);
      dwlab::write_report_csv(manifests, reportDir + "/report.csv");
      for (const auto& m : manifests)
        if (!m.allPass()) return 1;
      return 0;
    }

    if (dumpGeo->parsed()) {
      const dwlab::ExperimentConfig cfg = load_config("", configPath, "", 0);
      const dwlab::WarpedSurface surface = cfg.buildSurface();
      const dwlab::ProfileSet ps = cfg.buildProfiles();
      std::ostringstream rows;
      rows << "# schema_version=1\nx,A,Aprime,a,chi,B1,phi\n";
      for (int i = 0; i < samples; ++i) {
        const double x = -1.0 + 2.0 * i / samples;
        const dwlab::WarpEval we = surface.warp(x);
        rows << dwlab::format_double(x) << "," << dwlab::format_double(we.A) << ","
             << dwlab::format_double(we.dA) << "," << dwlab::format_double(ps.a(x)) << ","
             << dwlab::format_double(ps.chi(x)) << "," << dwlab::format_double(ps.B1(x)) << ","
             << dwlab::format_double(ps.phi(x)) << "\n";
      }
      if (dumpPath.empty()) {
        std::cout << rows.str();
      } else {
        std::ofstream out(dumpPath);
        out << rows.str();
      }
      return 0;
    }

    if (dumpOp->parsed()) {
      const dwlab::ExperimentConfig cfg = load_config("", configPath, "", 0);
      const dwlab::WarpedSurface surface = cfg.buildSurface();
      const dwlab::ProfileSet ps = cfg.buildProfiles();
      const dwlab::OperatorKind kind = dwlab::operator_kind_from_string(kindName);
      const dwlab::Grid1D grid = dwlab::build_grid(surface, cfg.resolutionFor(hval));
      const dwlab::Profile& coeff =
          kind == dwlab::OperatorKind::Absorbing ? ps.W : ps.a;
      const dwlab::ModeOperator op(surface, grid, coeff, hval, mode, kind,
                                   dwlab::Complex(reZ, imZ));
      std::ostringstream rows;
      rows << "# schema_version=1\nrow,col,re,im\n";
      for (const auto& [r, c, re, im] : op.triplets()) {
        rows << r << "," << c << "," << dwlab::format_double(re) << ","
             << dwlab::format_double(im) << "\n";
      }
      if (dumpPath.empty()) {
        std::cout << rows.str();
      } else {
        std::ofstream out(dumpPath);
        out << rows.str();
      }
      return 0;
    }
  } catch (const dwlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
