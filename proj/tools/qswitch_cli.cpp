// qswitch: command-line front end for the switched-channel phase-estimation
// simulator.
//
//   qswitch fig2   [--steps N] [--xi RAD] [--out PATH] [--svg PATH] [--threads N]
//   qswitch sweep  --config PATH [--out PATH] [--threads N]
//   qswitch point  --noise KIND --p VAL --pc VAL --xi VAL --axis X,Y,Z --probe X,Y,Z --quantity NAME
//   qswitch verify

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qswitch/runner/config.hpp"
#include "qswitch/runner/emit.hpp"
#include "qswitch/runner/sweep.hpp"
#include "qswitch/verify.hpp"

namespace {

using namespace qswitch;
using namespace qswitch::runner;

void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  if (path.empty() || path == "-") {
    emit_csv(rows, std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  emit_csv(rows, out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vec3 parse_vec3_arg(const std::string& text, const char* what) {
  const auto v = runner::detail::parse_vec3(text);
  if (!v) throw std::invalid_argument(std::string("malformed ") + what + " '" + text + "', expected X,Y,Z");
  return *v;
}

int run_verify() {
  int failed = 0;
  auto report = [&](const std::vector<verify::CheckResult>& results) {
    for (const auto& r : results) {
      std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " -- " << r.detail << '\n';
      failed += r.passed ? 0 : 1;
    }
  };
  report(verify::run_acceptance());
  report(verify::run_invariants());
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed") << '\n';
  return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-switch phase estimation under qubit noise"};
  app.require_subcommand(1);

  std::size_t steps = 201;
  double fig2_xi = 0.628318530718;
  std::string out_path, svg_path;
  unsigned threads = 1;
  auto* fig2 = app.add_subcommand("fig2", "Control vs cascade QFI over the bit-flip noise level");
  fig2->add_option("--steps", steps, "number of p grid points")->check(CLI::Range(2, 1000000));
  fig2->add_option("--xi", fig2_xi, "phase in radians");
  fig2->add_option("--out", out_path, "CSV destination (default stdout)");
  fig2->add_option("--svg", svg_path, "optional SVG plot destination");
  fig2->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));

  std::string config_path;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep driven by a config file");
  sweep->add_option("--config", config_path, "config file")->required();
  sweep->add_option("--out", out_path, "CSV destination (default stdout)");
  sweep->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));

  std::string noise_name, axis_text, probe_text, quantity_name;
  double p = 0.0, pc = 0.5, xi = 0.0;
  auto* point = app.add_subcommand("point", "Evaluate one quantity at one parameter point");
  point->add_option("--noise", noise_name, "bitflip | phaseflip | bitphaseflip | depolarizing")->required();
  point->add_option("--p", p, "noise probability")->required();
  point->add_option("--pc", pc, "control weight p_c")->required();
  point->add_option("--xi", xi, "phase in radians")->required();
  point->add_option("--axis", axis_text, "rotation axis X,Y,Z")->required();
  point->add_option("--probe", probe_text, "probe Bloch vector X,Y,Z")->required();
  point->add_option("--quantity", quantity_name, "qc | fq_con | fq_cas | fc_con | fq_joint")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the oracle-equivalence and invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qswitch: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*fig2) {
      const auto rows = fig2_preset(steps, fig2_default_radii(), fig2_xi, threads);
      write_csv(rows, out_path);
      if (!svg_path.empty()) {
        std::vector<SvgSeries> series{{"fq_con", LineStyle::solid}};
        for (double r : fig2_default_radii()) series.push_back({cascade_column(r), LineStyle::dashed});
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) throw std::runtime_error("cannot open '" + svg_path + "' for writing");
        emit_svg(rows, "p", series, svg);
      }
    } else if (*sweep) {
      const SweepConfig cfg = parse_config(read_file(config_path));
      write_csv(run_sweep(cfg, threads), out_path);
    } else if (*point) {
      const auto noise = parse_noise_kind(noise_name);
      if (!noise) throw std::invalid_argument("unknown noise kind '" + noise_name + "'");
      const auto quantity = parse_quantity(quantity_name);
      if (!quantity) throw std::invalid_argument("unknown quantity '" + quantity_name + "'");
      const PointSpec pt{*noise, p, pc, xi, parse_vec3_arg(axis_text, "axis"), parse_vec3_arg(probe_text, "probe")};
      require_unit_axis(pt.axis);
      std::cout << format_number(evaluate(pt, *quantity)) << '\n';
    } else if (*verify_cmd) {
      return run_verify();
    }
  } catch (const std::exception& e) {
    std::cerr << "qswitch: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
