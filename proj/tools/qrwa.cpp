#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrwa/config.hpp"
#include "qrwa/results.hpp"
#include "qrwa/rng.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  unsigned threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool need_out) {
  cmd->add_option("--config", args.config_path, "scenario config file")
      ->required();
  auto* out = cmd->add_option("--out", args.out_dir, "output directory");
  if (need_out) out->required();
  cmd->add_option("--seed", args.seed_override,
                  "override the config's master seed");
  cmd->add_option("--threads", args.threads, "worker threads (default 1)");
}

qrwa::ScenarioConfig load_config(const CommonArgs& args) {
  qrwa::ScenarioConfig cfg = qrwa::parse_scenario_file(args.config_path);
  if (args.seed_override) cfg.seed = *args.seed_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qrwa: routing and wavelength assignment simulator for hybrid "
      "quantum-classical optical networks"};
  app.require_subcommand(1);

  CommonArgs sweep_args, mixed_args, run_args, cal_args;
  std::uint32_t run_requests = 0;
  double run_load = -1.0;

  // gen-topology works from inline flags (defaults mirror the shipped
  // config) or from --config's [topology] section.
  auto* gen = app.add_subcommand("gen-topology",
                                 "generate a random topology file");
  qrwa::TopologyConfig gen_topo;
  std::string gen_config_path, gen_out_file;
  std::uint64_t gen_seed = 1;
  gen->add_option("--config", gen_config_path,
                  "take topology parameters from this scenario config");
  gen->add_option("--nodes-min", gen_topo.n_nodes_min, "minimum node count");
  gen->add_option("--nodes-max", gen_topo.n_nodes_max, "maximum node count");
  gen->add_option("--link-prob", gen_topo.link_probability,
                  "link probability");
  gen->add_option("--len-min", gen_topo.length_min_km, "min link length, km");
  gen->add_option("--len-max", gen_topo.length_max_km, "max link length, km");
  gen->add_option("--min-degree", gen_topo.min_degree, "minimum node degree");
  gen->add_option("--wt", gen_topo.w_total, "total wavelengths per fiber");
  gen->add_option("--wq", gen_topo.w_quantum, "quantum-band wavelengths");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out_file, "output topology file")->required();

  auto* run = app.add_subcommand(
      "run", "single (request_count, classical_load) point");
  add_common(run, run_args, true);
  run->add_option("--requests", run_requests,
                  "request count (default: first configured)");
  run->add_option("--load", run_load,
                  "classical load fraction (default: configured)");

  auto* sweep = app.add_subcommand("sweep", "request-count load sweep");
  add_common(sweep, sweep_args, true);

  auto* mixed = app.add_subcommand("mixed-sweep",
                                   "mixed-traffic classical-load sweep");
  add_common(mixed, mixed_args, true);

  auto* cal = app.add_subcommand(
      "calibrate", "solve the noise model and print the plug-back check");
  cal->add_option("--config", cal_args.config_path, "scenario config file")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (!gen_config_path.empty())
        gen_topo = qrwa::parse_scenario_file(gen_config_path).topology;
      const qrwa::NetworkGraph graph =
          qrwa::generate_random_topology(gen_topo, gen_seed);
      qrwa::write_topology_file(graph, gen_out_file);
      std::printf("wrote %s: %u nodes, %u directed links\n",
                  gen_out_file.c_str(), graph.n_nodes(), graph.n_links());
    } else if (cal->parsed()) {
      const qrwa::ScenarioConfig cfg = load_config(cal_args);
      const qrwa::ChannelParams params =
          qrwa::make_channel_params(cfg.channel);
      const qrwa::Interferer shared{
          qrwa::required_launch_power(cfg.channel, qrwa::kCalibrationSharedKm),
          qrwa::kCalibrationSharedKm};
      std::printf("n_fixed  = %.17g\n", params.n_fixed);
      std::printf("gamma_nl = %.17g\n", params.gamma_nl);
      std::printf("plug-back isolated %g km: %.6f dB\n",
                  qrwa::kCalibrationIsolatedKm,
                  qrwa::qsnr_db(params, qrwa::kCalibrationIsolatedKm, {}));
      std::printf("plug-back shared %g km:   %.6f dB\n",
                  qrwa::kCalibrationSharedKm,
                  qrwa::qsnr_db(params, qrwa::kCalibrationSharedKm,
                                {&shared, 1}));
    } else if (sweep->parsed()) {
      const qrwa::ScenarioConfig cfg = load_config(sweep_args);
      qrwa::emit_results(qrwa::run_sweep(cfg, sweep_args.threads),
                         sweep_args.out_dir);
    } else if (mixed->parsed()) {
      const qrwa::ScenarioConfig cfg = load_config(mixed_args);
      qrwa::emit_results(qrwa::run_mixed_sweep(cfg, mixed_args.threads),
                         mixed_args.out_dir);
    } else if (run->parsed()) {
      qrwa::ScenarioConfig cfg = load_config(run_args);
      cfg.request_counts = {run_requests != 0 ? run_requests
                                              : cfg.request_counts.front()};
      if (run_load >= 0.0) cfg.classical_load = run_load;
      qrwa::emit_results(qrwa::run_sweep(cfg, run_args.threads),
                         run_args.out_dir);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
