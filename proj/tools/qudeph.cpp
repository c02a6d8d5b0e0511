// qudeph command line: run figure presets or scenario configs, sweep one
// parameter axis, and verify the Weyl symmetry of a coupling scenario.
//
// Exit codes: 0 success, 2 config validation error, 3 numerical-contract
// violation, 4 I/O failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qudeph/presets.hpp"
#include "qudeph/scenario.hpp"

namespace fs = std::filesystem;
using namespace qudeph;

namespace {

std::string load_config_text(const std::string& ref) {
  if (const std::string* builtin = find_builtin_preset(ref)) return *builtin;
  std::ifstream in(ref);
  if (!in) throw io_error("cannot open config '" + ref + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string default_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("QUDEPH_OUT_DIR")) return env;
  return ".";
}

void write_tables(const std::string& out_dir, const std::string& stem,
                  const std::vector<ResultTable>& tables) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + out_dir + "'");
  for (const auto& tab : tables) {
    const fs::path path = fs::path(out_dir) / (stem + "_" + tab.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out << tab.to_csv();
    if (!out) throw io_error("write failed for '" + path.string() + "'");
    std::cout << path.string() << "\n";
  }
}

RVec parse_value_list(const std::string& text) {
  RVec vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw validation_error("sweep.values: cannot parse '" + item + "'");
    }
  }
  if (vals.empty()) throw validation_error("sweep.values: empty entry");
  return vals;
}

struct Overrides {
  std::string t_max;
  int steps = 0;
  void apply(Scenario& s) const {
    if (!t_max.empty()) s.t_max = detail::parse_time(nlohmann::json(t_max), "t_max");
    if (steps > 0) s.steps = steps;
    s.validate();
  }
};

int run_main(const std::string& ref, const std::string& out_dir_flag, const Overrides& ov) {
  const ParsedConfig cfg = parse_config(load_config_text(ref));
  const std::string out_dir = default_out_dir(out_dir_flag);
  if (cfg.region_grid) {
    const auto& g = *cfg.region_grid;
    write_tables(out_dir, g.name, {region_grid_table(g.z_min, g.z_max, g.z_step)});
    return 0;
  }
  Scenario s = *cfg.scenario;
  ov.apply(s);
  write_tables(out_dir, s.name, run_scenario(s));
  return 0;
}

int sweep_main(const std::string& ref, const std::string& axis_name,
               const std::vector<std::string>& value_texts, const std::string& out_dir_flag,
               const Overrides& ov) {
  const ParsedConfig cfg = parse_config(load_config_text(ref));
  if (!cfg.scenario) throw validation_error("sweep: config must describe a scenario");
  Scenario base = *cfg.scenario;
  ov.apply(base);
  const SweepAxis axis = sweep_axis_from_string(axis_name);
  std::vector<RVec> values;
  for (const auto& t : value_texts) values.push_back(parse_value_list(t));
  if (!base.zeta_variants.empty()) {
    if (!base.zeta && !base.gammas) base.zeta = base.zeta_variants.front();
    base.zeta_variants.clear();
  }
  if (axis == SweepAxis::zeta) {
    base.gammas.reset();
    base.zeta.emplace(static_cast<size_t>(base.d - 1), 0.0);
  }
  write_tables(default_out_dir(out_dir_flag), base.name + "_sweep_" + axis_name,
               run_sweep(base, axis, values));
  return 0;
}

int verify_weyl_main(const std::string& ref, const std::string& root_text,
                     const std::string& out_dir_flag, const Overrides& ov) {
  const ParsedConfig cfg = parse_config(load_config_text(ref));
  if (!cfg.scenario) throw validation_error("verify-weyl: config must describe a scenario");
  Scenario s = *cfg.scenario;
  ov.apply(s);
  s.zeta_variants.clear();
  if (!s.zeta) throw validation_error("verify-weyl: scenario needs a zeta coupling");

  int ri = 1, rj = 3;
  if (!root_text.empty()) {
    const RVec pair = parse_value_list(root_text);
    if (pair.size() != 2) throw validation_error("--root: expects 'i,j'");
    ri = static_cast<int>(pair[0]);
    rj = static_cast<int>(pair[1]);
  }
  const CartanBasis basis(s.d);
  const WeylReport rep = verify_weyl(s, basis.root(ri, rj));

  std::cout << "weyl verification of '" << s.name << "' against root alpha_" << ri << rj << "\n"
            << "  transported zeta   = (" << format_number((*rep.transported.zeta)[0]) << ", "
            << format_number((*rep.transported.zeta)[1]) << ")\n"
            << "  transported weight = w" << rep.transported.weight_index << "\n"
            << "  max |dGP|          = " << format_number(rep.max_dev_gp) << " over "
            << rep.gp_points_compared << " points\n"
            << "  max |dC|           = " << format_number(rep.max_dev_concurrence) << "\n"
            << "  max |dpurity|      = " << format_number(rep.max_dev_purity) << "\n"
            << "  max |deigenvalue|  = " << format_number(rep.max_dev_eigenvalues) << "\n";
  write_tables(default_out_dir(out_dir_flag), s.name + "_weyl", {weyl_report_table(rep)});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-qudit dephasing scenarios: spectra, concurrence, geometric phase"};
  app.require_subcommand(1);

  std::string ref, out_dir, axis, root_text;
  std::vector<std::string> values;
  Overrides ov;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", ref, "preset name or JSON config path")->required();
    cmd->add_option("--out-dir", out_dir, "output directory (default $QUDEPH_OUT_DIR or .)");
    cmd->add_option("--t-max", ov.t_max, "override horizon, e.g. 37.7 or '12pi'");
    cmd->add_option("--steps", ov.steps, "override grid step count");
  };

  CLI::App* run = app.add_subcommand("run", "run a preset or config and write CSV tables");
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "fan a scenario over one axis");
  add_common(sweep);
  sweep->add_option("--axis", axis, "a0 | zeta | weight_index")->required();
  sweep->add_option("--value", values, "axis value; repeatable; zeta as 'z1,z2'")->required();

  CLI::App* weyl = app.add_subcommand("verify-weyl", "compare a scenario with its Weyl image");
  add_common(weyl);
  weyl->add_option("--root", root_text, "root alpha_ij as 'i,j' (default 1,3)");

  CLI::App* list = app.add_subcommand("list-presets", "list built-in figure presets");

  try {
    app.parse(argc, argv);
    if (list->parsed()) {
      for (const auto& preset : builtin_presets()) std::cout << preset.first << "\n";
      return 0;
    }
    if (run->parsed()) return run_main(ref, out_dir, ov);
    if (sweep->parsed()) return sweep_main(ref, axis, values, out_dir, ov);
    if (weyl->parsed()) return verify_weyl_main(ref, root_text, out_dir, ov);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const validation_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return 3;
  } catch (const io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
