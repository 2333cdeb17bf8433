#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "secres/catalog.hpp"
#include "secres/expansion.hpp"
#include "secres/pipeline.hpp"
#include "secres/proximity.hpp"

namespace fs = std::filesystem;
using namespace secres;

namespace {

struct RunConfig {
  std::string system;
  std::string catalog;
  int order = 2;
  std::optional<int> kf, ks;
  int birkhoff_order = 10;
  double t_end = 10000.0;
  int samples = 1000;
  double rho_scale = 1.0;
  std::string out = "out";
  std::string preset;
  bool numeric = true;
  std::string scheme = "SBAB3";
  double m1_deg = std::nan("");
  double a_ratio = std::nan("");
};

// Files written by the current command; removed again if it fails.
class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  ~Outputs() {
    if (committed_) return;
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
  }

  std::ofstream open(const std::string& name) {
    const fs::path p = dir_ / name;
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    written_.push_back(p);
    return f;
  }
  void commit() { committed_ = true; }
  const std::vector<fs::path>& written() const { return written_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
  bool committed_ = false;
};

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string file_stem(const std::string& name) {
  std::string s;
  for (char c : name) s += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return s;
}

Catalog load_catalog(const RunConfig& cfg) {
  return Catalog::load(cfg.catalog.empty() ? default_catalog_path() : cfg.catalog);
}

SystemEntry pick_system(const RunConfig& cfg, const Catalog& cat) {
  if (cfg.system.empty()) throw std::invalid_argument("--system is required for this command");
  SystemEntry s = cat.find(cfg.system);
  if (!std::isnan(cfg.m1_deg)) s.planet[0].M = cfg.m1_deg * std::numbers::pi / 180.0;
  if (!std::isnan(cfg.a_ratio)) {
    // The outer orbit is moved, as in the near-resonant variants of ups And.
    s.planet[1].a = s.planet[0].a / cfg.a_ratio;
    s.name += "_a" + g17(cfg.a_ratio);
  }
  if (!std::isnan(cfg.m1_deg)) s.name += "_M1_" + g17(cfg.m1_deg);
  return s;
}

ChainOptions chain_options(const RunConfig& cfg) {
  ChainOptions o;
  o.order = cfg.order;
  o.K_F = cfg.kf;
  o.K_S = cfg.ks;
  o.birkhoff_order = cfg.birkhoff_order;
  return o;
}

int cmd_expand(const RunConfig& cfg) {
  const Catalog cat = load_catalog(cfg);
  const SystemEntry sys = pick_system(cfg, cat);
  const ExpandedHamiltonian H = expand_hamiltonian(sys);
  Outputs out(cfg.out);
  const std::string stem = file_stem(sys.name);
  {
    auto f = out.open(stem + "_hamiltonian.txt");
    write_series(f, H.total());
  }
  {
    auto f = out.open(stem + "_expand_summary.txt");
    std::map<std::pair<int, int>, int> counts;
    for (const auto& [k, c] : H.pert.terms()) ++counts[{k.l_degree(), k.sec_degree()}];
    f << "system " << sys.name << "\n";
    f << "mu " << g17(H.mu) << "\n";
    f << "n_star " << g17(H.n_star[0]) << " " << g17(H.n_star[1]) << "\n";
    f << "Lambda_star " << g17(H.Lambda_star[0]) << " " << g17(H.Lambda_star[1]) << "\n";
    f << "kepler_terms " << H.kepler.size() << "\n";
    f << "perturbation_terms " << H.pert.size() << "\n";
    f << "# L-degree secular-degree terms\n";
    for (const auto& [k, n] : counts) f << k.first << " " << k.second << " " << n << "\n";
  }
  out.commit();
  for (const auto& p : out.written()) std::cout << p.string() << "\n";
  return 0;
}

int cmd_secular(const RunConfig& cfg) {
  const Catalog cat = load_catalog(cfg);
  const SystemEntry sys = pick_system(cfg, cat);
  std::vector<std::pair<std::optional<int>, std::optional<int>>> variants;
  if (cfg.preset == "period-table")
    variants = {{4, 2}, {6, 4}, {8, 6}};
  else
    variants = {{cfg.kf, cfg.ks}};
  Outputs out(cfg.out);
  for (const auto& [kf, ks] : variants) {
    SecularTableOptions opt;
    opt.K_F = kf;
    opt.K_S = ks;
    std::string name = file_stem(sys.name) + "_secular";
    if (kf || ks) name += "_kf" + std::to_string(kf.value_or(0)) + "_ks" + std::to_string(ks.value_or(0));
    const auto rows = secular_table(sys, opt);
    auto f = out.open(name + ".txt");
    write_secular_table(f, sys.name, rows);
  }
  out.commit();
  for (const auto& p : out.written()) std::cout << p.string() << "\n";
  return 0;
}

void write_summary_line(std::ostream& os, const char* key, double v) { os << key << " " << g17(v) << "\n"; }

int propagate_one(const RunConfig& cfg, const SystemEntry& sys, Outputs& out, std::ostream& summary) {
  const std::string stem = file_stem(sys.name);
  const std::vector<double> grid = uniform_grid(cfg.t_end, cfg.samples);
  ChainOptions opt = chain_options(cfg);
  summary << "system " << sys.name << "\n";
  write_summary_line(summary, "t_end_yr", cfg.t_end);

  std::vector<AnalyticRun> runs;
  for (int order = 1; order <= cfg.order; ++order) {
    opt.order = order;
    runs.push_back(run_analytic(sys, opt, grid));
  }
  std::optional<NumericSecular> num;
  if (cfg.numeric) {
    NumericOptions no;
    no.scheme = parse_scheme(cfg.scheme);
    num = numeric_secular(sys, cfg.t_end, no);
    auto f = out.open(stem + "_numeric.csv");
    write_csv(f, num->smoothed);
    write_summary_line(summary, "numeric_period_yr", num->period);
    write_summary_line(summary, "numeric_max_rel_energy_error", num->run.max_rel_energy_err);
  }

  int status = 0;
  for (const AnalyticRun& r : runs) {
    const std::string tag = "order" + std::to_string(r.order);
    for (const auto& w : r.warnings) summary << tag << "_warning " << w << "\n";
    if (!r.ok) {
      if (r.order == 1) throw std::runtime_error(r.error);
      summary << tag << "_status FAILED " << r.error << "\n";
      status = 2;
      continue;
    }
    auto f = out.open(stem + "_" + tag + ".csv");
    write_csv(f, r.propagation.trajectory);
    const SecularFrequencies& fr = r.propagation.frequencies;
    write_summary_line(summary, (tag + "_period_yr").c_str(), fr.period);
    write_summary_line(summary, (tag + "_phi_dot1").c_str(), fr.phi_dot[0]);
    write_summary_line(summary, (tag + "_phi_dot2").c_str(), fr.phi_dot[1]);
    write_summary_line(summary, (tag + "_roundtrip_defect").c_str(), r.propagation.roundtrip_defect);
    if (num) {
      const double d = max_eccentricity_deviation(r.propagation.trajectory, num->smoothed);
      write_summary_line(summary, (tag + "_max_ecc_deviation").c_str(), d);
      if (r.order == 2 && d > kAgreementLimit) {
        summary << tag << "_status FAILED deviation above " << g17(kAgreementLimit) << "\n";
        status = 2;
        continue;
      }
    }
    if (r.order == 2 && r.birkhoff_divergence) {
      summary << tag << "_status FAILED Birkhoff remainder grows from order " << r.birkhoff_divergence << "\n";
      status = 2;
      continue;
    }
    summary << tag << "_status ok\n";
  }
  return status;
}

int cmd_propagate(const RunConfig& cfg) {
  const Catalog cat = load_catalog(cfg);
  std::vector<RunConfig> jobs;
  if (cfg.preset == "figure1") {
    RunConfig c = cfg;
    c.system = "ups_And";
    jobs.push_back(c);
  } else if (cfg.preset == "figure2") {
    for (double r : {0.335, 0.338}) {
      RunConfig c = cfg;
      c.system = "ups_And";
      c.a_ratio = r;
      jobs.push_back(c);
    }
  } else if (cfg.preset == "figure3") {
    for (double m : {0.0, 160.0}) {
      RunConfig c = cfg;
      c.system = "HD_169830";
      c.m1_deg = m;
      jobs.push_back(c);
    }
  } else {
    jobs.push_back(cfg);
  }
  Outputs out(cfg.out);
  int status = 0;
  for (const RunConfig& c : jobs) {
    const SystemEntry sys = pick_system(c, cat);
    std::ostringstream summary;
    status = std::max(status, propagate_one(c, sys, out, summary));
    auto f = out.open(file_stem(sys.name) + "_summary.txt");
    f << summary.str();
    std::cout << summary.str();
  }
  out.commit();
  return status;
}

int cmd_proximity(const RunConfig& cfg) {
  const Catalog cat = load_catalog(cfg);
  std::vector<SystemEntry> systems;
  if (cfg.system.empty() || cfg.preset == "table1")
    systems = cat.systems();
  else
    systems.push_back(pick_system(cfg, cat));

  std::vector<ProximityRow> rows(systems.size());
  std::vector<std::string> errors(systems.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < systems.size();) {
      try {
        rows[i] = evaluate_proximity(systems[i], cfg.rho_scale);
      } catch (const std::exception& e) {
        errors[i] = systems[i].name + ": " + e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), systems.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);

  Outputs out(cfg.out);
  {
    auto f = out.open("proximity.txt");
    write_proximity_table(f, rows);
  }
  {
    auto f = out.open("proximity_harmonics.txt");
    f << "# system planet function rank harmonic norm\n";
    for (const auto& r : rows)
      for (int j = 0; j < 2; ++j) {
        const PlanetProximity& p = r.report.planet[j];
        for (const auto& [fn, top] : {std::pair{"dxi", &p.top_xi}, std::pair{"deta", &p.top_eta}})
          for (std::size_t k = 0; k < top->size(); ++k)
            f << r.system << " " << j + 1 << " " << fn << " " << k + 1 << " " << (*top)[k].label() << " "
              << g17((*top)[k].norm) << "\n";
        f << r.system << " " << j + 1 << " residual 0 - " << g17(p.residual_norm) << "\n";
      }
  }
  write_proximity_table(std::cout, rows);
  out.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secular normal forms of planar two-planet systems"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");

  RunConfig cfg;
  std::optional<int> kf, ks;
  app.add_option("--system", cfg.system, "catalog entry name");
  app.add_option("--catalog", cfg.catalog, "catalog path (default: $SECRES_CATALOG, then the shipped catalog)");
  app.add_option("--order", cfg.order, "order in the masses")->check(CLI::Range(1, 2));
  app.add_option("--kf", kf, "trigonometric truncation K_F")->check(CLI::PositiveNumber);
  app.add_option("--ks", ks, "secular truncation K_S")->check(CLI::NonNegativeNumber);
  app.add_option("--birkhoff-order", cfg.birkhoff_order)->check(CLI::NonNegativeNumber);
  app.add_option("--tend-yr", cfg.t_end)->check(CLI::PositiveNumber);
  app.add_option("--samples", cfg.samples)->check(CLI::Range(2, 10000000));
  app.add_option("--rho-scale", cfg.rho_scale)->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out, "output directory");
  app.add_option("--preset", cfg.preset)
      ->check(CLI::IsMember({"figure1", "figure2", "figure3", "table1", "period-table"}));
  app.add_option("--scheme", cfg.scheme, "SBAB3, SBAB3C or leapfrog");
  app.add_option("--m1-deg", cfg.m1_deg, "override the inner mean anomaly");
  app.add_option("--a-ratio", cfg.a_ratio, "move the outer planet to this a1/a2");
  app.add_flag("--numeric,!--no-numeric", cfg.numeric, "run the N-body comparison");

  auto* expand = app.add_subcommand("expand", "write the expanded Hamiltonian");
  auto* secular = app.add_subcommand("secular", "write the secular coefficient table");
  auto* propagate = app.add_subcommand("propagate", "secular trajectories and the N-body comparison");
  auto* proximity = app.add_subcommand("proximity", "proximity to mean-motion resonances");

  CLI11_PARSE(app, argc, argv);
  cfg.kf = kf;
  cfg.ks = ks;

  try {
    if (expand->parsed()) return cmd_expand(cfg);
    if (secular->parsed()) return cmd_secular(cfg);
    if (propagate->parsed()) return cmd_propagate(cfg);
    if (proximity->parsed()) return cmd_proximity(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
