#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edisc/cal_engine.hpp"
#include "edisc/critical_points.hpp"
#include "edisc/datagen.hpp"
#include "edisc/experiment_harness.hpp"
#include "edisc/highdim_protocol.hpp"
#include "edisc/protocols_1d.hpp"
#include "edisc/rng.hpp"

namespace {

using namespace edisc;

// config file value wins over the default, CLI flag wins over both
template <typename T>
void apply_config(const std::map<std::string, std::string>& cfg, const std::string& key, T& out) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return;
  std::istringstream ss(it->second);
  ss >> out;
  if (ss.fail()) throw CLI::ValidationError("config", "bad value for " + key + ": " + it->second);
}

int cmd_gen(int n, int d, double ratio, double separation, uint64_t seed, bool realizable,
            double epsilon, const std::string& out) {
  GaussianConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.positive_ratio = ratio;
  cfg.mean_separation = separation;
  cfg.seed = seed;
  Instance inst = gaussian_mixture(cfg);
  if (realizable) inst = enforce_realizable(inst, epsilon);
  save_instance(inst, out);
  std::cout << "wrote " << inst.n() << " documents (" << inst.n_plus() << " responsive) to " << out
            << "\n";
  return 0;
}

int cmd_run_protocol(const std::string& in, const std::string& protocol, uint64_t seed, int trials,
                     double delta, int k, bool highdim, const std::string& out) {
  Instance inst = load_instance(in);
  std::vector<ResultRow> rows;
  BobOracle bob;
  CourtOracle court;

  for (int t = 0; t < trials; ++t) {
    Rng rng(split_seed(seed, t));
    ProtocolOutcome outc;
    double rec;
    long disclosure;
    if (highdim) {
      HighDimConfig cfg;
      cfg.k = k;
      cfg.delta = delta;
      outc = run_highdim_sampling(inst, AliceStrategy::truthful(), bob, court, cfg, rng);
      rec = recall(outc, inst);
      disclosure = nrd(outc, inst);
    } else {
      OneDimInstance one = to_one_dim(inst);
      if (protocol == "label") {
        outc = run_label_report(one, AliceStrategy::truthful(), bob, court, {k, delta}, rng);
      } else if (protocol == "classifier") {
        outc = run_classifier_report(one, AliceStrategy::truthful(), bob, court, {delta}, rng);
      } else if (protocol == "reveal-all") {
        outc = run_reveal_all(one, bob, rng);
      } else {
        throw CLI::ValidationError("--protocol", "must be label, classifier, or reveal-all");
      }
      rec = recall(outc, one);
      disclosure = nrd(outc, one);
    }
    rows.push_back({"run-protocol", highdim ? "highdim" : protocol, 0, split_seed(seed, t), rec,
                    disclosure, outc.full_reveal_triggered, 0.0});
  }
  if (!out.empty()) {
    write_csv(rows, out);
    std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  } else {
    std::cout << to_csv(rows);
  }
  return 0;
}

int cmd_run_cal(const std::string& in, const std::string& subprotocol, int iterations, int batch,
                double delta, int k, uint64_t seed, int repeats, const std::string& out) {
  Instance corpus = load_instance(in);
  CalConfig cal;
  cal.iterations = iterations;
  cal.batch = batch;
  cal.label_cfg = {k, delta};
  cal.classifier_cfg = {delta};
  if (subprotocol == "reveal-all") {
    cal.subprotocol = Subprotocol::RevealAll;
  } else if (subprotocol == "label") {
    cal.subprotocol = Subprotocol::LabelReport;
  } else if (subprotocol == "classifier") {
    cal.subprotocol = Subprotocol::ClassifierReport;
  } else {
    throw CLI::ValidationError("--subprotocol", "must be reveal-all, label, or classifier");
  }

  std::vector<ResultRow> rows;
  for (int r = 0; r < repeats; ++r) {
    uint64_t run_seed = split_seed(seed, r);
    auto record = run_cal(corpus, cal, CalParties{}, run_seed);
    for (const auto& it : record.iterations)
      rows.push_back({"run-cal", subprotocol, it.iteration, run_seed, it.recall, it.cumulative_nrd,
                      it.full_reveal, 0.0});
  }
  if (!out.empty()) {
    write_csv(rows, out);
    std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  } else {
    std::cout << to_csv(rows);
  }
  return 0;
}

int cmd_crit(const std::string& in, const std::string& out) {
  Instance inst = load_instance(in);
  auto crit = critical_points_fast(inst);
  double ratio =
      inst.n_minus() > 0 ? static_cast<double>(crit.size()) / inst.n_minus() : 0.0;
  std::ostringstream os;
  os << "crit_count=" << crit.size() << " n_plus=" << inst.n_plus()
     << " n_minus=" << inst.n_minus() << " reveals=" << crit.size() + inst.n_plus()
     << " nrd_ratio=" << format_g6(ratio) << "\n";
  for (DocId id : crit) os << id << "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open for writing: " + out);
    f << os.str();
    std::cout << "wrote " << crit.size() << " critical ids to " << out << "\n";
  } else {
    std::cout << os.str();
  }
  return 0;
}

int cmd_lower_bound(int n, const std::string& out_prefix) {
  auto fam = lower_bound_family(n);
  for (size_t j = 0; j < fam.instances.size(); ++j) {
    const auto& one = fam.instances[j];
    Instance inst;
    inst.dim = 1;
    for (int i = 0; i < one.n(); ++i) {
      inst.documents.push_back({one.ids[i], {one.positions[i]}});
      inst.truth.push_back(one.labels[i]);
    }
    std::string path = out_prefix + std::to_string(j + 1) + ".txt";
    save_instance(inst, path);
    auto [t_star, err_star] = optimal_threshold_true(one);
    std::cout << path << ": t*=" << format_g6(t_star) << " err*=" << err_star << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& campaign, const HarnessConfig& cfg) {
  std::vector<CampaignReport> reports;
  if (campaign == "all") {
    reports = verify_all_bounds(cfg);
  } else {
    reports.push_back(verify_bounds(campaign, cfg));
  }
  bool all_pass = true;
  for (const auto& r : reports) {
    std::cout << to_text(r);
    all_pass = all_pass && r.all_pass();
  }
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return all_pass ? 0 : 1;
}

int cmd_figures(const std::string& name, const FigureConfig& cfg, const std::string& out) {
  auto rows = run_figure_campaign(name, cfg);
  if (!out.empty()) {
    write_csv(rows, out);
    std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
  } else {
    std::cout << to_csv(rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accountable e-discovery protocol simulator"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file; CLI flags override");

  uint64_t seed = 0;
  int trials = 10000;
  double delta = 0.1;
  int k = 1;
  int iterations = 10;
  int batch = 100;
  std::string out;
  app.add_option("--seed", seed, "root seed; trial i uses a documented split of it");
  app.add_option("--trials", trials, "Monte Carlo trials / repeats");
  app.add_option("--delta", delta, "failure probability");
  app.add_option("--k", k, "error tolerance of the label-report protocol");
  app.add_option("--iterations", iterations, "CAL iterations T");
  app.add_option("--batch", batch, "documents per CAL iteration");
  app.add_option("--out", out, "output path (stdout when omitted)");

  auto* gen = app.add_subcommand("gen", "generate a synthetic instance file");
  int gen_n = 1000, gen_d = 2;
  double gen_ratio = 0.05, gen_sep = 2.0, gen_eps = 1e-3;
  bool gen_realizable = false;
  gen->add_option("--n", gen_n, "document count");
  gen->add_option("--d", gen_d, "dimension");
  gen->add_option("--ratio", gen_ratio, "responsive fraction");
  gen->add_option("--separation", gen_sep, "distance between class means");
  gen->add_flag("--realizable", gen_realizable, "reflect misclassified points to separability");
  gen->add_option("--epsilon", gen_eps, "separation offset used with --realizable");

  auto* runp = app.add_subcommand("run-protocol", "run a verification protocol on an instance");
  std::string rp_in, rp_protocol = "label";
  bool rp_highdim = false;
  runp->add_option("--in", rp_in, "instance file")->required();
  runp->add_option("--protocol", rp_protocol, "label | classifier | reveal-all");
  runp->add_flag("--highdim", rp_highdim, "d-dimensional sampling protocol (small instances)");

  auto* runc = app.add_subcommand("run-cal", "run the CAL pipeline with a subprotocol");
  std::string rc_in, rc_sub = "reveal-all";
  runc->add_option("--in", rc_in, "corpus instance file")->required();
  runc->add_option("--subprotocol", rc_sub, "reveal-all | label | classifier");

  auto* crit = app.add_subcommand("crit", "critical points of a realizable instance");
  std::string crit_in;
  crit->add_option("--in", crit_in, "instance file")->required();

  auto* lower = app.add_subcommand("lower-bound", "emit the disclosure lower-bound family");
  int lb_n = 16;
  std::string lb_prefix = "lower_bound_";
  lower->add_option("--n", lb_n, "family size N (power of two)");
  lower->add_option("--prefix", lb_prefix, "output file prefix");

  auto* verify = app.add_subcommand("verify", "Monte Carlo theorem-bound campaigns");
  std::string verify_campaign = "all";
  verify->add_option("--campaign", verify_campaign,
                     "thm1-recall | thm1-nrd | lem1-detect | thm3-detect | thm3-nrd | all");

  auto* figures = app.add_subcommand("figures", "CSV series for the figure reproductions");
  std::string fig_name = "fig1";
  int fig_corpus_n = 5000, fig_corpus_d = 20, fig4_n = 400, fig4_d = 8;
  double fig_ratio = 0.05, fig_sep = 2.0;
  figures->add_option("--name", fig_name, "fig1 | fig2 | fig3 | fig4");
  figures->add_option("--corpus-n", fig_corpus_n, "corpus size");
  figures->add_option("--corpus-d", fig_corpus_d, "corpus dimension");
  figures->add_option("--ratio", fig_ratio, "responsive fraction");
  figures->add_option("--separation", fig_sep, "distance between class means");
  figures->add_option("--fig4-n", fig4_n, "matched realizable corpus size for fig4");
  figures->add_option("--fig4-d", fig4_d, "fig4 corpus dimension");

  // let shared flags (--seed, --out, ...) appear after the subcommand name
  for (auto* sub : {gen, runp, runc, crit, lower, verify, figures}) sub->fallthrough();

  try {
    app.parse(argc, argv);

    if (!config_path.empty()) {
      auto cfg = edisc::load_config_file(config_path);
      // CLI wins: only fill from config where the flag was not given
      if (app.count("--seed") == 0) apply_config(cfg, "seed", seed);
      if (app.count("--trials") == 0) apply_config(cfg, "trials", trials);
      if (app.count("--delta") == 0) apply_config(cfg, "delta", delta);
      if (app.count("--k") == 0) apply_config(cfg, "k", k);
      if (app.count("--iterations") == 0) apply_config(cfg, "iterations", iterations);
      if (app.count("--batch") == 0) apply_config(cfg, "batch", batch);
      if (app.count("--out") == 0) apply_config(cfg, "out", out);
    }

    if (gen->parsed())
      return cmd_gen(gen_n, gen_d, gen_ratio, gen_sep, seed, gen_realizable, gen_eps, out);
    if (runp->parsed())
      return cmd_run_protocol(rp_in, rp_protocol, seed, trials, delta, k, rp_highdim, out);
    if (runc->parsed())
      return cmd_run_cal(rc_in, rc_sub, iterations, batch, delta, k, seed, trials, out);
    if (crit->parsed()) return cmd_crit(crit_in, out);
    if (lower->parsed()) return cmd_lower_bound(lb_n, lb_prefix);
    if (verify->parsed()) {
      edisc::HarnessConfig cfg;
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.delta = delta;
      cfg.k = k;
      return cmd_verify(verify_campaign, cfg);
    }
    if (figures->parsed()) {
      edisc::FigureConfig cfg;
      cfg.repeats = trials == 10000 ? 10 : trials;  // default 10 repeats for figures
      cfg.seed = seed;
      cfg.corpus_n = fig_corpus_n;
      cfg.corpus_d = fig_corpus_d;
      cfg.positive_ratio = fig_ratio;
      cfg.mean_separation = fig_sep;
      cfg.iterations = iterations;
      cfg.batch = batch;
      cfg.delta = app.count("--delta") ? delta : 0.01;
      cfg.k = k;
      cfg.fig4_n = fig4_n;
      cfg.fig4_d = fig4_d;
      return cmd_figures(fig_name, cfg, out);
    }
    return 2;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
