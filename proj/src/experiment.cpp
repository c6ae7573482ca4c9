#include "mrmc/experiment.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "mrmc/rng.hpp"

namespace mrmc {

SystemConfig apply_sweep_value(const SystemConfig& cfg, const std::string& var, double v,
                               double& eta2) {
  SystemConfig out = cfg;
  eta2 = 0.0;
  if (var == "none") {
  } else if (var == "SNR_r") {
    for (auto& p : out.P_r) p = out.sigma2_r * db2lin(v);
  } else if (var == "CNR") {
    out.sigma2_c = out.sigma2_r * db2lin(v);
  } else if (var == "sigma2_SI") {
    out.sigma2_SI = db2lin(v);
  } else if (var == "eta2_CSI") {
    eta2 = v;
  } else {
    throw std::invalid_argument("unknown sweep variable: " + var);
  }
  return out;
}

uint64_t trial_seed(uint64_t master, int point, int trial) {
  return splitmix64(master ^ splitmix64(0x5EEDULL + 1000003ULL * (uint64_t)point +
                                        97ULL * (uint64_t)trial));
}

namespace {
bool design_feasible(const SystemConfig& cfg, const DesignState& st) {
  for (int m = 0; m < cfg.M_r; ++m)
    if (!par_feasible(st.A.col(m), cfg.P_r[m], cfg.gamma_par[m], 1e-6, 1e-6)) return false;
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i)
      if (st.P_u[i][k].squaredNorm() > cfg.P_U * (1.0 + 1e-9)) return false;
    if (dl_frame_power(st, cfg, k) > cfg.P_B * (1.0 + 1e-9)) return false;
  }
  return true;
}
}  // namespace

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec) {
  std::vector<ResultRow> rows;
  for (int p = 0; p < (int)spec.grid.size(); ++p) {
    double eta2 = 0.0;
    SystemConfig cfg = resolved(apply_sweep_value(spec.cfg, spec.sweep_var, spec.grid[p], eta2));
    double r_ul, r_dl;
    qos_thresholds(cfg, r_ul, r_dl);
    for (int t = 0; t < spec.trials; ++t) {
      uint64_t seed = trial_seed(spec.seed, p, t);
      ChannelSet ch = generate_channels(cfg, seed);
      SymbolSet sym = generate_symbols(cfg, seed);
      // optimization sees the (possibly) perturbed CSI, scoring uses the truth
      ChannelSet ch_opt = eta2 > 0.0 ? perturb_csi(ch, cfg, eta2, seed) : ch;
      for (DesignKind kind : spec.designs) {
        ResultRow row;
        row.sweep_var = spec.sweep_var;
        row.value = spec.grid[p];
        row.design = to_string(kind);
        row.trial = t;
        try {
          OptimizeOptions opt;
          opt.seed = seed;
          RunReport rep;
          DesignState st = run_design(kind, cfg, ch_opt, sym, opt, rep);
          CovarianceBundle b = build_bundle(cfg, ch, st, sym);
          MiBreakdown mi = mutual_information(cfg, b);
          row.I_cwsm = mi.I_cwsm;
          row.I_fd = mi.I_fd;
          row.min_rate_slack = min_rate_slack(cfg, b, r_ul, r_dl);
          row.iterations = rep.outer_iters;
          row.seconds = rep.seconds;
          row.failed = !design_feasible(cfg, st) || !std::isfinite(mi.I_cwsm);
        } catch (const std::exception&) {
          row.failed = true;
          row.I_cwsm = row.I_fd = row.min_rate_slack = std::nan("");
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
}  // namespace

std::string csv_text(const std::vector<ResultRow>& rows) {
  std::string out = "sweep_var,value,design,trial,I_CWSM,I_FD,min_rate_slack,iterations,seconds\n";
  for (const auto& r : rows) {
    out += r.sweep_var + "," + fmt(r.value) + "," + r.design + "," + std::to_string(r.trial) +
           "," + fmt(r.I_cwsm) + "," + fmt(r.I_fd) + "," + fmt(r.min_rate_slack) + "," +
           std::to_string(r.iterations) + "," + fmt(r.seconds) + "\n";
  }
  return out;
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string metadata_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  std::string cfg_text = config_to_text(spec.cfg);
  j["config"] = cfg_text;
  j["sweep_var"] = spec.sweep_var;
  j["grid"] = spec.grid;
  j["trials"] = spec.trials;
  std::vector<std::string> names;
  for (auto k : spec.designs) names.push_back(to_string(k));
  j["designs"] = names;
  j["seed"] = spec.seed;
  std::string hash_input = cfg_text + spec.sweep_var + std::to_string(spec.seed) +
                           std::to_string(spec.trials);
  for (double g : spec.grid) hash_input += "," + fmt(g);
  for (const auto& n : names) hash_input += ";" + n;
  char hex[24];
  std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)fnv1a64(hash_input));
  j["content_hash"] = hex;
  std::time_t now = std::time(nullptr);
  char ts[32];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["created_utc"] = ts;
  return j.dump(2);
}

void write_outputs(const ExperimentSpec& spec, const std::vector<ResultRow>& rows,
                   const std::string& out_path) {
  std::ofstream csv(out_path);
  if (!csv) throw std::runtime_error("cannot write " + out_path);
  csv << csv_text(rows);
  std::ofstream meta(out_path + ".meta.json");
  meta << metadata_json(spec) << "\n";
}

}  // namespace mrmc
