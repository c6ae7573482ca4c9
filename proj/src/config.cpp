#include "mrmc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "mrmc/linalg.hpp"

namespace mrmc {

int SystemConfig::sum_D_d() const {
  int s = 0;
  for (int v : D_d) s += v;
  return s;
}

int SystemConfig::sum_N_u() const {
  int s = 0;
  for (int v : N_u) s += v;
  return s;
}

void SystemConfig::finalize() {
  if (N_u.empty()) N_u.assign(I, 2);
  if (D_u.empty()) D_u.assign(I, 2);
  if (N_d.empty()) N_d.assign(J, 2);
  if (D_d.empty()) D_d.assign(J, 2);
  if ((int)N_u.size() == 1 && I > 1) N_u.assign(I, N_u[0]);
  if ((int)D_u.size() == 1 && I > 1) D_u.assign(I, D_u[0]);
  if ((int)N_d.size() == 1 && J > 1) N_d.assign(J, N_d[0]);
  if ((int)D_d.size() == 1 && J > 1) D_d.assign(J, D_d[0]);
  if (P_r.empty()) P_r.assign(M_r, 0.01);
  if ((int)P_r.size() == 1 && M_r > 1) P_r.assign(M_r, P_r[0]);
  if (gamma_par.empty()) gamma_par.assign(M_r, db2lin(3.0));
  if ((int)gamma_par.size() == 1 && M_r > 1) gamma_par.assign(M_r, gamma_par[0]);
  double w = 1.0 / (double)(I + J + N_r);
  if (alpha_r.empty()) alpha_r.assign(N_r, w);
  if ((int)alpha_r.size() == 1 && N_r > 1) alpha_r.assign(N_r, alpha_r[0]);
  if (alpha_u.empty()) alpha_u.assign(I, w);
  if ((int)alpha_u.size() == 1 && I > 1) alpha_u.assign(I, alpha_u[0]);
  if (alpha_d.empty()) alpha_d.assign(J, w);
  if ((int)alpha_d.size() == 1 && J > 1) alpha_d.assign(J, alpha_d[0]);
}

void SystemConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
  if (M_r < 1 || N_r < 1 || M_c < 1 || N_c < 1) fail("antenna counts must be positive");
  if (I < 1 || J < 1) fail("need at least one UL and one DL UE");
  if (K < 1 || N < 1) fail("K and N must be positive");
  if ((int)N_u.size() != I || (int)D_u.size() != I) fail("N_u/D_u length must equal I");
  if ((int)N_d.size() != J || (int)D_d.size() != J) fail("N_d/D_d length must equal J");
  for (int i = 0; i < I; ++i)
    if (D_u[i] < 1 || N_u[i] < D_u[i]) fail("UL UE streams must satisfy 1 <= D_u <= N_u");
  for (int j = 0; j < J; ++j)
    if (D_d[j] < 1 || N_d[j] < D_d[j]) fail("DL UE streams must satisfy 1 <= D_d <= N_d");
  if (sum_D_d() > M_c) fail("total DL streams exceed BS Tx antennas");
  if ((int)P_r.size() != M_r || (int)gamma_par.size() != M_r)
    fail("P_r/gamma length must equal M_r");
  for (double p : P_r)
    if (!(p > 0.0)) fail("P_r must be positive");
  for (double g : gamma_par)
    if (!(g >= 1.0)) fail("PAR bound gamma must be >= 1");
  if (!(P_B > 0.0) || !(P_U > 0.0)) fail("P_B and P_U must be positive");
  if (!(sigma2_r > 0.0) || !(sigma2_B > 0.0) || !(sigma2_d > 0.0))
    fail("noise variances must be positive");
  if (sigma2_c < 0.0 || sigma2_SI < 0.0 || eta2_CSI < 0.0) fail("negative variance");
  if (K_B < 0.0 || kappa < 0.0) fail("Rician factors must be non-negative");
  if ((int)alpha_r.size() != N_r || (int)alpha_u.size() != I || (int)alpha_d.size() != J)
    fail("weight vector lengths must match N_r/I/J");
  for (double a : alpha_r)
    if (a < 0.0) fail("weights must be non-negative");
  for (double a : alpha_u)
    if (a < 0.0) fail("weights must be non-negative");
  for (double a : alpha_d)
    if (a < 0.0) fail("weights must be non-negative");
  if (n_t < 1 || n_t >= N) fail("n_t must lie in [1, N)");
  for (int n : {n_rB, n_rd, n_u, n_Bm})
    if (n < 0 || n > n_t) fail("delay indices must lie in [0, n_t]");
  if (ell_max < 1 || iota_max < 1 || t_u_max < 1 || t_d_max < 1)
    fail("iteration caps must be positive");
}

SystemConfig default_config() {
  SystemConfig cfg;
  cfg.finalize();
  return cfg;
}

void qos_thresholds(const SystemConfig& cfg, double& r_ul, double& r_dl) {
  // Single-stream SINR bounds with every interferer at full power; the noise
  // floor cancels because all powers enter as ratios to it.
  double pr = cfg.P_r.empty() ? 0.01 : cfg.P_r[0];
  double den_ul = cfg.M_r * pr + cfg.P_B + (cfg.I - 1) * cfg.P_U;
  r_ul = std::log2(1.0 + cfg.P_U / den_ul);
  double den_dl = cfg.M_r * pr + cfg.P_B * (cfg.J - 1) / (double)cfg.J + cfg.I * cfg.P_U;
  r_dl = std::log2(1.0 + (cfg.P_B / (double)cfg.J) / den_dl);
}

SystemConfig resolved(const SystemConfig& cfg) {
  SystemConfig out = cfg;
  out.finalize();
  double r_ul, r_dl;
  qos_thresholds(out, r_ul, r_dl);
  if (out.R_UL < 0.0) out.R_UL = r_ul;
  if (out.R_DL < 0.0) out.R_DL = r_dl;
  out.validate();
  return out;
}

namespace {

double parse_scalar(const std::string& raw) {
  std::string s = raw;
  bool db = false;
  if (s.size() > 2 && (s.substr(s.size() - 2) == "dB" || s.substr(s.size() - 2) == "db")) {
    db = true;
    s = s.substr(0, s.size() - 2);
  }
  size_t pos = 0;
  double v = std::stod(s, &pos);
  while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
  if (pos != s.size()) throw std::invalid_argument("bad numeric value '" + raw + "'");
  return db ? db2lin(v) : v;
}

std::vector<double> parse_list(const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_scalar(tok));
  if (out.empty()) throw std::invalid_argument("empty list value");
  return out;
}

std::vector<int> parse_ilist(const std::string& raw) {
  std::vector<int> out;
  for (double v : parse_list(raw)) {
    int iv = (int)std::llround(v);
    if (std::abs(v - iv) > 1e-9) throw std::invalid_argument("expected integer value");
    out.push_back(iv);
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_override(SystemConfig& cfg, const std::string& key, const std::string& value) {
  auto i = [&](int& f) { f = (int)std::llround(parse_scalar(value)); };
  auto d = [&](double& f) { f = parse_scalar(value); };
  auto dv = [&](std::vector<double>& f) { f = parse_list(value); };
  auto iv = [&](std::vector<int>& f) { f = parse_ilist(value); };

  if (key == "M_r") i(cfg.M_r);
  else if (key == "N_r") i(cfg.N_r);
  else if (key == "M_c") i(cfg.M_c);
  else if (key == "N_c") i(cfg.N_c);
  else if (key == "I") i(cfg.I);
  else if (key == "J") i(cfg.J);
  else if (key == "N_u") iv(cfg.N_u);
  else if (key == "D_u") iv(cfg.D_u);
  else if (key == "N_d") iv(cfg.N_d);
  else if (key == "D_d") iv(cfg.D_d);
  else if (key == "K") i(cfg.K);
  else if (key == "N") i(cfg.N);
  else if (key == "n_t") i(cfg.n_t);
  else if (key == "n_rB") i(cfg.n_rB);
  else if (key == "n_rd") i(cfg.n_rd);
  else if (key == "n_u") i(cfg.n_u);
  else if (key == "n_Bm") i(cfg.n_Bm);
  else if (key == "P_B") d(cfg.P_B);
  else if (key == "P_U") d(cfg.P_U);
  else if (key == "P_r") dv(cfg.P_r);
  else if (key == "gamma") dv(cfg.gamma_par);
  else if (key == "sigma2_r") d(cfg.sigma2_r);
  else if (key == "sigma2_B") d(cfg.sigma2_B);
  else if (key == "sigma2_d") d(cfg.sigma2_d);
  else if (key == "sigma2_c") d(cfg.sigma2_c);
  else if (key == "sigma2_SI") d(cfg.sigma2_SI);
  else if (key == "K_B") d(cfg.K_B);
  else if (key == "kappa") d(cfg.kappa);
  else if (key == "eta2_CSI") d(cfg.eta2_CSI);
  else if (key == "sigma2_rt") d(cfg.sigma2_rt);
  else if (key == "sigma2_Bt") d(cfg.sigma2_Bt);
  else if (key == "sigma2_Bm") d(cfg.sigma2_Bm);
  else if (key == "sigma2_U") d(cfg.sigma2_U);
  else if (key == "alpha_r") dv(cfg.alpha_r);
  else if (key == "alpha_u") dv(cfg.alpha_u);
  else if (key == "alpha_d") dv(cfg.alpha_d);
  else if (key == "R_UL") d(cfg.R_UL);
  else if (key == "R_DL") d(cfg.R_DL);
  else if (key == "ell_max") i(cfg.ell_max);
  else if (key == "iota_max") i(cfg.iota_max);
  else if (key == "t_u_max") i(cfg.t_u_max);
  else if (key == "t_d_max") i(cfg.t_d_max);
  else if (key == "seed") cfg.seed = (uint64_t)std::stoull(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

SystemConfig parse_config_text(const std::string& text) {
  SystemConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      apply_override(cfg, key, value);
    } catch (const std::exception& e) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return resolved(cfg);
}

SystemConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_text(const SystemConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  auto line = [&](const std::string& k, auto v) { os << k << " = " << v << "\n"; };
  auto dline = [&](const std::string& k, const std::vector<double>& v) {
    os << k << " = ";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "\n";
  };
  auto iline = [&](const std::string& k, const std::vector<int>& v) {
    os << k << " = ";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "\n";
  };
  line("M_r", cfg.M_r); line("N_r", cfg.N_r); line("M_c", cfg.M_c); line("N_c", cfg.N_c);
  line("I", cfg.I); line("J", cfg.J);
  iline("N_u", cfg.N_u); iline("D_u", cfg.D_u); iline("N_d", cfg.N_d); iline("D_d", cfg.D_d);
  line("K", cfg.K); line("N", cfg.N);
  line("n_t", cfg.n_t); line("n_rB", cfg.n_rB); line("n_rd", cfg.n_rd);
  line("n_u", cfg.n_u); line("n_Bm", cfg.n_Bm);
  line("P_B", cfg.P_B); line("P_U", cfg.P_U);
  dline("P_r", cfg.P_r); dline("gamma", cfg.gamma_par);
  line("sigma2_r", cfg.sigma2_r); line("sigma2_B", cfg.sigma2_B); line("sigma2_d", cfg.sigma2_d);
  line("sigma2_c", cfg.sigma2_c); line("sigma2_SI", cfg.sigma2_SI);
  line("K_B", cfg.K_B); line("kappa", cfg.kappa); line("eta2_CSI", cfg.eta2_CSI);
  line("sigma2_rt", cfg.sigma2_rt); line("sigma2_Bt", cfg.sigma2_Bt);
  line("sigma2_Bm", cfg.sigma2_Bm); line("sigma2_U", cfg.sigma2_U);
  dline("alpha_r", cfg.alpha_r); dline("alpha_u", cfg.alpha_u); dline("alpha_d", cfg.alpha_d);
  line("R_UL", cfg.R_UL); line("R_DL", cfg.R_DL);
  line("ell_max", cfg.ell_max); line("iota_max", cfg.iota_max);
  line("t_u_max", cfg.t_u_max); line("t_d_max", cfg.t_d_max);
  line("seed", cfg.seed);
  return os.str();
}

}  // namespace mrmc
