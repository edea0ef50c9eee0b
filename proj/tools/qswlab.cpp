// qswlab: batch front-end for the absorbing-walk laboratory.
// Subcommands: spectral | flow | sample | variance | bounds | paths.
// Deterministic given (config, seed); CSV schema qswlab.v1.

#include "qsw/bounds.hpp"
#include "qsw/combinatorics.hpp"
#include "qsw/samplers.hpp"
#include "qsw/semigroup.hpp"
#include "qsw/spectral.hpp"
#include "qsw/variance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace qsw;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240715u;

struct Options {
  int d = -1;
  double theta = 0.0;
  int n = 10;
  int N = 1000;
  int replicates = 1;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  int jobs = 1;
  bool jobs_given = false;
  std::string eta0 = "uniform";
  std::string f = "one";
  std::string sampler = "soft";
  std::string check = "all";
  std::string format = "csv";
  std::string out;
  std::string config;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::uint64_t env_u64(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  return std::strtoull(v, nullptr, 10);
}

// config-file values fill in anything the flags left at defaults;
// flags always win.
void merge_config(Options& o, const CLI::App& cmd) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) throw ConfigError("cannot open config file: " + o.config);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  auto unset = [&](const std::string& flag) { return cmd.count(flag) == 0; };
  if (j.contains("d") && unset("--d")) o.d = j["d"].get<int>();
  if (j.contains("theta") && unset("--theta")) o.theta = j["theta"].get<double>();
  if (j.contains("n") && unset("--n")) o.n = j["n"].get<int>();
  if (j.contains("N") && unset("--N")) o.N = j["N"].get<int>();
  if (j.contains("replicates") && unset("--replicates"))
    o.replicates = j["replicates"].get<int>();
  if (j.contains("seed") && unset("--seed")) {
    o.seed = j["seed"].get<std::uint64_t>();
    o.seed_given = true;
  }
  if (j.contains("jobs") && unset("--jobs")) {
    o.jobs = j["jobs"].get<int>();
    o.jobs_given = true;
  }
  if (j.contains("eta0") && unset("--eta0")) o.eta0 = j["eta0"].get<std::string>();
  if (j.contains("f") && unset("--f")) o.f = j["f"].get<std::string>();
  if (j.contains("sampler") && unset("--sampler")) o.sampler = j["sampler"].get<std::string>();
  if (j.contains("check") && unset("--check")) o.check = j["check"].get<std::string>();
  if (j.contains("format") && unset("--format")) o.format = j["format"].get<std::string>();
  if (j.contains("out") && unset("--out")) o.out = j["out"].get<std::string>();
}

void finalize(Options& o, const CLI::App& cmd) {
  merge_config(o, cmd);
  if (o.d < 1) throw ConfigError("--d is required and must be >= 1");
  if (o.format != "csv" && o.format != "json")
    throw ConfigError("--format must be csv or json");
  if (!o.seed_given) o.seed = env_u64("QSWLAB_SEED", kDefaultSeed);
  if (!o.jobs_given) o.jobs = static_cast<int>(env_u64("QSWLAB_JOBS", 1));
  if (o.jobs < 1) o.jobs = 1;
}

Vec parse_vector_file(const std::string& path, int d, const char* what) {
  std::ifstream in(path);
  if (!in) throw ConfigError(std::string("cannot open ") + what + " file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string(what) + " file parse error: " + e.what());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ConfigError(std::string(what) + " file must hold an array of length d");
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = j[i].get<double>();
  return v;
}

Measure parse_eta0(const std::string& spec, int d, double theta) {
  if (spec == "uniform") return Measure::uniform(d);
  if (spec == "pi") {
    Model tmp(d, theta, Measure::uniform(d));
    return quasi_stationary(tmp).first;
  }
  if (spec.rfind("delta:", 0) == 0) {
    int x = std::stoi(spec.substr(6));
    if (x < 1 || x > d) throw ConfigError("eta0 delta state out of range");
    return Measure::dirac(d, x);
  }
  if (spec.rfind("file:", 0) == 0) {
    Measure m{parse_vector_file(spec.substr(5), d, "eta0")};
    return m.normalized();
  }
  throw ConfigError("unknown eta0 spec: " + spec);
}

Vec parse_f(const std::string& spec, int d, double theta) {
  if (spec == "one") return Vec(d, 1.0);
  if (spec == "phi0") {
    Model tmp(d, theta, Measure::uniform(d));
    return eigensystem(tmp).phi[0];
  }
  if (spec.rfind("indicator:", 0) == 0) {
    int x = std::stoi(spec.substr(10));
    if (x < 1 || x > d) throw ConfigError("f indicator state out of range");
    Vec v(d, 0.0);
    v[x - 1] = 1.0;
    return v;
  }
  if (spec.rfind("file:", 0) == 0) return parse_vector_file(spec.substr(5), d, "f");
  throw ConfigError("unknown f spec: " + spec);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + o.out);
  out << text;
}

// ---- subcommands -----------------------------------------------------------

int cmd_spectral(Options& o) {
  Model m(o.d, o.theta, parse_eta0(o.eta0, o.d, o.theta));
  SpectralBasis sb = eigensystem(m);
  auto [pi, pi_phi] = quasi_stationary(m);
  std::optional<TildeSpectrum> ts;
  if (o.d >= 2) ts = tilde_spectrum(m);

  if (o.format == "json") {
    json j;
    j["d"] = o.d;
    j["theta"] = o.theta;
    j["E"] = sb.eigenvalues;
    j["E0"] = sb.eigenvalues[0];
    j["phi"] = sb.phi;
    j["pi"] = pi.w;
    j["pi_phi"] = pi_phi.w;
    j["e1bar"] = sb.e1bar;
    j["estar"] = sb.estar;
    if (ts) j["e0tilde"] = ts->e0tilde;
    j["s1"] = sb.s1;
    j["s2"] = sb.s2;
    j["s3"] = sb.s3;
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "# schema=qswlab.v1\nkey,index,value\n";
  for (int i = 0; i < o.d; ++i) os << "E," << i << "," << fmt_real(sb.eigenvalues[i]) << "\n";
  for (int i = 0; i < o.d; ++i)
    for (int x = 1; x <= o.d; ++x)
      os << "phi" << i << "," << x << "," << fmt_real(sb.phi[i][x - 1]) << "\n";
  for (int x = 1; x <= o.d; ++x) os << "pi," << x << "," << fmt_real(pi.w[x - 1]) << "\n";
  for (int x = 1; x <= o.d; ++x)
    os << "pi_phi," << x << "," << fmt_real(pi_phi.w[x - 1]) << "\n";
  os << "e1bar,0," << fmt_real(sb.e1bar) << "\n";
  os << "estar,0," << fmt_real(sb.estar) << "\n";
  if (ts) os << "e0tilde,0," << fmt_real(ts->e0tilde) << "\n";
  os << "s1,0," << fmt_real(sb.s1) << "\n";
  os << "s2,0," << fmt_real(sb.s2) << "\n";
  os << "s3,0," << fmt_real(sb.s3) << "\n";
  emit(o, os.str());
  return 0;
}

int cmd_flow(Options& o) {
  Model m(o.d, o.theta, parse_eta0(o.eta0, o.d, o.theta));
  FlowTrace flow = evolve(m, o.n);
  AbsorptionLaw law = absorption_law(m, o.n);
  if (o.format == "json") {
    json rows = json::array();
    for (int p = 0; p <= o.n; ++p) {
      json r;
      r["n"] = p;
      r["eta"] = flow.etas[p].w;
      r["eta_hat"] = flow.eta_hats[p].w;
      r["eta_hat_c"] = flow.eta_hats[p].cemetery;
      r["Z"] = flow.z[p];
      r["p_absorb"] = law.hard_pmf[p];
      rows.push_back(r);
    }
    emit(o, rows.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "# schema=qswlab.v1\nn";
  for (int x = 1; x <= o.d; ++x) os << ",eta_" << x;
  for (int x = 1; x <= o.d; ++x) os << ",eta_hat_" << x;
  os << ",eta_hat_c,Z,p_absorb\n";
  for (int p = 0; p <= o.n; ++p) {
    os << p;
    for (int x = 1; x <= o.d; ++x) os << "," << fmt_real(flow.etas[p].w[x - 1]);
    for (int x = 1; x <= o.d; ++x) os << "," << fmt_real(flow.eta_hats[p].w[x - 1]);
    os << "," << fmt_real(flow.eta_hats[p].cemetery) << "," << fmt_real(flow.z[p]) << ","
       << fmt_real(law.hard_pmf[p]) << "\n";
  }
  emit(o, os.str());
  return 0;
}

int cmd_sample(Options& o) {
  Model m(o.d, o.theta, parse_eta0(o.eta0, o.d, o.theta));
  Vec f = parse_f(o.f, o.d, o.theta);
  auto rows = run_replicates(m, o.sampler, o.n, o.N, o.replicates, o.seed, f, nullptr, o.jobs);
  if (o.format == "json") {
    json out = json::array();
    for (const auto& r : rows) {
      json jr;
      jr["replicate"] = r.r;
      jr["z_estimate"] = r.z;
      jr["eta_f"] = r.eta_f;
      out.push_back(jr);
    }
    emit(o, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "# schema=qswlab.v1\nreplicate,z_estimate,eta_f\n";
  for (const auto& r : rows)
    os << r.r << "," << fmt_real(r.z) << "," << fmt_real(r.eta_f) << "\n";
  emit(o, os.str());
  return 0;
}

int cmd_variance(Options& o) {
  Model m(o.d, o.theta, parse_eta0(o.eta0, o.d, o.theta));
  Vec f = parse_f(o.f, o.d, o.theta);
  FlowTrace flow = evolve(m, o.n);
  double v_cf = 0.0, w_cf = 0.0;
  if (o.sampler == "dp") {
    v_cf = v_dp(m, flow, o.n, f);
    w_cf = w_dp(m, flow, o.n, f);
  } else if (o.sampler == "is") {
    v_cf = v_is(m, flow, o.n, f);
    w_cf = w_is(m, flow, o.n, f);
  } else if (o.sampler == "soft") {
    v_cf = v_soft(m, flow, o.n, f);
    w_cf = w_soft(m, flow, o.n, f);
  } else if (o.sampler == "hard") {
    v_cf = v_hard(m, flow, o.n, f);
    w_cf = w_hard(m, flow, o.n, f);
  } else {
    throw ConfigError("unknown sampler: " + o.sampler);
  }
  auto rows = run_replicates(m, o.sampler, o.n, o.N, o.replicates, o.seed, f, nullptr, o.jobs);
  EmpiricalVariance ev = empirical_variance(rows, o.N, flow.z[o.n], flow.etas[o.n](f));
  struct Line {
    const char* quantity;
    double cf, emp, se;
  } lines[] = {{"v", v_cf, ev.v, ev.v_se}, {"w", w_cf, ev.w, ev.w_se}};
  if (o.format == "json") {
    json out = json::array();
    for (const auto& l : lines) {
      json jr;
      jr["sampler"] = o.sampler;
      jr["quantity"] = l.quantity;
      jr["closed_form"] = l.cf;
      jr["empirical"] = l.emp;
      jr["se"] = l.se;
      jr["z_score"] = (l.se > 0.0) ? (l.emp - l.cf) / l.se : 0.0;
      out.push_back(jr);
    }
    emit(o, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "# schema=qswlab.v1\nsampler,quantity,closed_form,empirical,se,z_score\n";
  for (const auto& l : lines) {
    double z = (l.se > 0.0) ? (l.emp - l.cf) / l.se : 0.0;
    os << o.sampler << "," << l.quantity << "," << fmt_real(l.cf) << "," << fmt_real(l.emp)
       << "," << fmt_real(l.se) << "," << fmt_real(z) << "\n";
  }
  emit(o, os.str());
  return 0;
}

int cmd_bounds(Options& o) {
  Model m(o.d, o.theta, parse_eta0(o.eta0, o.d, o.theta));
  std::vector<CheckReport> reports;
  auto want = [&](const char* tag) { return o.check == "all" || o.check == tag; };
  auto add = [&](std::vector<CheckReport> rs) {
    for (auto& r : rs) reports.push_back(std::move(r));
  };
  if (want("thm1")) add(check_theorem1(m, o.n));
  if (want("thm2")) add(check_theorem2(m, o.n, 64, o.seed));
  if (want("thm3")) add(check_theorem3(m, o.n));
  if (want("thm4")) add(check_theorem4(m));
  if (want("prop-ratio")) add(check_prop_ratio(m, o.n));
  if (want("taylor")) add(check_taylor());
  if (want("isdeg")) add(check_is_degeneracy(m, std::max(o.n, 2)));
  if (want("vdp")) reports.push_back(check_vdp_printed(m));
  if (want("softvar")) add(check_soft_variance_bounds(m, o.n, parse_f(o.f, o.d, o.theta)));
  if (reports.empty()) throw ConfigError("unknown --check: " + o.check);

  if (o.format == "json") {
    json out = json::array();
    for (const auto& r : reports) {
      json jr;
      jr["check_id"] = r.check_id;
      json params;
      for (const auto& [k, v] : r.params) params[k] = v;
      jr["params"] = params;
      jr["lhs"] = r.lhs;
      jr["rhs"] = r.rhs;
      jr["margin"] = r.margin;
      jr["verdict"] = to_string(r.verdict);
      jr["note"] = r.note;
      out.push_back(jr);
    }
    emit(o, out.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "# schema=qswlab.v1\ncheck_id,params,lhs,rhs,margin,verdict,note\n";
  for (const auto& r : reports) {
    std::string params;
    for (const auto& [k, v] : r.params) {
      if (!params.empty()) params += ";";
      params += k + "=" + fmt_real(v);
    }
    std::string note = r.note;
    for (char& c : note)
      if (c == ',') c = ';';
    os << r.check_id << "," << params << "," << fmt_real(r.lhs) << "," << fmt_real(r.rhs) << ","
       << fmt_real(r.margin) << "," << to_string(r.verdict) << "," << note << "\n";
  }
  emit(o, os.str());
  return 0;
}

int cmd_paths(Options& o) {
  PathCountTable t = count_paths(o.d, o.n);
  if (o.format == "json") {
    json rows = json::array();
    for (int n = 0; n <= o.n; ++n) {
      json r;
      r["n"] = n;
      json cs = json::array();
      for (int x = 1; x <= o.d; ++x) cs.push_back(t.row(n, x).str());
      r["C"] = cs;
      rows.push_back(r);
    }
    emit(o, rows.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "# schema=qswlab.v1\nn";
  for (int x = 1; x <= o.d; ++x) os << ",C_" << x;
  os << "\n";
  for (int n = 0; n <= o.n; ++n) {
    os << n;
    for (int x = 1; x <= o.d; ++x) os << "," << t.row(n, x).str();
    os << "\n";
  }
  emit(o, os.str());
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--d", o.d, "state-space size");
  cmd->add_option("--theta", o.theta, "laziness parameter (>= 0)");
  cmd->add_option("--n", o.n, "time horizon");
  cmd->add_option("--N", o.N, "particles / chains per replicate");
  cmd->add_option("--replicates", o.replicates, "number of replicates");
  cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) {
    o.seed_given = true;
  });
  cmd->add_option("--jobs", o.jobs, "worker threads")->each([&](const std::string&) {
    o.jobs_given = true;
  });
  cmd->add_option("--eta0", o.eta0, "initial law: uniform|pi|delta:x|file:path");
  cmd->add_option("--f", o.f, "test function: phi0|one|indicator:x|file:path");
  cmd->add_option("--format", o.format, "csv|json");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--config", o.config, "JSON config file (flags override)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"absorbing random walk laboratory"};
  app.require_subcommand(1);
  Options o;
  auto* sp = app.add_subcommand("spectral", "eigensystem and quasi-stationary quantities");
  auto* fl = app.add_subcommand("flow", "deterministic conditional flows");
  auto* sa = app.add_subcommand("sample", "Monte Carlo replicates");
  auto* va = app.add_subcommand("variance", "closed-form vs empirical variances");
  auto* bo = app.add_subcommand("bounds", "bound audits");
  auto* pa = app.add_subcommand("paths", "exact path counts");
  for (auto* c : {sp, fl, sa, va, bo, pa}) add_common(c, o);
  sa->add_option("--sampler", o.sampler, "dp|is|soft|hard");
  va->add_option("--sampler", o.sampler, "dp|is|soft|hard");
  bo->add_option("--check", o.check,
                 "all|thm1|thm2|thm3|thm4|prop-ratio|taylor|isdeg|vdp|softvar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    finalize(o, *cmd);
    if (cmd == sp) return cmd_spectral(o);
    if (cmd == fl) return cmd_flow(o);
    if (cmd == sa) return cmd_sample(o);
    if (cmd == va) return cmd_variance(o);
    if (cmd == bo) return cmd_bounds(o);
    if (cmd == pa) return cmd_paths(o);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
