// Command-line surface for the coassociative-submanifold verification library.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coassoc/report.hpp"
#include "coassoc/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace coassoc;

namespace {

struct CommonOpts {
  bool lambda_set = false;
  double lambda = 1.0;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::string format;
  std::map<std::string, double> tol_over;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--lambda", o.lambda, "scale parameter of the metric family")
      ->each([&](const std::string&) { o.lambda_set = true; });
  cmd->add_option("--seed", o.seed, "64-bit sampling seed")
      ->each([&](const std::string&) { o.seed_set = true; });
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--format", o.format, "csv|json");
  for (const char* name : {"fd_step", "ode_tol", "quad_tol", "residual_tol"}) {
    cmd->add_option_function<double>(
        std::string("--tol.") + name,
        [&o, name](double v) { o.tol_over[name] = v; },
        std::string("override tolerance ") + name);
  }
}

RunConfig resolve(const CommonOpts& o) {
  RunConfig cfg = load_config_env();
  if (o.lambda_set) cfg.lambda = o.lambda;
  if (o.seed_set) cfg.seed = o.seed;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.format.empty()) cfg.format = o.format;
  for (const auto& [k, v] : o.tol_over) cfg.tol[k] = v;
  cfg.validate();
  return cfg;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void emit(const json& j, const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  const std::string path = (fs::path(cfg.out) / (name + ".json")).string();
  std::ofstream f(path);
  f << j.dump(2) << "\n";
  std::cout << j.dump(2) << std::endl;
}

int cmd_verify_g2(const RunConfig& cfg, int samples) {
  const double tol = cfg.tol.at("residual_tol");
  const double h = cfg.tol.at("fd_step");
  json rep;
  rep["command"] = "verify-g2";
  rep["seed"] = cfg.seed;

  // metric recovery on the flat model
  const Mat7 g0 = metric_from_phi(phi0(), 1.0);
  const double metric_err = (g0 - Mat7::Identity()).cwiseAbs().maxCoeff();
  rep["metric_recovery_residual"] = fmt17(metric_err);

  // torsion-free sweep
  Rng rng(cfg.seed);
  double worst = 0.0;
  json worst_at;
  std::vector<double> lambdas = {0.5, 1.0, 2.0};
  if (cfg.lambda != 1.0) lambdas = {cfg.lambda};
  for (double lam : lambdas) {
    const G2Params params{lam, false};
    validate_params(params, 1.0);
    for (int i = 0; i < samples / 3 + 1; ++i) {
      const Vec5 x = rng.sphere5(0.8);
      Vec3 a = rng.normal3();
      if (a.norm() > 3.0) a *= 3.0 / a.norm();
      const TotalPoint p{preferred_chart(x), make_base_point(x), a};
      const double r = torsion_residual(p, params, h, tol);
      if (r > worst) {
        worst = r;
        worst_at = {{"lambda", lam}, {"x5", x(4)}, {"r", a.norm()}};
      }
    }
  }
  // pointwise norm identity |phi|^2 = 7
  double norm_err = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec5 x = rng.sphere5(0.8);
    const Vec3 a = rng.normal3();
    const TotalPoint p{preferred_chart(x), make_base_point(x), a};
    const G2Params params{1.0, false};
    const double n2 = form_norm_sq_diag(phi_lambda(p, params), metric_diag(params, a.squaredNorm()));
    norm_err = std::max(norm_err, std::abs(n2 - 7.0));
  }
  rep["max_torsion_residual"] = fmt17(worst);
  rep["worst_at"] = worst_at;
  rep["phi_norm_identity_residual"] = fmt17(norm_err);
  const bool pass = worst < tol && metric_err < 1e-12 && norm_err < 1e-9;
  rep["pass"] = pass;
  emit(rep, cfg, "verify_g2");
  if (!pass) std::cerr << "worst torsion residual " << fmt17(worst) << "\n";
  return pass ? 0 : 1;
}

int cmd_verify_lemmas(const RunConfig& cfg, int per_case) {
  Rng rng(cfg.seed);
  json rep;
  rep["command"] = "verify-lemmas";
  double worst_all = 0.0;
  for (SymCase cse : {SymCase::SO3xSO2, SymCase::U2, SymCase::SU2, SymCase::SO3Std,
                      SymCase::SO3Irr}) {
    double worst = 0.0;
    for (int i = 0; i < per_case; ++i) {
      const Vec5 x = rng.sphere5(0.95);
      const Vec3 a = rng.normal3();
      const TotalPoint p{preferred_chart(x), make_base_point(x), a};
      const DataTablePair dt = data_tables(cse, p);
      worst = std::max(worst,
                       (dt.closed_form.omega - dt.numeric.omega).cwiseAbs().maxCoeff());
      worst = std::max(worst, (dt.closed_form.b - dt.numeric.b).cwiseAbs().maxCoeff());
    }
    rep["max_residual_" + case_name(cse)] = fmt17(worst);
    worst_all = std::max(worst_all, worst);
  }
  const bool pass = worst_all < 1e-8;
  rep["pass"] = pass;
  emit(rep, cfg, "verify_lemmas");
  return pass ? 0 : 1;
}

int cmd_trace(const RunConfig& cfg, const std::string& case_str, double C, double D, double E,
              int resolution) {
  const SymCase cse = case_from_name(case_str);
  std::vector<double> constants =
      cse == SymCase::SO3Std ? std::vector<double>{C, D, E} : std::vector<double>{C};
  json rep;
  rep["command"] = "trace";
  rep["case"] = case_str;
  rep["lambda"] = fmt17(cfg.lambda);
  std::vector<LevelCurve> curves;
  try {
    curves = trace_level(cse, constants, cfg.lambda, resolution);
  } catch (const NoRootError& e) {
    rep["components"] = json::array();
    rep["count"] = 0;
    rep["note"] = std::string("empty level set: ") + e.what();
    emit(rep, cfg, "trace_" + case_str);
    return 0;
  }
  fs::create_directories(cfg.out);
  json comps = json::array();
  for (size_t i = 0; i < curves.size(); ++i) {
    const auto& lc = curves[i];
    const std::string name = "trace_" + case_str + "_" + std::to_string(i) + ".csv";
    const CurveFile f = curve_to_file(lc, cfg.lambda, (fs::path(cfg.out) / name).string());
    write_csv(f);
    json c;
    c["file"] = name;
    c["stratum"] = lc.stratum;
    c["topology"] = lc.topology;
    c["endpoints"] = {lc.endpoints[0], lc.endpoints[1]};
    c["n_samples"] = lc.samples.size();
    c["max_defining_residual"] = fmt17(lc.max_defining_residual(cfg.lambda));
    comps.push_back(c);
  }
  rep["components"] = comps;
  rep["count"] = curves.size();
  emit(rep, cfg, "trace_" + case_str);
  return 0;
}

int cmd_integrate(const RunConfig& cfg, const std::string& case_str, const std::string& state_str,
                  double tmax, int group_samples) {
  const SymCase cse = case_from_name(case_str);
  const std::vector<double> vals = parse_numbers(state_str);
  PathState s;
  s.cse = cse;
  const int n = state_dim(cse);
  if (static_cast<int>(vals.size()) != n && !(cse == SymCase::SU2 && vals.size() == 5))
    throw ConfigError("integrate: state needs " + std::to_string(n) + " numbers");
  s.q = Eigen::Map<const Eigen::VectorXd>(vals.data(), n);
  if (cse == SymCase::SU2 && vals.size() == 5)
    s.dir = Vec3(vals[2], vals[3], vals[4]).normalized();

  const G2Params params{cfg.lambda, false};
  const Trajectory traj = integrate(s, params, tmax, cfg.tol.at("ode_tol"));

  // emitted trajectory file
  fs::create_directories(cfg.out);
  LevelCurve lc;
  lc.cse = cse;
  lc.stratum = "trajectory";
  lc.samples = traj.q;
  const std::string path = (fs::path(cfg.out) / ("traj_" + case_str + ".csv")).string();
  CurveFile f;
  {
    f.path = path;
    f.header_meta = "# case=" + case_str + " lambda=" + fmt17(cfg.lambda) + " kind=trajectory";
    f.columns = {"t"};
    for (const auto& nm : state_names(cse)) f.columns.push_back(nm);
    for (size_t i = 0; i < traj.q.size(); ++i) {
      std::vector<double> row{traj.t[i]};
      for (Eigen::Index j = 0; j < traj.q[i].size(); ++j) row.push_back(traj.q[i](j));
      f.rows.push_back(std::move(row));
    }
    write_csv(f);
  }

  // conserved drift + sweep verification
  json rep;
  rep["command"] = "integrate";
  rep["case"] = case_str;
  rep["stop"] = stop_name(traj.stop);
  rep["stop_detail"] = traj.stop_detail;
  rep["n_steps"] = traj.q.size();
  rep["t_end"] = fmt17(traj.t.back());
  const ConservedValues c0 = conserved(PathState{cse, traj.q.front(), s.dir}, params);
  double drift = 0.0;
  for (const auto& q : traj.q) {
    const ConservedValues ci = conserved(PathState{cse, q, s.dir}, params);
    for (size_t i = 0; i < ci.values.size(); ++i)
      drift = std::max(drift, std::abs(ci.values[i] - c0.values[i]));
  }
  rep["conserved_names"] = c0.names;
  rep["conserved_drift"] = fmt17(drift);

  std::vector<PathState> samples;
  const size_t stride = std::max<size_t>(1, traj.q.size() / 16);
  for (size_t i = 0; i < traj.q.size(); i += stride)
    samples.push_back(PathState{cse, traj.q[i], s.dir});
  const SweepReport sw = sweep_and_verify(cse, samples, params, group_samples, cfg.seed);
  rep["max_coassoc_residual"] = fmt17(sw.max_residual);
  rep["sweep_samples"] = sw.samples_checked;
  rep["sweep_excluded"] = sw.excluded;
  rep["file"] = fs::path(path).filename().string();
  emit(rep, cfg, "integrate_" + case_str);
  return 0;
}

int cmd_classify(const RunConfig& cfg, const std::string& case_str, const std::string& point_str) {
  const SymCase cse = case_from_name(case_str);
  const std::vector<double> v = parse_numbers(point_str);
  if (v.size() != 8) throw ConfigError("classify: point needs x1..x5,a1,a2,a3");
  Vec5 x;
  x << v[0], v[1], v[2], v[3], v[4];
  x.normalize();
  const TotalPoint p{preferred_chart(x), make_base_point(x), Vec3(v[5], v[6], v[7])};
  const OrbitInfo info = orbit_info(cse, p);
  json rep;
  rep["command"] = "classify";
  rep["case"] = case_str;
  rep["dimension"] = info.dimension;
  rep["label"] = info.label;
  emit(rep, cfg, "classify_" + case_str);
  return 0;
}

int cmd_asymptote(const RunConfig& cfg, const std::string& case_str, double C, double lo,
                  double hi, int n) {
  const SymCase cse = case_from_name(case_str);
  std::vector<double> grid;
  for (int i = 0; i < n; ++i) grid.push_back(lo + (hi - lo) * i / (n - 1.0));
  const LevelCurve lc = asymptotic_curve(cse, C, grid);
  fs::create_directories(cfg.out);
  const std::string path = (fs::path(cfg.out) / ("asymptote_" + case_str + ".csv")).string();
  CurveFile f = curve_to_file(lc, 0.0, path);
  f.header_meta += " kind=asymptote";
  write_csv(f);
  json rep;
  rep["command"] = "asymptote";
  rep["case"] = case_str;
  rep["C"] = fmt17(C);
  rep["file"] = fs::path(path).filename().string();
  rep["n_samples"] = lc.samples.size();
  emit(rep, cfg, "asymptote_" + case_str);
  return 0;
}

int cmd_roundtrip(const RunConfig& cfg, const std::string& in) {
  const CurveFile f = read_csv(in);
  const double worst = roundtrip_residual(f);
  json rep;
  rep["command"] = "roundtrip";
  rep["file"] = in;
  rep["max_residual"] = fmt17(worst);
  const bool pass = worst < 1e-9;
  rep["pass"] = pass;
  emit(rep, cfg, "roundtrip");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical realization of the coassociative families in the anti-self-dual "
               "bundle over the four-sphere"};
  app.require_subcommand(1);

  CommonOpts common;
  int samples = 100, per_case = 50, resolution = 256, group_samples = 8, grid_n = 64;
  double C = 0.0, D = 0.0, E = 0.0, tmax = 10.0, grid_lo = 0.25, grid_hi = 4.0;
  std::string case_str, state_str, point_str, in_file;

  auto* vg2 = app.add_subcommand("verify-g2", "torsion-free and metric-recovery suite");
  add_common(vg2, common);
  vg2->add_option("--samples", samples, "number of sample points");

  auto* vlm = app.add_subcommand("verify-lemmas", "closed-form vs frame-level data tables");
  add_common(vlm, common);
  vlm->add_option("--per-case", per_case, "sample points per symmetry case");

  auto* tr = app.add_subcommand("trace", "trace level-set families");
  add_common(tr, common);
  tr->add_option("case", case_str, "so3xso2 | su2 | so3std")->required();
  tr->add_option("--C", C)->required();
  tr->add_option("--D", D);
  tr->add_option("--E", E);
  tr->add_option("--resolution", resolution);

  auto* in_ = app.add_subcommand("integrate", "integrate a reduced curve and verify the sweep");
  add_common(in_, common);
  in_->add_option("case", case_str, "so3xso2 | su2 | so3std | so3irr")->required();
  in_->add_option("--state", state_str, "initial state, comma separated")->required();
  in_->add_option("--tmax", tmax);
  in_->add_option("--group-samples", group_samples);

  auto* cl = app.add_subcommand("classify", "orbit dimension and type");
  add_common(cl, common);
  cl->add_option("case", case_str)->required();
  cl->add_option("--point", point_str, "x1,x2,x3,x4,x5,a1,a2,a3")->required();

  auto* as = app.add_subcommand("asymptote", "lambda -> 0 limit curves");
  add_common(as, common);
  as->add_option("case", case_str, "so3xso2 | su2")->required();
  as->add_option("--C", C)->required();
  as->add_option("--grid-min", grid_lo);
  as->add_option("--grid-max", grid_hi);
  as->add_option("--n", grid_n);

  auto* rt = app.add_subcommand("roundtrip", "re-validate an emitted CSV");
  add_common(rt, common);
  rt->add_option("--in", in_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(common);
    if (vg2->parsed()) return cmd_verify_g2(cfg, samples);
    if (vlm->parsed()) return cmd_verify_lemmas(cfg, per_case);
    if (tr->parsed()) return cmd_trace(cfg, case_str, C, D, E, resolution);
    if (in_->parsed()) return cmd_integrate(cfg, case_str, state_str, tmax, group_samples);
    if (cl->parsed()) return cmd_classify(cfg, case_str, point_str);
    if (as->parsed()) return cmd_asymptote(cfg, case_str, C, grid_lo, grid_hi, grid_n);
    if (rt->parsed()) return cmd_roundtrip(cfg, in_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
